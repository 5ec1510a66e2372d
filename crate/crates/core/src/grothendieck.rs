//! Classes with a good `μ̂`-action, realized as character-graded
//! Hodge–Deligne polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactring::{owned_ops, parse_character, Coefficient, EPoly, UniPoly};

/// A character of `μ̂`, i.e. an element of `ℚ/ℤ`, stored in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character(Rational64);

impl Character {
    pub fn new(x: Rational64) -> Self {
        let f = x - x.floor();
        Character(f)
    }

    pub fn from_frac(a: i64, n: i64) -> Self {
        Character::new(Rational64::new(a, n))
    }

    pub fn trivial() -> Self {
        Character(Rational64::zero())
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }

    /// Representative in `[0, 1)`.
    pub fn value(&self) -> Rational64 {
        self.0
    }

    pub fn order(&self) -> i64 {
        *self.0.denom()
    }

    pub fn neg(&self) -> Character {
        Character::new(-self.0)
    }

    pub fn add(&self, o: &Character) -> Character {
        Character::new(self.0 + o.0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Character {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Character(parse_character(s)?))
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Equivariant class: finite map from characters to E-polynomials of the
/// corresponding eigenparts.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EqClass {
    parts: BTreeMap<Character, EPoly>,
}

impl EqClass {
    pub fn zero() -> Self {
        EqClass::default()
    }

    pub fn one() -> Self {
        EqClass::trivial(EPoly::one())
    }

    /// The class `e` with trivial action.
    pub fn trivial(e: EPoly) -> Self {
        let mut c = EqClass::zero();
        c.add_part(Character::trivial(), e);
        c
    }

    pub fn single(ch: Character, e: EPoly) -> Self {
        let mut c = EqClass::zero();
        c.add_part(ch, e);
        c
    }

    /// Regular representation of `μ_n` on `n` points: `Σ_k {k/n: 1}`.
    pub fn regular(n: i64) -> Self {
        let mut c = EqClass::zero();
        for k in 0..n {
            c.add_part(Character::from_frac(k, n), EPoly::one());
        }
        c
    }

    pub fn from_parts(it: impl IntoIterator<Item = (Character, EPoly)>) -> Self {
        let mut c = EqClass::zero();
        for (ch, e) in it {
            c.add_part(ch, e);
        }
        c
    }

    /// Builds a class from string keys and polynomial strings, as in input
    /// documents.
    pub fn parse_map<'a>(it: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut c = EqClass::zero();
        for (k, v) in it {
            c.add_part(k.parse()?, EPoly::parse(v)?);
        }
        Ok(c)
    }

    pub fn add_part(&mut self, ch: Character, e: EPoly) {
        if e.is_zero() {
            return;
        }
        let vanished = {
            let x = self.parts.entry(ch).or_default();
            *x = &*x + &e;
            x.is_zero()
        };
        if vanished {
            self.parts.remove(&ch);
        }
    }

    pub fn parts(&self) -> &BTreeMap<Character, EPoly> {
        &self.parts
    }

    pub fn part(&self, ch: &Character) -> EPoly {
        self.parts.get(ch).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn scale(&self, e: &EPoly) -> EqClass {
        EqClass::from_parts(self.parts.iter().map(|(c, x)| (*c, x * e)))
    }

    pub fn map_parts(&self, f: impl Fn(&EPoly) -> EPoly) -> EqClass {
        EqClass::from_parts(self.parts.iter().map(|(c, x)| (*c, f(x))))
    }

    /// `α ↦ -α`.
    pub fn involute(&self) -> EqClass {
        EqClass::from_parts(self.parts.iter().map(|(c, x)| (c.neg(), x.clone())))
    }

    /// Class of the orbit space: the invariant (character 0) part.
    pub fn augmentation(&self) -> EPoly {
        self.part(&Character::trivial())
    }

    /// Class of the underlying variety, forgetting the action.
    pub fn underlying(&self) -> EPoly {
        self.parts.values().fold(EPoly::zero(), |a, x| &a + x)
    }

    /// Image of `G_m ×^μ X` in the non-equivariant ring: `(L - 1)·aug`.
    pub fn mapping_torus(&self) -> EPoly {
        &EPoly::l_minus_one() * &self.augmentation()
    }

    pub fn mod_l_minus_one(&self) -> EqClass {
        self.map_parts(EPoly::mod_l_minus_one)
    }

    /// Every character order divides `n`.
    pub fn orders_divide(&self, n: i64) -> bool {
        self.parts.keys().all(|c| n % c.order() == 0)
    }

    /// Quasi-convolution `a * b`, the operation realizing
    /// Thom–Sebastiani on eigenparts.
    pub fn quasi_convolution(&self, o: &EqClass) -> EqClass {
        let mut out = EqClass::zero();
        let (u, v, l) = (EPoly::u(), EPoly::v(), EPoly::l_int(1));
        for (a, x) in &self.parts {
            for (b, y) in &o.parts {
                let xy = x * y;
                let g = a.add(b);
                if a.is_trivial() || b.is_trivial() {
                    out.add_part(g, xy);
                } else if g.is_trivial() {
                    out.add_part(g, &xy * &l);
                } else if a.value() + b.value() < Rational64::one() {
                    out.add_part(g, &xy * &v);
                } else {
                    out.add_part(g, &xy * &u);
                }
            }
        }
        out
    }

    /// Join `J(a, b) = (L - 1)·aug(ab) - a * b`.
    pub fn join(&self, o: &EqClass) -> EqClass {
        let prod = self * o;
        &EqClass::trivial(&EPoly::l_minus_one() * &prod.augmentation()) - &self.quasi_convolution(o)
    }

    /// Formation of the spectrum: shifts each `α ≠ 0` part by the
    /// bidegree `(α, 1 - α)`.
    pub fn spe(&self) -> FracHodge {
        let mut h = EPoly::zero();
        for (c, x) in &self.parts {
            if c.is_trivial() {
                h = &h + x;
            } else {
                let a = c.value();
                let mono = EPoly::monomial(a, Rational64::one() - a, 1);
                h = &h + &(x * &mono);
            }
        }
        FracHodge(h)
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let items: Vec<String> = self
            .parts
            .iter()
            .map(|(c, x)| format!("{}\\mapsto {}", latex_char(c), x.to_latex()))
            .collect();
        format!("\\{{{}\\}}", items.join(",\\ "))
    }
}

fn latex_char(c: &Character) -> String {
    let v = c.value();
    if v.is_integer() {
        v.to_string()
    } else {
        format!("\\tfrac{{{}}}{{{}}}", v.numer(), v.denom())
    }
}

impl fmt::Display for EqClass {
    /// `{0: L - 1, 1/2: 1}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (c, x)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}: {x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for EqClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> std::ops::Add<&'a EqClass> for &'a EqClass {
    type Output = EqClass;
    fn add(self, o: &EqClass) -> EqClass {
        let mut r = self.clone();
        for (c, x) in &o.parts {
            r.add_part(*c, x.clone());
        }
        r
    }
}

impl<'a> std::ops::Sub<&'a EqClass> for &'a EqClass {
    type Output = EqClass;
    fn sub(self, o: &EqClass) -> EqClass {
        self + &(-o)
    }
}

impl std::ops::Neg for &EqClass {
    type Output = EqClass;
    fn neg(self) -> EqClass {
        self.map_parts(|x| -x)
    }
}

impl<'a> std::ops::Mul<&'a EqClass> for &'a EqClass {
    type Output = EqClass;
    /// Product of classes: characters add, parts multiply.
    fn mul(self, o: &EqClass) -> EqClass {
        let mut r = EqClass::zero();
        for (a, x) in &self.parts {
            for (b, y) in &o.parts {
                r.add_part(a.add(b), x * y);
            }
        }
        r
    }
}

owned_ops!(EqClass);

impl Coefficient for EqClass {
    fn zero() -> Self {
        EqClass::zero()
    }
    fn one() -> Self {
        EqClass::one()
    }
    fn is_zero(&self) -> bool {
        EqClass::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, e: &EPoly) -> Self {
        self.scale(e)
    }
    fn from_epoly(e: EPoly) -> Self {
        EqClass::trivial(e)
    }
}

/// Polynomial with fractional Hodge bidegrees `(p, q)`, `p + q ∈ ℤ`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FracHodge(EPoly);

impl FracHodge {
    pub fn new(e: EPoly) -> Result<Self> {
        if let Some(((p, q), _)) = e.terms().find(|((p, q), _)| !(p + q).is_integer()) {
            return Err(Error::Validation(vec![format!(
                "bidegree ({p}, {q}) has non-integral weight"
            )]));
        }
        Ok(FracHodge(e))
    }

    pub fn epoly(&self) -> &EPoly {
        &self.0
    }

    /// `u^p v^q ↦ t^p`.
    pub fn spectrum_poly(&self) -> UniPoly {
        self.0.first_exponents('t')
    }

    pub fn mul(&self, o: &FracHodge) -> FracHodge {
        FracHodge(&self.0 * &o.0)
    }
}

impl fmt::Display for FracHodge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Spectrum multiplicities `t^p ↦ n` as an ordered list, for reports.
pub fn spectrum_numbers(p: &UniPoly) -> Vec<(Rational64, BigInt)> {
    p.terms.iter().map(|(e, c)| (*e, c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(s: &str) -> EPoly {
        EPoly::parse(s).unwrap()
    }

    fn cls(items: &[(&str, &str)]) -> EqClass {
        EqClass::parse_map(items.iter().copied()).unwrap()
    }

    fn phi2() -> EqClass {
        cls(&[("1/2", "1")])
    }

    fn phi3() -> EqClass {
        cls(&[("1/3", "1"), ("2/3", "1")])
    }

    #[test]
    fn ring_examples() {
        let r2 = EqClass::regular(2);
        assert_eq!(&r2 * &r2, cls(&[("0", "2"), ("1/2", "2")]));
        assert_eq!(cls(&[("1/3", "u")]).involute(), cls(&[("2/3", "u")]));
        assert_eq!(&phi2() * &cls(&[("0", "L")]), cls(&[("1/2", "L")]));
    }

    #[test]
    fn augmentation_and_torus() {
        assert_eq!(EqClass::regular(2).augmentation(), e("1"));
        assert_eq!(cls(&[("1/2", "L")]).augmentation(), e("0"));
        assert_eq!(EqClass::regular(3).augmentation(), e("1"));
        assert_eq!(EqClass::regular(2).mapping_torus(), e("L - 1"));
        assert_eq!(EqClass::trivial(e("u + 2")).mapping_torus(), e("(L - 1)*(u + 2)"));
        assert_eq!(phi2().mapping_torus(), e("0"));
    }

    #[test]
    fn quasi_convolution_examples() {
        assert_eq!(phi2().quasi_convolution(&phi2()), cls(&[("0", "L")]));
        assert_eq!(
            phi2().quasi_convolution(&phi3()),
            cls(&[("5/6", "v"), ("1/6", "u")])
        );
    }

    #[test]
    fn join_examples() {
        let one = EqClass::one();
        assert_eq!(one.join(&one), EqClass::trivial(e("L - 2")));
        assert_eq!(phi2().join(&one), -&phi2());
        assert_eq!(phi2().join(&phi2()), cls(&[("0", "-1")]));
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(phi2().spe().epoly(), &e("u^(1/2)*v^(1/2)"));
        assert_eq!(cls(&[("0", "L")]).spe().epoly(), &e("L"));
        let c = phi2().quasi_convolution(&phi3());
        assert_eq!(c.spe(), phi2().spe().mul(&phi3().spe()));
        assert_eq!(
            c.spe().epoly(),
            &e("u^(5/6)*v^(7/6) + u^(7/6)*v^(5/6)")
        );
        assert_eq!(c.spe().spectrum_poly().to_string(), "t^(5/6) + t^(7/6)");
        assert_eq!(FracHodge::new(e("L")).unwrap().spectrum_poly().to_string(), "t");
        assert!(FracHodge::new(e("u^(1/2)")).is_err());
    }

    #[test]
    fn augmentation_of_quasi_convolution() {
        // The literal identity aug(a*b) = aug(ab) fails already on φ₂; the
        // relation that holds is the one carried by the join.
        let (a, b) = (phi2(), phi2());
        assert_ne!(a.quasi_convolution(&b).augmentation(), (&a * &b).augmentation());
    }

    #[test]
    fn involution_alone_reverses_hodge_types() {
        let c = phi2().quasi_convolution(&phi3());
        assert_eq!(c.involute(), cls(&[("1/6", "v"), ("5/6", "u")]));
        assert_ne!(c.involute(), phi2().involute().quasi_convolution(&phi3().involute()));
    }

    #[test]
    fn text_and_serde() {
        let c = cls(&[("0", "L - 1"), ("1/2", "1")]);
        assert_eq!(c.to_string(), "{0: L - 1, 1/2: 1}");
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(j, r#"{"0":"L - 1","1/2":"1"}"#);
        assert_eq!(serde_json::from_str::<EqClass>(&j).unwrap(), c);
        assert!(serde_json::from_str::<EqClass>(r#"{"3/6":"1"}"#).is_err());
    }

    prop_compose! {
        fn arb_class()(items in prop::collection::vec(
            (0i64..6, prop::sample::select(vec![1i64, 2, 3, 4, 6]), -5i64..=5, 0i64..2, 0i64..2),
            0..=4,
        )) -> EqClass {
            EqClass::from_parts(items.into_iter().map(|(a, n, c, p, q)| {
                (
                    Character::from_frac(a % n, n),
                    EPoly::monomial(Rational64::from_integer(p), Rational64::from_integer(q), c),
                )
            }))
        }
    }

    fn aug_class(x: &EqClass) -> EqClass {
        EqClass::trivial(x.augmentation())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn unit_and_commutativity(a in arb_class(), b in arb_class()) {
            prop_assert_eq!(a.quasi_convolution(&EqClass::one()), a.clone());
            prop_assert_eq!(a.quasi_convolution(&b), b.quasi_convolution(&a));
            prop_assert_eq!(a.join(&b), b.join(&a));
        }

        #[test]
        fn augmentation_through_join(a in arb_class(), b in arb_class()) {
            let lhs = a.join(&b).augmentation();
            let rhs = &(&EPoly::l_minus_one() * &(&a.augmentation() * &b.augmentation()))
                - &(&a * &b).augmentation();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn spe_multiplicative(a in arb_class(), b in arb_class()) {
            prop_assert_eq!(a.quasi_convolution(&b).spe(), a.spe().mul(&b.spe()));
        }

        #[test]
        fn involution_compatible(a in arb_class(), b in arb_class()) {
            // The involution composed with complex conjugation u <-> v.
            let bar = |x: &EqClass| x.map_parts(swap_uv).involute();
            prop_assert_eq!(bar(&a.quasi_convolution(&b)), bar(&a).quasi_convolution(&bar(&b)));
        }

        #[test]
        fn triple_symmetry(a in arb_class(), b in arb_class(), c in arb_class()) {
            let l1 = EPoly::l_minus_one();
            let expr = |x: &EqClass, y: &EqClass, z: &EqClass| {
                let yz = y.quasi_convolution(z);
                &(&x.quasi_convolution(&yz) - &aug_class(&(x * &yz)).scale(&l1))
                    + &EqClass::trivial(&(&l1 * &l1) * &(&x.augmentation() * &(y * z).augmentation()))
            };
            let base = expr(&a, &b, &c);
            for (x, y, z) in [(&a, &c, &b), (&b, &a, &c), (&b, &c, &a), (&c, &a, &b), (&c, &b, &a)] {
                prop_assert_eq!(expr(x, y, z), base.clone());
            }
        }
    }

    fn swap_uv(p: &EPoly) -> EPoly {
        let mut r = EPoly::zero();
        for ((a, b), c) in p.terms() {
            r.add_term(*b, *a, c.clone());
        }
        r
    }
}
