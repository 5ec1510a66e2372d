use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::parse::{parse_poly, Poly};
use super::unipoly::{fmt_exponent, UniPoly};
use crate::error::{Error, Result};

/// Hodge–Deligne polynomial: a Laurent polynomial in `u`, `v` with integer
/// coefficients and exponents in `(1/m)ℤ`. The class of the affine line is
/// `uv` (written `L`).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EPoly {
    terms: BTreeMap<(Rational64, Rational64), BigInt>,
}

impl EPoly {
    pub fn zero() -> Self {
        EPoly::default()
    }

    pub fn one() -> Self {
        EPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        EPoly::monomial(Rational64::zero(), Rational64::zero(), c)
    }

    pub fn monomial(p: Rational64, q: Rational64, c: impl Into<BigInt>) -> Self {
        let mut e = EPoly::zero();
        e.add_term(p, q, c.into());
        e
    }

    /// `L^k = (uv)^k`.
    pub fn l_pow(k: Rational64) -> Self {
        EPoly::monomial(k, k, 1)
    }

    pub fn l_int(k: i64) -> Self {
        EPoly::l_pow(Rational64::from_integer(k))
    }

    pub fn u() -> Self {
        EPoly::monomial(Rational64::one(), Rational64::zero(), 1)
    }

    pub fn v() -> Self {
        EPoly::monomial(Rational64::zero(), Rational64::one(), 1)
    }

    /// `L - 1`, the class of the multiplicative group.
    pub fn l_minus_one() -> Self {
        EPoly::l_int(1) - EPoly::one()
    }

    /// `[P^n] = 1 + L + ... + L^n`.
    pub fn projective_space(n: i64) -> Self {
        (0..=n).map(EPoly::l_int).fold(EPoly::zero(), |a, b| a + b)
    }

    pub fn parse(src: &str) -> Result<Self> {
        EPoly::from_poly(&parse_poly(src)?)
    }

    pub fn from_poly(p: &Poly) -> Result<Self> {
        let mut e = EPoly::zero();
        for (m, c) in &p.terms {
            let mut pu = Rational64::zero();
            let mut qv = Rational64::zero();
            for (var, x) in m {
                match var.as_str() {
                    "u" => pu += x,
                    "v" => qv += x,
                    other => {
                        return Err(Error::Parse(format!(
                            "variable '{other}' is not allowed in a Hodge polynomial"
                        )))
                    }
                }
            }
            e.add_term(pu, qv, c.clone());
        }
        Ok(e)
    }

    pub fn add_term(&mut self, p: Rational64, q: Rational64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let vanished = {
            let x = self.terms.entry((p, q)).or_insert_with(BigInt::zero);
            *x += c;
            x.is_zero()
        };
        if vanished {
            self.terms.remove(&(p, q));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Rational64, Rational64), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: Rational64, q: Rational64) -> BigInt {
        self.terms.get(&(p, q)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest `m` with every exponent in `(1/m)ℤ`.
    pub fn denominator_bound(&self) -> i64 {
        self.terms
            .keys()
            .fold(1i64, |m, (p, q)| m.lcm(p.denom()).lcm(q.denom()))
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.denominator_bound() == 1
    }

    pub fn scale(&self, c: &BigInt) -> EPoly {
        let mut r = EPoly::zero();
        for ((p, q), x) in &self.terms {
            r.add_term(*p, *q, x * c);
        }
        r
    }

    /// Multiplies by `L^k`.
    pub fn shift_l(&self, k: Rational64) -> EPoly {
        EPoly {
            terms: self
                .terms
                .iter()
                .map(|((p, q), c)| ((p + k, q + k), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> EPoly {
        (0..n).fold(EPoly::one(), |acc, _| &acc * self)
    }

    /// Exact division by an integer; `None` if some coefficient is not
    /// divisible.
    pub fn div_exact_int(&self, d: &BigInt) -> Option<EPoly> {
        let mut r = EPoly::zero();
        for ((p, q), c) in &self.terms {
            let (quot, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            r.add_term(*p, *q, quot);
        }
        Some(r)
    }

    /// Ordinary Euler characteristic: `u, v ↦ 1`.
    pub fn euler(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Weight characteristic: `u, v ↦ w`.
    pub fn weight(&self) -> UniPoly {
        UniPoly::from_terms('w', self.terms.iter().map(|((p, q), c)| (p + q, c.clone())))
    }

    /// Point-count realization `L ↦ q`. Only defined on classes that are
    /// polynomials in `uv` with integer exponents.
    pub fn count(&self) -> Result<UniPoly> {
        let mut out = UniPoly::zero('q');
        for ((p, q), c) in &self.terms {
            if p != q || !p.is_integer() {
                return Err(Error::NonTateClass(format!(
                    "term with bidegree ({p}, {q}) in {self} has no point-count realization"
                )));
            }
            out.add_term(*p, c.clone());
        }
        Ok(out)
    }

    /// Reduction modulo `L - 1`: `u^p v^q ↦ u^(p-q)`.
    pub fn mod_l_minus_one(&self) -> EPoly {
        let mut r = EPoly::zero();
        for ((p, q), c) in &self.terms {
            r.add_term(p - q, Rational64::zero(), c.clone());
        }
        r
    }

    /// Adams operation `E(u, v) ↦ E(u^k, v^k)`.
    pub fn adams(&self, k: i64) -> EPoly {
        let k = Rational64::from_integer(k);
        EPoly {
            terms: self
                .terms
                .iter()
                .map(|((p, q), c)| ((p * k, q * k), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `v = u` and keeps the exponents of `u` (fractional
    /// Hodge bidegrees collapsed to their first component).
    pub fn first_exponents(&self, var: char) -> UniPoly {
        UniPoly::from_terms(var, self.terms.iter().map(|((p, _), c)| (*p, c.clone())))
    }

    /// True when every term is a power of `L` alone.
    pub fn is_l_polynomial(&self) -> bool {
        self.terms.keys().all(|(p, q)| p == q)
    }

    /// Exact division by a divisor that is a polynomial in powers of `L`
    /// (rational powers allowed). Returns `None` when the division leaves a
    /// remainder.
    pub fn div_exact_l_poly(&self, divisor: &EPoly) -> Option<EPoly> {
        assert!(divisor.is_l_polynomial(), "divisor must be a polynomial in L");
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(EPoly::zero());
        }
        // Work in y = L^(1/m) inside each class of fixed p - q.
        let m = self.denominator_bound().lcm(&divisor.denominator_bound());
        let scale = |x: Rational64| -> i64 {
            let y = x * Rational64::from_integer(m);
            debug_assert!(y.is_integer());
            y.to_integer()
        };
        let div: BTreeMap<i64, BigInt> = divisor
            .terms
            .iter()
            .map(|((p, _), c)| (scale(*p), c.clone()))
            .collect();
        let mut groups: BTreeMap<Rational64, BTreeMap<i64, BigInt>> = BTreeMap::new();
        for ((p, q), c) in &self.terms {
            groups.entry(p - q).or_default().insert(scale(*q), c.clone());
        }
        let mut out = EPoly::zero();
        for (d, num) in groups {
            let quot = laurent_div_exact(&num, &div)?;
            for (k, c) in quot {
                let q = Rational64::new(k, m);
                out.add_term(q + d, q, c);
            }
        }
        Some(out)
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (p, q, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = latex_monomial(p, q);
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                }
                s.push_str(&mono);
            }
        }
        s
    }

    /// Terms in canonical order: total degree descending, then `u`-exponent
    /// descending.
    fn sorted_terms(&self) -> Vec<(Rational64, Rational64, BigInt)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|((p, q), c)| (*p, *q, c.clone()))
            .collect();
        v.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        v
    }
}

/// Exact division of univariate Laurent polynomials over ℤ.
fn laurent_div_exact(
    num: &BTreeMap<i64, BigInt>,
    den: &BTreeMap<i64, BigInt>,
) -> Option<BTreeMap<i64, BigInt>> {
    let (&n0, _) = num.iter().next()?;
    let (&d0, _) = den.iter().next()?;
    let (&dtop, dlead) = den.iter().next_back()?;
    let mut rem: BTreeMap<i64, BigInt> = num.iter().map(|(k, c)| (k - n0, c.clone())).collect();
    let dshift: BTreeMap<i64, BigInt> = den.iter().map(|(k, c)| (k - d0, c.clone())).collect();
    let ddeg = dtop - d0;
    let mut quot = BTreeMap::new();
    while let Some((&top, c)) = rem.iter().next_back() {
        if top < ddeg {
            return None;
        }
        let (qc, r) = c.div_rem(dlead);
        if !r.is_zero() {
            return None;
        }
        let shift = top - ddeg;
        for (k, dc) in &dshift {
            let key = k + shift;
            let vanished = {
                let e = rem.entry(key).or_insert_with(BigInt::zero);
                *e -= &qc * dc;
                e.is_zero()
            };
            if vanished {
                rem.remove(&key);
            }
        }
        quot.insert(shift + n0 - d0, qc);
    }
    Some(quot)
}

fn latex_exp(e: &Rational64) -> String {
    if e.is_integer() {
        format!("{}", e.to_integer())
    } else if e.is_negative() {
        format!("-\\frac{{{}}}{{{}}}", -e.numer(), e.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", e.numer(), e.denom())
    }
}

fn split_monomial(p: Rational64, q: Rational64) -> (Rational64, Rational64, Rational64) {
    let l = if p < q { p } else { q };
    if l.is_zero() {
        (Rational64::zero(), p, q)
    } else {
        (l, p - l, q - l)
    }
}

fn latex_monomial(p: Rational64, q: Rational64) -> String {
    let (l, pu, qv) = split_monomial(p, q);
    let mut s = String::new();
    for (name, e) in [("\\mathbb{L}", l), ("u", pu), ("v", qv)] {
        if e.is_zero() {
            continue;
        }
        if e.is_one() {
            s.push_str(name);
        } else {
            s.push_str(&format!("{name}^{{{}}}", latex_exp(&e)));
        }
    }
    s
}

fn text_monomial(p: Rational64, q: Rational64) -> String {
    let (l, pu, qv) = split_monomial(p, q);
    let mut parts = Vec::new();
    for (name, e) in [("L", l), ("u", pu), ("v", qv)] {
        if e.is_zero() {
            continue;
        }
        if e.is_one() {
            parts.push(name.to_string());
        } else {
            parts.push(format!("{name}^{}", fmt_exponent(&e)));
        }
    }
    parts.join("*")
}

impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, q, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono = text_monomial(p, q);
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EPoly({self})")
    }
}

impl Serialize for EPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        EPoly::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a EPoly> for &'a EPoly {
    type Output = EPoly;
    fn add(self, o: &EPoly) -> EPoly {
        let mut r = self.clone();
        for ((p, q), c) in &o.terms {
            r.add_term(*p, *q, c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a EPoly> for &'a EPoly {
    type Output = EPoly;
    fn sub(self, o: &EPoly) -> EPoly {
        let mut r = self.clone();
        for ((p, q), c) in &o.terms {
            r.add_term(*p, *q, -c);
        }
        r
    }
}

impl<'a> Mul<&'a EPoly> for &'a EPoly {
    type Output = EPoly;
    fn mul(self, o: &EPoly) -> EPoly {
        let mut r = EPoly::zero();
        for ((p1, q1), c1) in &self.terms {
            for ((p2, q2), c2) in &o.terms {
                r.add_term(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &EPoly {
    type Output = EPoly;
    fn neg(self) -> EPoly {
        EPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use owned_ops;

owned_ops!(EPoly);

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> EPoly {
        EPoly::parse(s).unwrap()
    }

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(e("uv+1") + e("-1"), e("uv"));
        assert_eq!(e("uv-1") * e("uv+1"), e("(uv)^2 - 1"));
        let h = e("u^(1/2)v^(1/2)");
        assert_eq!(&h * &h, e("uv"));
        assert_eq!(h.denominator_bound(), 2);
        assert_eq!((e("u^(1/3)") * e("v^(1/2)")).denominator_bound(), 6);
    }

    #[test]
    fn specializations() {
        assert_eq!(e("1-2u-2v+uv").euler(), BigInt::from(-2));
        assert_eq!(e("uv+1").weight().to_string(), "1 + w^2");
        assert_eq!(e("uv-1").count().unwrap().to_string(), "-1 + q");
        assert!(matches!(e("u - v").count(), Err(Error::NonTateClass(_))));
        assert!(e("L^(1/2)").count().is_err());
    }

    #[test]
    fn canonical_text_round_trips() {
        for s in ["L^2 - u - v + 1", "u^(5/6)*v^(7/6) + L^(-1)", "0", "-3*L*u^(1/3)"] {
            let p = e(s);
            assert_eq!(e(&p.to_string()), p, "{s} -> {p}");
        }
        assert_eq!(e("1 + uv - u - v").to_string(), "L - u - v + 1");
        assert_eq!(e("u^(5/6)v^(7/6)").to_string(), "L^(5/6)*v^(1/3)");
    }

    #[test]
    fn exact_l_division() {
        let num = e("L^3 - 1") * e("u + 2");
        let q = num.div_exact_l_poly(&e("L - 1")).unwrap();
        assert_eq!(q, e("(L^2 + L + 1)(u + 2)"));
        assert!(e("L").div_exact_l_poly(&e("L - 1")).is_none());
        // Fractional powers: (x^6 - 1)/(x^2 - 1) with x = L^(1/3).
        let q = e("L^2 - 1").div_exact_l_poly(&e("L^(2/3) - 1")).unwrap();
        assert_eq!(q, e("L^(4/3) + L^(2/3) + 1"));
        // Laurent input.
        let q = e("L^(-1) - L^(-2)").div_exact_l_poly(&e("L - 1")).unwrap();
        assert_eq!(q, e("L^(-2)"));
    }

    #[test]
    fn reduction_mod_l_minus_one() {
        assert_eq!(e("L^3 - u*L").mod_l_minus_one(), e("1 - u"));
        assert_eq!(e("v").mod_l_minus_one(), EPoly::monomial(r(-1, 1), r(0, 1), 1));
    }

    #[test]
    fn serde_as_string() {
        let p = e("L^2 + u^(1/2)");
        let js = serde_json::to_string(&p).unwrap();
        let back: EPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
