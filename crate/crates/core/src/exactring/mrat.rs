use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::epoly::EPoly;
use crate::error::{Error, Result};

/// Ring of numerator coefficients for [`MotivicRational`]: plain classes
/// ([`EPoly`]) or equivariant classes, both modules over `EPoly`.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, e: &EPoly) -> Self;
    fn from_epoly(e: EPoly) -> Self;

    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
}

impl Coefficient for EPoly {
    fn zero() -> Self {
        EPoly::zero()
    }
    fn one() -> Self {
        EPoly::one()
    }
    fn is_zero(&self) -> bool {
        EPoly::is_zero(self)
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
        self * e
    }
    fn from_epoly(e: EPoly) -> Self {
        e
    }
}

/// The factor `(L^nu T^(-n) - 1)^(-1)`, i.e. `Σ_{k≥1} L^(-nu k) T^(n k)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub nu: i64,
    pub n: Vec<u32>,
}

impl Factor {
    pub fn new(nu: i64, n: Vec<u32>) -> Self {
        assert!(n.iter().any(|&x| x > 0), "factor needs a nonzero T-degree");
        Factor { nu, n }
    }

    pub fn single(nu: i64, n: u32) -> Self {
        Factor::new(nu, vec![n])
    }

    fn degree(&self) -> u32 {
        self.n.iter().sum()
    }

    /// The inverse `L^nu T^(-n) - 1` as a Laurent polynomial.
    fn inverse(&self) -> Laurent<EPoly> {
        let mut p = Laurent::new();
        p.add(self.n.iter().map(|&x| -(x as i64)).collect(), EPoly::l_int(self.nu));
        p.add(vec![0; self.n.len()], -EPoly::one());
        p
    }
}

type Laurent<C> = LaurentPoly<C>;

/// Laurent polynomial in `T_1..T_r` with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct LaurentPoly<C> {
    pub terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn new() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, e: Vec<i64>, c: C) {
        if c.is_zero() {
            return;
        }
        let vanished = match self.terms.get_mut(&e) {
            Some(x) => {
                *x = x.plus(&c);
                x.is_zero()
            }
            None => {
                self.terms.insert(e.clone(), c);
                false
            }
        };
        if vanished {
            self.terms.remove(&e);
        }
    }

    pub fn mul_scalar_poly(&self, o: &LaurentPoly<EPoly>) -> LaurentPoly<C> {
        let mut r = LaurentPoly::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add(add_exp(e1, e2), c1.scaled(c2));
            }
        }
        r
    }
}

fn add_exp(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// One summand of a [`MotivicRational`]: a Laurent numerator times a
/// multiset of factors.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de> + Coefficient"))]
pub struct MTerm<C> {
    #[serde(with = "super::pairs")]
    pub numerator: BTreeMap<Vec<i64>, C>,
    #[serde(with = "super::pairs")]
    pub factors: BTreeMap<Factor, u32>,
}

/// Element of `M⟨T⟩`: a finite sum of terms `P(T) · ∏ (L^nu T^(-N) - 1)^(-1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de> + Coefficient"))]
pub struct MotivicRational<C> {
    pub r: usize,
    pub terms: Vec<MTerm<C>>,
}

/// Truncated power series in `T_1..T_r`, truncation by total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    pub r: usize,
    pub order: u32,
    pub coeffs: BTreeMap<Vec<u32>, C>,
}

impl<C: Coefficient> Series<C> {
    pub fn zero(r: usize, order: u32) -> Self {
        Series {
            r,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(r: usize, order: u32) -> Self {
        let mut s = Series::zero(r, order);
        s.add(vec![0; r], C::one());
        s
    }

    pub fn add(&mut self, e: Vec<u32>, c: C) {
        if c.is_zero() || e.iter().sum::<u32>() > self.order {
            return;
        }
        let vanished = match self.coeffs.get_mut(&e) {
            Some(x) => {
                *x = x.plus(&c);
                x.is_zero()
            }
            None => {
                self.coeffs.insert(e.clone(), c);
                false
            }
        };
        if vanished {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.coeffs.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of `T^n` for a one-variable series.
    pub fn get(&self, n: u32) -> C {
        self.coeff(&[n])
    }

    pub fn plus(&self, o: &Series<C>) -> Series<C> {
        let mut s = self.clone();
        s.order = self.order.min(o.order);
        s.coeffs.retain(|e, _| e.iter().sum::<u32>() <= s.order);
        for (e, c) in &o.coeffs {
            s.add(e.clone(), c.clone());
        }
        s
    }

    pub fn times(&self, o: &Series<C>) -> Series<C> {
        let order = self.order.min(o.order);
        let mut s = Series::zero(self.r, order);
        for (e1, c1) in &self.coeffs {
            let d1: u32 = e1.iter().sum();
            if d1 > order {
                continue;
            }
            for (e2, c2) in &o.coeffs {
                if d1 + e2.iter().sum::<u32>() > order {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                s.add(e, c1.times(c2));
            }
        }
        s
    }

    pub fn scaled_by(&self, o: &Series<EPoly>) -> Series<C> {
        let order = self.order.min(o.order);
        let mut s = Series::zero(self.r, order);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                s.add(e, c1.scaled(c2));
            }
        }
        s
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut s = Series::zero(self.r, self.order);
        for (e, c) in &self.coeffs {
            s.add(e.clone(), f(c));
        }
        s
    }

    pub fn truncate(&self, order: u32) -> Series<C> {
        let mut s = self.clone();
        s.order = order.min(self.order);
        s.coeffs.retain(|e, _| e.iter().sum::<u32>() <= order);
        s
    }
}

impl<C: Coefficient> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            write_monomial(f, self.r, e.iter().map(|&x| x as i64))?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(T^{})", self.order + 1)
    }
}

fn var_name(r: usize, i: usize) -> String {
    if r == 1 {
        "T".into()
    } else {
        format!("T{}", i + 1)
    }
}

fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    r: usize,
    e: impl Iterator<Item = i64>,
) -> fmt::Result {
    for (i, k) in e.enumerate() {
        match k {
            0 => {}
            1 => write!(f, "*{}", var_name(r, i))?,
            k if k > 0 => write!(f, "*{}^{k}", var_name(r, i))?,
            k => write!(f, "*{}^({k})", var_name(r, i))?,
        }
    }
    Ok(())
}

/// Geometric expansion of `∏ factor^m` to total degree `order`.
fn factor_series(r: usize, factors: &BTreeMap<Factor, u32>, order: u32) -> Series<EPoly> {
    let mut acc = Series::one(r, order);
    for (fac, m) in factors {
        let mut single = Series::zero(r, order);
        let d = fac.degree();
        let mut k = 1u32;
        while k * d <= order {
            single.add(
                fac.n.iter().map(|x| x * k).collect(),
                EPoly::l_int(-fac.nu * k as i64),
            );
            k += 1;
        }
        for _ in 0..*m {
            acc = acc.times(&single);
        }
    }
    acc
}

impl<C: Coefficient> MTerm<C> {
    fn min_total_degree(&self) -> i64 {
        self.numerator
            .keys()
            .map(|e| e.iter().sum::<i64>())
            .min()
            .unwrap_or(0)
    }

    fn factor_degree(&self) -> i64 {
        self.factors
            .iter()
            .map(|(f, m)| f.degree() as i64 * *m as i64)
            .sum()
    }
}

impl<C: Coefficient> MotivicRational<C> {
    pub fn zero(r: usize) -> Self {
        MotivicRational { r, terms: vec![] }
    }

    /// A constant (degree-zero numerator, no factors).
    pub fn constant(r: usize, c: C) -> Self {
        Self::monomial(vec![0; r], c)
    }

    pub fn monomial(exp: Vec<i64>, c: C) -> Self {
        let r = exp.len();
        Self::term(exp, c, BTreeMap::new(), r)
    }

    /// `c · T^exp · ∏ factors`.
    pub fn term(exp: Vec<i64>, c: C, factors: BTreeMap<Factor, u32>, r: usize) -> Self {
        assert_eq!(exp.len(), r);
        if c.is_zero() {
            return Self::zero(r);
        }
        let mut numerator = BTreeMap::new();
        numerator.insert(exp, c);
        let t = MTerm { numerator, factors };
        assert!(
            t.min_total_degree() + t.factor_degree() >= 0,
            "term is not a power series"
        );
        MotivicRational { r, terms: vec![t] }
    }

    /// `c · (L^nu T^(-n) - 1)^(-1)`.
    pub fn factor(c: C, f: Factor) -> Self {
        let r = f.n.len();
        let mut fs = BTreeMap::new();
        fs.insert(f, 1);
        Self::term(vec![0; r], c, fs, r)
    }

    pub fn from_terms(r: usize, terms: Vec<MTerm<C>>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|t| t.numerator.values().any(|c| !c.is_zero()))
            .collect();
        MotivicRational { r, terms }
    }

    pub fn plus(&self, o: &Self) -> Self {
        assert_eq!(self.r, o.r);
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        MotivicRational { r: self.r, terms }
    }

    pub fn negated(&self) -> Self {
        self.map_coeffs(|c| c.negated())
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    pub fn times(&self, o: &Self) -> Self {
        assert_eq!(self.r, o.r);
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &o.terms {
                let mut numerator = LaurentPoly::new();
                for (e1, c1) in &a.numerator {
                    for (e2, c2) in &b.numerator {
                        numerator.add(add_exp(e1, e2), c1.times(c2));
                    }
                }
                if numerator.terms.is_empty() {
                    continue;
                }
                let mut factors = a.factors.clone();
                for (f, m) in &b.factors {
                    *factors.entry(f.clone()).or_insert(0) += m;
                }
                terms.push(MTerm {
                    numerator: numerator.terms,
                    factors,
                });
            }
        }
        MotivicRational { r: self.r, terms }
    }

    pub fn scaled(&self, e: &EPoly) -> Self {
        self.map_coeffs(|c| c.scaled(e))
    }

    /// Multiplies by a coefficient.
    pub fn times_coeff(&self, x: &C) -> Self {
        self.map_coeffs(|c| c.times(x))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> MotivicRational<D> {
        MotivicRational {
            r: self.r,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut num = LaurentPoly::new();
                    for (e, c) in &t.numerator {
                        num.add(e.clone(), f(c));
                    }
                    MTerm {
                        numerator: num.terms,
                        factors: t.factors.clone(),
                    }
                })
                .filter(|t| !t.numerator.is_empty())
                .collect(),
        }
    }

    /// Power-series expansion to total degree `order`.
    pub fn expand(&self, order: u32) -> Series<C> {
        let mut out = Series::zero(self.r, order);
        for t in &self.terms {
            let shift = (-t.min_total_degree()).max(0) as u32;
            let fs = factor_series(self.r, &t.factors, order + shift);
            for (e, c) in &t.numerator {
                let d: i64 = e.iter().sum();
                for (k, fc) in &fs.coeffs {
                    let total = d + k.iter().sum::<u32>() as i64;
                    if total > order as i64 {
                        continue;
                    }
                    let exp: Vec<i64> = e.iter().zip(k).map(|(a, b)| a + *b as i64).collect();
                    if exp.iter().any(|&x| x < 0) {
                        // Only possible for r > 1 with numerators that
                        // cancel between terms; such monomials are dropped.
                        continue;
                    }
                    out.add(exp.iter().map(|&x| x as u32).collect(), c.scaled(fc));
                }
            }
        }
        out
    }

    /// Common factor multiset (maximum multiplicity per factor) and the
    /// numerator of the sum over it.
    pub(crate) fn combined(&self) -> (BTreeMap<Factor, u32>, LaurentPoly<C>) {
        let mut common: BTreeMap<Factor, u32> = BTreeMap::new();
        for t in &self.terms {
            for (f, m) in &t.factors {
                let e = common.entry(f.clone()).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let mut total = LaurentPoly::new();
        for t in &self.terms {
            let mut num = LaurentPoly {
                terms: t.numerator.clone(),
            };
            for (f, m) in &common {
                let have = t.factors.get(f).copied().unwrap_or(0);
                let inv = f.inverse();
                for _ in have..*m {
                    num = num.mul_scalar_poly(&inv);
                }
            }
            for (e, c) in num.terms {
                total.add(e, c);
            }
        }
        (common, total)
    }

    /// Rewrites the value as a single term over the common factor multiset.
    pub fn normalized(&self) -> Self {
        let (factors, num) = self.combined();
        if num.terms.is_empty() {
            return Self::zero(self.r);
        }
        MotivicRational {
            r: self.r,
            terms: vec![MTerm {
                numerator: num.terms,
                factors,
            }],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.combined().1.terms.is_empty()
    }

    /// Value at `T = ∞` (one variable): each factor tends to `-1`.
    pub fn eval_infinity(&self) -> Result<C> {
        assert_eq!(self.r, 1, "evaluation at infinity needs one variable");
        // In S = 1/T a factor is -Σ_{k≥0} L^(nu k) S^(N k).
        let mut by_s: BTreeMap<i64, C> = BTreeMap::new();
        for t in &self.terms {
            let top = t.numerator.keys().map(|e| e[0]).max().unwrap_or(0).max(0);
            let mut g: BTreeMap<i64, EPoly> = BTreeMap::new();
            g.insert(0, EPoly::one());
            for (f, m) in &t.factors {
                let n = f.n[0] as i64;
                for _ in 0..*m {
                    let mut next: BTreeMap<i64, EPoly> = BTreeMap::new();
                    for (d, c) in &g {
                        let mut k = 0;
                        while d + n * k <= top {
                            let x = next.entry(d + n * k).or_insert_with(EPoly::zero);
                            *x = &*x - &(c * &EPoly::l_int(f.nu * k));
                            k += 1;
                        }
                    }
                    g = next;
                }
            }
            for (e, c) in &t.numerator {
                for (d, gc) in &g {
                    let s = d - e[0];
                    if s > 0 {
                        continue;
                    }
                    let x = by_s.entry(s).or_insert_with(C::zero);
                    *x = x.plus(&c.scaled(gc));
                }
            }
        }
        if let Some((s, c)) = by_s.iter().find(|(s, c)| **s < 0 && !c.is_zero()) {
            return Err(Error::NotRegularAtInfinity(format!(
                "coefficient {c} of T^{} survives",
                -s
            )));
        }
        Ok(by_s.remove(&0).unwrap_or_else(C::zero))
    }

    /// Largest exponent of `T` in any numerator (one variable).
    fn max_numerator_degree(&self) -> i64 {
        self.terms
            .iter()
            .flat_map(|t| t.numerator.keys().map(|e| e[0]))
            .max()
            .unwrap_or(0)
    }
}

impl MotivicRational<EPoly> {
    /// `prefactor · x(1)` computed exactly; each factor becomes
    /// `(L^nu - 1)^(-1)`.
    pub fn eval_one(&self, prefactor: &EPoly) -> Result<EPoly> {
        let (factors, num) = self.combined();
        if num.terms.is_empty() {
            return Ok(EPoly::zero());
        }
        let mut total = EPoly::zero();
        for c in num.terms.values() {
            total = &total + c;
        }
        total = &total * prefactor;
        for (f, m) in &factors {
            if f.nu == 0 {
                return Err(Error::PoleAtOne(format!(
                    "factor (T^(-{}) - 1)^(-1) has a pole at T = 1",
                    f.n[0]
                )));
            }
            let d = &EPoly::l_int(f.nu) - &EPoly::one();
            for _ in 0..*m {
                total = total.div_exact_l_poly(&d).ok_or_else(|| {
                    Error::NonDivisible(format!("value at T = 1 is not divisible by {d}"))
                })?;
            }
        }
        Ok(total)
    }
}

impl<C: Coefficient> PartialEq for MotivicRational<C> {
    fn eq(&self, o: &Self) -> bool {
        self.r == o.r && self.minus(o).is_zero()
    }
}

impl<C: Coefficient> fmt::Display for MotivicRational<C> {
    /// Term list `(c)*T^e/(L^(nu)*T^(-N) - 1)^m + ...` in stored order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let group = t.numerator.len() > 1;
            if group {
                write!(f, "(")?;
            }
            for (i, (e, c)) in t.numerator.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "({c})")?;
                write_monomial(f, self.r, e.iter().copied())?;
            }
            if group {
                write!(f, ")")?;
            }
            for (fac, m) in &t.factors {
                write!(f, "/(L^({})", fac.nu)?;
                write_monomial(f, self.r, fac.n.iter().map(|&x| -(x as i64)))?;
                write!(f, " - 1)")?;
                if *m > 1 {
                    write!(f, "^{m}")?;
                }
            }
        }
        Ok(())
    }
}

/// Roots of `∏ (1 - L^{-ν} T^N)^m` as `(ν/N, j/N mod 1) ↦ multiplicity`:
/// the root `L^{ν/N} ζ_N^j`.
fn eigenvalues(factors: &BTreeMap<Factor, u32>) -> BTreeMap<(Rational64, Rational64), u32> {
    let mut out = BTreeMap::new();
    for (f, m) in factors {
        let n = f.n[0] as i64;
        for j in 0..n {
            *out.entry((Rational64::new(f.nu, n), Rational64::new(j, n))).or_insert(0) += m;
        }
    }
    out
}

/// A denominator for the Hadamard product: the roots are the pairwise
/// products, a pole of order `a` times one of order `b` giving at most
/// `a + b - 1`. Roots sharing the same `L`-rate are covered by one factor
/// `(1 - L^{-rM} T^M)` with `M` the common order.
fn hadamard_denominator(
    ea: &BTreeMap<(Rational64, Rational64), u32>,
    eb: &BTreeMap<(Rational64, Rational64), u32>,
) -> BTreeMap<Factor, u32> {
    let mut prod: BTreeMap<(Rational64, Rational64), u32> = BTreeMap::new();
    for ((ra, ja), ma) in ea {
        for ((rb, jb), mb) in eb {
            let mut angle = ja + jb;
            if angle >= Rational64::from_integer(1) {
                angle -= Rational64::from_integer(1);
            }
            let e = prod.entry((ra + rb, angle)).or_insert(0);
            *e = (*e).max(ma + mb - 1);
        }
    }
    let mut by_rate: BTreeMap<Rational64, (i64, u32)> = BTreeMap::new();
    for ((rate, angle), m) in prod {
        let e = by_rate.entry(rate).or_insert((*rate.denom(), 0));
        e.0 = e.0.lcm(angle.denom());
        e.1 = e.1.max(m);
    }
    by_rate
        .into_iter()
        .map(|(rate, (n, m))| (Factor::single((rate * n).to_integer(), n as u32), m))
        .collect()
}

/// Hadamard product `Σ pair(a_k, b_k) T^k` of two one-variable series that
/// vanish at `T = 0` and are regular at infinity, reconstructed as a
/// rational function over the pairwise factor products and verified against
/// the expansion.
pub fn hadamard<A, B, C>(
    a: &MotivicRational<A>,
    b: &MotivicRational<B>,
    order: u32,
    pair: impl Fn(&A, &B) -> C,
) -> Result<MotivicRational<C>>
where
    A: Coefficient,
    B: Coefficient,
    C: Coefficient,
{
    assert!(a.r == 1 && b.r == 1, "Hadamard product needs one variable");
    a.eval_infinity()?;
    b.eval_infinity()?;
    let (fa, _) = a.combined();
    let (fb, _) = b.combined();
    let den = hadamard_denominator(&eigenvalues(&fa), &eigenvalues(&fb));
    let deg_d: i64 = den.iter().map(|(f, m)| f.n[0] as i64 * *m as i64).sum();
    let poly_part = a.max_numerator_degree().max(b.max_numerator_degree()).max(0);
    let bound = deg_d + poly_part;
    let k_eff = (order as i64).max(2 * bound + 2) as u32;

    let sa = a.expand(k_eff);
    let sb = b.expand(k_eff);
    if !sa.get(0).is_zero() || !sb.get(0).is_zero() {
        return Err(Error::Unsupported(
            "Hadamard product needs series vanishing at T = 0".into(),
        ));
    }
    let h: Vec<C> = (0..=k_eff).map(|k| pair(&sa.get(k), &sb.get(k))).collect();

    // D = ∏ (1 - L^(-nu) T^M)^e as a polynomial with EPoly coefficients.
    let mut dpoly: BTreeMap<u32, EPoly> = BTreeMap::new();
    dpoly.insert(0, EPoly::one());
    for (f, m) in &den {
        for _ in 0..*m {
            let mut next: BTreeMap<u32, EPoly> = BTreeMap::new();
            for (d, c) in &dpoly {
                let x = next.entry(*d).or_insert_with(EPoly::zero);
                *x = &*x + c;
                let y = next.entry(d + f.n[0]).or_insert_with(EPoly::zero);
                *y = &*y - &(c * &EPoly::l_int(-f.nu));
            }
            dpoly = next;
        }
    }
    let mut q: Vec<C> = vec![C::zero(); k_eff as usize + 1];
    for (k, qk) in q.iter_mut().enumerate() {
        for (d, c) in &dpoly {
            if (*d as usize) <= k {
                *qk = qk.plus(&h[k - *d as usize].scaled(c));
            }
        }
    }
    if let Some(k) = (bound as usize + 1..=k_eff as usize).find(|&k| !q[k].is_zero()) {
        return Err(Error::ReconstructionFailed(format!(
            "coefficient {k} of the cleared Hadamard product does not vanish"
        )));
    }
    let nu_sum: i64 = den.iter().map(|(f, m)| f.nu * *m as i64).sum();
    let shift = EPoly::l_int(nu_sum);
    let mut numerator = LaurentPoly::new();
    for (k, c) in q.into_iter().enumerate().take(bound as usize + 1) {
        numerator.add(vec![k as i64 - deg_d], c.scaled(&shift));
    }
    Ok(MotivicRational::from_terms(
        1,
        vec![MTerm {
            numerator: numerator.terms,
            factors: den,
        }],
    ))
}

/// Helper for callers building factors with rational `nu` that must be
/// integral.
pub fn integral_nu(nu: Rational64, what: &str) -> Result<i64> {
    if nu.is_integer() {
        Ok(nu.to_integer())
    } else {
        Err(Error::Unsupported(format!(
            "{what} needs integer nu, got {nu}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = MotivicRational<EPoly>;

    fn e(s: &str) -> EPoly {
        EPoly::parse(s).unwrap()
    }

    fn geometric(c: &str, nu: i64, n: u32) -> M {
        M::factor(e(c), Factor::single(nu, n))
    }

    #[test]
    fn expand_single_factor() {
        let s = geometric("1", 1, 2).expand(6);
        assert_eq!(s.get(2), EPoly::l_int(-1));
        assert_eq!(s.get(4), EPoly::l_int(-2));
        assert_eq!(s.get(6), EPoly::l_int(-3));
        assert!(s.get(1).is_zero() && s.get(3).is_zero());
    }

    #[test]
    fn expand_with_numerator() {
        let s = geometric("L - 1", 1, 1).expand(3);
        for k in 1..=3 {
            assert_eq!(s.get(k), &e("L - 1") * &EPoly::l_int(-(k as i64)));
        }
    }

    #[test]
    fn infinity_values() {
        assert_eq!(geometric("1", 1, 2).eval_infinity().unwrap(), e("-1"));
        // T * [(L T^-1 - 1)^-1 - (L^2 T^-1 - 1)^-1] = T/(L - T) - T/(L^2 - T)
        let x = M::term(vec![1], e("1"), [(Factor::single(1, 1), 1)].into(), 1).minus(&M::term(
            vec![1],
            e("1"),
            [(Factor::single(2, 1), 1)].into(),
            1,
        ));
        assert_eq!(x.eval_infinity().unwrap(), e("L^2 - L"));
        let bare = M::monomial(vec![1], e("1"));
        assert!(matches!(
            bare.eval_infinity(),
            Err(Error::NotRegularAtInfinity(_))
        ));
        let sq = M::term(vec![2], e("1"), [(Factor::single(1, 1), 2)].into(), 1);
        assert!(sq.eval_infinity().is_err());
    }

    #[test]
    fn equality_by_cross_multiplication() {
        // T/(1-T) = (T^-1 - 1)^-1 and L^-1 T (L T^-1 - 1)^-1 ... identities
        let a = geometric("1", 0, 1);
        let b = M::monomial(vec![1], e("1")).plus(&M::term(
            vec![1],
            e("1"),
            [(Factor::single(0, 1), 1)].into(),
            1,
        ));
        assert_eq!(a, b);
        assert_ne!(a, geometric("1", 1, 1));
    }

    #[test]
    fn hadamard_examples() {
        // T/(1-T) ⊙ T/(1-LT) = T/(1-LT)
        let a = geometric("1", 0, 1);
        let b = geometric("1", -1, 1);
        let h = hadamard(&a, &b, 8, |x, y| x * y).unwrap();
        assert_eq!(h, b);
        assert_eq!(
            h.eval_infinity().unwrap(),
            -(&a.eval_infinity().unwrap() * &b.eval_infinity().unwrap())
        );
        let h2 = hadamard(&a, &a, 8, |x, y| x * y).unwrap();
        assert_eq!(h2, a);
        assert_eq!(h2.eval_infinity().unwrap(), e("-1"));
        let bad = M::monomial(vec![1], e("1"));
        assert!(hadamard(&a, &bad, 8, |x, y| x * y).is_err());
    }

    #[test]
    fn hadamard_mixed_periods() {
        let a = geometric("1", 2, 2);
        let b = geometric("L - 1", 1, 3).plus(&geometric("1", 1, 1));
        let h = hadamard(&a, &b, 10, |x, y| x * y).unwrap();
        let (sa, sb, sh) = (a.expand(30), b.expand(30), h.expand(30));
        for k in 0..=30 {
            assert_eq!(sh.get(k), &sa.get(k) * &sb.get(k));
        }
    }

    #[test]
    fn value_at_one() {
        // (L - 1) * Σ L^-n = 1
        let x = geometric("1", 1, 1);
        assert_eq!(x.eval_one(&e("L - 1")).unwrap(), e("1"));
        assert!(matches!(
            geometric("1", 0, 1).eval_one(&e("1")),
            Err(Error::PoleAtOne(_))
        ));
    }

    #[test]
    fn two_variables() {
        let x = M::factor(e("L - 1"), Factor::new(1, vec![1, 0]))
            .times(&M::factor(e("L - 1"), Factor::new(1, vec![0, 1])));
        let s = x.expand(4);
        assert_eq!(s.coeff(&[1, 2]), &e("(L - 1)^2") * &EPoly::l_int(-3));
    }

    #[test]
    fn serde_round_trip() {
        let x = geometric("L - 1", 1, 2).plus(&M::constant(1, e("u")));
        let j = serde_json::to_string(&x).unwrap();
        let y: M = serde_json::from_str(&j).unwrap();
        assert_eq!(x, y);
    }
}
