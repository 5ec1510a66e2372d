use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense univariate polynomial over ℚ, ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly(vec![c]).trimmed()
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly(c.iter().map(|x| BigRational::from_integer((*x).into())).collect()).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().map_or(false, |c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect()).trimmed()
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut r = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly(r).trimmed()
    }

    pub fn pow(&self, n: u32) -> QPoly {
        (0..n).fold(QPoly::constant(BigRational::one()), |a, _| a.mul(self))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut rem = self.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = &rem.0[rd] / &lead;
            quot[rd - dd] = c.clone();
            let mut sub = vec![BigRational::zero(); rd - dd];
            sub.extend(d.0.iter().map(|x| x * &c));
            rem = rem.sub(&QPoly(sub));
        }
        (QPoly(quot).trimmed(), rem)
    }

    pub fn monic(&self) -> QPoly {
        match self.0.last() {
            Some(l) => self.scale(&l.recip()),
            None => QPoly::zero(),
        }
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> QPoly {
        QPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
        .trimmed()
    }

    /// Splits off the rational content: returns `(c, p)` with `p` an
    /// integer primitive polynomial whose lowest nonzero coefficient is
    /// positive and `self = c * p`.
    pub fn primitive_part(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let low = ints.iter().find(|c| !c.is_zero()).expect("nonzero");
        if low.is_negative() {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
        (BigRational::new(g, den), prim)
    }

    /// Text form in ascending powers of `var`, e.g. `1 - t + t^2`.
    pub fn fmt_int(coeffs: &[BigInt], var: &str, spaced: bool) -> String {
        let mut s = String::new();
        let mut first = true;
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    s.push('-');
                }
            } else if spaced {
                s.push_str(if neg { " - " } else { " + " });
            } else {
                s.push(if neg { '-' } else { '+' });
            }
            first = false;
            match k {
                0 => s.push_str(&a.to_string()),
                _ => {
                    if !a.is_one() {
                        s.push_str(&a.to_string());
                    }
                    s.push_str(var);
                    if k > 1 {
                        s.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        if first {
            s.push('0');
        }
        s
    }
}

/// Rational function of `s` whose denominator is a product of linear
/// factors `a + b·s` (`gcd(a, b) = 1`, `b > 0`). Stored reduced: no linear
/// factor divides the numerator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SRational {
    /// Numerator coefficients over ℚ in ascending powers of `s`, as strings.
    #[serde(with = "qpoly_serde")]
    numerator: QPoly,
    /// Linear factors `(a, b)` meaning `a + b·s`, with multiplicity.
    #[serde(with = "super::pairs")]
    factors: BTreeMap<(i64, i64), u32>,
}

mod qpoly_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &QPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = p.0.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<QPoly, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let cs = v
            .iter()
            .map(|x| x.parse::<BigRational>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(QPoly(cs).trimmed())
    }
}

impl SRational {
    pub fn zero() -> Self {
        SRational {
            numerator: QPoly::zero(),
            factors: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        SRational {
            numerator: QPoly::constant(c),
            factors: BTreeMap::new(),
        }
    }

    /// `1 / (nu + n·s)`.
    pub fn linear_recip(nu: Rational64, n: i64) -> Result<Self> {
        let (a, b) = (nu.numer() * 1, n * nu.denom());
        if a == 0 && b == 0 {
            return Err(Error::Unsupported("pole 1/0 in s-rational".into()));
        }
        if b == 0 {
            return Ok(SRational::constant(BigRational::new(
                BigInt::from(*nu.denom()),
                BigInt::from(a),
            )));
        }
        let g = a.gcd(&b) * b.signum();
        let mut factors = BTreeMap::new();
        factors.insert((a / g, b / g), 1);
        // nu + n s = (g / nu.denom) * (a/g + (b/g) s)
        Ok(SRational {
            numerator: QPoly::constant(BigRational::new(
                BigInt::from(*nu.denom()),
                BigInt::from(g),
            )),
            factors,
        })
    }

    pub fn numerator(&self) -> &QPoly {
        &self.numerator
    }

    pub fn factors(&self) -> &BTreeMap<(i64, i64), u32> {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn factor_poly(a: i64, b: i64) -> QPoly {
        QPoly::from_ints(&[a, b])
    }

    pub fn add(&self, o: &SRational) -> SRational {
        let mut common = self.factors.clone();
        for (f, m) in &o.factors {
            let e = common.entry(*f).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |x: &SRational| {
            let mut p = x.numerator.clone();
            for (f, m) in &common {
                let have = x.factors.get(f).copied().unwrap_or(0);
                p = p.mul(&Self::factor_poly(f.0, f.1).pow(m - have));
            }
            p
        };
        SRational {
            numerator: lift(self).add(&lift(o)),
            factors: common,
        }
        .reduced()
    }

    pub fn mul(&self, o: &SRational) -> SRational {
        let mut factors = self.factors.clone();
        for (f, m) in &o.factors {
            *factors.entry(*f).or_insert(0) += m;
        }
        SRational {
            numerator: self.numerator.mul(&o.numerator),
            factors,
        }
        .reduced()
    }

    pub fn scale(&self, c: &BigRational) -> SRational {
        SRational {
            numerator: self.numerator.scale(c),
            factors: self.factors.clone(),
        }
        .reduced()
    }

    fn reduced(mut self) -> SRational {
        if self.numerator.is_zero() {
            self.factors.clear();
            return self;
        }
        let keys: Vec<_> = self.factors.keys().copied().collect();
        for (a, b) in keys {
            let root = BigRational::new((-a).into(), b.into());
            loop {
                let m = self.factors[&(a, b)];
                if m == 0 || !self.numerator.eval(&root).is_zero() {
                    break;
                }
                let (q, _) = self.numerator.div_rem(&Self::factor_poly(a, b));
                self.numerator = q;
                self.factors.insert((a, b), m - 1);
            }
            if self.factors[&(a, b)] == 0 {
                self.factors.remove(&(a, b));
            }
        }
        self
    }

    pub fn eval(&self, s: &BigRational) -> Result<BigRational> {
        let mut den = BigRational::one();
        for ((a, b), m) in &self.factors {
            let v = BigRational::from_integer((*a).into())
                + BigRational::from_integer((*b).into()) * s;
            if v.is_zero() {
                return Err(Error::Unsupported(format!("pole at s = {s}")));
            }
            den *= num_traits::pow(v, *m as usize);
        }
        Ok(self.numerator.eval(s) / den)
    }

    fn parts(&self) -> (BigInt, BigInt, Vec<BigInt>) {
        let (c, prim) = self.numerator.primitive_part();
        (c.numer().clone(), c.denom().clone(), prim)
    }

    pub fn to_latex(&self) -> String {
        let (cn, cd, prim) = self.parts();
        if prim.is_empty() {
            return "0".into();
        }
        let p = QPoly::fmt_int(&prim, "s", false);
        let mut num = if prim.len() == 1 {
            (cn.clone() * &prim[0]).to_string()
        } else if cn.is_one() {
            p
        } else if cn == -BigInt::one() {
            format!("-({p})")
        } else {
            format!("{cn}({p})")
        };
        if self.factors.is_empty() && cd.is_one() {
            return num;
        }
        let mut den = if cd.is_one() { String::new() } else { cd.to_string() };
        for ((a, b), m) in &self.factors {
            den.push_str(&format!("({})", QPoly::fmt_int(&[(*a).into(), (*b).into()], "s", false)));
            if *m > 1 {
                den.push_str(&format!("^{{{m}}}"));
            }
        }
        if num.starts_with('-') {
            num = num[1..].to_string();
            return format!("-\\frac{{{num}}}{{{den}}}");
        }
        format!("\\frac{{{num}}}{{{den}}}")
    }
}

impl fmt::Display for SRational {
    /// Canonical reduced form such as `(5+4s)/((1+s)(5+6s))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (cn, cd, prim) = self.parts();
        if prim.is_empty() {
            return write!(f, "0");
        }
        let p = QPoly::fmt_int(&prim, "s", false);
        let multi = prim.iter().filter(|c| !c.is_zero()).count() > 1;
        let num = if prim.len() == 1 {
            (cn.clone() * &prim[0]).to_string()
        } else if cn.is_one() {
            if multi {
                format!("({p})")
            } else {
                p
            }
        } else if cn == -BigInt::one() {
            format!("-({p})")
        } else {
            format!("{cn}({p})")
        };
        let mut items: Vec<String> = Vec::new();
        if !cd.is_one() {
            items.push(cd.to_string());
        }
        for ((a, b), m) in &self.factors {
            let lin = format!("({})", QPoly::fmt_int(&[(*a).into(), (*b).into()], "s", false));
            if *m > 1 {
                items.push(format!("{lin}^{m}"));
            } else {
                items.push(lin);
            }
        }
        match items.len() {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num}/{}", items[0]),
            _ => write!(f, "{num}/({})", items.concat()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn lin(nu: i64, n: i64) -> SRational {
        SRational::linear_recip(Rational64::from_integer(nu), n).unwrap()
    }

    #[test]
    fn single_factor_text() {
        assert_eq!(lin(1, 3).to_string(), "1/(1+3s)");
        assert_eq!(lin(2, 2).to_string(), "1/(2(1+s))");
    }

    #[test]
    fn sums_reduce_and_print_canonically() {
        // -1/(5+6s) + 1/((5+6s)(2+2s)) + 1/((5+6s)(3+3s)) + 1/((5+6s)(1+s))
        let e3 = lin(5, 6);
        let z = e3
            .scale(&q(-1, 1))
            .add(&e3.mul(&lin(2, 2)))
            .add(&e3.mul(&lin(3, 3)))
            .add(&e3.mul(&lin(1, 1)));
        assert_eq!(z.to_string(), "(5-6s)/(6(1+s)(5+6s))");
        assert_eq!(z.eval(&q(0, 1)).unwrap(), q(1, 6));
    }

    #[test]
    fn cancellation() {
        // 1/(1+s) - 1/(2+s) = 1/((1+s)(2+s)); and (1+s)/(1+s) = 1.
        let a = lin(1, 1).add(&lin(2, 1).scale(&q(-1, 1)));
        assert_eq!(a.to_string(), "1/((1+s)(2+s))");
        let b = SRational::constant(q(1, 1)).mul(&lin(1, 1)).mul(&SRational {
            numerator: QPoly::from_ints(&[1, 1]),
            factors: BTreeMap::new(),
        });
        assert_eq!(b, SRational::constant(q(1, 1)));
    }

    #[test]
    fn rational_nu() {
        // 1/(2/3 + s) = 3/(2+3s)
        let a = SRational::linear_recip(Rational64::new(2, 3), 1).unwrap();
        assert_eq!(a.to_string(), "3/(2+3s)");
    }

    #[test]
    fn qpoly_gcd() {
        let a = QPoly::from_ints(&[1, 0, 0, 0, 0, 0, -1]);
        let b = QPoly::from_ints(&[1, 0, -1]).mul(&QPoly::from_ints(&[1, 0, 0, -1]));
        let g = a.gcd(&b);
        assert_eq!(g, QPoly::from_ints(&[-1, -1, 0, 1, 1]));
    }
}
