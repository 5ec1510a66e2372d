use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use super::parse::parse_poly;
use crate::error::{Error, Result};

/// Univariate Laurent polynomial with rational exponents and integer
/// coefficients. Used for weight (`w`), count (`q`) and spectrum (`t`)
/// realizations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniPoly {
    pub var: char,
    pub terms: BTreeMap<Rational64, BigInt>,
}

impl UniPoly {
    pub fn zero(var: char) -> Self {
        UniPoly {
            var,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(var: char, it: impl IntoIterator<Item = (Rational64, BigInt)>) -> Self {
        let mut p = UniPoly::zero(var);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Parses a polynomial in the single variable `var`.
    pub fn parse(src: &str, var: char) -> Result<Self> {
        let p = parse_poly(src)?;
        let mut out = UniPoly::zero(var);
        for (m, c) in &p.terms {
            let mut e = Rational64::zero();
            for (name, x) in m {
                if name.len() != 1 || !name.starts_with(var) {
                    return Err(Error::Parse(format!(
                        "variable '{name}' is not allowed here, expected '{var}'"
                    )));
                }
                e += x;
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn add_term(&mut self, e: Rational64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let vanished = {
            let x = self.terms.entry(e).or_insert_with(BigInt::zero);
            *x += c;
            x.is_zero()
        };
        if vanished {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: Rational64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `var = 1`.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact value at an integer point; requires integer exponents.
    pub fn eval_integer(&self, x: &BigInt) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        let xr = BigRational::from_integer(x.clone());
        for (e, c) in &self.terms {
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer();
            let pw = if k >= 0 {
                num_traits::pow(xr.clone(), k as usize)
            } else {
                if x.is_zero() {
                    return None;
                }
                num_traits::pow(xr.recip(), (-k) as usize)
            };
            acc += pw * BigRational::from_integer(c.clone());
        }
        Some(acc)
    }
}

pub(crate) fn fmt_exponent(e: &Rational64) -> String {
    if e.is_integer() && !e.is_negative() {
        format!("{}", e.to_integer())
    } else {
        format!("({e})")
    }
}

impl fmt::Display for UniPoly {
    /// Ascending exponent order: `1 - 2q + q^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            if e.is_one() {
                write!(f, "{}", self.var)?;
            } else {
                write!(f, "{}^{}", self.var, fmt_exponent(e))?;
            }
        }
        Ok(())
    }
}
