use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{local_nonempty, require_r1, trace_class};
use crate::error::{Error, Result};
use crate::exactring::QPoly;
use crate::resolution::ResolutionData;

/// Lefschetz number `Λ_n` of the `n`-th power of the monodromy:
/// `χ(Tr_n[ψ])`, i.e. the sum of `χ(Ẽ_i°)` over singleton strata with
/// `N_i | n`. Without cover data `χ(Ẽ_i°) = N_i χ(E_i°)` is used.
pub fn acampo_lefschetz(res: &ResolutionData, n: u32) -> Result<BigInt> {
    require_r1(res, "the Lefschetz numbers")?;
    if n == 0 {
        return Err(Error::Unsupported("n must be positive".into()));
    }
    let views = local_nonempty(res)?;
    if views.iter().all(|v| v.stratum.cover.is_some()) {
        return Ok(trace_class(res, n)?.underlying().euler());
    }
    let mut acc = BigInt::zero();
    for v in views.iter().filter(|v| v.size() == 1) {
        let ni = v.comps[0].n[0];
        if ni != 0 && n % ni == 0 {
            acc += match &v.stratum.cover {
                Some(c) => c.chars.underlying().euler(),
                None => v.stratum.epoly.euler() * ni,
            };
        }
    }
    Ok(acc)
}

/// Monodromy zeta function `∏_i (1 - t^{N_i})^{-χ(E_i°)}` over the singleton
/// strata of the locus, reduced to lowest terms with constant terms 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyZeta {
    /// Ascending integer coefficients in `t`.
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
}

fn one_minus_t_pow(n: u32) -> QPoly {
    let mut c = vec![0i64; n as usize + 1];
    c[0] = 1;
    c[n as usize] -= 1;
    QPoly::from_ints(&c)
}

fn to_ints(p: &QPoly) -> Result<Vec<BigInt>> {
    p.0.iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::NonDivisible(format!(
                    "monodromy zeta has non-integral coefficient {c}"
                )))
            }
        })
        .collect()
}

/// Power series `p/q` to order `k` (requires `q(0) ≠ 0`).
fn series_div(p: &QPoly, q: &QPoly, k: usize) -> Vec<BigRational> {
    let q0 = q.coeff(0);
    let mut out: Vec<BigRational> = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut acc = p.coeff(n);
        for j in 1..=n {
            acc -= q.coeff(j) * &out[n - j];
        }
        out.push(acc / &q0);
    }
    out
}

impl MonodromyZeta {
    fn from_polys(num: &QPoly, den: &QPoly) -> Result<Self> {
        let g = num.gcd(den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let c = d.coeff(0);
        n = n.scale(&c.recip());
        d = d.scale(&c.recip());
        Ok(MonodromyZeta {
            numerator: to_ints(&n)?.iter().map(|x| x.to_string()).collect(),
            denominator: to_ints(&d)?.iter().map(|x| x.to_string()).collect(),
        })
    }

    fn poly(v: &[String]) -> QPoly {
        QPoly(
            v.iter()
                .map(|x| BigRational::from_integer(x.parse().expect("integer coefficient")))
                .collect(),
        )
    }

    pub fn numerator_poly(&self) -> QPoly {
        Self::poly(&self.numerator)
    }

    pub fn denominator_poly(&self) -> QPoly {
        Self::poly(&self.denominator)
    }

    /// Coefficients `c_1..c_k` of `t·ζ'(t)/ζ(t)`.
    pub fn log_derivative(&self, k: usize) -> Vec<BigInt> {
        let (n, d) = (self.numerator_poly(), self.denominator_poly());
        let a = series_div(&n.derivative(), &n, k);
        let b = series_div(&d.derivative(), &d, k);
        (1..=k)
            .map(|j| (&a[j - 1] - &b[j - 1]).to_integer())
            .collect()
    }

    fn ints(v: &[String]) -> Vec<BigInt> {
        v.iter().map(|x| x.parse().expect("integer coefficient")).collect()
    }

    pub fn to_latex(&self) -> String {
        let n = QPoly::fmt_int(&Self::ints(&self.numerator), "t", false);
        let d = QPoly::fmt_int(&Self::ints(&self.denominator), "t", false);
        if self.denominator.len() == 1 {
            n
        } else {
            format!("\\frac{{{n}}}{{{d}}}")
        }
    }
}

impl fmt::Display for MonodromyZeta {
    /// `(1-t+t^2)/(1-t)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nn = Self::ints(&self.numerator);
        let dd = Self::ints(&self.denominator);
        let n = QPoly::fmt_int(&nn, "t", false);
        let d = QPoly::fmt_int(&dd, "t", false);
        let terms = |v: &[BigInt]| v.iter().filter(|c| !c.is_zero()).count();
        if dd.len() == 1 {
            return write!(f, "{n}");
        }
        let n = if terms(&nn) > 1 { format!("({n})") } else { n };
        write!(f, "{n}/({d})")
    }
}

/// Monodromy zeta function, with the identity between its logarithmic
/// derivative and the Lefschetz numbers checked for `n ≤ 24`.
pub fn monodromy_zeta(res: &ResolutionData) -> Result<MonodromyZeta> {
    require_r1(res, "the monodromy zeta function")?;
    let mut num = QPoly::constant(BigRational::one());
    let mut den = QPoly::constant(BigRational::one());
    let mut singles = Vec::new();
    for v in local_nonempty(res)?.iter().filter(|v| v.size() == 1) {
        let n = v.comps[0].n[0];
        let chi = v.stratum.epoly.euler();
        if n == 0 {
            return Err(Error::Unsupported(format!(
                "component \"{}\" has N = 0",
                v.comps[0].id
            )));
        }
        singles.push((n, chi.clone()));
        let e: i64 = chi.try_into().map_err(|_| Error::Unsupported("huge Euler number".into()))?;
        if e < 0 {
            num = num.mul(&one_minus_t_pow(n).pow((-e) as u32));
        } else {
            den = den.mul(&one_minus_t_pow(n).pow(e as u32));
        }
    }
    if singles.is_empty() {
        return Err(Error::MissingStratum("no singleton strata over the locus".into()));
    }
    let z = MonodromyZeta::from_polys(&num, &den)?;
    let logd = z.log_derivative(24);
    for (i, c) in logd.iter().enumerate() {
        let n = i as u32 + 1;
        let expected = acampo_lefschetz(res, n)?;
        if *c != expected {
            return Err(Error::Validation(vec![format!(
                "log-derivative coefficient {c} at n = {n} differs from Λ_n = {expected}"
            )]));
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::builtin_fixture;

    fn fx(name: &str) -> ResolutionData {
        builtin_fixture(name).unwrap().data
    }

    #[test]
    fn cusp_monodromy() {
        let r = fx("cuspA");
        let z = monodromy_zeta(&r).unwrap();
        assert_eq!(z.to_string(), "(1-t+t^2)/(1-t)");
        assert_eq!(z, monodromy_zeta(&fx("cuspB")).unwrap());
        let l: Vec<i64> = (1..=6)
            .map(|n| acampo_lefschetz(&r, n).unwrap().try_into().unwrap())
            .collect();
        assert_eq!(l, vec![0, 2, 3, 2, 0, -1]);
    }

    #[test]
    fn powers_and_smooth() {
        assert_eq!(monodromy_zeta(&fx("xN(3)")).unwrap().to_string(), "1/(1-t^3)");
        assert_eq!(monodromy_zeta(&fx("xN(1)")).unwrap().to_string(), "1/(1-t)");
        for n in 1..=12 {
            let l = acampo_lefschetz(&fx("xN(4)"), n).unwrap();
            assert_eq!(l, BigInt::from(if n % 4 == 0 { 4 } else { 0 }));
        }
    }

    #[test]
    fn without_covers_uses_degrees() {
        let mut r = fx("cuspA");
        for s in &mut r.strata {
            s.cover = None;
        }
        for n in 1..=12 {
            assert_eq!(
                acampo_lefschetz(&r, n).unwrap(),
                acampo_lefschetz(&fx("cuspA"), n).unwrap()
            );
        }
    }
}
