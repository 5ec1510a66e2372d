//! Kapranov zeta functions `Z(T) = Σ E(Sym^n X) T^n`, computed from the
//! E-polynomial through `Z = ∏_{p,q} (1 - u^p v^q T)^{-e_{p,q}}`.

use num_bigint::BigInt;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::EPoly;

/// `E(Sym^n)` for `n ≤ order`, by Newton's identity
/// `n Z_n = Σ_{k=1}^n ψ^k(e) Z_{n-k}` with `ψ^k` the Adams operation.
pub fn sym_powers(e: &EPoly, order: u32) -> Result<Vec<EPoly>> {
    if !e.has_integer_exponents() {
        return Err(Error::Unsupported(format!(
            "symmetric powers need integer exponents, got {e}"
        )));
    }
    let adams: Vec<EPoly> = (1..=order as i64).into_par_iter().map(|k| e.adams(k)).collect();
    let mut z = vec![EPoly::one()];
    for n in 1..=order as usize {
        let mut acc = EPoly::zero();
        for k in 1..=n {
            acc = &acc + &(&adams[k - 1] * &z[n - k]);
        }
        let zn = acc.div_exact_int(&BigInt::from(n)).ok_or_else(|| {
            Error::NonIntegralExpansion(format!(
                "coefficient {n} of the Kapranov series of {e} is not integral"
            ))
        })?;
        z.push(zn);
    }
    Ok(z)
}

/// `∏ (1 - u^a v^b T)` applied to a truncated series.
fn times_factors(series: &[EPoly], factors: &[(i64, i64)]) -> Vec<EPoly> {
    let mut out = series.to_vec();
    for (a, b) in factors {
        let m = EPoly::monomial(Rational64::from_integer(*a), Rational64::from_integer(*b), 1);
        let prev = out.clone();
        for n in 1..out.len() {
            out[n] = &prev[n] - &(&m * &prev[n - 1]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalityCheck {
    pub rational: bool,
    /// Coefficients of the numerator, when the check succeeds.
    pub numerator: Vec<EPoly>,
}

/// Multiplies the truncated series by `∏ (1 - u^a v^b T)` and checks that
/// the product is a polynomial of degree at most `max_degree` through the
/// available order.
pub fn verify_rational(series: &[EPoly], factors: &[(i64, i64)], max_degree: usize) -> RationalityCheck {
    let prod = times_factors(series, factors);
    let rational = prod.iter().skip(max_degree + 1).all(|c| c.is_zero());
    let mut numerator = Vec::new();
    if rational {
        numerator = prod.into_iter().take(max_degree + 1).collect();
        while numerator.last().is_some_and(|c| c.is_zero()) {
            numerator.pop();
        }
    }
    RationalityCheck { rational, numerator }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalEquation {
    pub genus: u32,
    pub holds: bool,
    /// `P(T) = Z(T)(1 - T)(1 - LT)`, ascending.
    pub numerator: Vec<EPoly>,
}

/// Genus of `1 - g u - g v + uv`, if `e` has that shape.
fn curve_genus(e: &EPoly) -> Option<u32> {
    let r = |x: i64| Rational64::from_integer(x);
    let g = -e.coeff(r(1), r(0));
    let g32: u32 = g.clone().try_into().ok()?;
    let expected = &(&EPoly::one() + &EPoly::l_int(1))
        - &EPoly::monomial(r(1), r(0), g.clone())
        - EPoly::monomial(r(0), r(1), g);
    (*e == expected).then_some(g32)
}

/// Reconstructs `Z = P/((1 - T)(1 - LT))` from `order` coefficients and checks
/// `Z(1/(LT)) = L^{1-g} T^{2-2g} Z(T)`, i.e. `p_{2g-k} = L^{g-k} p_k`.
pub fn functional_equation_check(e: &EPoly, order: u32) -> Result<FunctionalEquation> {
    let g = curve_genus(e).ok_or_else(|| {
        Error::Unsupported(format!("{e} is not the class of a curve 1 - g u - g v + uv"))
    })?;
    let deg = 2 * g as usize;
    if (order as usize) < deg + 2 {
        return Err(Error::ReconstructionFailed(format!(
            "order {order} is below 2g + 2 = {}",
            deg + 2
        )));
    }
    let z = sym_powers(e, order)?;
    let check = verify_rational(&z, &[(0, 0), (1, 1)], deg);
    if !check.rational {
        return Err(Error::ReconstructionFailed(format!(
            "Z(T)(1 - T)(1 - LT) is not a polynomial of degree at most {deg}"
        )));
    }
    let mut p = check.numerator.clone();
    p.resize(deg + 1, EPoly::zero());
    let holds = (0..=deg).all(|k| p[deg - k] == &p[k] * &EPoly::l_int(g as i64 - k as i64));
    Ok(FunctionalEquation {
        genus: g,
        holds,
        numerator: check.numerator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn e(s: &str) -> EPoly {
        EPoly::parse(s).unwrap()
    }

    #[test]
    fn symmetric_powers() {
        assert!(sym_powers(&EPoly::one(), 6).unwrap().iter().all(|x| *x == EPoly::one()));
        let p1 = sym_powers(&e("1 + uv"), 6).unwrap();
        for (n, x) in p1.iter().enumerate() {
            assert_eq!(*x, EPoly::projective_space(n as i64));
        }
        // Sym^2 of an elliptic curve is a P^1-bundle over it.
        let ell = e("1 - u - v + uv");
        assert_eq!(sym_powers(&ell, 2).unwrap()[2], &e("1 + uv") * &ell);
        assert_eq!(sym_powers(&ell, 2).unwrap()[2], e("1 - u - v + 2uv - u^2 v - u v^2 + u^2 v^2"));
    }

    #[test]
    fn fractional_exponents_rejected() {
        assert!(matches!(sym_powers(&e("(uv)^(1/2)"), 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rationality() {
        let p1 = sym_powers(&e("1 + uv"), 8).unwrap();
        let ok = verify_rational(&p1, &[(0, 0), (1, 1)], 4);
        assert!(ok.rational);
        assert_eq!(ok.numerator, vec![EPoly::one()]);
        assert!(!verify_rational(&p1, &[(0, 0)], 4).rational);
        let pt = sym_powers(&EPoly::one(), 8).unwrap();
        assert!(verify_rational(&pt, &[(0, 0)], 4).rational);
    }

    #[test]
    fn functional_equations() {
        for g in 0..=2 {
            let curve = e(&format!("1 - {g} u - {g} v + uv"));
            let f = functional_equation_check(&curve, 8).unwrap();
            assert_eq!(f.genus, g);
            assert!(f.holds, "genus {g}");
        }
        assert!(matches!(
            functional_equation_check(&e("1 - 3u - 3v + uv"), 6),
            Err(Error::ReconstructionFailed(_))
        ));
        assert!(matches!(functional_equation_check(&e("1 + u"), 8), Err(Error::Unsupported(_))));
    }

    fn small_class() -> impl Strategy<Value = EPoly> {
        proptest::collection::vec(((0i64..3, 0i64..3), -2i64..4), 1..4).prop_map(|ts| {
            ts.into_iter().fold(EPoly::zero(), |acc, ((p, q), c)| {
                &acc + &EPoly::monomial(Rational64::from_integer(p), Rational64::from_integer(q), c)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn exponential_is_multiplicative(a in small_class(), b in small_class()) {
            let za = sym_powers(&a, 6).unwrap();
            let zb = sym_powers(&b, 6).unwrap();
            let zab = sym_powers(&(&a + &b), 6).unwrap();
            for n in 0..=6 {
                let mut c = EPoly::zero();
                for i in 0..=n {
                    c = &c + &(&za[i] * &zb[n - i]);
                }
                prop_assert_eq!(&c, &zab[n]);
            }
        }

        #[test]
        fn euler_specialization(a in small_class()) {
            // (1 - T)^{-χ}: coefficient C(χ + n - 1, n), computed by recurrence.
            let chi = a.euler();
            let z = sym_powers(&a, 8).unwrap();
            let mut binom = BigInt::one();
            for (n, zn) in z.iter().enumerate() {
                prop_assert_eq!(zn.euler(), binom.clone());
                binom = binom * (&chi + BigInt::from(n)) / BigInt::from(n + 1);
            }
        }
    }
}
