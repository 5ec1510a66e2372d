//! Equivariant measures on arcs of the line, seen through their zeta
//! functions `λ(T) = Σ λ_n T^n`, and their convolution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::{hadamard, EPoly, Factor, MotivicRational, Series};
use crate::grothendieck::EqClass;
use crate::resolution::ResolutionData;
use crate::zeta::{augmented, motivic_nearby, EqMotivicRational};

/// Orders up to which the character constraint on `λ_n` is checked.
const CHECK_ORDER: u32 = 24;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureZeta {
    pub series: EqMotivicRational,
    #[serde(default)]
    pub provenance: String,
}

impl MeasureZeta {
    /// Wraps a one-variable series, checking that the characters of `λ_n`
    /// have order dividing `n`.
    pub fn new(series: EqMotivicRational, provenance: impl Into<String>) -> Result<Self> {
        if series.r != 1 {
            return Err(Error::Unsupported("measures live on arcs of the line (r = 1)".into()));
        }
        let s = series.expand(CHECK_ORDER);
        let mut bad = Vec::new();
        for n in 0..=CHECK_ORDER {
            let c = s.get(n);
            if !c.is_zero() && (n == 0 || !c.orders_divide(n as i64)) {
                bad.push(format!("coefficient {n} = {c} has characters of order not dividing {n}"));
            }
        }
        if !bad.is_empty() {
            return Err(Error::Validation(bad));
        }
        Ok(MeasureZeta {
            series,
            provenance: provenance.into(),
        })
    }

    /// The motivic nearby series over the locus, as a measure.
    pub fn from_nearby(res: &ResolutionData, name: &str) -> Result<Self> {
        Self::new(motivic_nearby(res)?, format!("S({name}) over the locus"))
    }

    pub fn coefficients(&self, order: u32) -> Vec<EqClass> {
        let s = self.series.expand(order);
        (0..=order).map(|n| s.get(n)).collect()
    }
}

/// `(L - 1)·Σ aug(λ_n)`, the value at `T = 1` of the augmented series.
pub fn mass(m: &MeasureZeta) -> Result<EPoly> {
    augmented(&m.series).eval_one(&EPoly::l_minus_one())
}

fn partial_aug_sums(c: &[EqClass]) -> Vec<EPoly> {
    let mut acc = EPoly::zero();
    c.iter()
        .map(|x| {
            acc = &acc + &x.augmentation();
            acc.clone()
        })
        .collect()
}

/// Coefficients `(λ*λ′)_n` for `n ≤ order`:
///
/// `-(λ_n*λ′_n) + (L-1)Σ_{i≤n} L^{i-n} aug(λ_iλ′_i) + (L-1)Σ_{i>n} (λ_n aug λ′_i + aug λ_i λ′_n)`.
///
/// The tails are `mass - (L-1)·(partial sum)`.
pub fn convolve(a: &MeasureZeta, b: &MeasureZeta, order: u32) -> Result<Series<EqClass>> {
    let (ma, mb) = (mass(a)?, mass(b)?);
    let ca = a.coefficients(order);
    let cb = b.coefficients(order);
    let (pa, pb) = (partial_aug_sums(&ca), partial_aug_sums(&cb));
    let l1 = EPoly::l_minus_one();
    let coeffs: Vec<EqClass> = (0..=order as usize)
        .into_par_iter()
        .map(|n| {
            let mut head = EPoly::zero();
            for i in 0..=n {
                let x = (&ca[i] * &cb[i]).augmentation();
                head = &head + &(&x * &EPoly::l_int(i as i64 - n as i64));
            }
            let tail_b = &mb - &(&l1 * &pb[n]);
            let tail_a = &ma - &(&l1 * &pa[n]);
            let mut c = -&ca[n].quasi_convolution(&cb[n]);
            c = &c + &EqClass::trivial(&l1 * &head);
            c = &c + &ca[n].scale(&tail_b);
            &c + &cb[n].scale(&tail_a)
        })
        .collect();
    let mut out = Series::zero(1, order);
    for (n, c) in coeffs.into_iter().enumerate() {
        out.add(vec![n as u32], c);
    }
    Ok(out)
}

/// Convolution of two massless measures as a rational function, assembled
/// from Hadamard products.
pub fn convolve_rational(a: &MeasureZeta, b: &MeasureZeta, order: u32) -> Result<EqMotivicRational> {
    for (m, which) in [(a, "first"), (b, "second")] {
        let x = mass(m)?;
        if !x.is_zero() {
            return Err(Error::NotMassless(format!("the {which} measure has mass {x}")));
        }
    }
    let l1 = EPoly::l_minus_one();
    let (sa, sb) = (&a.series, &b.series);
    // Σ_{i≤n} L^{i-n} x_i is x(T)/(1 - L^{-1}T); Σ_{i≤n} x_i is x(T)/(1 - T).
    let geometric = |nu: i64| {
        MotivicRational::constant(1, EPoly::one())
            .plus(&MotivicRational::factor(EPoly::one(), Factor::single(nu, 1)))
    };
    let star = hadamard(sa, sb, order, |x: &EqClass, y: &EqClass| x.quasi_convolution(y))?;
    let aug_prod = hadamard(sa, sb, order, |x: &EqClass, y: &EqClass| (x * y).augmentation())?;
    let head = aug_prod.times(&geometric(1)).scaled(&l1);
    let part_a = augmented(sa).times(&geometric(0));
    let part_b = augmented(sb).times(&geometric(0));
    let cross_a = hadamard(sa, &part_b, order, |x: &EqClass, p: &EPoly| x.scale(p))?;
    let cross_b = hadamard(sb, &part_a, order, |x: &EqClass, p: &EPoly| x.scale(p))?;
    let trivial = |x: &MotivicRational<EPoly>| x.map_coeffs(|c| EqClass::trivial(c.clone()));
    Ok(star
        .negated()
        .plus(&trivial(&head))
        .minus(&cross_a.plus(&cross_b).scaled(&l1)))
}

/// Abstract Thom–Sebastiani: for massless measures regular at infinity,
/// `(λ*λ′)(∞) = λ(∞) * λ′(∞)`. Returns the right side after checking it
/// against the reconstructed convolution.
pub fn ts_infinity(a: &MeasureZeta, b: &MeasureZeta) -> Result<EqClass> {
    const ORDER: u32 = 16;
    for (m, which) in [(a, "first"), (b, "second")] {
        let x = mass(m)?;
        if !x.is_zero() {
            return Err(Error::NotMassless(format!("the {which} measure has mass {x}")));
        }
    }
    let value = a.series.eval_infinity()?.quasi_convolution(&b.series.eval_infinity()?);
    let rational = convolve_rational(a, b, ORDER)?;
    let expanded = rational.expand(ORDER);
    let direct = convolve(a, b, ORDER)?;
    if let Some(n) = (0..=ORDER).find(|&n| expanded.get(n) != direct.get(n)) {
        return Err(Error::ReconstructionFailed(format!(
            "reconstructed convolution differs from the coefficientwise one at T^{n}"
        )));
    }
    let at_infinity = rational.eval_infinity()?;
    if at_infinity != value {
        return Err(Error::ReconstructionFailed(format!(
            "convolution has value {at_infinity} at infinity, expected {value}"
        )));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::builtin_fixture;

    fn nearby(name: &str) -> MeasureZeta {
        MeasureZeta::from_nearby(&builtin_fixture(name).unwrap().data, name).unwrap()
    }

    fn synthetic(items: &[(&str, &str)], n: u32) -> MeasureZeta {
        let c = EqClass::parse_map(items.iter().copied()).unwrap();
        MeasureZeta::new(MotivicRational::factor(c, Factor::single(1, n)), "synthetic").unwrap()
    }

    #[test]
    fn masses() {
        assert_eq!(mass(&nearby("xN(1)")).unwrap(), EPoly::one());
        assert_eq!(mass(&nearby("xN(2)")).unwrap(), EPoly::one());
        assert!(mass(&synthetic(&[("1/2", "1")], 2)).unwrap().is_zero());
    }

    #[test]
    fn smooth_points_convolve_to_a_smooth_point() {
        let x = nearby("xN(1)");
        let c = convolve(&x, &x, 8).unwrap();
        let expected = nearby("x_plus_y").series.expand(8);
        for n in 0..=8 {
            assert_eq!(c.get(n), expected.get(n), "n = {n}");
        }
    }

    #[test]
    fn squares_convolve_to_the_node() {
        let x2 = nearby("xN(2)");
        let c = convolve(&x2, &x2, 8).unwrap();
        let node = nearby("node").series.expand(8);
        for n in 0..=8 {
            assert_eq!(c.get(n), node.get(n), "n = {n}");
        }
    }

    #[test]
    fn commutative_and_stable_under_truncation() {
        let (a, b) = (nearby("xN(2)"), nearby("cuspA"));
        let ab = convolve(&a, &b, 10).unwrap();
        assert_eq!(ab, convolve(&b, &a, 10).unwrap());
        let longer = convolve(&a, &b, 14).unwrap();
        for n in 0..=10 {
            assert_eq!(ab.get(n), longer.get(n));
        }
    }

    #[test]
    fn thom_sebastiani_at_infinity() {
        let half = synthetic(&[("1/2", "1")], 2);
        let thirds = synthetic(&[("1/3", "1"), ("2/3", "1")], 3);
        let uv = EqClass::parse_map([("0", "u v")]).unwrap();
        assert_eq!(ts_infinity(&half, &half).unwrap(), uv);
        let mixed = EqClass::parse_map([("1/6", "u"), ("5/6", "v")]).unwrap();
        assert_eq!(ts_infinity(&half, &thirds).unwrap(), mixed);
    }

    #[test]
    fn massive_measure_rejected() {
        let half = synthetic(&[("1/2", "1")], 2);
        assert!(matches!(ts_infinity(&nearby("xN(2)"), &half), Err(Error::NotMassless(_))));
    }

    #[test]
    fn character_constraint() {
        let c = EqClass::parse_map([("1/3", "1")]).unwrap();
        let bad = MotivicRational::factor(c, Factor::single(1, 2));
        assert!(matches!(MeasureZeta::new(bad, "bad"), Err(Error::Validation(_))));
    }
}
