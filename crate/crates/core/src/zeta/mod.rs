//! Zeta functions and cycle classes computed from resolution data.

mod igusa;
mod monodromy;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::{Coefficient, EPoly, Factor, MTerm, MotivicRational, SRational};
use crate::grothendieck::EqClass;
use crate::resolution::{Mode, ResolutionData, StratumView};

pub use igusa::{igusa_zeta, IgusaZeta};
pub use monodromy::{acampo_lefschetz, monodromy_zeta, MonodromyZeta};

/// Rational series with equivariant numerator coefficients.
pub type EqMotivicRational = MotivicRational<EqClass>;

fn factors_of(view: &StratumView<'_>) -> Result<BTreeMap<Factor, u32>> {
    let mut fs = BTreeMap::new();
    for c in &view.comps {
        let nu = crate::exactring::integral_nu(c.nu, "a zeta function")?;
        if c.n.iter().all(|x| *x == 0) {
            return Err(Error::Unsupported(format!("component \"{}\" has N = 0", c.id)));
        }
        *fs.entry(Factor::new(nu, c.n.clone())).or_insert(0) += 1;
    }
    Ok(fs)
}

/// `Σ_I [E_I°] ∏_{i∈I} (L - 1)(L^{ν_i} T^{-N_i} - 1)^{-1}`: the generating
/// series of the motivic measures of the contact loci.
pub fn contact_series(res: &ResolutionData, mode: Mode) -> Result<MotivicRational<EPoly>> {
    let views = res.strata_in(mode)?;
    let l1 = EPoly::l_minus_one();
    let mut terms = Vec::new();
    for v in &views {
        let coeff = &v.stratum.epoly * &l1.pow(v.size() as u32);
        let mut numerator = BTreeMap::new();
        numerator.insert(vec![0; res.r], coeff);
        terms.push(MTerm {
            numerator,
            factors: factors_of(v)?,
        });
    }
    Ok(MotivicRational::from_terms(res.r, terms))
}

/// `Σ_I c_I ∏_{i∈I} a_i / (L^{ν_i} - 1)` computed over a common
/// denominator and cleared by verified exact division.
pub fn sum_with_l_denominators(items: &[(EPoly, Vec<Rational64>)]) -> Result<EPoly> {
    let mut common: BTreeMap<Rational64, u32> = BTreeMap::new();
    for (_, nus) in items {
        let mut here: BTreeMap<Rational64, u32> = BTreeMap::new();
        for nu in nus {
            *here.entry(*nu).or_insert(0) += 1;
        }
        for (nu, m) in here {
            let e = common.entry(nu).or_insert(0);
            *e = (*e).max(m);
        }
    }
    let den = |nu: &Rational64| &EPoly::l_pow(*nu) - &EPoly::one();
    let mut total = EPoly::zero();
    for (c, nus) in items {
        let mut here: BTreeMap<Rational64, u32> = BTreeMap::new();
        for nu in nus {
            *here.entry(*nu).or_insert(0) += 1;
        }
        let mut num = c.clone();
        for (nu, m) in &common {
            let have = here.get(nu).copied().unwrap_or(0);
            num = &num * &den(nu).pow(m - have);
        }
        total = &total + &num;
    }
    for (nu, m) in &common {
        for _ in 0..*m {
            total = total.div_exact_l_poly(&den(nu)).ok_or_else(|| {
                Error::NonDivisible(format!(
                    "sum over strata is not divisible by L^{nu} - 1; the input data is inconsistent"
                ))
            })?;
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// Sum over the locally closed strata `E_I°`.
    Open,
    /// Sum over the closed intersections `E_I`.
    Closed,
}

impl std::str::FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Form::Open),
            "closed" => Ok(Form::Closed),
            _ => Err(Error::Parse(format!("unknown form \"{s}\""))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pushforward {
    pub value: EPoly,
    /// `Σ_I χ(E_I°) ∏ 1/ν_i`.
    pub euler_value: String,
}

/// Direct image of the motivic measure: `Σ_I [E_I°] ∏ [P^{ν_i - 1}]^{-1}`,
/// or its rewriting in terms of the closed strata. `ν` may be rational.
pub fn measure_pushforward(res: &ResolutionData, mode: Mode, form: Form) -> Result<Pushforward> {
    let views = res.strata_in(mode)?;
    let l1 = EPoly::l_minus_one();
    let value = match form {
        Form::Open => {
            let items: Vec<(EPoly, Vec<Rational64>)> = views
                .iter()
                .map(|v| {
                    (
                        &v.stratum.epoly * &l1.pow(v.size() as u32),
                        v.comps.iter().map(|c| c.nu).collect(),
                    )
                })
                .collect();
            sum_with_l_denominators(&items)?
        }
        Form::Closed => {
            // [E_J] = Σ_{I ⊇ J} [E_I°], then
            // Σ_J [E_J] ∏_{j∈J} (-L)(L^{ν_j - 1} - 1)/(L^{ν_j} - 1).
            let sets: Vec<Vec<&str>> = views
                .iter()
                .map(|v| {
                    let mut ids: Vec<&str> = v.comps.iter().map(|c| c.id.as_str()).collect();
                    ids.sort();
                    ids
                })
                .collect();
            let mut items = Vec::new();
            for (j, v) in views.iter().enumerate() {
                let closed = sets
                    .iter()
                    .zip(&views)
                    .filter(|(s, _)| sets[j].iter().all(|id| s.contains(id)))
                    .fold(EPoly::zero(), |acc, (_, w)| &acc + &w.stratum.epoly);
                let mut c = closed;
                for comp in &v.comps {
                    let a = &EPoly::l_pow(comp.nu - Rational64::one()) - &EPoly::one();
                    c = &(&c * &a) * &(-EPoly::l_int(1));
                }
                items.push((c, v.comps.iter().map(|c| c.nu).collect()));
            }
            sum_with_l_denominators(&items)?
        }
    };
    Ok(Pushforward {
        value,
        euler_value: euler_value(res, mode)?.to_string(),
    })
}

/// `Σ_I χ(E_I°) ∏_{i∈I} 1/ν_i`.
pub fn euler_value(res: &ResolutionData, mode: Mode) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for v in res.strata_in(mode)? {
        let mut t = BigRational::from_integer(v.stratum.epoly.euler());
        for c in &v.comps {
            t /= BigRational::new((*c.nu.numer()).into(), (*c.nu.denom()).into());
        }
        acc += t;
    }
    Ok(acc)
}

fn require_r1(res: &ResolutionData, what: &str) -> Result<()> {
    if res.r != 1 {
        return Err(Error::Unsupported(format!(
            "{what} is only defined for a single function (r = 1)"
        )));
    }
    Ok(())
}

fn local_nonempty<'a>(res: &'a ResolutionData) -> Result<Vec<StratumView<'a>>> {
    Ok(res
        .strata_in(Mode::Local)?
        .into_iter()
        .filter(|v| v.size() > 0)
        .collect())
}

fn cover_of<'a>(v: &StratumView<'a>) -> Result<&'a EqClass> {
    v.stratum
        .cover
        .as_ref()
        .map(|c| &c.chars)
        .ok_or_else(|| {
            let ids: Vec<&str> = v.comps.iter().map(|c| c.id.as_str()).collect();
            Error::MissingCover(format!("stratum {ids:?} has no cover data"))
        })
}

/// Motivic nearby series `S(f) = Σ_{I≠∅} (L - 1)^{|I|-1} [Ẽ_I°] ∏ (L^{ν_i} T^{-N_i} - 1)^{-1}`
/// over the locus.
pub fn motivic_nearby(res: &ResolutionData) -> Result<EqMotivicRational> {
    require_r1(res, "the motivic nearby series")?;
    let l1 = EPoly::l_minus_one();
    let mut terms = Vec::new();
    for v in local_nonempty(res)? {
        let chars = cover_of(&v)?;
        let mut numerator = BTreeMap::new();
        numerator.insert(vec![0], chars.scale(&l1.pow(v.size() as u32 - 1)));
        terms.push(MTerm {
            numerator,
            factors: factors_of(&v)?,
        });
    }
    Ok(MotivicRational::from_terms(1, terms))
}

/// Nearby cycle class `ψ = -S(f)|_{T=∞}`.
pub fn nearby_class(res: &ResolutionData) -> Result<EqClass> {
    Ok(-&motivic_nearby(res)?.eval_infinity()?)
}

/// `Σ_{I≠∅} (1 - L)^{|I|-1} [Ẽ_I°]`, the closed form of `ψ`.
pub fn nearby_closed_form(res: &ResolutionData) -> Result<EqClass> {
    require_r1(res, "the nearby cycle class")?;
    let one_minus_l = -EPoly::l_minus_one();
    let mut acc = EqClass::zero();
    for v in local_nonempty(res)? {
        acc = &acc + &cover_of(&v)?.scale(&one_minus_l.pow(v.size() as u32 - 1));
    }
    Ok(acc)
}

/// Vanishing cycle class `φ = (-1)^{d-1} (ψ - 1)`: the reduced class, with
/// the sign making it the class of the reduced cohomology in middle degree.
pub fn vanishing_class(res: &ResolutionData) -> Result<EqClass> {
    let psi = nearby_class(res)?;
    let reduced = &psi - &EqClass::one();
    Ok(if res.dim % 2 == 1 { reduced } else { -&reduced })
}

/// `Tr_n[ψ] = Σ_{I≠∅, N(I) | n} (1 - L)^{|I|-1} [Ẽ_I°]`.
pub fn trace_class(res: &ResolutionData, n: u32) -> Result<EqClass> {
    require_r1(res, "the trace class")?;
    let one_minus_l = -EPoly::l_minus_one();
    let mut acc = EqClass::zero();
    for v in local_nonempty(res)? {
        let ni = v.n_of();
        if ni == 0 || n % ni != 0 {
            continue;
        }
        acc = &acc + &cover_of(&v)?.scale(&one_minus_l.pow(v.size() as u32 - 1));
    }
    Ok(acc)
}

/// Motivic (Denef–Loeser) zeta function `L^{-d} Σ_I [E_I°] ∏ (L - 1)/(L^{ν_i + sN_i} - 1)`,
/// written in the variable `T = L^{-s}`.
pub fn denef_loeser(res: &ResolutionData, mode: Mode) -> Result<MotivicRational<EPoly>> {
    require_r1(res, "the motivic zeta function")?;
    Ok(contact_series(res, mode)?.scaled(&EPoly::l_int(-(res.dim as i64))))
}

/// Specialization `L → 1` sending `(L - 1)/(L^{ν+sN} - 1)` to `1/(ν + sN)`
/// and classes to Euler characteristics.
pub fn topological_specialization(x: &MotivicRational<EPoly>) -> Result<SRational> {
    let l1 = EPoly::l_minus_one();
    let mut acc = SRational::zero();
    for t in &x.terms {
        let k: u32 = t.factors.values().sum();
        let denom = l1.pow(k);
        let mut chi = BigInt::zero();
        for c in t.numerator.values() {
            let q = c.div_exact_l_poly(&denom).ok_or_else(|| {
                Error::NonDivisible(format!("numerator {c} is not divisible by (L - 1)^{k}"))
            })?;
            chi += q.euler();
        }
        let mut term = SRational::constant(BigRational::from_integer(chi));
        for (f, m) in &t.factors {
            for _ in 0..*m {
                term = term.mul(&SRational::linear_recip(
                    Rational64::from_integer(f.nu),
                    f.n[0] as i64,
                )?);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Topological zeta function `Σ_I χ(E_I°) ∏ 1/(ν_i + sN_i)`.
pub fn topological_zeta(res: &ResolutionData, mode: Mode) -> Result<SRational> {
    require_r1(res, "the topological zeta function")?;
    let mut acc = SRational::zero();
    for v in res.strata_in(mode)? {
        let mut term =
            SRational::constant(BigRational::from_integer(v.stratum.epoly.euler()));
        for c in &v.comps {
            term = term.mul(&SRational::linear_recip(c.nu, c.n[0] as i64)?);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Coefficientwise mapping torus of an equivariant series.
pub fn mapping_torus_series(x: &EqMotivicRational) -> MotivicRational<EPoly> {
    x.map_coeffs(|c| c.mapping_torus())
}

/// Augmentation of an equivariant series, coefficientwise.
pub fn augmented(x: &EqMotivicRational) -> MotivicRational<EPoly> {
    x.map_coeffs(|c| c.augmentation())
}

/// Promotes a plain series to a trivially-acted equivariant one.
pub fn trivially_acted(x: &MotivicRational<EPoly>) -> EqMotivicRational {
    x.map_coeffs(|c| EqClass::from_epoly(c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::builtin_fixture;

    fn fx(name: &str) -> ResolutionData {
        builtin_fixture(name).unwrap().data
    }

    fn e(s: &str) -> EPoly {
        EPoly::parse(s).unwrap()
    }

    fn cls(items: &[(&str, &str)]) -> EqClass {
        EqClass::parse_map(items.iter().copied()).unwrap()
    }

    #[test]
    fn contact_series_examples() {
        let s = contact_series(&fx("xN(1)"), Mode::Global).unwrap().expand(6);
        assert_eq!(s.get(0), e("L - 1"));
        for n in 1..=6 {
            assert_eq!(s.get(n), &e("L - 1") * &EPoly::l_int(-(n as i64)));
        }
        let s = contact_series(&fx("xN(2)"), Mode::Global).unwrap().expand(8);
        for m in 1..=4 {
            assert_eq!(s.get(2 * m), &e("L - 1") * &EPoly::l_int(-(m as i64)));
            assert!(s.get(2 * m - 1).is_zero());
        }
        let s = contact_series(&fx("xy_pair"), Mode::Global).unwrap().expand(6);
        for a in 1..=3u32 {
            for b in 1..=3u32 {
                assert_eq!(
                    s.coeff(&[a, b]),
                    &e("(L - 1)^2") * &EPoly::l_int(-((a + b) as i64))
                );
            }
        }
    }

    #[test]
    fn pushforward_examples() {
        let p = measure_pushforward(&fx("xN(3)"), Mode::Global, Form::Open).unwrap();
        assert_eq!(p.value, e("L"));
        for name in ["cuspA", "cuspB", "node", "x_plus_y"] {
            for form in [Form::Open, Form::Closed] {
                let p = measure_pushforward(&fx(name), Mode::Global, form).unwrap();
                assert_eq!(p.value, e("L^2"), "{name} {form:?}");
            }
        }
        let ev = euler_value(&fx("cuspA"), Mode::Local).unwrap();
        assert_eq!(ev, BigRational::one());
    }

    #[test]
    fn nearby_of_powers() {
        for n in 1..=5 {
            let r = fx(&format!("xN({n})"));
            let s = motivic_nearby(&r).unwrap().expand(3 * n);
            for m in 1..=3 {
                assert_eq!(
                    s.get(n * m),
                    EqClass::regular(n as i64).scale(&EPoly::l_int(-(m as i64)))
                );
            }
            assert_eq!(nearby_class(&r).unwrap(), EqClass::regular(n as i64));
        }
        assert_eq!(vanishing_class(&fx("xN(2)")).unwrap(), cls(&[("1/2", "1")]));
    }

    #[test]
    fn cusp_cycle_classes() {
        let r = fx("cuspA");
        let psi = nearby_class(&r).unwrap();
        assert_eq!(psi, cls(&[("0", "1"), ("1/6", "-u"), ("5/6", "-v")]));
        assert_eq!(psi, nearby_closed_form(&r).unwrap());
        assert_eq!(psi.underlying().euler(), BigInt::from(-1));
        let phi = vanishing_class(&r).unwrap();
        assert_eq!(phi, cls(&[("1/6", "u"), ("5/6", "v")]));
        assert_eq!(phi.spe().spectrum_poly().to_string(), "t^(5/6) + t^(7/6)");
        assert_eq!(vanishing_class(&fx("node")).unwrap(), cls(&[("0", "L")]));
    }

    #[test]
    fn resolution_independence() {
        let (a, b) = (fx("cuspA"), fx("cuspB"));
        assert_eq!(motivic_nearby(&a).unwrap(), motivic_nearby(&b).unwrap());
        assert_eq!(nearby_class(&a).unwrap(), nearby_class(&b).unwrap());
        for mode in [Mode::Local, Mode::Global] {
            assert_eq!(
                topological_zeta(&a, mode).unwrap(),
                topological_zeta(&b, mode).unwrap()
            );
            assert_eq!(contact_series(&a, mode).unwrap(), contact_series(&b, mode).unwrap());
        }
    }

    #[test]
    fn orbit_space_consistency() {
        // The mapping torus of S(f) equals the contact series over the locus.
        for name in ["xN(2)", "cuspA", "node"] {
            let r = fx(name);
            let s = motivic_nearby(&r).unwrap();
            let mut contact = contact_series(&r, Mode::Local).unwrap();
            contact.terms.retain(|t| !t.factors.is_empty());
            assert_eq!(mapping_torus_series(&s), contact, "{name}");
            let psi = nearby_class(&r).unwrap();
            assert_eq!(psi.mapping_torus(), -&contact.eval_infinity().unwrap(), "{name}");
        }
    }

    #[test]
    fn topological_examples() {
        assert_eq!(topological_zeta(&fx("xN(3)"), Mode::Local).unwrap().to_string(), "1/(1+3s)");
        assert_eq!(topological_zeta(&fx("xN(1)"), Mode::Global).unwrap().to_string(), "1/(1+s)");
        let z = topological_zeta(&fx("cuspA"), Mode::Local).unwrap();
        assert_eq!(z.to_string(), "(5+4s)/((1+s)(5+6s))");
        assert_eq!(z.eval(&BigRational::zero()).unwrap(), BigRational::one());
    }

    #[test]
    fn denef_loeser_specializes_to_topological() {
        let i = denef_loeser(&fx("xN(1)"), Mode::Global).unwrap();
        let expected = MotivicRational::constant(1, e("L - 1"))
            .plus(&MotivicRational::factor(e("L - 1"), Factor::single(1, 1)))
            .scaled(&EPoly::l_int(-1));
        assert_eq!(i, expected);
        for name in ["cuspA", "cuspB", "node", "xN(4)"] {
            for mode in [Mode::Local, Mode::Global] {
                let r = fx(name);
                assert_eq!(
                    topological_specialization(&denef_loeser(&r, mode).unwrap()).unwrap(),
                    topological_zeta(&r, mode).unwrap(),
                    "{name}"
                );
            }
        }
    }

    #[test]
    fn acampo_congruence() {
        for name in ["cuspA", "cuspB", "node", "xN(3)"] {
            let r = fx(name);
            let s = motivic_nearby(&r).unwrap().expand(24);
            for n in 1..=24 {
                assert_eq!(
                    s.get(n).mod_l_minus_one(),
                    trace_class(&r, n).unwrap().mod_l_minus_one(),
                    "{name} n={n}"
                );
            }
        }
    }
}
