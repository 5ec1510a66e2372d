//! Both sides of the McKay correspondence for finite abelian groups acting
//! diagonally on affine space: the orbifold weight `W` graded by ages, and
//! the stringy invariant of a crepant-or-not resolution.
//!
//! Ages are taken of `g` as listed. Since `g ↦ g⁻¹` permutes the group,
//! the weight computed with the ages of inverses is the same polynomial.

use std::collections::{BTreeSet, VecDeque};

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::EPoly;
use crate::resolution::{Mode, ResolutionData};
use crate::zeta::{measure_pushforward, Form};

/// A finite abelian group acting by `diag(ζ_m^{a_1}, …, ζ_m^{a_d})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianAction {
    pub m: u32,
    pub dim: u32,
    pub generators: Vec<Vec<i64>>,
}

impl AbelianAction {
    pub fn new(m: u32, dim: u32, generators: Vec<Vec<i64>>) -> Result<Self> {
        let a = AbelianAction { m, dim, generators };
        a.validate()?;
        Ok(a)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let a: AbelianAction =
            serde_json::from_str(src).map_err(|e| Error::Schema(e.to_string()))?;
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.m == 0 {
            errs.push("m must be positive".to_string());
        }
        if self.dim == 0 {
            errs.push("dim must be positive".to_string());
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.dim as usize {
                errs.push(format!(
                    "generators[{i}] has {} entries, expected {}",
                    g.len(),
                    self.dim
                ));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    fn reduce(&self, g: &[i64]) -> Vec<i64> {
        g.iter().map(|x| x.rem_euclid(self.m as i64)).collect()
    }

    /// All group elements, as exponent vectors in `[0, m)`, sorted.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let zero = vec![0; self.dim as usize];
        let gens: Vec<Vec<i64>> = self.generators.iter().map(|g| self.reduce(g)).collect();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue = VecDeque::from([zero.clone()]);
        seen.insert(zero);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y: Vec<i64> = self.reduce(&x.iter().zip(g).map(|(a, b)| a + b).collect::<Vec<_>>());
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// `Σ_j ã_j / m` with `ã_j ∈ [0, m)`.
pub fn age(g: &[i64], m: u32) -> Rational64 {
    let m = m as i64;
    g.iter()
        .map(|a| Rational64::new(a.rem_euclid(m), m))
        .fold(Rational64::zero(), |s, x| s + x)
}

/// `W = Σ_g L^{fix(g) + age(g)}`, with `fix(g)` the dimension of the fixed space.
pub fn orbifold_weight(action: &AbelianAction) -> EPoly {
    let mut w = EPoly::zero();
    for g in action.elements() {
        let fix = g.iter().filter(|a| **a == 0).count() as i64;
        w = &w + &EPoly::l_pow(Rational64::from_integer(fix) + age(&g, action.m));
    }
    w
}

/// `Σ_I [E_I°] ∏ (L - 1)/(L^{ν*_i} - 1)` over all strata; `ν*` may be
/// fractional.
pub fn stringy_invariant(res: &ResolutionData) -> Result<EPoly> {
    Ok(measure_pushforward(res, Mode::Global, Form::Open)?.value)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayReport {
    pub equal: bool,
    /// Orbifold side minus resolution side.
    pub difference: EPoly,
    pub orbifold: EPoly,
    pub stringy: EPoly,
}

pub fn mckay_compare(action: &AbelianAction, res: &ResolutionData) -> Result<McKayReport> {
    action.validate()?;
    if action.dim != res.dim {
        return Err(Error::Validation(vec![format!(
            "group acts in dimension {} but the resolution has dimension {}",
            action.dim, res.dim
        )]));
    }
    let orbifold = orbifold_weight(action);
    let stringy = stringy_invariant(res)?;
    let difference = &orbifold - &stringy;
    Ok(McKayReport {
        equal: difference.is_zero(),
        difference,
        orbifold,
        stringy,
    })
}
