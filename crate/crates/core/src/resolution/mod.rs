//! Combinatorial data of an embedded resolution with simple normal
//! crossings: components with numerical data `(N_i, ν_i)` and the strata
//! `E_I°` with their classes, point counts and cover characters.

mod fixtures;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::{parse_rational, EPoly, UniPoly};
use crate::grothendieck::EqClass;

pub use fixtures::{builtin_fixture, fixture_names, Fixture};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    pub n: Vec<u32>,
    pub nu: Rational64,
    pub exceptional: bool,
}

/// The `μ_{N(I)}`-cover `Ẽ_I°` of a stratum, through its eigenpart classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub degree: u32,
    pub chars: EqClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub components: Vec<String>,
    pub epoly: EPoly,
    pub over_locus: bool,
    pub count: Option<UniPoly>,
    pub cover: Option<Cover>,
}

/// Which strata an operation consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Strata lying over the distinguished locus.
    Local,
    /// All strata.
    Global,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(Mode::Local),
            "global" => Ok(Mode::Global),
            _ => Err(Error::Parse(format!("unknown mode \"{s}\""))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    pub r: usize,
    pub dim: u32,
    pub components: Vec<Component>,
    pub strata: Vec<Stratum>,
}

/// A stratum with its component indices resolved.
#[derive(Clone, Debug)]
pub struct StratumView<'a> {
    pub stratum: &'a Stratum,
    pub comps: Vec<&'a Component>,
}

impl StratumView<'_> {
    pub fn size(&self) -> usize {
        self.comps.len()
    }

    /// `N(I)`: gcd of the first-variable multiplicities, 0 for `I = ∅`.
    pub fn n_of(&self) -> u32 {
        self.comps.iter().fold(0u32, |g, c| g.gcd(&c.n[0]))
    }
}

#[derive(Serialize, Deserialize)]
struct RawDoc {
    r: usize,
    dim: u32,
    components: Vec<RawComponent>,
    strata: Vec<RawStratum>,
}

#[derive(Serialize, Deserialize)]
struct RawComponent {
    id: String,
    #[serde(rename = "N")]
    n: Vec<u32>,
    nu: RawRational,
    exceptional: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct RawStratum {
    components: Vec<String>,
    epoly: String,
    over_locus: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cover: Option<RawCover>,
}

#[derive(Serialize, Deserialize)]
struct RawCover {
    degree: u32,
    chars: BTreeMap<String, String>,
}

fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{path}: {m}")),
        other => other,
    })
}

impl ResolutionData {
    /// Parses a JSON document. Missing or mistyped fields give
    /// `SchemaError` with the line and column; bad polynomials give
    /// `ParseError` with the field path.
    pub fn from_json(src: &str) -> Result<Self> {
        let raw: RawDoc = serde_json::from_str(src).map_err(|e| Error::Schema(e.to_string()))?;
        let mut components = Vec::new();
        for (i, c) in raw.components.iter().enumerate() {
            let nu = match &c.nu {
                RawRational::Int(k) => Rational64::from_integer(*k),
                RawRational::Text(s) => at(&format!("components[{i}].nu"), parse_rational(s))?,
            };
            components.push(Component {
                id: c.id.clone(),
                n: c.n.clone(),
                nu,
                exceptional: c.exceptional,
            });
        }
        let mut strata = Vec::new();
        for (i, s) in raw.strata.iter().enumerate() {
            let path = format!("strata[{i}]");
            let epoly = at(&format!("{path}.epoly"), EPoly::parse(&s.epoly))?;
            let count = match &s.count {
                Some(c) => Some(at(&format!("{path}.count"), UniPoly::parse(c, 'q'))?),
                None => None,
            };
            let cover = match &s.cover {
                Some(c) => Some(Cover {
                    degree: c.degree,
                    chars: at(
                        &format!("{path}.cover.chars"),
                        EqClass::parse_map(c.chars.iter().map(|(k, v)| (k.as_str(), v.as_str()))),
                    )?,
                }),
                None => None,
            };
            strata.push(Stratum {
                components: s.components.clone(),
                epoly,
                over_locus: s.over_locus,
                count,
                cover,
            });
        }
        Ok(ResolutionData {
            r: raw.r,
            dim: raw.dim,
            components,
            strata,
        })
    }

    fn to_raw(&self) -> RawDoc {
        RawDoc {
            r: self.r,
            dim: self.dim,
            components: self
                .components
                .iter()
                .map(|c| RawComponent {
                    id: c.id.clone(),
                    n: c.n.clone(),
                    nu: RawRational::Text(c.nu.to_string()),
                    exceptional: c.exceptional,
                })
                .collect(),
            strata: self
                .strata
                .iter()
                .map(|s| RawStratum {
                    components: s.components.clone(),
                    epoly: s.epoly.to_string(),
                    over_locus: s.over_locus,
                    count: s.count.as_ref().map(|c| c.to_string()),
                    cover: s.cover.as_ref().map(|c| RawCover {
                        degree: c.degree,
                        chars: c
                            .chars
                            .parts()
                            .iter()
                            .map(|(k, v)| (k.to_string(), v.to_string()))
                            .collect(),
                    }),
                })
                .collect(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_raw()).expect("serializable")
    }

    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    /// Strata consumed in the given mode, with components resolved.
    pub fn strata_in(&self, mode: Mode) -> Result<Vec<StratumView<'_>>> {
        let mut out = Vec::new();
        for s in &self.strata {
            if mode == Mode::Local && !s.over_locus {
                continue;
            }
            let comps = s
                .components
                .iter()
                .map(|id| {
                    self.component(id)
                        .ok_or_else(|| Error::MissingStratum(format!("unknown component \"{id}\"")))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(StratumView { stratum: s, comps });
        }
        if out.is_empty() {
            return Err(Error::MissingStratum(format!(
                "no strata available in {mode:?} mode"
            )));
        }
        Ok(out)
    }

    /// Checks every structural invariant; returns the warnings about
    /// missing optional payloads on success.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut errs = Vec::new();
        let mut warns = Vec::new();
        if self.r == 0 {
            errs.push("r must be at least 1".to_string());
        }
        let mut ids = BTreeSet::new();
        for c in &self.components {
            if !ids.insert(c.id.as_str()) {
                errs.push(format!("duplicate component id \"{}\"", c.id));
            }
            if c.n.len() != self.r {
                errs.push(format!(
                    "component \"{}\" has {} multiplicities, expected r = {}",
                    c.id,
                    c.n.len(),
                    self.r
                ));
            }
            if !c.nu.is_positive() {
                errs.push(format!("component \"{}\" has non-positive nu {}", c.id, c.nu));
            }
        }
        let mut seen = BTreeSet::new();
        let mut missing_cover = false;
        let mut missing_count = false;
        for (i, s) in self.strata.iter().enumerate() {
            let set: BTreeSet<&str> = s.components.iter().map(String::as_str).collect();
            if set.len() != s.components.len() {
                errs.push(format!("strata[{i}] repeats a component"));
            }
            for id in &set {
                if !ids.contains(id) {
                    errs.push(format!("strata[{i}] names unknown component \"{id}\""));
                }
            }
            if !seen.insert(set.clone()) {
                errs.push(format!("strata[{i}] repeats the component set {:?}", set));
            }
            if let Some(cnt) = &s.count {
                if let Ok(expected) = s.epoly.count() {
                    if &expected != cnt {
                        errs.push(format!(
                            "strata[{i}] count {cnt} disagrees with its class {}",
                            s.epoly
                        ));
                    }
                }
            } else {
                missing_count = true;
            }
            let n_i = s
                .components
                .iter()
                .filter_map(|id| self.component(id))
                .filter_map(|c| c.n.first().copied())
                .fold(0u32, |g, n| g.gcd(&n));
            match &s.cover {
                Some(cov) => {
                    if set.is_empty() {
                        errs.push(format!("strata[{i}]: the open stratum carries no cover"));
                        continue;
                    }
                    if cov.degree != n_i {
                        errs.push(format!(
                            "strata[{i}] cover degree {} differs from N(I) = {n_i}",
                            cov.degree
                        ));
                    }
                    if cov.chars.augmentation() != s.epoly {
                        errs.push(format!(
                            "strata[{i}] cover augmentation {} differs from the stratum class {}",
                            cov.chars.augmentation(),
                            s.epoly
                        ));
                    }
                    if cov.degree > 0 && !cov.chars.orders_divide(cov.degree as i64) {
                        errs.push(format!(
                            "strata[{i}] cover has characters of order not dividing {}",
                            cov.degree
                        ));
                    }
                    let lhs = cov.chars.underlying().euler();
                    let rhs = s.epoly.euler() * cov.degree;
                    if lhs != rhs {
                        errs.push(format!(
                            "strata[{i}] cover Euler characteristic {lhs} differs from N(I)·χ = {rhs}"
                        ));
                    }
                }
                None => {
                    if s.over_locus && !set.is_empty() {
                        missing_cover = true;
                    }
                }
            }
        }
        if self.strata.is_empty() {
            errs.push("no strata".to_string());
        }
        if !errs.is_empty() {
            return Err(Error::Validation(errs));
        }
        if missing_cover {
            warns.push(
                "some over-locus strata lack covers: zeta, nearby, vanishing, spectrum unavailable"
                    .to_string(),
            );
        }
        if missing_count {
            warns.push("some strata lack point counts: igusa unavailable".to_string());
        }
        Ok(warns)
    }

    /// Requires integral `ν` and nonzero first multiplicities on the given
    /// strata, as zeta-function operations do.
    pub fn require_zeta_data(&self, views: &[StratumView<'_>]) -> Result<()> {
        for v in views {
            for c in &v.comps {
                if !c.nu.is_integer() {
                    return Err(Error::Unsupported(format!(
                        "component \"{}\" has rational nu {}; zeta functions need integers",
                        c.id, c.nu
                    )));
                }
                if c.n.iter().all(|x| *x == 0) {
                    return Err(Error::Unsupported(format!(
                        "component \"{}\" has N = 0",
                        c.id
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ResolutionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xn_fixture_contents() {
        let r = builtin_fixture("xN(3)").unwrap().data;
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].n, vec![3]);
        assert_eq!(r.components[0].nu, Rational64::from_integer(1));
        let empty = r.strata.iter().find(|s| s.components.is_empty()).unwrap();
        assert_eq!(empty.epoly, EPoly::parse("L - 1").unwrap());
        let e = r.strata.iter().find(|s| s.components.len() == 1).unwrap();
        assert_eq!(e.epoly, EPoly::one());
        assert_eq!(e.cover.as_ref().unwrap().chars, EqClass::regular(3));
    }

    #[test]
    fn unreduced_character_is_a_parse_error() {
        let doc = r#"{"r":1,"dim":1,"components":[{"id":"E","N":[3],"nu":"1","exceptional":false}],
          "strata":[{"components":["E"],"epoly":"1","over_locus":true,
                     "cover":{"degree":3,"chars":{"0":"1","3/6":"1"}}}]}"#;
        let e = ResolutionData::from_json(doc).unwrap_err();
        assert!(matches!(e, Error::Parse(ref m) if m.contains("strata[0].cover.chars")), "{e}");
    }

    #[test]
    fn missing_field_is_a_schema_error() {
        let e = ResolutionData::from_json(r#"{"r":1,"components":[],"strata":[]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema(_)));
    }

    #[test]
    fn round_trip_is_identical() {
        for name in fixture_names() {
            let r = builtin_fixture(&name).unwrap().data;
            let back = ResolutionData::from_json(&r.to_json()).unwrap();
            assert_eq!(back, r, "{name}");
            assert_eq!(back.to_json(), r.to_json());
        }
    }

    #[test]
    fn all_fixtures_validate() {
        for name in fixture_names() {
            builtin_fixture(&name).unwrap().data.validate().unwrap();
        }
    }

    #[test]
    fn validation_failures() {
        let mut r = builtin_fixture("cuspA").unwrap().data;
        let s = r.strata.iter_mut().find(|s| s.components == ["E3"]).unwrap();
        s.cover.as_mut().unwrap().chars.add_part(
            crate::grothendieck::Character::trivial(),
            EPoly::one(),
        );
        assert!(matches!(r.validate(), Err(Error::Validation(_))));

        let mut r = builtin_fixture("cuspA").unwrap().data;
        let s = r.strata.iter_mut().find(|s| s.components == ["E1"]).unwrap();
        s.cover.as_mut().unwrap().degree = 3;
        let Err(Error::Validation(msgs)) = r.validate() else {
            panic!("expected a validation error")
        };
        assert!(msgs.iter().any(|m| m.contains("N(I) = 2")));
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(builtin_fixture("e8"), Err(Error::UnknownFixture(_))));
    }
}
