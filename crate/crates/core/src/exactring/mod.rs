//! Exact arithmetic: Hodge–Deligne polynomials, the rational-series ring
//! with controlled denominators, and rational functions of `s`.

mod epoly;
mod mrat;
pub mod parse;
mod srational;
mod unipoly;

pub use epoly::EPoly;
pub(crate) use epoly::owned_ops;
pub use mrat::{hadamard, integral_nu, Coefficient, Factor, MTerm, MotivicRational, Series};
pub use parse::{parse_character, parse_poly, parse_rational, Poly};
pub use srational::{QPoly, SRational};
pub use unipoly::UniPoly;

/// Serializes a map with non-string keys as a list of `[key, value]` pairs.
pub(crate) mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<K, V, S>(m: &BTreeMap<K, V>, s: S) -> Result<S::Ok, S::Error>
    where
        K: Serialize,
        V: Serialize,
        S: Serializer,
    {
        s.collect_seq(m.iter())
    }

    pub fn deserialize<'de, K, V, D>(d: D) -> Result<BTreeMap<K, V>, D::Error>
    where
        K: Deserialize<'de> + Ord,
        V: Deserialize<'de>,
        D: Deserializer<'de>,
    {
        Ok(Vec::<(K, V)>::deserialize(d)?.into_iter().collect())
    }
}
