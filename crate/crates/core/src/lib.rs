//! Exact-arithmetic engines for motivic zeta functions of singularities.
//!
//! Classes in the Grothendieck ring are handled through their
//! Hodge–Deligne polynomials ([`EPoly`]); classes carrying a monodromy
//! action are graded by characters in ℚ/ℤ ([`EqClass`]). Resolution
//! combinatorics are user-supplied ([`ResolutionData`]) and every engine
//! works with exact integers and rationals only.

pub mod cli;
pub mod convolution;
pub mod error;
pub mod exactring;
pub mod grothendieck;
pub mod kapranov;
pub mod mckay;
pub mod output;
pub mod resolution;
pub mod zeta;

pub use error::{Error, Result};
pub use exactring::{EPoly, Factor, MotivicRational, SRational, Series, UniPoly};
pub use grothendieck::{Character, EqClass, FracHodge};
pub use resolution::ResolutionData;
