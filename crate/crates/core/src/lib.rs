//! Exact census of tight contact structures on the small Seifert fibered
//! spaces `M(-1; r1, r2, r3)` with `r1 >= r2 >= 1/2`, and the invariants used
//! to bound it from both sides.

pub mod census;
pub mod cfrac;
pub mod error;
pub mod farey;
pub mod format;
pub mod lattice;
pub mod linalg;
pub mod orbits;
pub mod rational;
pub mod seifert;
pub mod spinc;
pub mod verify;
mod serde_big;

pub use error::{Error, Result};
pub use rational::Rational;
