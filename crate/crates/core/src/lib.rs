//! Exact computational workbench for operads colored by groupoids with
//! duality, and for counting admissible covers over small finite groups.
//!
//! Everything is exact: scalars are arbitrary-precision rationals, all
//! identities asserted by the checkers are literal equalities, and every
//! construction at desk scale is validated by brute force.

pub mod error;
pub mod linalg;
pub mod rational;
pub mod report;

pub mod enumerate;
pub mod graph;
pub mod group;
pub mod groupoid;
pub mod iso;
pub mod module;
pub mod colimit;
pub mod dw;
pub mod frobenius;
pub mod operad;
pub mod plethysm;
pub mod acceptance;
pub mod jsonio;

pub use error::{Error, Result};
pub use rational::Rat;
pub use report::Report;
