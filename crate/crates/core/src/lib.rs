//! Exact construction and verification of monic weak orthogonal polynomial
//! systems in several variables, their three-term recurrences, and the
//! structure relations of semiclassical moment functionals.

pub mod config;
pub mod error;
pub mod exec;
pub mod functionals;
pub mod linalg;
pub mod mpoly;
pub mod pearson;
pub mod recurrence;
pub mod report;
pub mod semiclassical;
pub mod serial;
pub mod wops;

pub use error::{Error, Result};
pub use exec::Execution;
pub use functionals::MomentFunctional;
pub use linalg::{RMatrix, Rational};
pub use mpoly::{MPoly, MultiIndex, PolyMatrix};
pub use pearson::PearsonPair;
pub use wops::WopsBasis;
