//! Exact truncated formal-series engine.

pub mod gseries;
pub mod laurent;
pub mod poly;
pub mod system;

pub use gseries::GSeries;
pub use laurent::{Proj, ZLaurent};
pub use poly::{int, rat, AuxPoly, Monomial, Var};
pub use system::{Expr, Solution, System};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series is not invertible: {0}")]
    NonInvertible(String),
    #[error("system is not contractive: unknown {0} depends on itself without a grading shift")]
    NotContractive(String),
    #[error("no convergence after {0} sweeps")]
    NoConvergence(usize),
    #[error("unknown {0} has no defining equation")]
    Undefined(String),
    #[error("back-substitution failed for {0}")]
    Verification(String),
    #[error("inexact division: {0}")]
    NonDivisible(String),
    #[error("parse error: {0}")]
    Parse(String),
}
