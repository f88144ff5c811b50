//! Fisher-information toolkit for parameterized families of quantum states
//! and channels.
//!
//! The crate computes right-logarithmic-derivative (RLD) and symmetric-
//! logarithmic-derivative (SLD) Fisher information quantities at a parameter
//! point, evaluates the resulting single-letter Cramér–Rao bounds, and
//! cross-checks the closed-form channel RLD value against primal/dual
//! semidefinite programs solved by an embedded interior-point solver.
//!
//! Module map:
//!
//! - [`linalg`] — dense complex Hermitian primitives (Kronecker products,
//!   partial traces, support pseudo-inverse, kernel projector, spectral
//!   decomposition, PSD infinity norm).
//! - [`families`] — state/channel family points: a density or Choi operator
//!   together with its parameter derivatives, plus weight (risk) matrices.
//! - [`rld`] — RLD Fisher information matrices and values, with finiteness
//!   (support) checks for states and channels.
//! - [`sld`] — SLD operators, the Helstrom bound, and probe optimization.
//! - [`sdp`] — primal/dual semidefinite programs for the RLD value and the
//!   embedded small-scale solver.
//! - [`bounds`] — scalar Cramér–Rao bounds, Heisenberg-scaling verdicts,
//!   chain-rule / amortization slacks, and the sequential-protocol simulator.
//! - [`gadc`] — the generalized amplitude damping channel in closed form,
//!   and the two-parameter loss/noise sweep.
//! - [`random`] — seed-controlled generators for randomized certification.
//! - [`suites`] — the named verification suites driven by the CLI.
//! - [`files`] — matrix and family-point file formats shared with the CLI.

pub mod bounds;
pub mod error;
pub mod families;
pub mod files;
pub mod gadc;
pub mod linalg;
pub mod random;
pub mod rld;
pub mod sdp;
pub mod sld;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Spectrum, C64, DEFAULT_RANK_TOL};

/// A nonnegative quantity that may be flagged infinite (the "+∞ otherwise"
/// branch of the RLD definitions).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// Finite value, or `None` when flagged infinite.
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(*v),
            ExtendedReal::Infinite => None,
        }
    }

    /// Reciprocal with the extended conventions 1/∞ = 0 and 1/0 = ∞.
    pub fn recip(&self) -> ExtendedReal {
        match self {
            ExtendedReal::Infinite => ExtendedReal::Finite(0.0),
            ExtendedReal::Finite(v) if *v == 0.0 => ExtendedReal::Infinite,
            ExtendedReal::Finite(v) => ExtendedReal::Finite(1.0 / v),
        }
    }
}

impl std::fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinite => write!(f, "inf"),
        }
    }
}
