//! Numerical machinery for skewed (double-sided) fractional
//! diffusion-advection-reaction boundary-value problems on a bounded
//! interval.
//!
//! The crate is organized around the constructive objects such problems are
//! built from:
//!
//! * [`specfun`] — Gamma, Pochhammer and the Gauss hypergeometric function
//!   with the transformations the closed forms rely on.
//! * [`fraccalc`] — left/right Riemann-Liouville fractional integrals and
//!   derivatives: exact closed forms on power-weighted monomials and
//!   quadrature-based evaluation for general functions.
//! * [`abel`] — closed-form solutions of coupled Abel integral equations
//!   with constant coefficients.
//! * [`singular`] — Cauchy principal-value machinery and closed-form
//!   solutions of the dominant singular integral equation.
//! * [`solver`] — a weighted spectral Galerkin solver for the variational
//!   form of the skewed fractional diffusion-advection-reaction equation.
//! * [`analysis`] — boundary-exponent fitting, representation checks,
//!   the sharpness counterexample and endpoint classification.
//! * [`suites`] — seeded verification sweeps shared by the CLI and the
//!   acceptance tests.

pub mod abel;
pub mod analysis;
pub mod fraccalc;
pub mod linalg;
pub mod quad;
pub mod series;
pub mod singular;
pub mod solver;
pub mod specfun;
pub mod suites;

pub use fraccalc::{Interval, PowerWeightedFunction, Side};

/// Crate-wide error type; each module contributes its own variant.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
    #[error(transparent)]
    Quad(#[from] quad::QuadError),
    #[error(transparent)]
    FracCalc(#[from] fraccalc::FracCalcError),
    #[error(transparent)]
    Abel(#[from] abel::AbelError),
    #[error(transparent)]
    Singular(#[from] singular::SingularError),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

pub type Result<T> = std::result::Result<T, Error>;
