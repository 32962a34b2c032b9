//! Spectral toolkit for the position-dependent-mass Schrodinger equation
//! (PDMSE) with mass profile m(x) = 1/(1 + lambda x^2).
//!
//! The crate bundles the closed-form catalog of solvable potential families
//! sharing this mass profile (hyperbolic/trigonometric Scarf, Rosen-Morse,
//! Eckart and generalized Poschl-Teller shapes, plus the nonlinear-oscillator
//! family itself), the Lambda-deformed Hermite polynomial engine, the
//! SUSY/shape-invariance machinery, a quasi-exactly-solvable sextic family,
//! and an independent finite-difference Sturm-Liouville oracle used to
//! cross-validate every closed form.

pub mod cli;
pub mod model_catalog;
pub mod numerics;
pub mod qes_engine;
pub mod special_functions;
pub mod susy_engine;

use thiserror::Error;

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma pole at z = {0}")]
    GammaPole(C64),
    #[error("degree {0} exceeds the supported limit {1}")]
    DegreeLimit(usize, usize),
    #[error("{0} outside the model domain")]
    Domain(f64),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("level n = {n} at or beyond the bound {bound} for this family")]
    LevelBound { n: usize, bound: usize },
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("grids do not match")]
    GridMismatch,
    #[error("eigensolver failed to converge")]
    NonConvergence,
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("wavefunction is not normalizable under the d-mu measure")]
    NonNormalizable,
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// sqrt(lambda) in the complex sense: i*sqrt(|lambda|) when lambda < 0.
pub fn sqrt_lambda(lambda: f64) -> C64 {
    if lambda >= 0.0 {
        C64::new(lambda.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-lambda).sqrt())
    }
}
