//! Complex gamma, Pochhammer symbols, Jacobi polynomials with complex
//! parameters, and the Lambda-deformed Hermite polynomial engine.

mod gamma;
mod hermite;
mod jacobi;
mod poly;

pub use gamma::{log_gamma, pochhammer};
pub use hermite::{
    bridge_residual_exact, deformed_hermite, deformed_hermite_derivative_identity,
    hermite_jacobi_bridge, DerivativeIdentityReport, HermiteRoute,
};
pub use jacobi::jacobi_eval;
pub use poly::BivariatePoly;
