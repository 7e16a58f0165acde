//! Curves and tensor-product surfaces built from the solution spaces of
//! constant-coefficient linear ODEs, with scale-safe evaluation of their
//! curvature quantities and of the total integrals relating them.

pub mod error;
pub mod exterior;
pub mod functionals;
pub mod odecurve;
pub mod quadrature;
pub mod surface;

pub use error::{Error, Result};
