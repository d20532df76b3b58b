//! Eigenvalue bounds for the two-dimensional massless Dirac operator with
//! infinite-mass boundary conditions.
//!
//! The crate computes the principal eigenvalue of the unit disk from the
//! Bessel secular equation, builds numerical conformal maps of star-shaped
//! domains (Theodorsen's iteration, with a Newton solver for domains it cannot
//! handle), evaluates the transplanted Rayleigh
//! quotient of the disk ground state on those maps, and compares it against
//! the closed-form geometric bounds (Hardy-norm estimates of Kovalev and
//! Gaier, the functionals `F_c` and `F_s`, and the classical lower bound).
//!
//! Module map:
//!
//! * [`specfun`]: Bessel functions `J_k`, their derivatives, secular roots.
//! * [`geometry`]: domain descriptions and every geometric quantity.
//! * [`conformal`]: numerical conformal maps and Hardy norms.
//! * [`diskspec`]: full disk spectrum via the angular fiber decomposition.
//! * [`transplant`]: the transplanted Rayleigh quotient.
//! * [`bounds`]: all bounds, the functionals and the verification chain.
//! * [`cli`]: the command line front end.
//! * [`optimize`], [`quadrature`]: Nelder–Mead and Gauss–Legendre helpers.

pub mod bounds;
pub mod cli;
pub mod conformal;
pub mod diskspec;
mod error;
pub mod geometry;
pub mod optimize;
pub mod quadrature;
pub mod specfun;
pub mod transplant;

pub use error::{Error, Result};
