//! Quantum Brownian motion of a scalar-charged test particle next to a
//! dispersive (Drude-type) half-space in 1+1 dimensions.
//!
//! The crate is organised bottom-up:
//!
//! - [`quadrature`]: adaptive Gauss–Kronrod, half-period panel summation
//!   with epsilon acceleration, and principal-value integrals.
//! - [`medium`]: susceptibility, causal kernel, refractive index and the
//!   reflection/transmission coefficients of the half-space.
//! - [`propagator`]: frequency-domain Green functions, the renormalized
//!   Wightman function and the commutator consistency integral.
//! - [`dispersion`]: velocity dispersion of the probe, the perfect-mirror
//!   closed forms and the switching-function regularization.
//! - [`scattering`]: back-scattering of wave packets sent at the medium.
//!
//! Lengths, times and inverse lengths share one unit (`c = ħ = 1`).

pub mod dispersion;
pub mod error;
pub mod medium;
pub mod propagator;
pub mod quadrature;
pub mod scattering;
pub mod search;
mod spectral;

pub use error::{Error, Result};
pub use medium::{DrudeParams, PerfectMirror, Reflectivity};
pub use quadrature::{IntegralResult, QuadratureConfig};
