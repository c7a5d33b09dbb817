//! Gaussian-state ergotropy of a driven-dissipative bosonic mode and the
//! ergotropic Mpemba effect between squeezed and displaced thermal batteries.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod mpemba;
pub mod oracles;
pub mod states;

pub use nalgebra::Complex;

/// Complex double used for amplitudes and covariance entries.
pub type C64 = Complex<f64>;

pub use error::{Error, Result};
pub use gaussian::{GaussianState, PhasePoint, SystemBathSpec};
