//! Numerical checks of quantized-spacetime commutation relations and
//! free Dirac wave-packet dynamics.
//!
//! * [`matrix`]: small dense complex matrices, commutators, Hermitian
//!   eigendecomposition and unitary propagators.
//! * [`gamma`]: Dirac matrices, Clifford and Lorentz closure checks, the
//!   finite-dimensional coordinate representation and its generators.
//! * [`snyder`]: deformed position operators on momentum grids and their
//!   commutator residuals.
//! * [`dynamics`]: exact momentum-space evolution of 4-spinor packets,
//!   Zitterbewegung measurement and time averaging.

pub mod dynamics;
pub mod gamma;
pub mod grid;
pub mod matrix;
pub mod params;
pub mod series;
pub mod snyder;

mod error;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, EigenSystem};
pub use params::PhysicalParams;

pub use num_complex::Complex64;
