//! Numerical toolkit for quantum speed limits.
//!
//! Dense linear algebra, state geometry, closed and open dynamics, model
//! Hamiltonians, speed-limit bounds, optimal control and thermodynamic
//! trade-off relations for finite-dimensional quantum systems.

pub mod bounds;
pub mod control;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod models;
pub mod thermo;
pub mod operator;
pub mod units;

pub use dynamics::{ControlledHamiltonian, TimeGrid, Trajectory};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use operator::{DensityMatrix, HermitianOperator, Ket, StateRef};
pub use units::UnitSystem;
