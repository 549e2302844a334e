//! Radial solutions of the 3-d wave equation realized as limits of exterior
//! Neumann and Dirichlet problems.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the study
//! harness and CLI work in `f64`, exposed through the aliases below.

pub mod cli;
pub mod construction;
pub mod error;
pub mod harness;
pub mod norms;
pub mod profiles;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod stencil;

pub use error::{LabError, Result};
pub use scalar::Real;

pub type Grid = profiles::RadialGrid<f64>;
pub type Profile = profiles::RadialProfile<f64>;
pub type DataPair = profiles::CauchyDataPair<f64>;
pub type Field = solver::WaveField<f64>;
