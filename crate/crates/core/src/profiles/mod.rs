//! Radial grids, analytic shapes, sampled profiles, truncation and mollification.

mod grid;
mod mollify;
mod profile;
mod shape;

pub use grid::RadialGrid;
pub use mollify::{radial_mollify, Mollifier};
pub use profile::{cutoff_truncate, CauchyDataPair, Descriptor, RadialProfile, Regularity};
pub use shape::{Family, Jet, Shape};
