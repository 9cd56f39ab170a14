//! Grids, Wigner transforms, moments, dilations and norms.

mod density;
mod field;
mod grid;
mod initial;
pub mod io;
mod ops;
mod transform;

pub use density::{GaussianDensity, PhaseDensity};
pub use field::{ComplexField, FieldDiagnostics, PhaseField};
pub use grid::{Axis, PhaseGrid};
pub use initial::InitialData;
pub use ops::{
    dilate, interpolate_tensor, moments, weighted_norm, weighted_norm_from_nodes,
    weighted_norm_nodes, DilationDirection, Weight,
};
pub use transform::{
    cross_wigner, cross_wigner_scaled, wigner_at_points, wigner_transform, wigner_transform_scaled,
};
