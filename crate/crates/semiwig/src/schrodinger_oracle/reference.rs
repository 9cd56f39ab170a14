use crate::error::Result;
use crate::phase_space::{
    wigner_transform, wigner_transform_scaled, ComplexField, PhaseField, PhaseGrid,
};
use crate::scalar::Real;
use crate::spectral::Potential;

use super::evolve::{split_step_evolve, split_step_evolve_scaled, EvolutionConfig};

/// `W^ε[ψ(t)]` on `grid` (whose ε is used), with `ψ` evolved by spectral splitting.
pub fn reference_wigner<T: Real>(
    psi0: &ComplexField<T>,
    v: &Potential<T>,
    grid: &PhaseGrid<T>,
    config: &EvolutionConfig<T>,
) -> Result<PhaseField<T>> {
    let psi = split_step_evolve(psi0, v, grid.eps, config)?;
    wigner_transform(&psi, grid)
}

/// `W̃^ε(t)` in dilated variables from a dilated initial state on `grid.x`.
pub fn reference_wigner_scaled<T: Real>(
    phi0: &ComplexField<T>,
    v: &Potential<T>,
    grid: &PhaseGrid<T>,
    config: &EvolutionConfig<T>,
) -> Result<PhaseField<T>> {
    let phi = split_step_evolve_scaled(phi0, v, grid.eps, config)?;
    wigner_transform_scaled(&phi, grid)
}
