//! Reference solutions of the Schrödinger problem: spectral splitting, eigenfunction
//! series, reference Wigner fields and the expansion of the Wigner coefficients.

mod coefficients;
mod eigenseries;
mod evolve;
mod reference;

pub use coefficients::{coefficient_expansion, harmonic_coefficient, CoefficientExpansion};
pub use eigenseries::{eigenseries_evolve, project, tail_mass, wigner_coefficients, TAIL_TOL};
pub use evolve::{
    split_step_evolve, split_step_evolve_scaled, split_step_evolve_with, split_step_snapshots,
    EvolutionConfig, SplitMethod, DECAY_TOL, MASS_TOL,
};
pub use reference::{reference_wigner, reference_wigner_scaled};

#[cfg(test)]
mod tests;
