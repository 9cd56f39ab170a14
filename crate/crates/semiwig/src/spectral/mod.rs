//! Schrödinger eigendata, the harmonic (Rayleigh–Schrödinger) approximation,
//! Moyal eigenfunctions and the phase-space operators they diagonalize.

mod eigen;
mod moyal;
mod operators;
mod potential;
mod rs;

pub use eigen::{solve_spectrum, write_spectrum_csv, EigenPair, DECAY_TOL, RESIDUAL_TOL};
pub use moyal::{
    harmonic_moyal, harmonic_moyal_field, moyal_corrector, moyal_eigenfunction, MoyalFunction,
};
pub use operators::{
    apply_cosine_bracket, apply_cosine_bracket_truncated, apply_cosine_symbol, apply_liouville,
    apply_theta_symbol,
};
pub use potential::{DerivativeFn, Potential, PotentialKind};
pub use rs::{harmonic_corrections, HarmonicCorrection};
