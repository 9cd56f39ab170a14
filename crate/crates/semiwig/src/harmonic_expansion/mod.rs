//! The harmonic ansatz in dilated variables: closed-form harmonic flow, the
//! couplings `𝓑_ν`, `Γ_ν`, Duhamel correctors and remainder diagnostics.

mod coupling;
mod flow;
mod pointwise;
mod remainder;
mod series;
mod term;

pub use coupling::{apply_b, apply_gamma, CouplingTerm, OperatorB, OperatorGamma};
pub use flow::{harmonic_flow, FlowDirection, HarmonicFlow};
pub use pointwise::{first_corrector_at_points, harmonic_term_at_points};
pub use remainder::{
    remainder_diagnostics, RemainderReport, RemainderRow, RemainderSample, MIN_EPS_SAMPLES,
};
pub use series::{corrector_term, ExpansionSeries, HarmonicExpansion};
pub use term::{
    check_rotation_coverage, harmonic_term, harmonic_term_analytic, rotate_density, HarmonicBase,
    HarmonicPropagator, ROTATION_MARGIN, SUPPORT_TOL,
};
