//! The classical (Liouville) expansion in the original variables: exact Hamiltonian
//! flow, the operators `Θ_j`, the corrector hierarchy and the multiple-scales flow.

mod flow;
mod interp;
mod multiscale;
mod term;
mod theta;

pub use flow::{
    hamiltonian, integrate_flow, integrate_points, integrate_trajectory, write_trajectory_csv,
    TrajectoryPoint, DEFAULT_STEP, ENERGY_TOL, MAX_STEPS,
};
pub use interp::Upsampled;
pub use multiscale::{multiscale_flow, multiscale_frequency, MU_MAX};
pub use term::{
    classical_corrector, liouville_term, ClassicalBase, ClassicalExpansion, ClassicalPropagator,
    ClassicalSeries, FlowMap, TRANSPORT_TOL,
};
pub use theta::{apply_theta, ThetaOperator};

#[cfg(test)]
mod tests;
