//! The quartic oscillator `V = x²/2 + μx⁴/4` with Gauss–Fresnel data: exact elliptic
//! bicharacteristics, rays and caustics, and focal-point amplitudes of both expansions.

mod flow;
mod focal;
mod rays;

pub use flow::{quartic_flow_exact, EllipticOrbit, QuarticParams};
pub use focal::{
    classical_focal_amplitude, classical_focal_scaling, focal_amplitude_harmonic,
    focal_amplitude_harmonic_grid, focal_time, harmonic_amplitude, z2_focal_closed_form,
    z2_focal_contribution, z2_line_integral, MuRule, ScalingReport, Z2Focal, MIN_SCALING_SAMPLES,
    SCALING_RESIDUAL_MAX,
};
pub use rays::{
    curve_count, find_caustics, hausdorff_distance, jacobian_slope, ray_jacobian, ray_position,
    sample_rays, write_caustics_csv, write_rays_csv, CausticKind, CausticPoint, CausticWindow,
    RayFlow, RaySample, BEAK_TOL, CAUSTIC_TOL, CLUSTER_CELLS, JACOBIAN_STEP, MIN_RESOLUTION,
};
