use crate::error::{Error, Result};
use crate::harmonic_expansion::FlowDirection;
use crate::scalar::Real;

/// Upper bound on `μ` for the multiple-scales approximation.
pub const MU_MAX: f64 = 0.5;

/// `ω = 1 + (3μ/8)(q² + p²)`.
pub fn multiscale_frequency<T: Real>(mu: T, q: T, p: T) -> T {
    T::one() + T::lit(3.0 / 8.0) * mu * (q * q + p * p)
}

/// Multiple-scales approximation of the quartic flow.
///
/// Forward: `x = q cos ωt + p sin ωt`, `k = pω cos ωt − qω sin ωt` with `ω = ω(q, p)`.
/// Inverse: the exact functional inverse of the forward map. Since
/// `x² + (k/ω)² = q² + p²`, the amplitude `ρ = q² + p²` solves
/// `ρ = x² + k²/ω(ρ)²`, which is iterated to convergence before rotating back.
pub fn multiscale_flow<T: Real>(
    mu: T,
    q: T,
    p: T,
    t: T,
    direction: FlowDirection,
) -> Result<(T, T)> {
    if !(mu >= T::zero()) || mu > T::lit(MU_MAX) {
        return Err(Error::Config(format!(
            "multiple-scales flow needs 0 ≤ μ ≤ {MU_MAX}, got {mu}"
        )));
    }
    match direction {
        FlowDirection::Forward => {
            let w = multiscale_frequency(mu, q, p);
            let (s, c) = (w * t).sin_cos();
            Ok((q * c + p * s, w * (p * c - q * s)))
        }
        FlowDirection::Inverse => {
            let (x, k) = (q, p);
            let a = T::lit(3.0 / 8.0) * mu;
            let mut rho = x * x + k * k;
            for _ in 0..200 {
                let w = T::one() + a * rho;
                let next = x * x + k * k / (w * w);
                let done = (next - rho).mag() <= T::epsilon() * T::lit(4.0) * (T::one() + rho);
                rho = next;
                if done {
                    break;
                }
            }
            let w = T::one() + a * rho;
            let (s, c) = (w * t).sin_cos();
            let kw = k / w;
            Ok((x * c - kw * s, x * s + kw * c))
        }
    }
}
