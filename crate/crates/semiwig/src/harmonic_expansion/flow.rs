use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowDirection {
    Forward,
    Inverse,
}

/// Flow of `ξ' = η, η' = −ξ`.
///
/// Forward: `(q cos t + p sin t, p cos t − q sin t)`.
/// Inverse: `(ξ cos t − η sin t, η cos t + ξ sin t)`.
pub fn harmonic_flow<T: Real>(q: T, p: T, t: T, direction: FlowDirection) -> (T, T) {
    let (s, c) = t.sin_cos();
    match direction {
        FlowDirection::Forward => (q * c + p * s, p * c - q * s),
        FlowDirection::Inverse => (q * c - p * s, p * c + q * s),
    }
}

/// Closed-form harmonic flow as a value type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HarmonicFlow;

impl HarmonicFlow {
    pub fn forward<T: Real>(&self, q: T, p: T, t: T) -> (T, T) {
        harmonic_flow(q, p, t, FlowDirection::Forward)
    }

    pub fn inverse<T: Real>(&self, xi: T, eta: T, t: T) -> (T, T) {
        harmonic_flow(xi, eta, t, FlowDirection::Inverse)
    }
}
