use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{jacobi_am_inverse, jacobi_sncndn};

/// Tolerance on `sin²φ + cos²φ = 1` when recovering the elliptic phase of `(q, p)`.
const BRANCH_TOL: f64 = 1e-8;

/// The quartic oscillator `V(x) = x²/2 + μx⁴/4` at semiclassical parameter `ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarticParams<T> {
    pub mu: T,
    pub eps: T,
}

impl<T: Real> QuarticParams<T> {
    pub fn new(mu: T, eps: T) -> Result<Self> {
        if !(mu > T::zero()) || !mu.is_finite() {
            return Err(Error::Config(format!(
                "quartic coupling μ must be positive, got {mu}"
            )));
        }
        if !(eps > T::zero() && eps < T::one()) {
            return Err(Error::Config(format!("ε must lie in (0, 1), got {eps}")));
        }
        Ok(Self { mu, eps })
    }
}

/// Constants of the elliptic solution through `(q, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticOrbit<T> {
    /// `c = p² + q² + μq⁴/2`
    pub energy: T,
    pub amplitude: T,
    /// Parameter `m = B²` of the Jacobi functions.
    pub m: T,
    pub frequency: T,
    pub phase: T,
}

impl<T: Real> EllipticOrbit<T> {
    /// `A = √c/(2μc+1)^{1/4}`, `B² = (√(2μc+1) − 1)/(2√(2μc+1))`, `Γ = (2μc+1)^{1/4}`,
    /// and `C` the branch of `sd⁻¹(q/A | B²)` on which `∂_t x(0) = p`.
    pub fn new(q: T, p: T, mu: T) -> Result<Self> {
        if q == T::zero() && p == T::zero() {
            return Err(Error::Domain(
                "the origin is a rest point of the quartic flow".into(),
            ));
        }
        if !(mu >= T::zero()) {
            return Err(Error::Config(format!(
                "quartic coupling μ must be non-negative, got {mu}"
            )));
        }
        let c = p * p + q * q + mu * q.powi(4) * T::half();
        let s = (T::two() * mu * c + T::one()).sqrt();
        let gamma = s.sqrt();
        let amplitude = c.sqrt() / gamma;
        let m = (s - T::one()) / (T::two() * s);
        // sn = sin φ, cn = cos φ, dn² = 1 − m sin²φ = 1/(1 + m v²) with v = q/A.
        let v = q / amplitude;
        let w = T::one() + m * v * v;
        let sin_phi = v / w.sqrt();
        let cos_phi = p / (amplitude * gamma * w);
        let defect = (sin_phi * sin_phi + cos_phi * cos_phi - T::one()).mag();
        if !(defect <= T::lit(BRANCH_TOL)) {
            return Err(Error::Domain(format!(
                "no elliptic phase through ({q}, {p}): defect {defect:e}"
            )));
        }
        let phase = jacobi_am_inverse(sin_phi.atan2(cos_phi), m)?;
        Ok(Self {
            energy: c,
            amplitude,
            m,
            frequency: gamma,
            phase,
        })
    }

    /// `(x, k)` at time `t`, with `k = AΓ cn/dn²`.
    pub fn at(&self, t: T) -> Result<(T, T)> {
        let (sn, cn, dn, _) = jacobi_sncndn(self.frequency * t + self.phase, self.m)?;
        Ok((
            self.amplitude * sn / dn,
            self.amplitude * self.frequency * cn / (dn * dn),
        ))
    }
}

/// Exact bicharacteristic of the quartic oscillator, `x = A sd(Γt + C | B²)`.
pub fn quartic_flow_exact<T: Real>(q: T, p: T, t: T, mu: T) -> Result<(T, T)> {
    EllipticOrbit::new(q, p, mu)?.at(t)
}
