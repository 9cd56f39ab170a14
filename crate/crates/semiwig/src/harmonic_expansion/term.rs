use crate::duhamel::Transport;
use crate::error::{Error, Result};
use crate::fourier::compose_rotation;
use crate::phase_space::{GaussianDensity, PhaseDensity, PhaseField, PhaseGrid};
use crate::scalar::{creal, Real};
use crate::spectral::Potential;

use super::coupling::OperatorB;

/// Support (relative to the peak) that must stay inside the rotation-safe disk.
pub const SUPPORT_TOL: f64 = 1e-10;
/// Fraction of the grid half-width available to the support; the remainder absorbs
/// the intermediate shears of the three-shear rotation.
pub const ROTATION_MARGIN: f64 = 0.75;

/// Fails with a coverage error when a rotation could carry the support off the grid.
pub fn check_rotation_coverage<T: Real>(w: &PhaseField<T>) -> Result<()> {
    if !w.grid.is_rotatable() {
        return Err(Error::Config(
            "rotation needs a square symmetric grid".into(),
        ));
    }
    let r = w.support_radius(T::lit(SUPPORT_TOL));
    let limit = w.grid.x.max * T::lit(ROTATION_MARGIN);
    if r > limit {
        return Err(Error::Coverage(format!(
            "support radius {r} exceeds the rotation-safe radius {limit} of the grid"
        )));
    }
    Ok(())
}

/// `W̃_h(t) = W̃_0 ∘ g_h^{−t}`, the rotation of the initial field by angle `t`.
pub fn harmonic_term<T: Real>(w0: &PhaseField<T>, t: T) -> Result<PhaseField<T>> {
    if !w0.scaled {
        return Err(Error::Config(
            "harmonic_term acts on fields in dilated variables".into(),
        ));
    }
    check_rotation_coverage(w0)?;
    compose_rotation(w0, t)
}

/// `W̃_0 ∘ g_h^{−t}` for a Gaussian `W̃_0`, again a Gaussian.
pub fn rotate_density<T: Real>(d: &GaussianDensity<T>, t: T) -> GaussianDensity<T> {
    // W(z) = W0(Rz) with R the counter-clockwise rotation; centre Rᵀc, form RᵀAR.
    let (s, c) = t.sin_cos();
    let (a, b, cc) = d.form;
    let center = (
        c * d.center.0 + s * d.center.1,
        -s * d.center.0 + c * d.center.1,
    );
    let a11 = a * c * c + T::two() * b * c * s + cc * s * s;
    let a12 = -a * c * s + b * (c * c - s * s) + cc * c * s;
    let a22 = a * s * s - T::two() * b * c * s + cc * c * c;
    GaussianDensity {
        amp: d.amp,
        center,
        form: (a11, a12, a22),
    }
}

/// `W̃_h(t)` sampled from the closed-form rotated Gaussian.
pub fn harmonic_term_analytic<T: Real>(
    d: &GaussianDensity<T>,
    grid: &PhaseGrid<T>,
    t: T,
) -> PhaseField<T> {
    let r = rotate_density(d, t);
    PhaseField::from_real_fn(*grid, true, move |x, k| r.value(x, k))
}

/// Initial data of the harmonic hierarchy.
#[derive(Clone, Debug)]
pub enum HarmonicBase<T> {
    Field(PhaseField<T>),
    Gaussian(GaussianDensity<T>),
}

/// The harmonic hierarchy `(∂_t + L_h) Z̃^{(l)} = −Σ_ν 𝓑_ν Z̃^{(l−ν)}`.
pub struct HarmonicPropagator<T: Real> {
    grid: PhaseGrid<T>,
    base: HarmonicBase<T>,
    ops: Vec<OperatorB<T>>,
}

impl<T: Real> HarmonicPropagator<T> {
    /// Couplings `𝓑_1 … 𝓑_{max_level}` are built from `v`; missing Taylor data
    /// beyond what the potential supplies is treated as a capability error.
    pub fn new(
        v: &Potential<T>,
        base: HarmonicBase<T>,
        grid: PhaseGrid<T>,
        max_level: usize,
    ) -> Result<Self> {
        if !grid.is_rotatable() {
            return Err(Error::Config(
                "harmonic propagation needs a square symmetric grid".into(),
            ));
        }
        if (v.taylor(2)? - T::one()).mag() > T::lit(1e-12) {
            return Err(Error::Config(
                "the harmonic expansion assumes V''(0) = 1".into(),
            ));
        }
        if let HarmonicBase::Field(f) = &base {
            if !f.scaled || f.grid != grid {
                return Err(Error::Config(
                    "initial field must be scaled and live on the propagation grid".into(),
                ));
            }
            check_rotation_coverage(f)?;
        }
        let ops = (1..=max_level)
            .map(|nu| OperatorB::new(nu, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, base, ops })
    }

    pub fn operator(&self, nu: usize) -> Option<&OperatorB<T>> {
        nu.checked_sub(1).and_then(|i| self.ops.get(i))
    }
}

impl<T: Real> Transport<T> for HarmonicPropagator<T> {
    fn grid(&self) -> PhaseGrid<T> {
        self.grid
    }

    fn scaled(&self) -> bool {
        true
    }

    fn base(&self, t: T) -> Result<PhaseField<T>> {
        match &self.base {
            HarmonicBase::Field(f) => compose_rotation(f, t),
            HarmonicBase::Gaussian(d) => Ok(harmonic_term_analytic(d, &self.grid, t)),
        }
    }

    fn transport(&self, f: &PhaseField<T>, tau: T) -> Result<PhaseField<T>> {
        compose_rotation(f, tau)
    }

    fn couple(&self, nu: usize, f: &PhaseField<T>) -> Result<PhaseField<T>> {
        let op = self
            .operator(nu)
            .ok_or_else(|| Error::Config(format!("coupling 𝓑_{nu} was not prepared")))?;
        Ok(op.apply(f)?.scaled_by(creal(-T::one())))
    }

    fn coupling_active(&self, nu: usize) -> bool {
        self.operator(nu).is_some_and(|op| !op.is_zero())
    }
}
