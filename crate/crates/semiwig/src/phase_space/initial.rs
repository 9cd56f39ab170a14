use crate::error::{Error, Result};
use crate::phase_space::{Axis, ComplexField, GaussianDensity};
use crate::scalar::{cis, Complex, Real};

/// Initial wavefunctions used by the scenarios.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialData<T> {
    /// `(πε)^{-1/4} e^{i k0 x/ε} e^{-(x-x0)²/2ε}`
    Coherent { x0: T, k0: T },
    /// WKB data with `A_0 = e^{-x²/2}`, `S_0 = x²/2`.
    GaussFresnel,
    /// WKB data with `A_0 = e^{-x²/2}`, `S_0 = k0 x`.
    LinearPhase { k0: T },
    /// Arbitrary samples in the unscaled variable.
    Samples(ComplexField<T>),
}

impl<T: Real> InitialData<T> {
    /// `ψ_0(x)` sampled on `axis`.
    pub fn wavefunction(&self, axis: Axis<T>, eps: T) -> Result<ComplexField<T>> {
        match self {
            Self::Samples(f) => {
                if f.axis != axis {
                    return Err(Error::Config(
                        "custom samples live on a different axis".into(),
                    ));
                }
                Ok(f.clone())
            }
            _ => Ok(ComplexField::from_fn(axis, |x| self.eval(x, eps))),
        }
    }

    /// `φ_0(ξ) = ε^{1/4} ψ_0(√ε ξ)`, the unitarily dilated wavefunction.
    pub fn scaled_wavefunction(&self, axis: Axis<T>, eps: T) -> Result<ComplexField<T>> {
        if let Self::Samples(_) = self {
            return Err(Error::Capability(
                "dilation of custom samples is not supported".into(),
            ));
        }
        let r = eps.sqrt();
        let c = eps.powf(T::lit(0.25));
        Ok(ComplexField::from_fn(axis, |xi| self.eval(r * xi, eps) * c))
    }

    fn eval(&self, x: T, eps: T) -> Complex<T> {
        match self {
            Self::Coherent { x0, k0 } => {
                let d = x - *x0;
                cis(*k0 * x / eps)
                    * ((T::PI() * eps).powf(T::lit(-0.25)) * (-d * d / (T::two() * eps)).exp())
            }
            Self::GaussFresnel => cis(x * x / (T::two() * eps)) * (-x * x * T::half()).exp(),
            Self::LinearPhase { k0 } => cis(*k0 * x / eps) * (-x * x * T::half()).exp(),
            Self::Samples(_) => unreachable!(),
        }
    }

    /// Closed-form Wigner function `W^ε[ψ_0](x,k)`, when Gaussian.
    pub fn wigner_density(&self, eps: T) -> Option<GaussianDensity<T>> {
        let one = T::one();
        let sp = T::PI().sqrt();
        match self {
            Self::Coherent { x0, k0 } => Some(GaussianDensity {
                amp: one / (T::PI() * eps),
                center: (*x0, *k0),
                form: (one / eps, T::zero(), one / eps),
            }),
            Self::GaussFresnel => {
                let e2 = one / (eps * eps);
                Some(GaussianDensity {
                    amp: one / (sp * eps),
                    center: (T::zero(), T::zero()),
                    form: (one + e2, -e2, e2),
                })
            }
            Self::LinearPhase { k0 } => Some(GaussianDensity {
                amp: one / (sp * eps),
                center: (T::zero(), *k0),
                form: (one, T::zero(), one / (eps * eps)),
            }),
            Self::Samples(_) => None,
        }
    }

    /// Closed-form dilated Wigner function `W̃_0(ξ,η) = ε W_0(√ε ξ, √ε η)`.
    pub fn scaled_wigner_density(&self, eps: T) -> Option<GaussianDensity<T>> {
        let w = self.wigner_density(eps)?;
        let r = eps.sqrt();
        Some(GaussianDensity {
            amp: w.amp * eps,
            center: (w.center.0 / r, w.center.1 / r),
            form: (w.form.0 * eps, w.form.1 * eps, w.form.2 * eps),
        })
    }

    /// `S_0'(x)`: the Lagrangian manifold `k = S_0'(x)` of WKB data.
    pub fn phase_gradient(&self, x: T) -> Option<T> {
        match self {
            Self::Coherent { k0, .. } | Self::LinearPhase { k0 } => Some(*k0),
            Self::GaussFresnel => Some(x),
            Self::Samples(_) => None,
        }
    }

    /// `|A_0(x)|`, the WKB amplitude.
    pub fn amplitude(&self, x: T) -> Option<T> {
        match self {
            Self::GaussFresnel | Self::LinearPhase { .. } => Some((-x * x * T::half()).exp()),
            _ => None,
        }
    }
}
