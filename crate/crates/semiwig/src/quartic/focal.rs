use rayon::prelude::*;

use crate::classical_expansion::{multiscale_flow, MU_MAX};
use crate::error::{Error, Result};
use crate::harmonic_expansion::{first_corrector_at_points, harmonic_term, FlowDirection};
use crate::phase_space::{InitialData, PhaseDensity, PhaseField, PhaseGrid};
use crate::scalar::Real;
use crate::spectral::Potential;
use crate::stats::{fit_loglog, LinearFit};

/// Minimum number of `ε` samples of a scaling fit.
pub const MIN_SCALING_SAMPLES: usize = 4;
/// Largest accepted log-residual of a scaling fit.
pub const SCALING_RESIDUAL_MAX: f64 = 0.1;

/// Points per unit `ε` of the classical `k`-quadrature.
const CLASSICAL_POINTS_PER_EPS: f64 = 20.0;
const CLASSICAL_K_MAX: f64 = 8.0;
/// `η`-step and half-length factor of the corrector quadrature along `ξ = 0`.
const Z2_STEP: f64 = 0.02;
const Z2_DECAY: f64 = 80.0;

/// `t_ν = νπ − π/4`, the focal times of the Gauss–Fresnel rays.
pub fn focal_time<T: Real>(nu: usize) -> Result<T> {
    if nu == 0 {
        return Err(Error::Config("focal index ν starts at 1".into()));
    }
    Ok(T::from_index(nu) * T::PI() - T::FRAC_PI_4())
}

/// `∫ W_h(x, k, t) dk` for Gauss–Fresnel data in closed form:
/// `exp(−x²/D)/√D` with `D = ε² sin²t + (cos t + sin t)²`.
pub fn harmonic_amplitude<T: Real>(eps: T, x: T, t: T) -> T {
    let (s, c) = t.sin_cos();
    let d = eps * eps * s * s + (c + s) * (c + s);
    (-x * x / d).exp() / d.sqrt()
}

/// `∫ W_h(0, k, t_ν) dk`, which equals `√2/ε` at every focal time.
pub fn focal_amplitude_harmonic<T: Real>(eps: T, nu: usize) -> Result<T> {
    Ok(harmonic_amplitude(eps, T::zero(), focal_time(nu)?))
}

/// The same integral by rotating the sampled dilated Wigner function on `grid` and
/// summing the column `ξ = 0`: `∫ W_h(0,k) dk = ε^{-1/2} ∫ W̃_h(0,η) dη`.
pub fn focal_amplitude_harmonic_grid<T: Real>(eps: T, nu: usize, grid: &PhaseGrid<T>) -> Result<T> {
    let t = focal_time(nu)?;
    let d = InitialData::GaussFresnel
        .scaled_wigner_density(eps)
        .expect("Gaussian data");
    let w0 = PhaseField::from_real_fn(grid.with_eps(eps), true, move |x, k| d.value(x, k));
    let wh = harmonic_term(&w0, t)?;
    let ix = grid
        .x
        .index_of(T::zero())
        .ok_or_else(|| Error::Config("grid must contain ξ = 0".into()))?;
    let column: T = (0..grid.k.n).map(|ik| wh.at(ix, ik).re).sum();
    Ok(column * grid.k.step() / eps.sqrt())
}

/// Numeric and closed-form values of `ε ∫ Z^{(2)}(0, k, t_ν) dk`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Z2Focal<T> {
    pub numeric: T,
    pub closed_form: T,
    /// `|numeric − closed_form| / |closed_form|`
    pub relative_difference: T,
}

/// `(√2/(πε)) μ (β + β^ε)` with `β = π/8 (μ − 1/4) − 3` and
/// `β^ε = (17/2)ε − (3π/16 (μ − 1/4) + 3)ε²`.
pub fn z2_focal_closed_form<T: Real>(eps: T, mu: T) -> T {
    let quarter = mu - T::lit(0.25);
    let beta = T::PI() / T::lit(8.0) * quarter - T::lit(3.0);
    let beta_eps = T::lit(8.5) * eps
        - (T::lit(3.0) * T::PI() / T::lit(16.0) * quarter + T::lit(3.0)) * eps * eps;
    T::two().sqrt() / (T::PI() * eps) * mu * (beta + beta_eps)
}

/// `ε ∫ Z^{(2)}(0, k, t) dk = √ε ∫ Z̃^{(2)}(0, η, t) dη` for Gauss–Fresnel data, with the
/// Duhamel corrector evaluated pointwise on the line `ξ = 0`.
pub fn z2_line_integral<T: Real>(eps: T, mu: T, t: T) -> Result<T> {
    let v = Potential::quartic(mu)?;
    let d = InitialData::GaussFresnel
        .scaled_wigner_density(eps)
        .expect("Gaussian data");
    let half = (T::lit(Z2_DECAY) / eps).sqrt();
    let h = T::lit(Z2_STEP);
    let n = (half / h).ceil().to_usize().unwrap_or(1);
    let points: Vec<(T, T)> = (0..=2 * n)
        .map(|i| (T::zero(), h * (T::from_index(i) - T::from_index(n))))
        .collect();
    let z = first_corrector_at_points(&v, &d, 2, t, &points)?;
    Ok(z.iter().copied().sum::<T>() * h * eps.sqrt())
}

pub fn z2_focal_contribution<T: Real>(eps: T, mu: T, nu: usize) -> Result<Z2Focal<T>> {
    let numeric = z2_line_integral(eps, mu, focal_time(nu)?)?;
    let closed_form = z2_focal_closed_form(eps, mu);
    Ok(Z2Focal {
        numeric,
        closed_form,
        relative_difference: ((numeric - closed_form) / closed_form).mag(),
    })
}

/// How `μ` follows `ε` in a scaling study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MuRule {
    Fixed(f64),
    /// `μ = coef · ε^exponent`
    Power {
        coef: f64,
        exponent: f64,
    },
}

impl MuRule {
    pub fn mu(&self, eps: f64) -> f64 {
        match *self {
            Self::Fixed(mu) => mu,
            Self::Power { coef, exponent } => coef * eps.powf(exponent),
        }
    }
}

/// `∫ W_c(0, k, t_ν) dk` for Gauss–Fresnel data transported by the multiple-scales flow.
pub fn classical_focal_amplitude<T: Real>(eps: T, mu: T, nu: usize) -> Result<T> {
    let t = focal_time(nu)?;
    let d = InitialData::GaussFresnel
        .wigner_density(eps)
        .expect("Gaussian data");
    let kmax = T::lit(CLASSICAL_K_MAX);
    let h = eps / T::lit(CLASSICAL_POINTS_PER_EPS);
    let n = (kmax / h).ceil().to_usize().unwrap_or(1);
    let total: T = (0..=2 * n)
        .into_par_iter()
        .map(|i| -> Result<T> {
            let k = h * (T::from_index(i) - T::from_index(n));
            let (q, p) = multiscale_flow(mu, T::zero(), k, t, FlowDirection::Inverse)?;
            Ok(d.value(q, p))
        })
        .collect::<Result<Vec<T>>>()?
        .into_iter()
        .sum();
    Ok(total * h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub eps: Vec<f64>,
    pub mu: Vec<f64>,
    pub values: Vec<f64>,
    /// Fit of `ln value` against `ln ε`.
    pub fit: LinearFit,
}

/// Log-log slope of the classical focal amplitude over `eps_set`.
pub fn classical_focal_scaling(eps_set: &[f64], rule: MuRule, nu: usize) -> Result<ScalingReport> {
    if eps_set.len() < MIN_SCALING_SAMPLES {
        return Err(Error::Statistics(format!(
            "scaling fit needs at least {MIN_SCALING_SAMPLES} ε samples, got {}",
            eps_set.len()
        )));
    }
    let mu: Vec<f64> = eps_set.iter().map(|&e| rule.mu(e)).collect();
    if let Some(bad) = mu.iter().find(|&&m| !(0.0..=MU_MAX).contains(&m)) {
        return Err(Error::Config(format!(
            "μ = {bad} outside the multiple-scales range [0, {MU_MAX}]"
        )));
    }
    let values: Vec<f64> = eps_set
        .iter()
        .zip(&mu)
        .map(|(&e, &m)| classical_focal_amplitude(e, m, nu))
        .collect::<Result<_>>()?;
    let fit = fit_loglog(eps_set, &values, MIN_SCALING_SAMPLES)?;
    if fit.max_residual > SCALING_RESIDUAL_MAX {
        return Err(Error::Statistics(format!(
            "scaling fit residual {:.3} exceeds {SCALING_RESIDUAL_MAX}",
            fit.max_residual
        )));
    }
    Ok(ScalingReport {
        eps: eps_set.to_vec(),
        mu,
        values,
        fit,
    })
}
