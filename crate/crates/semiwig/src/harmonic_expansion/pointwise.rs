use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase_space::{GaussianDensity, PhaseDensity};
use crate::scalar::Real;
use crate::specfun::{make_rule, RuleKind};
use crate::spectral::Potential;

use super::coupling::OperatorB;
use super::term::rotate_density;

const PANEL: f64 = 1.0 / 16.0;
const NODES: usize = 8;

/// `W̃_h(t)` at arbitrary points for Gaussian data.
pub fn harmonic_term_at_points<T: Real>(d: &GaussianDensity<T>, t: T, points: &[(T, T)]) -> Vec<T> {
    let r = rotate_density(d, t);
    points.iter().map(|&(x, k)| r.value(x, k)).collect()
}

/// The first nonvanishing corrector `Z̃^{(ν)}(t)` at arbitrary points for Gaussian data,
/// where `ν` is the lowest order with `V^{(ν+2)}(0) ≠ 0`:
/// `Z̃^{(ν)}(t,z) = −∫_0^t Σ_j c_j y(s)^{a_j} (∂_{v_s}^{b_j} W̃_0)(R(t)z) ds`,
/// `y(s) = cos(t−s) ξ − sin(t−s) η`, `v_s = (−sin s, cos s)`.
///
/// Returns the level `ν` with the values. Fails with a capability error if level
/// `nu` is requested but lower couplings are active.
pub fn first_corrector_at_points<T: Real>(
    v: &Potential<T>,
    d: &GaussianDensity<T>,
    nu: usize,
    t: T,
    points: &[(T, T)],
) -> Result<Vec<T>> {
    for lower in 1..nu {
        if !OperatorB::new(lower, v)?.is_zero() {
            return Err(Error::Capability(format!(
                "pointwise corrector at level {nu} needs 𝓑_1…𝓑_{} to vanish",
                nu - 1
            )));
        }
    }
    let op = OperatorB::new(nu, v)?;
    if op.is_zero() || t == T::zero() {
        return Ok(vec![T::zero(); points.len()]);
    }
    let panels = (t.mag() / T::lit(PANEL))
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    let base = make_rule(RuleKind::GaussLegendre, NODES, T::one())?;
    let h = t / T::from_index(panels);
    let mut nodes = Vec::with_capacity(panels * NODES);
    for p in 0..panels {
        let a = T::from_index(p) * h;
        let m = base.mapped(a, a + h);
        nodes.extend(m.nodes.into_iter().zip(m.weights));
    }
    let (st, ct) = t.sin_cos();
    Ok(points
        .par_iter()
        .map(|&(xi, eta)| {
            let rz = (ct * xi - st * eta, st * xi + ct * eta);
            let mut acc = T::zero();
            for &(s, w) in &nodes {
                let (sd, cd) = (t - s).sin_cos();
                let y = cd * xi - sd * eta;
                let (ss, cs) = s.sin_cos();
                let dir = (-ss, cs);
                let mut f = T::zero();
                for term in &op.terms {
                    f = f + term.coef
                        * y.powi(term.xi_power as i32)
                        * d.directional(rz.0, rz.1, dir, term.eta_order);
                }
                acc = acc - w * f;
            }
            acc
        })
        .collect())
}
