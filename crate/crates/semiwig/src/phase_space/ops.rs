use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::trig_weights;
use crate::phase_space::{PhaseField, PhaseGrid};
use crate::scalar::{creal, Complex, Real};
use crate::specfun::{make_rule, RuleKind};

const SUPPORT_TOL: f64 = 1e-10;
const WEIGHT_NODES: usize = 32;

/// `k`-moments of a phase field: order 0 gives the density `∫W dk`, order 1 the flux `∫kW dk`.
pub fn moments<T: Real>(w: &PhaseField<T>, order: usize) -> Result<Vec<T>> {
    if order > 1 {
        return Err(Error::Config(format!(
            "moment order {order} not in {{0, 1}}"
        )));
    }
    let nk = w.grid.k.n;
    let ks = w.grid.k.points();
    let dk = w.grid.k.step();
    Ok(w.values
        .chunks(nk)
        .map(|row| {
            row.iter()
                .zip(&ks)
                .map(|(v, &k)| if order == 0 { v.re } else { k * v.re })
                .sum::<T>()
                * dk
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DilationDirection {
    ToScaled,
    ToUnscaled,
}

/// Resamples a field between `(x,k)` and `(ξ,η) = (x,k)/√ε`:
/// `W̃(ξ,η) = ε W(√ε ξ, √ε η)` and its inverse `W(x,k) = ε⁻¹ W̃(x/√ε, k/√ε)`.
///
/// `target` supplies the output axes; its ε is replaced by the source ε.
pub fn dilate<T: Real>(
    w: &PhaseField<T>,
    direction: DilationDirection,
    target: &PhaseGrid<T>,
) -> Result<PhaseField<T>> {
    let eps = w.grid.eps;
    let r = eps.sqrt();
    let (to_scaled, map, factor) = match direction {
        DilationDirection::ToScaled => (true, r, eps),
        DilationDirection::ToUnscaled => (false, T::one() / r, T::one() / eps),
    };
    if w.scaled == to_scaled {
        return Err(Error::Config(
            "field already in the requested variables".into(),
        ));
    }
    let grid = target.with_eps(eps);
    if let Some((xl, xh, kl, kh)) = w.support_box(T::lit(SUPPORT_TOL)) {
        let inside =
            |lo: T, hi: T, a: &crate::phase_space::Axis<T>| lo / map >= a.min && hi / map <= a.max;
        if !inside(xl, xh, &grid.x) || !inside(kl, kh, &grid.k) {
            return Err(Error::Coverage(
                "dilated support leaves the target grid".into(),
            ));
        }
    }
    let xs: Vec<T> = grid.x.points().iter().map(|&v| v * map).collect();
    let ks: Vec<T> = grid.k.points().iter().map(|&v| v * map).collect();
    let values = interpolate_tensor(w, &xs, &ks)
        .into_iter()
        .map(|v| v * factor)
        .collect();
    PhaseField::new(grid, values, to_scaled)
}

/// Band-limited evaluation on the tensor product `xs × ks` (row-major, `xs` outer).
pub fn interpolate_tensor<T: Real>(w: &PhaseField<T>, xs: &[T], ks: &[T]) -> Vec<Complex<T>> {
    let (nx, nk) = (w.grid.x.n, w.grid.k.n);
    let wk: Vec<Vec<T>> = ks.iter().map(|&k| trig_weights(&w.grid.k, k)).collect();
    // tmp[ix][b] = Σ_ik F[ix][ik] wk[b][ik]
    let tmp: Vec<Vec<Complex<T>>> = (0..nx)
        .into_par_iter()
        .map(|ix| {
            let row = &w.values[ix * nk..(ix + 1) * nk];
            wk.iter()
                .map(|wb| {
                    row.iter()
                        .zip(wb)
                        .fold(creal(T::zero()), |acc, (v, &c)| acc + v * c)
                })
                .collect()
        })
        .collect();
    xs.par_iter()
        .flat_map_iter(|&x| {
            let wx = trig_weights(&w.grid.x, x);
            (0..ks.len())
                .map(|b| {
                    wx.iter()
                        .zip(&tmp)
                        .fold(creal(T::zero()), |acc, (&c, t)| acc + t[b] * c)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    PlainL2,
    /// `r^ε(ξ,η) = e^{-(ξ²+η²)/ε²}`
    GaussianREps,
}

/// `(∫∫ |W|² r dξ dη)^{1/2}`.
///
/// When the grid does not resolve the `O(ε)` width of `r^ε`, the integral is taken by an
/// ε-scaled Gauss–Hermite product rule on the band-limited interpolant of the field.
pub fn weighted_norm<T: Real>(w: &PhaseField<T>, weight: Weight) -> Result<T> {
    match weight {
        Weight::PlainL2 => Ok(w.l2_norm()),
        Weight::GaussianREps => {
            if !w.scaled {
                return Err(Error::Config(
                    "gaussian-r-eps norm needs a scaled field".into(),
                ));
            }
            let eps = w.grid.eps;
            let h = w.grid.x.step().max(w.grid.k.step());
            if h <= eps / T::lit(4.0) {
                let xs = w.grid.x.points();
                let ks = w.grid.k.points();
                let nk = w.grid.k.n;
                let s: T = w
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let (x, k) = (xs[i / nk], ks[i % nk]);
                        v.norm_sqr() * (-(x * x + k * k) / (eps * eps)).exp()
                    })
                    .sum();
                return Ok((s * w.grid.cell()).sqrt());
            }
            let rule = make_rule(RuleKind::GaussHermite, WEIGHT_NODES, eps)?;
            let vals = interpolate_tensor(w, &rule.nodes, &rule.nodes);
            let n = rule.nodes.len();
            let mut s = T::zero();
            for i in 0..n {
                for j in 0..n {
                    s = s + rule.weights[i] * rule.weights[j] * vals[i * n + j].norm_sqr();
                }
            }
            Ok(s.sqrt())
        }
    }
}

/// The same weighted norm evaluated from point values at the Gauss–Hermite nodes
/// returned by [`weighted_norm_nodes`].
pub fn weighted_norm_from_nodes<T: Real>(eps: T, values: &[Complex<T>]) -> Result<T> {
    let rule = make_rule(RuleKind::GaussHermite, WEIGHT_NODES, eps)?;
    let n = rule.nodes.len();
    if values.len() != n * n {
        return Err(Error::Config("node value count mismatch".into()));
    }
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            s = s + rule.weights[i] * rule.weights[j] * values[i * n + j].norm_sqr();
        }
    }
    Ok(s.sqrt())
}

/// Tensor Gauss–Hermite nodes (row-major, `ξ` outer) used for the `r^ε` norm.
pub fn weighted_norm_nodes<T: Real>(eps: T) -> Result<Vec<(T, T)>> {
    let rule = make_rule(RuleKind::GaussHermite, WEIGHT_NODES, eps)?;
    Ok(rule
        .nodes
        .iter()
        .flat_map(|&x| rule.nodes.iter().map(move |&k| (x, k)))
        .collect())
}
