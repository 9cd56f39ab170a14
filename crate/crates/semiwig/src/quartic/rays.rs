use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::classical_expansion::multiscale_flow;
use crate::error::{Error, Result};
use crate::harmonic_expansion::{harmonic_flow, FlowDirection};
use crate::scalar::Real;

use super::flow::quartic_flow_exact;

/// Step in `q` of the Richardson-extrapolated Jacobian.
pub const JACOBIAN_STEP: f64 = 1e-4;
/// Bisection stops once `|J|` falls below this.
pub const CAUSTIC_TOL: f64 = 1e-8;
/// Caustic points with `|∂_q J|` below this are beak candidates.
pub const BEAK_TOL: f64 = 1e-4;
/// Minimum scan resolution per axis.
pub const MIN_RESOLUTION: usize = 64;
/// Points closer than this many grid cells (in both `q` and `t`) share a curve.
pub const CLUSTER_CELLS: f64 = 2.0;

const BISECTION_MAX: usize = 200;
const BRACKET_TOL: f64 = 1e-13;
const DQ_STEP: f64 = 1e-3;
const FOCAL_PROBE: f64 = 1e-2;

/// Bicharacteristic used to trace the rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayFlow {
    Harmonic,
    Exact,
    Multiscale,
}

/// `x̃(t; q)`, the ray launched from `(q, S_0'(q)) = (q, q)`.
pub fn ray_position<T: Real>(q: T, t: T, mu: T, flow: RayFlow) -> Result<T> {
    Ok(match flow {
        RayFlow::Harmonic => harmonic_flow(q, q, t, FlowDirection::Forward).0,
        RayFlow::Exact if q == T::zero() => T::zero(),
        RayFlow::Exact => quartic_flow_exact(q, q, t, mu)?.0,
        RayFlow::Multiscale => multiscale_flow(mu, q, q, t, FlowDirection::Forward)?.0,
    })
}

/// `J(q, t) = ∂_q x̃(t; q)`: analytic `cos t + sin t` for the harmonic rays, otherwise
/// Richardson-extrapolated central differences.
pub fn ray_jacobian<T: Real>(q: T, t: T, mu: T, flow: RayFlow) -> Result<T> {
    if flow == RayFlow::Harmonic {
        return Ok(t.cos() + t.sin());
    }
    let central = |h: T| -> Result<T> {
        Ok(
            (ray_position(q + h, t, mu, flow)? - ray_position(q - h, t, mu, flow)?)
                / (T::two() * h),
        )
    };
    let h = T::lit(JACOBIAN_STEP);
    let coarse = central(h)?;
    let fine = central(h * T::half())?;
    Ok((T::lit(4.0) * fine - coarse) / T::lit(3.0))
}

/// `∂_q J` by a central difference of the Jacobian.
pub fn jacobian_slope<T: Real>(q: T, t: T, mu: T, flow: RayFlow) -> Result<T> {
    if flow == RayFlow::Harmonic {
        return Ok(T::zero());
    }
    let h = T::lit(DQ_STEP);
    Ok((ray_jacobian(q + h, t, mu, flow)? - ray_jacobian(q - h, t, mu, flow)?) / (T::two() * h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CausticKind {
    /// `J` vanishes on a whole neighbourhood of rays.
    Focal,
    Fold,
    CuspBeak,
}

impl fmt::Display for CausticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Focal => "focal",
            Self::Fold => "fold",
            Self::CuspBeak => "cusp-beak",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CausticPoint<T> {
    pub x: T,
    pub t: T,
    pub q: T,
    pub kind: CausticKind,
    /// Index of the curve the point was clustered into.
    pub curve: usize,
}

/// Scan window of [`find_caustics`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CausticWindow<T> {
    pub q: (T, T),
    pub t: (T, T),
    pub resolution: usize,
}

impl<T: Real> CausticWindow<T> {
    fn check(&self) -> Result<()> {
        if self.resolution < MIN_RESOLUTION {
            return Err(Error::Config(format!(
                "caustic scan needs at least {MIN_RESOLUTION} points per axis, got {}",
                self.resolution
            )));
        }
        if !(self.q.1 > self.q.0) || !(self.t.1 > self.t.0) {
            return Err(Error::Config(
                "caustic window must have positive extent".into(),
            ));
        }
        Ok(())
    }

    fn cells(&self) -> (T, T) {
        let n = T::from_index(self.resolution - 1);
        ((self.q.1 - self.q.0) / n, (self.t.1 - self.t.0) / n)
    }

    /// Launch parameters of the scan; the central ray `q = 0` is added when inside the
    /// window, since symmetric data place their beaks on it.
    fn launch_points(&self) -> Vec<T> {
        let (dq, _) = self.cells();
        let mut qs: Vec<T> = (0..self.resolution)
            .map(|i| self.q.0 + T::from_index(i) * dq)
            .collect();
        if self.q.0 < T::zero() && self.q.1 > T::zero() && !qs.iter().any(|&q| q == T::zero()) {
            let at = qs.partition_point(|&q| q < T::zero());
            qs.insert(at, T::zero());
        }
        qs
    }
}

/// Zeros of `J` along every ray of the window: sign-change scan in `t`, bisection per
/// bracket, classification and clustering into curves. An empty window gives an
/// empty list.
pub fn find_caustics<T: Real>(
    mu: T,
    window: CausticWindow<T>,
    flow: RayFlow,
) -> Result<Vec<CausticPoint<T>>> {
    window.check()?;
    let (_, dt) = window.cells();
    let ts: Vec<T> = (0..window.resolution)
        .map(|i| window.t.0 + T::from_index(i) * dt)
        .collect();
    let qs = window.launch_points();
    let rows: Vec<Vec<CausticPoint<T>>> = qs
        .par_iter()
        .map(|&q| -> Result<Vec<CausticPoint<T>>> {
            let js: Vec<T> = ts
                .iter()
                .map(|&t| ray_jacobian(q, t, mu, flow))
                .collect::<Result<_>>()?;
            let mut found = Vec::new();
            for i in 0..ts.len() - 1 {
                let (ja, jb) = (js[i], js[i + 1]);
                let t = if ja == T::zero() {
                    ts[i]
                } else if ja * jb < T::zero() {
                    bisect(|t| ray_jacobian(q, t, mu, flow), ts[i], ts[i + 1], ja)?
                } else {
                    continue;
                };
                found.push(classify(q, t, mu, flow)?);
            }
            if js[js.len() - 1] == T::zero() {
                found.push(classify(q, ts[ts.len() - 1], mu, flow)?);
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    let mut points: Vec<CausticPoint<T>> = rows.into_iter().flatten().collect();
    cluster(&mut points, window.cells());
    Ok(points)
}

fn bisect<T: Real, F: Fn(T) -> Result<T>>(f: F, mut a: T, mut b: T, mut fa: T) -> Result<T> {
    // Bisect down to the bracket width the arithmetic supports, then accept the root
    // only if the Jacobian there is below the caustic tolerance.
    let width = T::lit(BRACKET_TOL);
    let mut best = (a, fa.mag());
    for _ in 0..BISECTION_MAX {
        let m = (a + b) * T::half();
        let fm = f(m)?;
        if fm.mag() < best.1 {
            best = (m, fm.mag());
        }
        if fm == T::zero() || b - a <= width * (T::one() + m.mag()) {
            break;
        }
        if (fa < T::zero()) == (fm < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    if best.1 <= T::lit(CAUSTIC_TOL) {
        Ok(best.0)
    } else {
        Err(Error::Numeric(format!(
            "Jacobian root near t = {} not resolved: |J| = {:e}",
            best.0, best.1
        )))
    }
}

fn classify<T: Real>(q: T, t: T, mu: T, flow: RayFlow) -> Result<CausticPoint<T>> {
    let x = ray_position(q, t, mu, flow)?;
    let kind = if flow == RayFlow::Harmonic {
        CausticKind::Focal
    } else if jacobian_slope(q, t, mu, flow)?.mag() >= T::lit(BEAK_TOL) {
        CausticKind::Fold
    } else {
        let d = T::lit(FOCAL_PROBE);
        let tol = T::lit(CAUSTIC_TOL);
        if ray_jacobian(q - d, t, mu, flow)?.mag() <= tol
            && ray_jacobian(q + d, t, mu, flow)?.mag() <= tol
        {
            CausticKind::Focal
        } else {
            CausticKind::CuspBeak
        }
    };
    Ok(CausticPoint {
        x,
        t,
        q,
        kind,
        curve: 0,
    })
}

/// Single-linkage clustering with a box of `CLUSTER_CELLS` cells.
fn cluster<T: Real>(points: &mut [CausticPoint<T>], (dq, dt): (T, T)) {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let (rq, rt) = (dq * T::lit(CLUSTER_CELLS), dt * T::lit(CLUSTER_CELLS));
    for i in 0..n {
        for j in i + 1..n {
            if (points[i].q - points[j].q).mag() <= rq && (points[i].t - points[j].t).mag() <= rt {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut labels = BTreeMap::new();
    for (i, p) in points.iter_mut().enumerate() {
        let r = root(&mut parent, i);
        let next = labels.len();
        p.curve = *labels.entry(r).or_insert(next);
    }
}

/// Number of distinct curves in a clustered caustic set.
pub fn curve_count<T>(points: &[CausticPoint<T>]) -> usize {
    points.iter().map(|p| p.curve + 1).max().unwrap_or(0)
}

/// Symmetric Hausdorff distance between two caustic sets in the `(x, t)` plane;
/// infinite when exactly one set is empty.
pub fn hausdorff_distance<T: Real>(a: &[CausticPoint<T>], b: &[CausticPoint<T>]) -> T {
    if a.is_empty() && b.is_empty() {
        return T::zero();
    }
    if a.is_empty() || b.is_empty() {
        return T::infinity();
    }
    let directed = |from: &[CausticPoint<T>], to: &[CausticPoint<T>]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|r| (p.x - r.x).hypot(p.t - r.t))
                    .fold(T::infinity(), T::min)
            })
            .fold(T::zero(), T::max)
    };
    directed(a, b).max(directed(b, a))
}

/// One sample `(q, t, x̃, J)` of the ray field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RaySample<T> {
    pub q: T,
    pub t: T,
    pub x: T,
    pub jacobian: T,
}

/// Ray positions and Jacobians on the tensor grid `qs × ts`.
pub fn sample_rays<T: Real>(mu: T, qs: &[T], ts: &[T], flow: RayFlow) -> Result<Vec<RaySample<T>>> {
    let rows: Vec<Vec<RaySample<T>>> = qs
        .par_iter()
        .map(|&q| {
            ts.iter()
                .map(|&t| {
                    Ok(RaySample {
                        q,
                        t,
                        x: ray_position(q, t, mu, flow)?,
                        jacobian: ray_jacobian(q, t, mu, flow)?,
                    })
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_rays_csv<T: Real, W: Write>(samples: &[RaySample<T>], mut w: W) -> Result<()> {
    writeln!(w, "q,t,x,J")?;
    for s in samples {
        writeln!(w, "{:e},{:e},{:e},{:e}", s.q, s.t, s.x, s.jacobian)?;
    }
    Ok(())
}

pub fn write_caustics_csv<T: Real, W: Write>(points: &[CausticPoint<T>], mut w: W) -> Result<()> {
    writeln!(w, "x,t,kind")?;
    for p in points {
        writeln!(w, "{:e},{:e},{}", p.x, p.t, p.kind)?;
    }
    Ok(())
}
