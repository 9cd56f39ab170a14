use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::Potential;

/// Default symplectic step.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Allowed Hamiltonian drift relative to `1 + |H|`.
pub const ENERGY_TOL: f64 = 1e-8;
/// Largest admissible `|t|/h`.
pub const MAX_STEPS: f64 = 1e7;

/// `H(q, p) = p²/2 + V(q)`.
pub fn hamiltonian<T: Real>(v: &Potential<T>, q: T, p: T) -> T {
    p * p * T::half() + v.value(q)
}

fn force<T: Real>(v: &Potential<T>, q: T) -> T {
    -v.derivative(q, 1).unwrap_or_else(|_| T::nan())
}

/// Fourth-order Yoshida composition of the velocity Verlet step.
fn yoshida_step<T: Real>(v: &Potential<T>, q: &mut T, p: &mut T, h: T) {
    let c = T::two().cbrt();
    let w1 = T::one() / (T::two() - c);
    let w0 = -c * w1;
    for w in [w1, w0, w1] {
        let dt = w * h;
        *p = *p + force(v, *q) * dt * T::half();
        *q = *q + *p * dt;
        *p = *p + force(v, *q) * dt * T::half();
    }
}

fn step_count<T: Real>(t: T, h: T) -> Result<usize> {
    if !(h > T::zero()) {
        return Err(Error::Config(format!(
            "integration step must be positive, got {h}"
        )));
    }
    let ratio = t.mag() / h;
    if ratio > T::lit(MAX_STEPS) {
        return Err(Error::Config(format!(
            "|t|/h = {ratio} exceeds {MAX_STEPS:e}"
        )));
    }
    Ok(ratio.ceil().to_usize().unwrap_or(0))
}

fn drift_check<T: Real>(v: &Potential<T>, h0: T, q: T, p: T, h: T) -> Result<()> {
    let h1 = hamiltonian(v, q, p);
    let drift = (h1 - h0).mag() / (T::one() + h0.mag());
    if !drift.is_finite() || drift > T::lit(ENERGY_TOL) {
        // fourth order: the drift scales like h⁴
        let shrink = if drift.is_finite() && drift > T::zero() {
            (T::lit(ENERGY_TOL) / drift).powf(T::lit(0.25)) * T::half()
        } else {
            T::lit(0.1)
        };
        return Err(Error::Accuracy {
            message: format!("energy drift {drift:e} exceeds {ENERGY_TOL:e}"),
            suggested_step: (h * shrink).as_f64(),
        });
    }
    Ok(())
}

/// `g^t(q, p)` for `q' = p`, `p' = −V'(q)`; negative `t` runs the flow backwards.
pub fn integrate_flow<T: Real>(v: &Potential<T>, q: T, p: T, t: T, h: T) -> Result<(T, T)> {
    let n = step_count(t, h)?;
    if n == 0 {
        return Ok((q, p));
    }
    let dt = t / T::from_index(n);
    let h0 = hamiltonian(v, q, p);
    let (mut a, mut b) = (q, p);
    for _ in 0..n {
        yoshida_step(v, &mut a, &mut b, dt);
    }
    drift_check(v, h0, a, b, h)?;
    Ok((a, b))
}

/// One sample of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub t: T,
    pub q: T,
    pub p: T,
    pub energy: T,
}

/// Dense output: the trajectory at `samples + 1` equally spaced times in `[0, t]`.
pub fn integrate_trajectory<T: Real>(
    v: &Potential<T>,
    q: T,
    p: T,
    t: T,
    h: T,
    samples: usize,
) -> Result<Vec<TrajectoryPoint<T>>> {
    if samples == 0 {
        return Err(Error::Config(
            "at least one trajectory interval is required".into(),
        ));
    }
    let mut out = vec![TrajectoryPoint {
        t: T::zero(),
        q,
        p,
        energy: hamiltonian(v, q, p),
    }];
    let dt = t / T::from_index(samples);
    let (mut a, mut b) = (q, p);
    for i in 1..=samples {
        let (na, nb) = integrate_flow(v, a, b, dt, h)?;
        a = na;
        b = nb;
        out.push(TrajectoryPoint {
            t: dt * T::from_index(i),
            q: a,
            p: b,
            energy: hamiltonian(v, a, b),
        });
    }
    Ok(out)
}

/// CSV with header `t,q,p,H`.
pub fn write_trajectory_csv<T: Real, W: Write>(
    points: &[TrajectoryPoint<T>],
    mut w: W,
) -> Result<()> {
    writeln!(w, "t,q,p,H")?;
    for pt in points {
        writeln!(w, "{:e},{:e},{:e},{:e}", pt.t, pt.q, pt.p, pt.energy)?;
    }
    Ok(())
}

/// `g^t` applied to many points in parallel.
pub fn integrate_points<T: Real>(
    v: &Potential<T>,
    points: &[(T, T)],
    t: T,
    h: T,
) -> Result<Vec<(T, T)>> {
    points
        .par_iter()
        .map(|&(q, p)| integrate_flow(v, q, p, t, h))
        .collect()
}
