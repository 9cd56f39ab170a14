use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::fourier::Plan;
use crate::phase_space::{Axis, ComplexField};
use crate::scalar::{creal, Real};
use crate::spectral::Potential;

/// Relative eigen-residual above which a computed pair is rejected.
pub const RESIDUAL_TOL: f64 = 1e-6;
/// Boundary-to-peak ratio above which an eigenfunction is considered truncated by the box.
pub const DECAY_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct EigenPair<T> {
    pub n: usize,
    pub energy: T,
    /// Real-valued, unit `L²` norm, positive on its rightmost lobe.
    pub u: ComplexField<T>,
    /// `‖Ĥu − Eu‖ / |E|`.
    pub residual: T,
}

/// Lowest `n_max + 1` eigenpairs of `Ĥ = −(ε²/2)∂² + V` on the periodic `axis`.
///
/// The Laplacian is the Fourier (sinc-DVR) matrix, so the discretization is
/// spectrally accurate for eigenfunctions that decay inside the box.
pub fn solve_spectrum<T: Real>(
    v: &Potential<T>,
    eps: T,
    n_max: usize,
    axis: Axis<T>,
) -> Result<Vec<EigenPair<T>>> {
    if !(eps > T::zero()) {
        return Err(Error::Config(format!("ε must be positive, got {eps}")));
    }
    let n = axis.n;
    if n_max >= n / 2 {
        return Err(Error::Config(format!(
            "n_max = {n_max} needs more than {n} grid points"
        )));
    }
    let h = axis.step().as_f64();
    let e = eps.as_f64();
    let kap: Vec<f64> = axis.wavenumbers().iter().map(|k| k.as_f64()).collect();
    let row: Vec<f64> = (0..n)
        .map(|d| {
            kap.iter()
                .map(|k| k * k * (k * d as f64 * h).cos())
                .sum::<f64>()
                / n as f64
        })
        .collect();
    let xs = axis.points();
    let mut mat = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            mat[(i, j)] = 0.5 * e * e * row[(i + n - j) % n];
        }
        mat[(i, i)] += v.value(xs[i]).as_f64();
    }
    let eig = SymmetricEigen::new(mat);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let top = eig.eigenvalues[order[n_max]];
    let wavelength = 2.0 * std::f64::consts::PI * e / (2.0 * top.max(f64::MIN_POSITIVE)).sqrt();
    if h * 10.0 > wavelength {
        return Err(Error::Resolution(format!(
            "grid step {h} exceeds a tenth of the de Broglie wavelength {wavelength} at E_{n_max}"
        )));
    }

    let plan = Plan::<T>::new(n);
    let mut pairs = Vec::with_capacity(n_max + 1);
    for (idx, &col) in order.iter().take(n_max + 1).enumerate() {
        let energy = eig.eigenvalues[col];
        let mut u: Vec<f64> = eig
            .eigenvectors
            .column(col)
            .iter()
            .map(|&c| c / h.sqrt())
            .collect();
        orient(&mut u);
        let field = ComplexField::new(axis, u.iter().map(|&c| creal(T::lit(c))).collect())?;
        let residual = residual(&field, T::lit(energy), v, eps, &plan);
        if residual > T::lit(RESIDUAL_TOL) {
            return Err(Error::Numeric(format!(
                "eigenpair {idx} unconverged: relative residual {residual:e}"
            )));
        }
        if field.boundary_ratio(2) > T::lit(DECAY_TOL) {
            return Err(Error::Coverage(format!(
                "eigenfunction {idx} does not decay inside [{}, {})",
                axis.min, axis.max
            )));
        }
        pairs.push(EigenPair {
            n: idx,
            energy: T::lit(energy),
            u: field,
            residual,
        });
    }
    Ok(pairs)
}

/// Sign convention: the outermost lobe on the right is positive.
fn orient(u: &mut [f64]) {
    let peak = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sign = u
        .iter()
        .rev()
        .find(|v| v.abs() >= 1e-3 * peak)
        .map_or(1.0, |v| v.signum());
    if sign < 0.0 {
        u.iter_mut().for_each(|v| *v = -*v);
    }
}

fn residual<T: Real>(
    u: &ComplexField<T>,
    energy: T,
    v: &Potential<T>,
    eps: T,
    plan: &Plan<T>,
) -> T {
    let kap = u.axis.wavenumbers();
    let mut buf = u.values.clone();
    plan.forward(&mut buf);
    for (b, &k) in buf.iter_mut().zip(&kap) {
        *b = *b * (eps * eps * T::half() * k * k);
    }
    plan.inverse(&mut buf);
    let xs = u.axis.points();
    let r: T = buf
        .iter()
        .zip(&u.values)
        .zip(&xs)
        .map(|((hu, &uu), &x)| (*hu + uu * (v.value(x) - energy)).norm_sqr())
        .sum();
    (r * u.axis.step()).sqrt() / energy.mag()
}

/// CSV with columns `n,energy,residual`.
pub fn write_spectrum_csv<T: Real, W: Write>(pairs: &[EigenPair<T>], mut w: W) -> Result<()> {
    writeln!(w, "n,energy,residual")?;
    for p in pairs {
        writeln!(
            w,
            "{},{:e},{:e}",
            p.n,
            p.energy.as_f64(),
            p.residual.as_f64()
        )?;
    }
    Ok(())
}
