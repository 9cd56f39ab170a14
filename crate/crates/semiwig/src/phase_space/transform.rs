use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{shift_symbol, Plan};
use crate::phase_space::{ComplexField, PhaseField, PhaseGrid};
use crate::scalar::{cis, creal, Complex, Real};

const DECAY_TOL: f64 = 1e-8;

/// Wigner transform `W^ε[ψ](x,k) = (2πε)^{-1} ∫ e^{-ikξ/ε} ψ(x+ξ/2) ψ̄(x−ξ/2) dξ`.
///
/// Evaluated as `(πε)^{-1} ∫ e^{-2iks/ε} ψ(x+s) ψ̄(x−s) ds` (the substitution `ξ = 2s`)
/// by one FFT over `s` per `x`-slice. The returned field is real; the discarded
/// imaginary part is recorded in the diagnostics.
pub fn wigner_transform<T: Real>(
    psi: &ComplexField<T>,
    grid: &PhaseGrid<T>,
) -> Result<PhaseField<T>> {
    realify(transform(psi, psi, grid, grid.eps, false)?)
}

/// Cross-Wigner transform `W^ε[f, g]`; complex in general.
pub fn cross_wigner<T: Real>(
    f: &ComplexField<T>,
    g: &ComplexField<T>,
    grid: &PhaseGrid<T>,
) -> Result<PhaseField<T>> {
    transform(f, g, grid, grid.eps, false)
}

/// Wigner transform with unit semiclassical parameter on a grid in the dilated
/// variables `(ξ, η)`; the result is flagged as scaled.
pub fn wigner_transform_scaled<T: Real>(
    phi: &ComplexField<T>,
    grid: &PhaseGrid<T>,
) -> Result<PhaseField<T>> {
    realify(transform(phi, phi, grid, T::one(), true)?)
}

/// Cross-Wigner transform with unit semiclassical parameter (dilated variables).
pub fn cross_wigner_scaled<T: Real>(
    f: &ComplexField<T>,
    g: &ComplexField<T>,
    grid: &PhaseGrid<T>,
) -> Result<PhaseField<T>> {
    transform(f, g, grid, T::one(), true)
}

fn realify<T: Real>(mut w: PhaseField<T>) -> Result<PhaseField<T>> {
    let max_re = w.values.iter().map(|v| v.re.mag()).fold(T::zero(), T::max);
    let max_im = w.values.iter().map(|v| v.im.mag()).fold(T::zero(), T::max);
    w.diagnostics.imag_residue = if max_re > T::zero() {
        max_im / max_re
    } else {
        T::zero()
    };
    for v in w.values.iter_mut() {
        v.im = T::zero();
    }
    Ok(w)
}

fn transform<T: Real>(
    f: &ComplexField<T>,
    g: &ComplexField<T>,
    grid: &PhaseGrid<T>,
    eps: T,
    scaled: bool,
) -> Result<PhaseField<T>> {
    if f.axis != grid.x || g.axis != grid.x {
        return Err(Error::Config(
            "wavefunction axis differs from the grid's x-axis".into(),
        ));
    }
    let (nx, nk) = (grid.x.n, grid.k.n);
    let m = 2 * nk;
    let dk = grid.k.step();
    let delta = T::PI() * eps / (T::from_index(m) * dk);
    let s_of = |j: usize| -> T {
        let js = if j < m / 2 {
            j as f64
        } else {
            j as f64 - m as f64
        };
        T::lit(js) * delta
    };
    let plan_x = Plan::<T>::new(nx);
    let mut fh = f.values.clone();
    plan_x.forward(&mut fh);
    let mut gh = g.values.clone();
    plan_x.forward(&mut gh);
    let xs = grid.x.points();

    let shifted = |spec: &[Complex<T>], s: T| -> Vec<Complex<T>> {
        let sym = shift_symbol(&grid.x, s);
        let mut buf: Vec<Complex<T>> = spec.iter().zip(&sym).map(|(a, b)| a * b).collect();
        plan_x.inverse(&mut buf);
        for (v, &x) in buf.iter_mut().zip(&xs) {
            if !grid.x.contains(x + s) {
                *v = creal(T::zero());
            }
        }
        buf
    };

    let columns: Vec<Vec<Complex<T>>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let s = s_of(j);
            let fp = shifted(&fh, s);
            let gm = shifted(&gh, -s);
            fp.iter().zip(&gm).map(|(a, b)| a * b.conj()).collect()
        })
        .collect();

    let cmax = columns
        .iter()
        .flat_map(|c| c.iter().map(|v| v.norm()))
        .fold(T::zero(), T::max);
    let edge = columns[m / 2]
        .iter()
        .map(|v| v.norm())
        .fold(T::zero(), T::max);

    let plan_s = Plan::<T>::new(m);
    let pref = delta / (T::PI() * eps);
    let k0 = grid.k.min;
    let phase: Vec<Complex<T>> = (0..m)
        .map(|j| cis(-T::two() * k0 * s_of(j) / eps))
        .collect();
    let rows: Vec<Vec<Complex<T>>> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let mut buf: Vec<Complex<T>> = (0..m).map(|j| columns[j][i] * phase[j]).collect();
            plan_s.forward(&mut buf);
            buf.truncate(nk);
            buf.iter().map(|v| v * pref).collect()
        })
        .collect();

    let mut out = PhaseField::new(*grid, rows.into_iter().flatten().collect(), scaled)?;
    let decay = T::lit(DECAY_TOL);
    out.diagnostics.aliasing_warning = f.boundary_ratio(2) > decay
        || g.boundary_ratio(2) > decay
        || (cmax > T::zero() && edge / cmax > decay);
    Ok(out)
}

/// Pointwise cross-Wigner values `W^ε[f,g](x,k)` at arbitrary points, by the
/// trapezoid rule in `s` with step `h/2` on spectrally shifted samples.
pub fn wigner_at_points<T: Real>(
    f: &ComplexField<T>,
    g: &ComplexField<T>,
    points: &[(T, T)],
    eps: T,
) -> Result<Vec<Complex<T>>> {
    if f.axis != g.axis {
        return Err(Error::Config(
            "cross-Wigner inputs live on different axes".into(),
        ));
    }
    let axis = f.axis;
    let n = axis.n;
    let c = n / 2;
    let h = axis.step();
    let plan = Plan::<T>::new(n);
    let mut fh = f.values.clone();
    plan.forward(&mut fh);
    let mut gh = g.values.clone();
    plan.forward(&mut gh);
    let xs = axis.points();
    let shifted = |spec: &[Complex<T>], s: T| -> Vec<Complex<T>> {
        let sym = shift_symbol(&axis, s);
        let mut buf: Vec<Complex<T>> = spec.iter().zip(&sym).map(|(a, b)| a * b).collect();
        plan.inverse(&mut buf);
        for (v, &x) in buf.iter_mut().zip(&xs) {
            if !axis.contains(x + s) {
                *v = creal(T::zero());
            }
        }
        buf
    };
    let pref = h * T::half() / (T::PI() * eps);
    points
        .par_iter()
        .map(|&(x, k)| {
            let d0 = x - axis.point(c);
            let (f0, f1) = (shifted(&fh, d0), shifted(&fh, d0 + h * T::half()));
            let (g0, g1) = (shifted(&gh, d0), shifted(&gh, d0 + h * T::half()));
            let get = |v: &[Complex<T>], i: i64| -> Complex<T> {
                if i >= 0 && (i as usize) < n {
                    v[i as usize]
                } else {
                    creal(T::zero())
                }
            };
            let ci = c as i64;
            let mut acc = creal(T::zero());
            for a in -(ci)..ci {
                let s_even = T::lit(a as f64) * h;
                acc = acc
                    + get(&f0, ci + a)
                        * get(&g0, ci - a).conj()
                        * cis(-T::two() * k * s_even / eps);
                let s_odd = (T::lit(a as f64) + T::half()) * h;
                acc = acc
                    + get(&f1, ci + a)
                        * get(&g1, ci - a - 1).conj()
                        * cis(-T::two() * k * s_odd / eps);
            }
            Ok(acc * pref)
        })
        .collect()
}
