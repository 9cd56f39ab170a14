//! Spectral (FFT) operations on periodic grids.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::phase_space::{Axis, PhaseField};
use crate::scalar::{cis, creal, Complex, Real};

/// Energy fraction of a differentiated field allowed above half the Nyquist wavenumber.
pub const RESOLUTION_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct Plan<T: Real> {
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    n: usize,
}

impl<T: Real> Plan<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            n,
        }
    }

    pub fn forward(&self, buf: &mut [Complex<T>]) {
        self.fwd.process(buf);
    }

    /// Inverse transform including the `1/n` factor.
    pub fn inverse(&self, buf: &mut [Complex<T>]) {
        self.inv.process(buf);
        let s = T::one() / T::from_index(self.n);
        for v in buf.iter_mut() {
            *v = *v * s;
        }
    }
}

/// Multiplier for the `r`-th derivative; the Nyquist mode is dropped for odd `r`.
pub fn derivative_symbol<T: Real>(axis: &Axis<T>, order: usize) -> Vec<Complex<T>> {
    let kap = axis.wavenumbers();
    let nyq = axis.n / 2;
    kap.iter()
        .enumerate()
        .map(|(j, &k)| {
            if order == 0 {
                creal(T::one())
            } else if j == nyq && order % 2 == 1 {
                creal(T::zero())
            } else {
                Complex::new(T::zero(), k).powu(order as u32)
            }
        })
        .collect()
}

/// Multiplier turning samples of `f(x)` into samples of `f(x + d)`.
pub fn shift_symbol<T: Real>(axis: &Axis<T>, d: T) -> Vec<Complex<T>> {
    let kap = axis.wavenumbers();
    let nyq = axis.n / 2;
    kap.iter()
        .enumerate()
        .map(|(j, &k)| {
            if j == nyq {
                creal((k * d).cos())
            } else {
                cis(k * d)
            }
        })
        .collect()
}

/// Applies `f(row_index, spectrum)` to the FFT of every `x`-row (i.e. along `k`).
pub fn along_k<T: Real, F>(values: &mut [Complex<T>], nx: usize, nk: usize, f: F)
where
    F: Fn(usize, &mut [Complex<T>]) + Sync,
{
    let plan = Plan::<T>::new(nk);
    values
        .par_chunks_mut(nk)
        .enumerate()
        .take(nx)
        .for_each(|(ix, row)| {
            plan.forward(row);
            f(ix, row);
            plan.inverse(row);
        });
}

/// Applies `f(column_index, spectrum)` to the FFT of every `k`-column (i.e. along `x`).
pub fn along_x<T: Real, F>(values: &mut [Complex<T>], nx: usize, nk: usize, f: F)
where
    F: Fn(usize, &mut [Complex<T>]) + Sync,
{
    let mut t = transpose(values, nx, nk);
    along_k(&mut t, nk, nx, f);
    let back = transpose(&t, nk, nx);
    values.copy_from_slice(&back);
}

pub fn transpose<T: Copy + Send + Sync>(v: &[T], rows: usize, cols: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(v.len());
    for c in 0..cols {
        for r in 0..rows {
            out.push(v[r * cols + c]);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    X,
    K,
}

/// Spectral `∂^order` of a phase field along one axis.
pub fn derivative<T: Real>(field: &PhaseField<T>, dir: Direction, order: usize) -> PhaseField<T> {
    let mut out = field.clone();
    let (nx, nk) = (field.grid.x.n, field.grid.k.n);
    match dir {
        Direction::K => {
            let sym = derivative_symbol(&field.grid.k, order);
            along_k(&mut out.values, nx, nk, |_, s| mul_in_place(s, &sym));
        }
        Direction::X => {
            let sym = derivative_symbol(&field.grid.x, order);
            along_x(&mut out.values, nx, nk, |_, s| mul_in_place(s, &sym));
        }
    }
    out
}

fn mul_in_place<T: Real>(s: &mut [Complex<T>], sym: &[Complex<T>]) {
    for (v, m) in s.iter_mut().zip(sym) {
        *v = *v * m;
    }
}

/// Fails when the `order`-th derivative along `dir` has more than [`RESOLUTION_TOL`]
/// of its spectral energy above half the Nyquist wavenumber.
pub fn check_resolution<T: Real>(
    field: &PhaseField<T>,
    dir: Direction,
    order: usize,
) -> Result<()> {
    let (nx, nk) = (field.grid.x.n, field.grid.k.n);
    let (axis, data, rows, len) = match dir {
        Direction::K => (field.grid.k, field.values.clone(), nx, nk),
        Direction::X => (field.grid.x, transpose(&field.values, nx, nk), nk, nx),
    };
    let kap = axis.wavenumbers();
    let cut = kap[len / 2].mag() * T::half();
    let plan = Plan::<T>::new(len);
    let (mut tail, mut total) = (T::zero(), T::zero());
    let mut buf = vec![creal(T::zero()); len];
    for r in 0..rows {
        buf.copy_from_slice(&data[r * len..(r + 1) * len]);
        plan.forward(&mut buf);
        for (v, &k) in buf.iter().zip(&kap) {
            let e = v.norm_sqr() * k.mag().max(T::one()).powi(2 * order as i32);
            total = total + e;
            if k.mag() > cut {
                tail = tail + e;
            }
        }
    }
    if total > T::zero() && tail / total > T::lit(RESOLUTION_TOL) {
        return Err(Error::Resolution(format!(
            "order-{order} derivative along {dir:?} is unresolved: spectral tail fraction {:e}",
            (tail / total).as_f64()
        )));
    }
    Ok(())
}

/// `G(x, k) = F(x + a·k, k)`.
pub fn shear_x<T: Real>(field: &PhaseField<T>, a: T) -> PhaseField<T> {
    let mut out = field.clone();
    let (nx, nk) = (field.grid.x.n, field.grid.k.n);
    let ks = field.grid.k.points();
    let kap = field.grid.x.wavenumbers();
    let nyq = nx / 2;
    along_x(&mut out.values, nx, nk, |ik, s| {
        let d = a * ks[ik];
        for (j, v) in s.iter_mut().enumerate() {
            *v = *v
                * if j == nyq {
                    creal((kap[j] * d).cos())
                } else {
                    cis(kap[j] * d)
                };
        }
    });
    out
}

/// `G(x, k) = F(x, k + b·x)`.
pub fn shear_k<T: Real>(field: &PhaseField<T>, b: T) -> PhaseField<T> {
    let mut out = field.clone();
    let (nx, nk) = (field.grid.x.n, field.grid.k.n);
    let xs = field.grid.x.points();
    let kap = field.grid.k.wavenumbers();
    let nyq = nk / 2;
    along_k(&mut out.values, nx, nk, |ix, s| {
        let d = b * xs[ix];
        for (j, v) in s.iter_mut().enumerate() {
            *v = *v
                * if j == nyq {
                    creal((kap[j] * d).cos())
                } else {
                    cis(kap[j] * d)
                };
        }
    });
    out
}

/// `G(z) = F(R(π/2) z) = F(-k, x)` on a rotatable grid.
fn quarter_turn<T: Real>(field: &PhaseField<T>) -> PhaseField<T> {
    let n = field.grid.x.n;
    let mut out = field.clone();
    for i in 0..n {
        for j in 0..n {
            out.values[i * n + j] = field.values[((n - j) % n) * n + i];
        }
    }
    out
}

/// `G(z) = F(R(θ) z)` with `R(θ)` the counter-clockwise rotation, by exact quarter
/// turns followed by a three-shear rotation through at most π/4.
pub fn compose_rotation<T: Real>(field: &PhaseField<T>, theta: T) -> Result<PhaseField<T>> {
    if !field.grid.is_rotatable() {
        return Err(Error::Config(
            "rotation needs a square symmetric grid".into(),
        ));
    }
    let quarter = T::FRAC_PI_2();
    let q = (theta / quarter).round();
    let r = theta - q * quarter;
    let turns = q.to_i64().unwrap_or(0).rem_euclid(4);
    let mut g = field.clone();
    for _ in 0..turns {
        g = quarter_turn(&g);
    }
    if r != T::zero() {
        let a = -(r * T::half()).tan();
        let b = r.sin();
        g = shear_x(&g, a);
        g = shear_k(&g, b);
        g = shear_x(&g, a);
    }
    g.diagnostics = field.diagnostics;
    Ok(g)
}

/// Band-limited interpolation weights of a periodic axis at an arbitrary point.
/// Points outside `[min, max)` receive zero weights.
pub fn trig_weights<T: Real>(axis: &Axis<T>, t: T) -> Vec<T> {
    let n = axis.n;
    let mut w = vec![T::zero(); n];
    if !axis.contains(t) {
        return w;
    }
    let h = axis.step();
    let l = axis.length();
    let r = (t - axis.min) / h;
    let ri = r.round();
    if (r - ri).mag() < T::lit(1e-13) {
        let i = ri.to_usize().unwrap_or(0) % n;
        w[i] = T::one();
        return w;
    }
    let nf = T::from_index(n);
    for (j, wj) in w.iter_mut().enumerate() {
        let u = t - axis.point(j);
        *wj = (T::PI() * u / h).sin() / (nf * (T::PI() * u / l).tan());
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::PhaseGrid;

    fn gauss(x: f64, k: f64) -> f64 {
        (-(x - 0.7).powi(2) - 2.0 * (k + 0.3).powi(2)).exp()
    }

    #[test]
    fn derivatives() {
        let g = PhaseGrid::square(8.0, 128, 1.0).unwrap();
        let f = PhaseField::from_real_fn(g, true, gauss);
        let d = derivative(&f, Direction::K, 1);
        let exact = PhaseField::from_real_fn(g, true, |x, k| -4.0 * (k + 0.3) * gauss(x, k));
        assert!(d.distance(&exact) < 1e-10);
        let d = derivative(&f, Direction::X, 2);
        let exact = PhaseField::from_real_fn(g, true, |x, k| {
            (4.0 * (x - 0.7).powi(2) - 2.0) * gauss(x, k)
        });
        assert!(d.distance(&exact) < 1e-10);
        check_resolution(&f, Direction::K, 3).unwrap();
    }

    #[test]
    fn unresolved_field_is_rejected() {
        let g = PhaseGrid::square(8.0, 32, 1.0).unwrap();
        let f = PhaseField::from_real_fn(g, true, |x: f64, k: f64| (-(x * x) - 25.0 * k * k).exp());
        assert!(matches!(
            check_resolution(&f, Direction::K, 3),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn rotation_matches_analytic() {
        let g = PhaseGrid::square(8.0, 128, 1.0).unwrap();
        let f = PhaseField::from_real_fn(g, true, gauss);
        for &th in &[0.3, 1.0, 2.4, -0.8, 5.5] {
            let r = compose_rotation(&f, th).unwrap();
            let (c, s) = (f64::cos(th), f64::sin(th));
            let exact =
                PhaseField::from_real_fn(g, true, |x, k| gauss(c * x - s * k, s * x + c * k));
            assert!(r.distance(&exact) < 1e-10, "θ={th} {}", r.distance(&exact));
        }
    }

    #[test]
    fn trig_interpolation() {
        let a = Axis::symmetric(10.0f64, 64).unwrap();
        let f: Vec<f64> = a.points().iter().map(|&x| (-x * x / 2.0).exp()).collect();
        for &t in &[0.0, 0.13, -2.71, 3.3333] {
            let w = trig_weights(&a, t);
            let v: f64 = w.iter().zip(&f).map(|(a, b)| a * b).sum();
            assert!((v - (-t * t / 2.0f64).exp()).abs() < 1e-12);
        }
    }
}
