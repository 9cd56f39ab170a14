//! Evaluation of a periodic band-limited grid field at scattered points: spectral
//! upsampling by a factor of four followed by 12-point Lagrange interpolation.

use rayon::prelude::*;

use crate::fourier::{transpose, Plan};
use crate::phase_space::PhaseField;
use crate::scalar::{creal, Complex, Real};

pub const UPSAMPLE: usize = 4;
pub const STENCIL: usize = 12;

pub struct Upsampled<T: Real> {
    values: Vec<Complex<T>>,
    n: (usize, usize),
    min: (T, T),
    step: (T, T),
    max: (T, T),
}

fn pad<T: Real>(spec: &[Complex<T>], m: usize) -> Vec<Complex<T>> {
    let n = spec.len();
    let mut out = vec![creal(T::zero()); m];
    let h = n / 2;
    out[..h].copy_from_slice(&spec[..h]);
    for j in 1..h {
        out[m - j] = spec[n - j];
    }
    // split the Nyquist mode symmetrically
    out[h] = spec[h] * T::half();
    out[m - h] = spec[h] * T::half();
    out
}

impl<T: Real> Upsampled<T> {
    pub fn new(f: &PhaseField<T>) -> Self {
        let (nx, nk) = (f.grid.x.n, f.grid.k.n);
        let (mx, mk) = (nx * UPSAMPLE, nk * UPSAMPLE);
        let plan_k = Plan::<T>::new(nk);
        let plan_mk = Plan::<T>::new(mk);
        let scale = T::from_index(UPSAMPLE);
        // along k: rows of length nk → mk
        let wide: Vec<Complex<T>> = f
            .values
            .par_chunks(nk)
            .flat_map_iter(|row| {
                let mut buf = row.to_vec();
                plan_k.forward(&mut buf);
                let mut p = pad(&buf, mk);
                plan_mk.inverse(&mut p);
                p.into_iter().map(move |v| v * scale)
            })
            .collect();
        // along x: columns of length nx → mx
        let plan_x = Plan::<T>::new(nx);
        let plan_mx = Plan::<T>::new(mx);
        let cols = transpose(&wide, nx, mk);
        let up_cols: Vec<Complex<T>> = cols
            .par_chunks(nx)
            .flat_map_iter(|col| {
                let mut buf = col.to_vec();
                plan_x.forward(&mut buf);
                let mut p = pad(&buf, mx);
                plan_mx.inverse(&mut p);
                p.into_iter().map(move |v| v * scale)
            })
            .collect();
        let values = transpose(&up_cols, mk, mx);
        let s = T::from_index(UPSAMPLE);
        Self {
            values,
            n: (mx, mk),
            min: (f.grid.x.min, f.grid.k.min),
            step: (f.grid.x.step() / s, f.grid.k.step() / s),
            max: (f.grid.x.max, f.grid.k.max),
        }
    }

    pub fn contains(&self, x: T, k: T) -> bool {
        x >= self.min.0 && x < self.max.0 && k >= self.min.1 && k < self.max.1
    }

    /// Value at `(x, k)`; points outside the periodic box evaluate to zero.
    pub fn eval(&self, x: T, k: T) -> Complex<T> {
        if !self.contains(x, k) {
            return creal(T::zero());
        }
        let (ix, wx) = stencil(x, self.min.0, self.step.0);
        let (ik, wk) = stencil(k, self.min.1, self.step.1);
        let (mx, mk) = self.n;
        let mut acc = creal(T::zero());
        for (a, &cx) in wx.iter().enumerate() {
            if cx == T::zero() {
                continue;
            }
            let r = (ix + a as i64).rem_euclid(mx as i64) as usize;
            let row = &self.values[r * mk..(r + 1) * mk];
            let mut s = creal(T::zero());
            for (b, &ck) in wk.iter().enumerate() {
                let c = (ik + b as i64).rem_euclid(mk as i64) as usize;
                s = s + row[c] * ck;
            }
            acc = acc + s * cx;
        }
        acc
    }
}

/// First node index and the Lagrange weights of the 12 nodes around `v`.
fn stencil<T: Real>(v: T, min: T, h: T) -> (i64, [T; STENCIL]) {
    let r = (v - min) / h;
    let base = r.floor();
    let frac = r - base;
    let first = base.to_i64().unwrap_or(0) - (STENCIL as i64 / 2 - 1);
    let mut w = [T::zero(); STENCIL];
    // node j sits at offset j − 5 relative to `base`
    let offs: Vec<T> = (0..STENCIL)
        .map(|j| T::lit(j as f64 - (STENCIL as f64 / 2.0 - 1.0)))
        .collect();
    if frac == T::zero() {
        w[STENCIL / 2 - 1] = T::one();
        return (first, w);
    }
    for (j, wj) in w.iter_mut().enumerate() {
        let mut num = T::one();
        let mut den = T::one();
        for (i, &o) in offs.iter().enumerate() {
            if i != j {
                num = num * (frac - o);
                den = den * (offs[j] - o);
            }
        }
        *wj = num / den;
    }
    (first, w)
}
