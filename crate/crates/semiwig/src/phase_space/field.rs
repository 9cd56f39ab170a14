use crate::error::{Error, Result};
use crate::phase_space::{Axis, PhaseGrid};
use crate::scalar::{creal, Complex, Real};

/// Complex samples on a 1-D axis.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField<T> {
    pub axis: Axis<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> ComplexField<T> {
    pub fn new(axis: Axis<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != axis.n {
            return Err(Error::Config(format!(
                "{} samples for an axis of {}",
                values.len(),
                axis.n
            )));
        }
        Ok(Self { axis, values })
    }

    pub fn zeros(axis: Axis<T>) -> Self {
        Self {
            axis,
            values: vec![Complex::new(T::zero(), T::zero()); axis.n],
        }
    }

    pub fn from_fn<F: Fn(T) -> Complex<T>>(axis: Axis<T>, f: F) -> Self {
        Self {
            axis,
            values: axis.points().into_iter().map(f).collect(),
        }
    }

    pub fn from_real_fn<F: Fn(T) -> T>(axis: Axis<T>, f: F) -> Self {
        Self::from_fn(axis, |x| creal(f(x)))
    }

    pub fn norm_sqr(&self) -> T {
        self.values.iter().map(|v| v.norm_sqr()).sum::<T>() * self.axis.step()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// `∫ self · conj(other) dx`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let s: Complex<T> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        s * self.axis.step()
    }

    pub fn distance(&self, other: &Self) -> T {
        let s: T = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (s * self.axis.step()).sqrt()
    }

    /// Largest modulus within `margin` points of either end, relative to the maximum.
    pub fn boundary_ratio(&self, margin: usize) -> T {
        let max = self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max);
        if max == T::zero() {
            return T::zero();
        }
        let n = self.values.len();
        let m = margin.min(n / 2);
        let edge = self.values[..m]
            .iter()
            .chain(&self.values[n - m..])
            .map(|v| v.norm())
            .fold(T::zero(), T::max);
        edge / max
    }
}

/// Diagnostics recorded by the transforms.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FieldDiagnostics<T> {
    /// `max |Im W| / max |W|` for fields expected to be real.
    pub imag_residue: T,
    /// Set when the input did not decay at the grid boundary or the correlation was truncated.
    pub aliasing_warning: bool,
}

/// Samples of a function on a [`PhaseGrid`], stored row-major with `x` outer.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseField<T> {
    pub grid: PhaseGrid<T>,
    pub values: Vec<Complex<T>>,
    pub scaled: bool,
    pub diagnostics: FieldDiagnostics<T>,
}

impl<T: Real> PhaseField<T> {
    pub fn new(grid: PhaseGrid<T>, values: Vec<Complex<T>>, scaled: bool) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            scaled,
            diagnostics: FieldDiagnostics::default(),
        })
    }

    pub fn zeros(grid: PhaseGrid<T>, scaled: bool) -> Self {
        Self {
            grid,
            values: vec![Complex::new(T::zero(), T::zero()); grid.len()],
            scaled,
            diagnostics: FieldDiagnostics::default(),
        }
    }

    pub fn from_fn<F: Fn(T, T) -> Complex<T> + Sync>(
        grid: PhaseGrid<T>,
        scaled: bool,
        f: F,
    ) -> Self {
        use rayon::prelude::*;
        let xs = grid.x.points();
        let ks = grid.k.points();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(xs[i / grid.k.n], ks[i % grid.k.n]))
            .collect();
        Self {
            grid,
            values,
            scaled,
            diagnostics: FieldDiagnostics::default(),
        }
    }

    pub fn from_real_fn<F: Fn(T, T) -> T + Sync>(grid: PhaseGrid<T>, scaled: bool, f: F) -> Self {
        Self::from_fn(grid, scaled, |x, k| creal(f(x, k)))
    }

    #[inline]
    pub fn at(&self, ix: usize, ik: usize) -> Complex<T> {
        self.values[self.grid.index(ix, ik)]
    }

    pub fn real_part(&self) -> Vec<T> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    /// `∫∫ f dx dk` by the periodic rectangle rule.
    pub fn integral(&self) -> Complex<T> {
        let s: Complex<T> = self.values.iter().copied().sum();
        s * self.grid.cell()
    }

    /// `∫∫ self · conj(other)`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let s: Complex<T> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        s * self.grid.cell()
    }

    pub fn l2_norm(&self) -> T {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<T>() * self.grid.cell()).sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        let s: T = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (s * self.grid.cell()).sqrt()
    }

    /// `self += a · other`.
    pub fn axpy(&mut self, a: Complex<T>, other: &Self) {
        for (s, o) in self.values.iter_mut().zip(&other.values) {
            *s = *s + a * o;
        }
    }

    pub fn scaled_by(mut self, a: Complex<T>) -> Self {
        for v in self.values.iter_mut() {
            *v = *v * a;
        }
        self
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v = v.conj();
        }
        out
    }

    /// Radius of the smallest origin-centred disc containing every sample above `rel · max`.
    pub fn support_radius(&self, rel: T) -> T {
        let cut = self.max_abs() * rel;
        let xs = self.grid.x.points();
        let ks = self.grid.k.points();
        let mut r2 = T::zero();
        for (i, v) in self.values.iter().enumerate() {
            if v.norm() > cut {
                let (x, k) = (xs[i / self.grid.k.n], ks[i % self.grid.k.n]);
                r2 = r2.max(x * x + k * k);
            }
        }
        r2.sqrt()
    }

    /// Bounding box `[x_lo, x_hi] × [k_lo, k_hi]` of the samples above `rel · max`.
    pub fn support_box(&self, rel: T) -> Option<(T, T, T, T)> {
        let cut = self.max_abs() * rel;
        let xs = self.grid.x.points();
        let ks = self.grid.k.points();
        let mut b: Option<(T, T, T, T)> = None;
        for (i, v) in self.values.iter().enumerate() {
            if v.norm() > cut {
                let (x, k) = (xs[i / self.grid.k.n], ks[i % self.grid.k.n]);
                b = Some(match b {
                    None => (x, x, k, k),
                    Some((a, bb, c, d)) => (a.min(x), bb.max(x), c.min(k), d.max(k)),
                });
            }
        }
        b
    }

    /// Largest modulus in the outer `margin` rows/columns relative to the maximum.
    pub fn boundary_ratio(&self, margin: usize) -> T {
        let max = self.max_abs();
        if max == T::zero() {
            return T::zero();
        }
        let (nx, nk) = (self.grid.x.n, self.grid.k.n);
        let mut edge = T::zero();
        for ix in 0..nx {
            for ik in 0..nk {
                if ix < margin || ix >= nx - margin || ik < margin || ik >= nk - margin {
                    edge = edge.max(self.at(ix, ik).norm());
                }
            }
        }
        edge / max
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.scaled != other.scaled {
            return Err(Error::Comparability(
                "fields live on different grids".into(),
            ));
        }
        Ok(())
    }
}
