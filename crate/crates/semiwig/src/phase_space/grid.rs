use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform periodic axis: points `min + i·(max − min)/n`, `i < n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis<T> {
    pub min: T,
    pub max: T,
    pub n: usize,
}

impl<T: Real> Axis<T> {
    pub fn new(min: T, max: T, n: usize) -> Result<Self> {
        if !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::Config(format!(
                "axis bounds [{min}, {max}] are not increasing"
            )));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "axis size {n} must be a power of two ≥ 8"
            )));
        }
        Ok(Self { min, max, n })
    }

    /// Axis `[-half, half)`, which is closed under negation modulo the period and contains 0.
    pub fn symmetric(half: T, n: usize) -> Result<Self> {
        Self::new(-half, half, n)
    }

    #[inline]
    pub fn length(&self) -> T {
        self.max - self.min
    }

    #[inline]
    pub fn step(&self) -> T {
        self.length() / T::from_index(self.n)
    }

    #[inline]
    pub fn point(&self, i: usize) -> T {
        self.min + T::from_index(i) * self.step()
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    pub fn contains(&self, v: T) -> bool {
        v >= self.min && v < self.max
    }

    /// Index of a point lying on the axis (within a small fraction of a step).
    pub fn index_of(&self, v: T) -> Option<usize> {
        let r = (v - self.min) / self.step();
        let i = r.round();
        if (r - i).mag() < T::lit(1e-9) && i >= T::zero() && i < T::from_index(self.n) {
            i.to_usize()
        } else {
            None
        }
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<T> {
        let n = self.n;
        let dk = T::two() * T::PI() / self.length();
        (0..n)
            .map(|j| {
                let s = if j < n / 2 {
                    j as f64
                } else {
                    j as f64 - n as f64
                };
                T::lit(s) * dk
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (self.min + self.max).mag() <= T::lit(1e-12) * self.length()
    }
}

/// Tensor grid on `(x, k)` or, for dilated fields, `(ξ, η)`; carries ε.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid<T> {
    pub x: Axis<T>,
    pub k: Axis<T>,
    pub eps: T,
}

impl<T: Real> PhaseGrid<T> {
    pub fn new(x: Axis<T>, k: Axis<T>, eps: T) -> Result<Self> {
        if !(eps > T::zero()) || !eps.is_finite() {
            return Err(Error::Config(format!("ε must be positive, got {eps}")));
        }
        Ok(Self { x, k, eps })
    }

    /// Square grid `[-half, half)²` with `n` points per axis.
    pub fn square(half: T, n: usize, eps: T) -> Result<Self> {
        let a = Axis::symmetric(half, n)?;
        Self::new(a, a, eps)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.x.n * self.k.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn cell(&self) -> T {
        self.x.step() * self.k.step()
    }

    #[inline]
    pub fn index(&self, ix: usize, ik: usize) -> usize {
        ix * self.k.n + ik
    }

    pub fn with_eps(&self, eps: T) -> Self {
        Self { eps, ..*self }
    }

    /// Square, symmetric and identical axes: required by exact quarter turns.
    pub fn is_rotatable(&self) -> bool {
        self.x == self.k && self.x.is_symmetric()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Axis::new(0.0, 1.0, 12).is_err());
        assert!(Axis::new(0.0, 1.0, 4).is_err());
        assert!(Axis::new(1.0, 0.0, 16).is_err());
        assert!(PhaseGrid::square(1.0, 16, 0.0).is_err());
        let a = Axis::symmetric(2.0f64, 16).unwrap();
        assert_eq!(a.index_of(0.0), Some(8));
        assert_eq!(a.point(0), -2.0);
        assert!(a.is_symmetric());
        let w = a.wavenumbers();
        assert_eq!(w[1], std::f64::consts::PI / 2.0);
        assert_eq!(w[8], -8.0 * std::f64::consts::PI / 2.0);
    }
}
