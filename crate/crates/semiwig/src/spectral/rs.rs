use crate::error::{Error, Result};
use crate::phase_space::{Axis, ComplexField};
use crate::scalar::{creal, factorial, Real};
use crate::specfun::hermite_fns;
use crate::spectral::Potential;

/// Rayleigh–Schrödinger data of the `n`-th level of the scaled operator
/// `−∂² + ξ² + Σ_{g≥1} ε^{g/2} (2/(g+2)!) V^{(g+2)}(0) ξ^{g+2}`.
///
/// Index `g` counts powers of `√ε`: `(2/ε)E_n = Σ_g ε^{g/2} energies[g]` and
/// `ε^{1/4}u_n(√ε ξ) = Σ_g ε^{g/2} ψ_n^{(g)}(ξ)`. The wave corrections belong to the
/// unit-norm eigenfunction (not the intermediate normalization) and are stored as
/// Hermite coefficients.
#[derive(Clone, Debug)]
pub struct HarmonicCorrection<T> {
    pub n: usize,
    pub energies: Vec<T>,
    pub coefficients: Vec<Vec<T>>,
}

impl<T: Real> HarmonicCorrection<T> {
    pub fn order(&self) -> usize {
        self.energies.len() - 1
    }

    /// `a_n^{(g)}` (`g ≥ 1`); `g = 0` gives `e_n = 2n + 1`.
    pub fn a(&self, g: usize) -> T {
        self.energies.get(g).copied().unwrap_or_else(T::zero)
    }

    /// Truncated `(2/ε)E_n`.
    pub fn scaled_energy(&self, eps: T, order: usize) -> T {
        let r = eps.sqrt();
        (0..=order.min(self.order()))
            .map(|g| self.energies[g] * r.powi(g as i32))
            .sum()
    }

    /// `ψ_n^{(g)}(ξ)`.
    pub fn wave(&self, g: usize, xi: T) -> Result<T> {
        let c = self.coeffs(g)?;
        let basis = hermite_fns(c.len().saturating_sub(1), xi);
        Ok(c.iter().zip(&basis).map(|(&a, &b)| a * b).sum())
    }

    pub fn wave_field(&self, g: usize, axis: Axis<T>) -> Result<ComplexField<T>> {
        let c = self.coeffs(g)?;
        let vals = axis
            .points()
            .iter()
            .map(|&xi| {
                let basis = hermite_fns(c.len().saturating_sub(1), xi);
                creal(c.iter().zip(&basis).map(|(&a, &b)| a * b).sum())
            })
            .collect();
        ComplexField::new(axis, vals)
    }

    /// `Σ_{g≤order} ε^{g/2} ψ_n^{(g)}` on `axis` (dilated variable).
    pub fn partial_sum(&self, eps: T, order: usize, axis: Axis<T>) -> Result<ComplexField<T>> {
        let mut out = ComplexField::zeros(axis);
        for g in 0..=order {
            let f = self.wave_field(g, axis)?;
            let w = eps.sqrt().powi(g as i32);
            for (o, v) in out.values.iter_mut().zip(&f.values) {
                *o = *o + v * w;
            }
        }
        Ok(out)
    }

    pub fn coeffs(&self, g: usize) -> Result<&[T]> {
        self.coefficients
            .get(g)
            .map(|c| c.as_slice())
            .ok_or_else(|| {
                Error::Dependency(format!(
                    "correction of order {g} not computed (have {})",
                    self.order()
                ))
            })
    }
}

/// `ξ·c` on Hermite coefficients: `ξψ_k = √(k/2)ψ_{k−1} + √((k+1)/2)ψ_{k+1}`.
fn times_xi<T: Real>(c: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); c.len() + 1];
    for (k, &a) in c.iter().enumerate() {
        if a == T::zero() {
            continue;
        }
        let kf = T::from_index(k);
        if k > 0 {
            out[k - 1] = out[k - 1] + a * (kf * T::half()).sqrt();
        }
        out[k + 1] = out[k + 1] + a * ((kf + T::one()) * T::half()).sqrt();
    }
    out
}

fn times_xi_pow<T: Real>(c: &[T], p: usize) -> Vec<T> {
    (0..p).fold(c.to_vec(), |acc, _| times_xi(&acc))
}

fn axpy<T: Real>(acc: &mut Vec<T>, a: T, x: &[T]) {
    if acc.len() < x.len() {
        acc.resize(x.len(), T::zero());
    }
    for (o, &v) in acc.iter_mut().zip(x) {
        *o = *o + a * v;
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Rayleigh–Schrödinger series of level `n` to order `order` in `√ε`, with exact
/// polynomial matrix elements in the Hermite basis.
pub fn harmonic_corrections<T: Real>(
    v: &Potential<T>,
    n: usize,
    order: usize,
) -> Result<HarmonicCorrection<T>> {
    let v2 = v.taylor(2)?;
    if (v2 - T::one()).mag() > T::lit(1e-12) {
        return Err(Error::Config(format!(
            "harmonic approximation assumes V''(0) = 1, got {v2}"
        )));
    }
    // P_g = c_g ξ^{g+2}
    let mut c = vec![T::zero(); order + 1];
    for (g, cg) in c.iter_mut().enumerate().skip(1) {
        *cg = T::two() * v.taylor(g + 2)? / factorial::<T>(g + 2);
    }
    let mut psi: Vec<Vec<T>> = Vec::with_capacity(order + 1);
    let mut unit = vec![T::zero(); n + 1];
    unit[n] = T::one();
    psi.push(unit);
    let mut energies = vec![T::from_index(2 * n + 1)];
    for g in 1..=order {
        let mut forcing: Vec<T> = Vec::new();
        for j in 1..=g {
            if c[j] != T::zero() {
                axpy(&mut forcing, -c[j], &times_xi_pow(&psi[g - j], j + 2));
            }
        }
        let eg = -forcing.get(n).copied().unwrap_or_else(T::zero);
        energies.push(eg);
        for j in 1..g {
            axpy(&mut forcing, energies[j], &psi[g - j]);
        }
        let next: Vec<T> = forcing
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                if k == n {
                    T::zero()
                } else {
                    r / (T::two() * (T::from_index(k) - T::from_index(n)))
                }
            })
            .collect();
        psi.push(next);
    }
    // unit norm: multiply by the series of S^{-1/2}, S(λ) = Σ λ^{a+b}⟨ψ^{(a)},ψ^{(b)}⟩
    let s: Vec<T> = (0..=order)
        .map(|g| (0..=g).map(|a| dot(&psi[a], &psi[g - a])).sum())
        .collect();
    let alpha = -T::half();
    let mut f = vec![T::one()];
    for g in 1..=order {
        let mut acc = T::zero();
        for j in 1..=g {
            acc =
                acc + ((alpha + T::one()) * T::from_index(j) - T::from_index(g)) * s[j] * f[g - j];
        }
        f.push(acc / T::from_index(g));
    }
    let mut coefficients = Vec::with_capacity(order + 1);
    for g in 0..=order {
        let mut acc = Vec::new();
        for j in 0..=g {
            axpy(&mut acc, f[j], &psi[g - j]);
        }
        while acc.len() > n + 1 && acc.last() == Some(&T::zero()) {
            acc.pop();
        }
        coefficients.push(acc);
    }
    Ok(HarmonicCorrection {
        n,
        energies,
        coefficients,
    })
}
