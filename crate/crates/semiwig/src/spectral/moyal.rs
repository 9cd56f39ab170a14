use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase_space::{cross_wigner, PhaseField, PhaseGrid};
use crate::scalar::{cplx, Complex, Real};
use crate::specfun::laguerre_fn;
use crate::spectral::{EigenPair, HarmonicCorrection};

/// `Φ_nm = W^ε[u_n, u_m]` with its Liouville and cosine-bracket eigenvalues.
#[derive(Clone, Debug)]
pub struct MoyalFunction<T> {
    pub n: usize,
    pub m: usize,
    pub field: PhaseField<T>,
    /// `(i/ε)(E_n − E_m)`
    pub lambda: Complex<T>,
    /// `(E_n + E_m)/2`
    pub mu: T,
}

pub fn moyal_eigenfunction<T: Real>(
    n: usize,
    m: usize,
    pairs: &[EigenPair<T>],
    grid: &PhaseGrid<T>,
) -> Result<MoyalFunction<T>> {
    let find = |i: usize| {
        pairs
            .iter()
            .find(|p| p.n == i)
            .ok_or_else(|| Error::Dependency(format!("eigenpair {i} not computed")))
    };
    let (un, um) = (find(n)?, find(m)?);
    let field = cross_wigner(&un.u, &um.u, grid)?;
    let eps = grid.eps;
    Ok(MoyalFunction {
        n,
        m,
        field,
        lambda: cplx(T::zero(), (un.energy - um.energy) / eps),
        mu: (un.energy + um.energy) * T::half(),
    })
}

/// Harmonic Moyal function `Ψ_nm(ξ,η) = W[ψ_n, ψ_m](ξ,η)` (unit ε) in closed form:
/// `((−1)^m/π) √(m!/n!) (√2(ξ − iη))^{n−m} e^{−r²} L_m^{n−m}(2r²)` for `n ≥ m`,
/// and the complex conjugate of `Ψ_mn` otherwise.
pub fn harmonic_moyal<T: Real>(n: usize, m: usize, xi: T, eta: T) -> Complex<T> {
    if n < m {
        return harmonic_moyal(m, n, xi, eta).conj();
    }
    let r2 = xi * xi + eta * eta;
    let d = n - m;
    let log_ratio: T = ((m + 1)..=n)
        .map(|j| -T::half() * T::from_index(j).ln())
        .sum();
    let sign = if m.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    };
    let base = cplx(xi, -eta) * T::two().sqrt();
    let lag = laguerre_fn(m, T::from_index(d), T::two() * r2);
    base.powu(d as u32) * (sign / T::PI() * log_ratio.exp() * (-r2).exp() * lag)
}

pub fn harmonic_moyal_field<T: Real>(n: usize, m: usize, grid: &PhaseGrid<T>) -> PhaseField<T> {
    PhaseField::from_fn(*grid, true, |xi, eta| harmonic_moyal(n, m, xi, eta))
}

/// `Z̃_nm^{(l)} = Σ_{μ=0}^{l} W[ψ_n^{(μ)}, ψ_m^{(l−μ)}]` on a scaled grid, by bilinearity
/// over the Hermite coefficients of the corrections.
pub fn moyal_corrector<T: Real>(
    l: usize,
    cn: &HarmonicCorrection<T>,
    cm: &HarmonicCorrection<T>,
    grid: &PhaseGrid<T>,
) -> Result<PhaseField<T>> {
    let mut pairs: Vec<(usize, usize, T)> = Vec::new();
    for mu in 0..=l {
        let a = cn.coeffs(mu)?;
        let b = cm.coeffs(l - mu)?;
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                if ai != T::zero() && bj != T::zero() {
                    match pairs.iter_mut().find(|p| p.0 == i && p.1 == j) {
                        Some(p) => p.2 = p.2 + ai * bj,
                        None => pairs.push((i, j, ai * bj)),
                    }
                }
            }
        }
    }
    let xs = grid.x.points();
    let ks = grid.k.points();
    let nk = grid.k.n;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (xi, eta) = (xs[idx / nk], ks[idx % nk]);
            pairs
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, &(i, j, c)| {
                    acc + harmonic_moyal(i, j, xi, eta) * c
                })
        })
        .collect();
    PhaseField::new(*grid, values, true)
}
