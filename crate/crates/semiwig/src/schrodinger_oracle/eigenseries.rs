use crate::error::{Error, Result};
use crate::phase_space::ComplexField;
use crate::scalar::{cis, Complex, Real};
use crate::spectral::EigenPair;

/// Allowed fraction of `‖ψ_0‖²` outside the retained eigenfunctions.
pub const TAIL_TOL: f64 = 1e-8;

/// `A_{0,n} = ∫ ū_n ψ_0 dx` for each eigenpair.
pub fn project<T: Real>(psi0: &ComplexField<T>, pairs: &[EigenPair<T>]) -> Result<Vec<Complex<T>>> {
    pairs
        .iter()
        .map(|p| {
            if p.u.axis != psi0.axis {
                return Err(Error::Config(
                    "eigenfunctions live on a different axis".into(),
                ));
            }
            Ok(psi0.inner(&p.u))
        })
        .collect()
}

/// `1 − Σ|A_{0,n}|² / ‖ψ_0‖²`.
pub fn tail_mass<T: Real>(psi0: &ComplexField<T>, coeffs: &[Complex<T>]) -> T {
    let kept: T = coeffs.iter().map(|c| c.norm_sqr()).sum();
    (T::one() - kept / psi0.norm_sqr()).max(T::zero())
}

/// `ψ(t) = Σ A_{0,n} u_n e^{−iE_n t/ε}`.
pub fn eigenseries_evolve<T: Real>(
    psi0: &ComplexField<T>,
    pairs: &[EigenPair<T>],
    eps: T,
    t: T,
) -> Result<ComplexField<T>> {
    let coeffs = project(psi0, pairs)?;
    let tail = tail_mass(psi0, &coeffs);
    if tail > T::lit(TAIL_TOL) {
        return Err(Error::Truncation {
            tail_mass: tail.as_f64(),
            tolerance: TAIL_TOL,
        });
    }
    let mut out = ComplexField::zeros(psi0.axis);
    for (p, a) in pairs.iter().zip(&coeffs) {
        let c = a * cis(-p.energy * t / eps);
        for (o, u) in out.values.iter_mut().zip(&p.u.values) {
            *o = *o + u * c;
        }
    }
    Ok(out)
}

/// `A_nm(t) = A_{0,n} Ā_{0,m} e^{−i(E_n−E_m)t/ε}`, the coefficients of `W^ε(t)` in the
/// Moyal eigenfunctions `W^ε[u_n, u_m]`.
pub fn wigner_coefficients<T: Real>(
    coeffs: &[Complex<T>],
    pairs: &[EigenPair<T>],
    eps: T,
    t: T,
) -> Vec<Vec<Complex<T>>> {
    coeffs
        .iter()
        .zip(pairs)
        .map(|(an, pn)| {
            coeffs
                .iter()
                .zip(pairs)
                .map(|(am, pm)| an * am.conj() * cis(-(pn.energy - pm.energy) * t / eps))
                .collect()
        })
        .collect()
}
