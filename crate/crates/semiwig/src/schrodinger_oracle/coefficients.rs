use crate::error::{Error, Result};
use crate::phase_space::{ComplexField, PhaseField};
use crate::scalar::{cis, cplx, creal, Complex, Real};
use crate::spectral::{harmonic_moyal_field, HarmonicCorrection};

/// Expansion `A_nm(t) ∼ A_h,nm(t) + Σ_j ε^{j/2} Δ_{j,nm}(t)` of the Wigner coefficients
/// for dilated data `φ_0`, indices `0..=n_max`.
#[derive(Clone, Debug)]
pub struct CoefficientExpansion<T> {
    pub eps: T,
    pub t: T,
    /// `A_h,nm(t) = A^{(0)}_{0,n} Ā^{(0)}_{0,m} e^{−i(e_n−e_m)t/2}`.
    pub harmonic: Vec<Vec<Complex<T>>>,
    /// `deltas[j−1][n][m] = Δ_{j,nm}(t)`.
    pub deltas: Vec<Vec<Vec<Complex<T>>>>,
}

impl<T: Real> CoefficientExpansion<T> {
    pub fn order(&self) -> usize {
        self.deltas.len()
    }

    /// `A_h,nm + Σ_{j≤order} ε^{j/2} Δ_{j,nm}`.
    pub fn partial_sum(&self, order: usize) -> Result<Vec<Vec<Complex<T>>>> {
        if order > self.order() {
            return Err(Error::Dependency(format!(
                "expansion holds Δ up to {}, asked for {order}",
                self.order()
            )));
        }
        let r = self.eps.sqrt();
        let mut out = self.harmonic.clone();
        for (j, d) in self.deltas.iter().enumerate().take(order) {
            let w = r.powi(j as i32 + 1);
            for (row, drow) in out.iter_mut().zip(d) {
                for (o, v) in row.iter_mut().zip(drow) {
                    *o = *o + v * w;
                }
            }
        }
        Ok(out)
    }
}

/// Builds `A_h,nm` and `Δ_{j,nm}` up to `order` from the Rayleigh–Schrödinger data.
///
/// With `p_n^{(g)} = ∫ ψ_n^{(g)} φ_0 dξ`, `c^{(j)}_nm = Σ_μ p_n^{(μ)} p̄_m^{(j−μ)}` and
/// `exp(−(it/2) Σ_{g≥1} ε^{g/2}(a_n^{(g)} − a_m^{(g)})) = Σ_j ε^{j/2} q_j`,
/// `Δ_{j,nm} = e^{−i(e_n−e_m)t/2} Σ_{i≤j} c^{(i)} q_{j−i}`. In particular `Δ_{2,nm}` carries
/// the secular term `−(it/2)(a_n^{(2)} − a_m^{(2)}) A_h,nm` in the `√ε`-power indexing of
/// [`HarmonicCorrection`].
pub fn coefficient_expansion<T: Real>(
    phi0: &ComplexField<T>,
    corrections: &[HarmonicCorrection<T>],
    eps: T,
    t: T,
    order: usize,
) -> Result<CoefficientExpansion<T>> {
    for (idx, c) in corrections.iter().enumerate() {
        if c.n != idx {
            return Err(Error::Config(
                "corrections must be indexed 0, 1, 2, …".into(),
            ));
        }
        if c.order() < order {
            return Err(Error::Dependency(format!(
                "level {idx} carries corrections to order {}, {order} requested",
                c.order()
            )));
        }
    }
    let p: Vec<Vec<Complex<T>>> = corrections
        .iter()
        .map(|c| {
            (0..=order)
                .map(|g| Ok(phi0.inner(&c.wave_field(g, phi0.axis)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let nn = corrections.len();
    let zero = creal(T::zero());
    let mut harmonic = vec![vec![zero; nn]; nn];
    let mut deltas = vec![vec![vec![zero; nn]; nn]; order];
    for n in 0..nn {
        for m in 0..nn {
            let (cn, cm) = (&corrections[n], &corrections[m]);
            let c: Vec<Complex<T>> = (0..=order)
                .map(|j| (0..=j).map(|mu| p[n][mu] * p[m][j - mu].conj()).sum())
                .collect();
            // q_j from q' = s' q with s_k = −(it/2)(a_n^{(k)} − a_m^{(k)})
            let s: Vec<Complex<T>> = (0..=order)
                .map(|k| {
                    if k == 0 {
                        zero
                    } else {
                        cplx(T::zero(), -t * T::half() * (cn.a(k) - cm.a(k)))
                    }
                })
                .collect();
            let mut q = vec![creal(T::one())];
            for j in 1..=order {
                let acc: Complex<T> = (1..=j).map(|k| s[k] * q[j - k] * T::from_index(k)).sum();
                q.push(acc / T::from_index(j));
            }
            let e0 = T::from_index(2 * n + 1) - T::from_index(2 * m + 1);
            let phase0 = cis(-e0 * t * T::half());
            harmonic[n][m] = phase0 * c[0];
            for j in 1..=order {
                let v: Complex<T> = (0..=j).map(|i| c[i] * q[j - i]).sum();
                deltas[j - 1][n][m] = phase0 * v;
            }
        }
    }
    Ok(CoefficientExpansion {
        eps,
        t,
        harmonic,
        deltas,
    })
}

/// `A_h,nm(t) = 2π (W̃_0, Ψ_nm) e^{−i(e_n−e_m)t/2}` by phase-space projection of a dilated
/// initial Wigner field on the harmonic Moyal functions (`‖Ψ_nm‖² = 1/2π`).
pub fn harmonic_coefficient<T: Real>(
    w0: &PhaseField<T>,
    n: usize,
    m: usize,
    t: T,
) -> Result<Complex<T>> {
    if !w0.scaled {
        return Err(Error::Config(
            "harmonic coefficients need the dilated initial Wigner field".into(),
        ));
    }
    let psi = harmonic_moyal_field(n, m, &w0.grid);
    let e0 = T::from_index(2 * n + 1) - T::from_index(2 * m + 1);
    Ok(w0.inner(&psi) * (T::two() * T::PI()) * cis(-e0 * t * T::half()))
}
