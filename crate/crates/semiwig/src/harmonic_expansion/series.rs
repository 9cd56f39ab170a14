use crate::duhamel::{Duhamel, TimeRule};
use crate::error::{Error, Result};
use crate::phase_space::{PhaseField, PhaseGrid};
use crate::scalar::{creal, Real};
use crate::spectral::Potential;

use super::term::{HarmonicBase, HarmonicPropagator};

/// `W̃_h` and the correctors `Z̃^{(l)}` at one time, `terms[0] = W̃_h`.
#[derive(Clone, Debug)]
pub struct ExpansionSeries<T> {
    pub eps: T,
    pub t: T,
    pub terms: Vec<PhaseField<T>>,
}

impl<T: Real> ExpansionSeries<T> {
    pub fn order(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    pub fn base(&self) -> &PhaseField<T> {
        &self.terms[0]
    }

    /// `W̃_h + Σ_{l=1}^{N} ε^{l/2} Z̃^{(l)}`.
    pub fn partial_sum(&self, n: usize) -> Result<PhaseField<T>> {
        if n > self.order() {
            return Err(Error::Config(format!(
                "series holds levels up to {}, asked for {n}",
                self.order()
            )));
        }
        let r = self.eps.sqrt();
        let mut out = self.terms[0].clone();
        for (l, z) in self.terms.iter().enumerate().take(n + 1).skip(1) {
            out.axpy(creal(r.powi(l as i32)), z);
        }
        Ok(out)
    }
}

/// The harmonic ansatz for one potential and one initial datum.
pub struct HarmonicExpansion<T: Real> {
    eps: T,
    solver: Duhamel<T, HarmonicPropagator<T>>,
}

impl<T: Real> HarmonicExpansion<T> {
    /// `v` is the unscaled potential; the correctors are ε-independent apart from the data.
    pub fn new(
        v: &Potential<T>,
        base: HarmonicBase<T>,
        grid: PhaseGrid<T>,
        max_level: usize,
        rule: TimeRule<T>,
    ) -> Result<Self> {
        let eps = grid.eps;
        let prop = HarmonicPropagator::new(v, base, grid, max_level)?;
        Ok(Self {
            eps,
            solver: Duhamel::new(prop, rule)?,
        })
    }

    pub fn propagator(&self) -> &HarmonicPropagator<T> {
        self.solver.propagator()
    }

    pub fn solver(&self) -> &Duhamel<T, HarmonicPropagator<T>> {
        &self.solver
    }

    /// `Z̃^{(l)}(t)`, with `l = 0` the harmonic term.
    pub fn term(&self, l: usize, t: T) -> Result<PhaseField<T>> {
        self.solver.level(l, t)
    }

    /// All levels `0..=n` at time `t`.
    pub fn series(&self, t: T, n: usize) -> Result<ExpansionSeries<T>> {
        let terms = (0..=n)
            .map(|l| self.term(l, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpansionSeries {
            eps: self.eps,
            t,
            terms,
        })
    }
}

/// `Z̃^{(l)}(t) = ∫_0^t D^{(l)}(g_h^{−(t−s)}·, s) ds` for a prepared expansion.
pub fn corrector_term<T: Real>(
    expansion: &HarmonicExpansion<T>,
    l: usize,
    t: T,
) -> Result<PhaseField<T>> {
    if l == 0 {
        return Err(Error::Config("corrector levels start at 1".into()));
    }
    expansion.term(l, t)
}
