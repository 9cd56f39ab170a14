use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::duhamel::{Duhamel, TimeRule, Transport};
use crate::error::{Error, Result};
use crate::phase_space::{GaussianDensity, PhaseDensity, PhaseField, PhaseGrid};
use crate::scalar::{creal, Real};
use crate::spectral::Potential;

use super::flow::{integrate_flow, DEFAULT_STEP};
use super::interp::Upsampled;
use super::theta::ThetaOperator;

/// Relative change of `‖·‖_{L²}` under transport beyond which the support is deemed
/// to have left the grid.
pub const TRANSPORT_TOL: f64 = 1e-6;

/// Node images keyed by `τ` rounded to 1e-12.
type ImageCache<T> = Mutex<BTreeMap<i64, Arc<Vec<(T, T)>>>>;

/// Backward flow images `g^{−τ}(z)` of every grid node, cached per `τ`.
pub struct FlowMap<T: Real> {
    v: Potential<T>,
    grid: PhaseGrid<T>,
    step: T,
    cache: ImageCache<T>,
}

impl<T: Real> FlowMap<T> {
    pub fn new(v: &Potential<T>, grid: PhaseGrid<T>) -> Self {
        Self::with_step(v, grid, T::lit(DEFAULT_STEP))
    }

    pub fn with_step(v: &Potential<T>, grid: PhaseGrid<T>, step: T) -> Self {
        Self {
            v: v.clone(),
            grid,
            step,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn potential(&self) -> &Potential<T> {
        &self.v
    }

    pub fn grid(&self) -> PhaseGrid<T> {
        self.grid
    }

    fn key(tau: T) -> i64 {
        (tau * T::lit(1e12)).round().to_i64().unwrap_or(i64::MAX)
    }

    /// `g^{−τ}(x_i, k_j)` in row-major order. A new `τ` continues from the cached map
    /// of the nearest shorter time of the same sign, `g^{−τ} = g^{−(τ−τ')} ∘ g^{−τ'}`.
    pub fn backward_images(&self, tau: T) -> Result<Arc<Vec<(T, T)>>> {
        let key = Self::key(tau);
        let start = {
            let cache = self.cache.lock().expect("flow cache poisoned");
            if let Some(m) = cache.get(&key) {
                return Ok(Arc::clone(m));
            }
            let prev = match key.cmp(&0) {
                std::cmp::Ordering::Greater => cache.range(1..key).next_back(),
                std::cmp::Ordering::Less => cache.range(key + 1..0).next(),
                std::cmp::Ordering::Equal => None,
            };
            prev.map(|(&k, m)| (T::lit(k as f64) / T::lit(1e12), Arc::clone(m)))
        };
        let (from, base) = match start {
            Some((t0, m)) => (t0, m),
            None => {
                let xs = self.grid.x.points();
                let ks = self.grid.k.points();
                let nk = self.grid.k.n;
                (
                    T::zero(),
                    Arc::new(
                        (0..self.grid.len())
                            .map(|i| (xs[i / nk], ks[i % nk]))
                            .collect(),
                    ),
                )
            }
        };
        let span = tau - from;
        let imgs = base
            .par_iter()
            .map(|&(x, k)| integrate_flow(&self.v, x, k, -span, self.step))
            .collect::<Result<Vec<_>>>()?;
        let imgs = Arc::new(imgs);
        self.cache
            .lock()
            .expect("flow cache poisoned")
            .insert(key, Arc::clone(&imgs));
        Ok(imgs)
    }

    /// `f ∘ g^{−τ}`; fails with a coverage error when part of `f` is carried off the grid.
    pub fn pullback(&self, f: &PhaseField<T>, tau: T) -> Result<PhaseField<T>> {
        if f.grid != self.grid {
            return Err(Error::Config(
                "field and flow map use different grids".into(),
            ));
        }
        if tau == T::zero() {
            return Ok(f.clone());
        }
        let imgs = self.backward_images(tau)?;
        let up = Upsampled::new(f);
        let values = imgs.par_iter().map(|&(x, k)| up.eval(x, k)).collect();
        let out = PhaseField::new(self.grid, values, f.scaled)?;
        check_transport(f, &out)?;
        Ok(out)
    }

    /// `W_0 ∘ g^{−τ}` for closed-form `W_0`.
    pub fn pullback_density<D: PhaseDensity<T>>(&self, d: &D, tau: T) -> Result<PhaseField<T>> {
        let imgs = self.backward_images(tau)?;
        let values = imgs
            .par_iter()
            .map(|&(x, k)| creal(d.value(x, k)))
            .collect();
        PhaseField::new(self.grid, values, false)
    }
}

fn check_transport<T: Real>(before: &PhaseField<T>, after: &PhaseField<T>) -> Result<()> {
    let a = before.l2_norm();
    if a == T::zero() {
        return Ok(());
    }
    let rel = (after.l2_norm() - a).mag() / a;
    if rel > T::lit(TRANSPORT_TOL) {
        return Err(Error::Coverage(format!(
            "transport changed the L² norm by {rel:e}; the support leaves the grid or is unresolved"
        )));
    }
    Ok(())
}

/// `W_c(t) = W_0 ∘ g^{−t}`.
pub fn liouville_term<T: Real>(
    w0: &PhaseField<T>,
    flow: &FlowMap<T>,
    t: T,
) -> Result<PhaseField<T>> {
    if w0.scaled {
        return Err(Error::Config(
            "the classical expansion works in the original variables".into(),
        ));
    }
    flow.pullback(w0, t)
}

/// Initial data of the classical hierarchy.
#[derive(Clone, Debug)]
pub enum ClassicalBase<T> {
    Field(PhaseField<T>),
    Gaussian(GaussianDensity<T>),
}

/// `(∂_t + k∂_x − V'∂_k) Z_c^{(l)} = Σ_j Θ_j Z_c^{(l−j)}`.
pub struct ClassicalPropagator<T: Real> {
    flow: FlowMap<T>,
    base: ClassicalBase<T>,
    ops: Vec<ThetaOperator<T>>,
}

impl<T: Real> ClassicalPropagator<T> {
    pub fn new(flow: FlowMap<T>, base: ClassicalBase<T>, max_level: usize) -> Result<Self> {
        if let ClassicalBase::Field(f) = &base {
            if f.scaled || f.grid != flow.grid() {
                return Err(Error::Config(
                    "initial field must be unscaled and live on the flow grid".into(),
                ));
            }
        }
        let ops = (1..=max_level)
            .map(|j| ThetaOperator::new(j, flow.potential()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { flow, base, ops })
    }

    pub fn flow(&self) -> &FlowMap<T> {
        &self.flow
    }

    pub fn operator(&self, j: usize) -> Option<&ThetaOperator<T>> {
        j.checked_sub(1).and_then(|i| self.ops.get(i))
    }
}

impl<T: Real> Transport<T> for ClassicalPropagator<T> {
    fn grid(&self) -> PhaseGrid<T> {
        self.flow.grid()
    }

    fn scaled(&self) -> bool {
        false
    }

    fn base(&self, t: T) -> Result<PhaseField<T>> {
        match &self.base {
            ClassicalBase::Field(f) => self.flow.pullback(f, t),
            ClassicalBase::Gaussian(d) => self.flow.pullback_density(d, t),
        }
    }

    fn transport(&self, f: &PhaseField<T>, tau: T) -> Result<PhaseField<T>> {
        self.flow.pullback(f, tau)
    }

    fn couple(&self, nu: usize, f: &PhaseField<T>) -> Result<PhaseField<T>> {
        self.operator(nu)
            .ok_or_else(|| Error::Config(format!("coupling Θ_{nu} was not prepared")))?
            .apply(f)
    }

    fn coupling_active(&self, nu: usize) -> bool {
        self.operator(nu).is_some_and(|op| !op.is_zero())
    }
}

/// `W_c` and the correctors `Z_c^{(l)}` at one time, `terms[0] = W_c`.
#[derive(Clone, Debug)]
pub struct ClassicalSeries<T> {
    pub eps: T,
    pub t: T,
    pub terms: Vec<PhaseField<T>>,
}

impl<T: Real> ClassicalSeries<T> {
    pub fn order(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    /// `W_c + Σ_{l=1}^{N} ε^{2l} Z_c^{(l)}`.
    pub fn partial_sum(&self, n: usize) -> Result<PhaseField<T>> {
        if n > self.order() {
            return Err(Error::Config(format!(
                "series holds levels up to {}, asked for {n}",
                self.order()
            )));
        }
        let mut out = self.terms[0].clone();
        for (l, z) in self.terms.iter().enumerate().take(n + 1).skip(1) {
            out.axpy(creal(self.eps.powi(2 * l as i32)), z);
        }
        Ok(out)
    }
}

/// The classical ansatz for one potential and one initial datum.
pub struct ClassicalExpansion<T: Real> {
    eps: T,
    solver: Duhamel<T, ClassicalPropagator<T>>,
}

impl<T: Real> ClassicalExpansion<T> {
    pub fn new(
        flow: FlowMap<T>,
        base: ClassicalBase<T>,
        max_level: usize,
        rule: TimeRule<T>,
    ) -> Result<Self> {
        let eps = flow.grid().eps;
        Ok(Self {
            eps,
            solver: Duhamel::new(ClassicalPropagator::new(flow, base, max_level)?, rule)?,
        })
    }

    pub fn propagator(&self) -> &ClassicalPropagator<T> {
        self.solver.propagator()
    }

    /// `Z_c^{(l)}(t)`, with `l = 0` the Liouville term.
    pub fn term(&self, l: usize, t: T) -> Result<PhaseField<T>> {
        self.solver.level(l, t)
    }

    pub fn series(&self, t: T, n: usize) -> Result<ClassicalSeries<T>> {
        let terms = (0..=n)
            .map(|l| self.term(l, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassicalSeries {
            eps: self.eps,
            t,
            terms,
        })
    }
}

/// `Z_c^{(l)}(t) = ∫_0^t Θ^{(l)}(g^{−(t−s)}·, s) ds` for a prepared expansion.
pub fn classical_corrector<T: Real>(
    expansion: &ClassicalExpansion<T>,
    l: usize,
    t: T,
) -> Result<PhaseField<T>> {
    if l == 0 {
        return Err(Error::Config("corrector levels start at 1".into()));
    }
    expansion.term(l, t)
}
