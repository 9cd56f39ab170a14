//! Generic Duhamel solver for graded transport hierarchies
//! `(∂_t + L) Z^{(l)} = Σ_ν C_ν Z^{(l−ν)}`, `Z^{(l)}(0) = 0` for `l ≥ 1`, with `Z^{(0)}` given.
//!
//! `Z^{(l)}(t) = ∫_0^t P_{t−s} D^{(l)}(s) ds` is evaluated by composite Gauss–Legendre
//! quadrature on fixed panels `[jΔ, (j+1)Δ]`. Values at panel ends are memoized and
//! advanced with the semigroup identity `Z(t_{j+1}) = P_Δ Z(t_j) + ∫_{t_j}^{t_{j+1}} …`,
//! so nested levels never re-integrate from zero.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase_space::{PhaseField, PhaseGrid};
use crate::scalar::{creal, Real};
use crate::specfun::{make_rule, QuadratureRule, RuleKind};

/// The problem-specific pieces of a hierarchy.
pub trait Transport<T: Real>: Sync {
    fn grid(&self) -> PhaseGrid<T>;
    fn scaled(&self) -> bool;
    /// `Z^{(0)}(t)`.
    fn base(&self, t: T) -> Result<PhaseField<T>>;
    /// `P_τ f = f ∘ g^{−τ}`.
    fn transport(&self, f: &PhaseField<T>, tau: T) -> Result<PhaseField<T>>;
    /// `C_ν f`, the coupling of order `ν` with its sign as it enters the forcing.
    fn couple(&self, nu: usize, f: &PhaseField<T>) -> Result<PhaseField<T>>;
    /// `false` when `C_ν ≡ 0`.
    fn coupling_active(&self, nu: usize) -> bool;
}

/// Composite Gauss–Legendre rule in time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeRule<T> {
    pub panel: T,
    pub nodes: usize,
}

impl<T: Real> Default for TimeRule<T> {
    /// Four nodes on panels of length 1/16.
    fn default() -> Self {
        Self {
            panel: T::lit(1.0 / 16.0),
            nodes: 4,
        }
    }
}

pub struct Duhamel<T: Real, P: Transport<T>> {
    prop: P,
    rule: TimeRule<T>,
    gl: QuadratureRule<T>,
    panel_ends: Mutex<HashMap<(usize, usize), PhaseField<T>>>,
}

impl<T: Real, P: Transport<T>> Duhamel<T, P> {
    pub fn new(prop: P, rule: TimeRule<T>) -> Result<Self> {
        if !(rule.panel > T::zero()) {
            return Err(Error::Config("time panel must be positive".into()));
        }
        let gl = make_rule(RuleKind::GaussLegendre, rule.nodes, T::one())?;
        Ok(Self {
            prop,
            rule,
            gl,
            panel_ends: Mutex::new(HashMap::new()),
        })
    }

    pub fn propagator(&self) -> &P {
        &self.prop
    }

    pub fn rule(&self) -> TimeRule<T> {
        self.rule
    }

    /// Whether level `l` can be nonzero given the active couplings.
    pub fn active(&self, l: usize) -> bool {
        l == 0 || (1..=l).any(|nu| self.prop.coupling_active(nu) && self.active(l - nu))
    }

    fn zeros(&self) -> PhaseField<T> {
        PhaseField::zeros(self.prop.grid(), self.prop.scaled())
    }

    /// `Z^{(l)}(t)`.
    pub fn level(&self, l: usize, t: T) -> Result<PhaseField<T>> {
        if t < T::zero() {
            return Err(Error::Config(format!(
                "Duhamel time must be nonnegative, got {t}"
            )));
        }
        if l == 0 {
            return self.prop.base(t);
        }
        if !self.active(l) {
            return Ok(self.zeros());
        }
        let (j, r) = self.split(t);
        if r == T::zero() {
            return self.panel_end(l, j);
        }
        let tj = T::from_index(j) * self.rule.panel;
        let start = self.panel_end(l, j)?;
        let mut out = self.prop.transport(&start, r)?;
        let inc = self.integral(l, tj, t)?;
        out.axpy(creal(T::one()), &inc);
        Ok(out)
    }

    /// `t = jΔ + r` with `0 ≤ r < Δ`; `r` snaps to zero within rounding.
    fn split(&self, t: T) -> (usize, T) {
        let q = t / self.rule.panel;
        let jr = q.round();
        if (q - jr).mag() < T::lit(1e-9) {
            return (jr.to_usize().unwrap_or(0), T::zero());
        }
        let j = q.floor();
        (j.to_usize().unwrap_or(0), t - j * self.rule.panel)
    }

    fn panel_end(&self, l: usize, j: usize) -> Result<PhaseField<T>> {
        if j == 0 {
            return Ok(self.zeros());
        }
        let cached = {
            let map = self.panel_ends.lock().expect("panel cache poisoned");
            if let Some(f) = map.get(&(l, j)) {
                return Ok(f.clone());
            }
            (1..j)
                .rev()
                .find_map(|i| map.get(&(l, i)).map(|f| (i, f.clone())))
        };
        let (mut i, mut cur) = cached.unwrap_or((0, self.zeros()));
        while i < j {
            let a = T::from_index(i) * self.rule.panel;
            let b = a + self.rule.panel;
            let mut next = if i == 0 {
                self.zeros()
            } else {
                self.prop.transport(&cur, self.rule.panel)?
            };
            let inc = self.integral(l, a, b)?;
            next.axpy(creal(T::one()), &inc);
            i += 1;
            self.panel_ends
                .lock()
                .expect("panel cache poisoned")
                .insert((l, i), next.clone());
            cur = next;
        }
        Ok(cur)
    }

    /// `D^{(l)}(s) = Σ_ν C_ν Z^{(l−ν)}(s)` over active pairs.
    pub fn forcing(&self, l: usize, s: T) -> Result<PhaseField<T>> {
        let mut out = self.zeros();
        for nu in 1..=l {
            if self.prop.coupling_active(nu) && self.active(l - nu) {
                let lower = self.level(l - nu, s)?;
                let c = self.prop.couple(nu, &lower)?;
                out.axpy(creal(T::one()), &c);
            }
        }
        Ok(out)
    }

    /// `∫_a^b P_{b−s} D^{(l)}(s) ds` with one Gauss–Legendre panel.
    fn integral(&self, l: usize, a: T, b: T) -> Result<PhaseField<T>> {
        let rule = self.gl.mapped(a, b);
        let parts: Vec<Result<PhaseField<T>>> = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map(|(&s, &w)| {
                let d = self.forcing(l, s)?;
                Ok(self.prop.transport(&d, b - s)?.scaled_by(creal(w)))
            })
            .collect();
        let mut out = self.zeros();
        for p in parts {
            out.axpy(creal(T::one()), &p?);
        }
        Ok(out)
    }
}
