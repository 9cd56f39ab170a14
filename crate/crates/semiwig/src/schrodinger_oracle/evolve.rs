use crate::error::{Error, Result};
use crate::fourier::Plan;
use crate::phase_space::ComplexField;
use crate::scalar::{cis, Real};
use crate::spectral::Potential;

/// Boundary decay (relative to the peak modulus) required of evolved states.
pub const DECAY_TOL: f64 = 1e-8;
/// Allowed relative drift of `‖ψ‖²` over a whole run.
pub const MASS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMethod {
    /// Second-order Strang splitting.
    Strang,
    /// Fourth-order triple-jump composition of Strang steps.
    Fourth,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionConfig<T> {
    /// Time step; `None` selects `ε/20`.
    pub dt: Option<T>,
    pub t_final: T,
    pub method: SplitMethod,
}

impl<T: Real> EvolutionConfig<T> {
    pub fn new(t_final: T) -> Self {
        Self {
            dt: None,
            t_final,
            method: SplitMethod::Strang,
        }
    }

    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn with_method(mut self, method: SplitMethod) -> Self {
        self.method = method;
        self
    }

    /// The step actually used: at most the requested one, dividing `t_final` evenly.
    pub fn step(&self, eps: T) -> Result<(usize, T)> {
        let dt = self.dt.unwrap_or(eps / T::lit(20.0));
        if !(dt > T::zero()) || dt > eps {
            return Err(Error::Config(format!(
                "time step {dt} must lie in (0, ε = {eps}]"
            )));
        }
        if self.t_final < T::zero() {
            return Err(Error::Config("final time must be nonnegative".into()));
        }
        let n = (self.t_final / dt).ceil().to_usize().unwrap_or(0);
        if n == 0 {
            return Ok((0, T::zero()));
        }
        Ok((n, self.t_final / T::from_index(n)))
    }
}

struct Splitter<T: Real> {
    plan: Plan<T>,
    potential: Vec<T>,
    kinetic: Vec<T>,
    eps: T,
}

impl<T: Real> Splitter<T> {
    fn new<F: Fn(T) -> T>(axis: &crate::phase_space::Axis<T>, v: F, eps: T) -> Self {
        let potential = axis.points().iter().map(|&x| v(x)).collect();
        let kinetic = axis
            .wavenumbers()
            .iter()
            .map(|&k| k * k * T::half())
            .collect();
        Self {
            plan: Plan::new(axis.n),
            potential,
            kinetic,
            eps,
        }
    }

    fn strang(&self, psi: &mut [crate::scalar::Complex<T>], dt: T) {
        let half = dt * T::half() / self.eps;
        for (p, &v) in psi.iter_mut().zip(&self.potential) {
            *p = *p * cis(-v * half);
        }
        self.plan.forward(psi);
        let ke = self.eps * dt;
        for (p, &k) in psi.iter_mut().zip(&self.kinetic) {
            *p = *p * cis(-k * ke);
        }
        self.plan.inverse(psi);
        for (p, &v) in psi.iter_mut().zip(&self.potential) {
            *p = *p * cis(-v * half);
        }
    }

    fn step(&self, psi: &mut [crate::scalar::Complex<T>], dt: T, method: SplitMethod) {
        match method {
            SplitMethod::Strang => self.strang(psi, dt),
            SplitMethod::Fourth => {
                let c = T::two().cbrt();
                let w1 = T::one() / (T::two() - c);
                let w0 = -c * w1;
                self.strang(psi, w1 * dt);
                self.strang(psi, w0 * dt);
                self.strang(psi, w1 * dt);
            }
        }
    }
}

/// Spectral splitting for `iε ψ_t = −(ε²/2) ψ'' + V ψ` on the periodic axis of `psi0`.
pub fn split_step_evolve<T: Real>(
    psi0: &ComplexField<T>,
    v: &Potential<T>,
    eps: T,
    config: &EvolutionConfig<T>,
) -> Result<ComplexField<T>> {
    let mut out = split_step_snapshots(psi0, v, eps, config, &[config.t_final])?;
    Ok(out.pop().expect("one snapshot requested"))
}

/// Splitting for an arbitrary real potential given pointwise, e.g. `V ≡ 0`.
pub fn split_step_evolve_with<T: Real, F: Fn(T) -> T>(
    psi0: &ComplexField<T>,
    v: F,
    eps: T,
    config: &EvolutionConfig<T>,
) -> Result<ComplexField<T>> {
    let mut out = evolve_generic(psi0, v, eps, eps, config, &[config.t_final])?;
    Ok(out.pop().expect("one snapshot requested"))
}

/// States at each of the nondecreasing `times` (all `≤ t_final`), stepping with the
/// configured step between consecutive samples.
pub fn split_step_snapshots<T: Real>(
    psi0: &ComplexField<T>,
    v: &Potential<T>,
    eps: T,
    config: &EvolutionConfig<T>,
    times: &[T],
) -> Result<Vec<ComplexField<T>>> {
    evolve_generic(psi0, |x| v.value(x), eps, eps, config, times)
}

/// The same evolution for a dilated state `φ(ξ) = ε^{1/4} ψ(√ε ξ)`, which obeys
/// `i φ_t = −½ φ'' + V_s φ` with `V_s(ξ) = V(√ε ξ)/ε`. The step bound refers to ε.
pub fn split_step_evolve_scaled<T: Real>(
    phi0: &ComplexField<T>,
    v: &Potential<T>,
    eps: T,
    config: &EvolutionConfig<T>,
) -> Result<ComplexField<T>> {
    let vs = v.dilated(eps);
    let mut out = evolve_generic(
        phi0,
        |x| vs.value(x),
        T::one(),
        eps,
        config,
        &[config.t_final],
    )?;
    Ok(out.pop().expect("one snapshot requested"))
}

fn evolve_generic<T: Real, F: Fn(T) -> T>(
    psi0: &ComplexField<T>,
    v: F,
    eps_eff: T,
    eps: T,
    config: &EvolutionConfig<T>,
    times: &[T],
) -> Result<Vec<ComplexField<T>>> {
    config.step(eps)?;
    let dt = config.dt.unwrap_or(eps / T::lit(20.0));
    if psi0.boundary_ratio(2) > T::lit(DECAY_TOL) {
        return Err(Error::Coverage(
            "initial state does not decay inside the box".into(),
        ));
    }
    let split = Splitter::new(&psi0.axis, v, eps_eff);
    let mass0 = psi0.norm_sqr();
    let mut psi = psi0.values.clone();
    let mut now = T::zero();
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if target < now || target > config.t_final + T::lit(1e-12) {
            return Err(Error::Config(format!(
                "snapshot time {target} outside [{now}, {}]",
                config.t_final
            )));
        }
        let span = target - now;
        let n = (span / dt - T::lit(1e-9)).ceil().to_usize().unwrap_or(0);
        if n > 0 {
            let h = span / T::from_index(n);
            for _ in 0..n {
                split.step(&mut psi, h, config.method);
            }
        }
        now = target;
        let state = ComplexField::new(psi0.axis, psi.clone())?;
        let drift = ((state.norm_sqr() - mass0) / mass0).mag();
        if drift > T::lit(MASS_TOL) {
            return Err(Error::Numeric(format!(
                "mass drift {drift:e} exceeds {MASS_TOL:e}"
            )));
        }
        if state.boundary_ratio(2) > T::lit(DECAY_TOL) {
            return Err(Error::Coverage(format!(
                "evolved state reaches the boundary at t = {target}"
            )));
        }
        out.push(state);
    }
    Ok(out)
}
