use crate::error::{Error, Result};
use crate::fourier::{check_resolution, derivative, Direction};
use crate::phase_space::PhaseField;
use crate::scalar::{factorial, Real};
use crate::spectral::Potential;

/// One monomial `coef · ξ^{xi_power} ∂_η^{eta_order}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingTerm<T> {
    pub coef: T,
    pub xi_power: usize,
    pub eta_order: usize,
}

/// `𝓑_ν(ξ, ∂_η) = −V^{(ν+2)}(0) Σ_{j=0}^{[(ν−1)/2]+1} (−1/4)^j ξ^{ν+1−2j} ∂_η^{2j+1} / ((2j+1)! (ν+1−2j)!)`,
/// the order-`ε^{ν/2}` part of the dilated Liouville operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorB<T> {
    pub nu: usize,
    pub v_derivative: T,
    pub terms: Vec<CouplingTerm<T>>,
}

/// `Γ_ν(ξ, ∂_η) = V^{(ν+2)}(0) Σ_{j=0}^{[ν/2]+1} (−1/4)^j ξ^{ν+2−2j} ∂_η^{2j} / ((2j)! (ν+2−2j)!)`,
/// the order-`ε^{ν/2}` part of the dilated cosine-bracket operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorGamma<T> {
    pub nu: usize,
    pub v_derivative: T,
    pub terms: Vec<CouplingTerm<T>>,
}

fn quarter_power<T: Real>(j: usize) -> T {
    T::lit(-0.25).powi(j as i32)
}

impl<T: Real> OperatorB<T> {
    pub fn new(nu: usize, v: &Potential<T>) -> Result<Self> {
        if nu == 0 {
            return Err(Error::Config("𝓑_ν is defined for ν ≥ 1".into()));
        }
        let d = v.taylor(nu + 2)?;
        let terms = (0..=((nu - 1) / 2 + 1))
            .map(|j| CouplingTerm {
                coef: -d * quarter_power::<T>(j)
                    / (factorial::<T>(2 * j + 1) * factorial::<T>(nu + 1 - 2 * j)),
                xi_power: nu + 1 - 2 * j,
                eta_order: 2 * j + 1,
            })
            .collect();
        Ok(Self {
            nu,
            v_derivative: d,
            terms,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.v_derivative == T::zero()
    }

    pub fn apply(&self, w: &PhaseField<T>) -> Result<PhaseField<T>> {
        apply_terms(&self.terms, self.is_zero(), w)
    }
}

impl<T: Real> OperatorGamma<T> {
    pub fn new(nu: usize, v: &Potential<T>) -> Result<Self> {
        if nu == 0 {
            return Err(Error::Config("Γ_ν is defined for ν ≥ 1".into()));
        }
        let d = v.taylor(nu + 2)?;
        let terms = (0..=(nu / 2 + 1))
            .map(|j| CouplingTerm {
                coef: d * quarter_power::<T>(j)
                    / (factorial::<T>(2 * j) * factorial::<T>(nu + 2 - 2 * j)),
                xi_power: nu + 2 - 2 * j,
                eta_order: 2 * j,
            })
            .collect();
        Ok(Self {
            nu,
            v_derivative: d,
            terms,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.v_derivative == T::zero()
    }

    pub fn apply(&self, w: &PhaseField<T>) -> Result<PhaseField<T>> {
        apply_terms(&self.terms, self.is_zero(), w)
    }
}

fn apply_terms<T: Real>(
    terms: &[CouplingTerm<T>],
    zero: bool,
    w: &PhaseField<T>,
) -> Result<PhaseField<T>> {
    if !w.scaled {
        return Err(Error::Config(
            "𝓑_ν and Γ_ν act on fields in dilated variables".into(),
        ));
    }
    let mut out = PhaseField::zeros(w.grid, true);
    if zero {
        return Ok(out);
    }
    let top = terms.iter().map(|t| t.eta_order).max().unwrap_or(0);
    check_resolution(w, Direction::K, top)?;
    let xs = w.grid.x.points();
    let nk = w.grid.k.n;
    for t in terms {
        let d = derivative(w, Direction::K, t.eta_order);
        for (i, (o, v)) in out.values.iter_mut().zip(&d.values).enumerate() {
            *o = *o + v * (t.coef * xs[i / nk].powi(t.xi_power as i32));
        }
    }
    Ok(out)
}

/// `𝓑_ν W`.
pub fn apply_b<T: Real>(nu: usize, w: &PhaseField<T>, v: &Potential<T>) -> Result<PhaseField<T>> {
    OperatorB::new(nu, v)?.apply(w)
}

/// `Γ_ν W`.
pub fn apply_gamma<T: Real>(
    nu: usize,
    w: &PhaseField<T>,
    v: &Potential<T>,
) -> Result<PhaseField<T>> {
    OperatorGamma::new(nu, v)?.apply(w)
}
