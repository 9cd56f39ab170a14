use crate::error::{Error, Result};
use crate::fourier::{check_resolution, derivative, Direction};
use crate::phase_space::PhaseField;
use crate::scalar::{factorial, Real};
use crate::spectral::Potential;

/// `Θ_j W = (i/2)^{2j} V^{(2j+1)}(x)/(2j+1)! · ∂_k^{2j+1} W`, the `ε^{2j}` part of the
/// Wigner operator in the original variables.
#[derive(Clone, Debug)]
pub struct ThetaOperator<T: Real> {
    pub j: usize,
    /// `(i/2)^{2j}/(2j+1)! = (−1/4)^j/(2j+1)!`
    pub coef: T,
    v: Potential<T>,
}

impl<T: Real> ThetaOperator<T> {
    pub fn new(j: usize, v: &Potential<T>) -> Result<Self> {
        if j == 0 {
            return Err(Error::Config("Θ_j is defined for j ≥ 1".into()));
        }
        let coef = T::lit(-0.25).powi(j as i32) / factorial::<T>(2 * j + 1);
        Ok(Self {
            j,
            coef,
            v: v.clone(),
        })
    }

    pub fn derivative_order(&self) -> usize {
        2 * self.j + 1
    }

    /// True when `V^{(2j+1)} ≡ 0`, known for polynomial potentials.
    pub fn is_zero(&self) -> bool {
        self.v.degree().is_some_and(|d| d < self.derivative_order())
    }

    pub fn apply(&self, w: &PhaseField<T>) -> Result<PhaseField<T>> {
        if w.scaled {
            return Err(Error::Config(
                "Θ_j acts on fields in the original variables".into(),
            ));
        }
        let mut out = PhaseField::zeros(w.grid, false);
        if self.is_zero() {
            return Ok(out);
        }
        let order = self.derivative_order();
        let xs = w.grid.x.points();
        let vd = xs
            .iter()
            .map(|&x| self.v.derivative(x, order))
            .collect::<Result<Vec<T>>>()?;
        check_resolution(w, Direction::K, order)?;
        let d = derivative(w, Direction::K, order);
        let nk = w.grid.k.n;
        for (i, (o, v)) in out.values.iter_mut().zip(&d.values).enumerate() {
            *o = v * (self.coef * vd[i / nk]);
        }
        Ok(out)
    }
}

/// `Θ_j W`.
pub fn apply_theta<T: Real>(
    j: usize,
    w: &PhaseField<T>,
    v: &Potential<T>,
) -> Result<PhaseField<T>> {
    ThetaOperator::new(j, v)?.apply(w)
}
