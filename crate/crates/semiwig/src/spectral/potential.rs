use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{factorial, Real};

/// `V^{(order)}(x)` for a user-supplied potential.
pub type DerivativeFn<T> = Arc<dyn Fn(T, usize) -> T + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PotentialKind<T> {
    Harmonic,
    /// `x²/2 + μx⁴/4`
    Quartic {
        mu: T,
    },
    Polynomial,
    Custom,
}

#[derive(Clone)]
enum Repr<T> {
    /// Power-series coefficients `c_j` of `Σ c_j x^j`.
    Poly(Vec<T>),
    Custom {
        eval: DerivativeFn<T>,
        d_max: usize,
        taylor: Vec<T>,
    },
}

/// Single-well potential with `V(0) = V'(0) = 0` and `V''(0) > 0`.
#[derive(Clone)]
pub struct Potential<T> {
    kind: PotentialKind<T>,
    repr: Repr<T>,
}

impl<T: Real> fmt::Debug for Potential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Poly(c) => f
                .debug_struct("Potential")
                .field("kind", &self.kind)
                .field("coeffs", c)
                .finish(),
            Repr::Custom { d_max, .. } => f
                .debug_struct("Potential")
                .field("kind", &self.kind)
                .field("d_max", d_max)
                .finish(),
        }
    }
}

impl<T: Real> Potential<T> {
    pub fn harmonic() -> Self {
        Self {
            kind: PotentialKind::Harmonic,
            repr: Repr::Poly(vec![T::zero(), T::zero(), T::half()]),
        }
    }

    pub fn quartic(mu: T) -> Result<Self> {
        if !(mu > T::zero()) || !mu.is_finite() {
            return Err(Error::Config(format!(
                "quartic coupling μ must be positive, got {mu}"
            )));
        }
        let c = vec![T::zero(), T::zero(), T::half(), T::zero(), mu / T::lit(4.0)];
        Ok(Self {
            kind: PotentialKind::Quartic { mu },
            repr: Repr::Poly(c),
        })
    }

    /// `V(x) = Σ c_j x^j`.
    pub fn polynomial(mut coeffs: Vec<T>) -> Result<Self> {
        while coeffs.len() > 3 && coeffs.last() == Some(&T::zero()) {
            coeffs.pop();
        }
        let get = |j: usize| coeffs.get(j).copied().unwrap_or_else(T::zero);
        check_well(get(0), get(1), T::two() * get(2))?;
        let deg = coeffs.len() - 1;
        if deg % 2 == 1 || !(coeffs[deg] > T::zero()) {
            return Err(Error::Config(
                "polynomial potential must grow to +∞ on both sides".into(),
            ));
        }
        Ok(Self {
            kind: PotentialKind::Polynomial,
            repr: Repr::Poly(coeffs),
        })
    }

    /// Arbitrary smooth potential given by its derivative evaluator up to order `d_max`
    /// and its Taylor data `V^{(j)}(0)`, `j = 0..taylor.len()`.
    pub fn custom(eval: DerivativeFn<T>, d_max: usize, taylor: Vec<T>) -> Result<Self> {
        if taylor.len() < 3 {
            return Err(Error::Config(
                "custom potential needs V, V', V'' at 0".into(),
            ));
        }
        check_well(taylor[0], taylor[1], taylor[2])?;
        Ok(Self {
            kind: PotentialKind::Custom,
            repr: Repr::Custom {
                eval,
                d_max,
                taylor,
            },
        })
    }

    pub fn kind(&self) -> PotentialKind<T> {
        self.kind
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.repr, Repr::Poly(_))
    }

    pub fn coefficients(&self) -> Option<&[T]> {
        match &self.repr {
            Repr::Poly(c) => Some(c),
            Repr::Custom { .. } => None,
        }
    }

    /// Polynomial degree, `None` for custom potentials.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients().map(|c| c.len() - 1)
    }

    pub fn value(&self, x: T) -> T {
        self.derivative(x, 0).unwrap_or_else(|_| T::nan())
    }

    /// `V^{(order)}(x)`.
    pub fn derivative(&self, x: T, order: usize) -> Result<T> {
        match &self.repr {
            Repr::Poly(c) => {
                let mut acc = T::zero();
                for j in (order..c.len()).rev() {
                    let fall = ((j - order + 1)..=j).fold(T::one(), |a, i| a * T::from_index(i));
                    acc = acc * x + c[j] * fall;
                }
                Ok(acc)
            }
            Repr::Custom { eval, d_max, .. } => {
                if order > *d_max {
                    return Err(Error::Capability(format!(
                        "derivative order {order} above d_max {d_max}"
                    )));
                }
                Ok(eval(x, order))
            }
        }
    }

    /// `V^{(j)}(0)`.
    pub fn taylor(&self, j: usize) -> Result<T> {
        match &self.repr {
            Repr::Poly(c) => Ok(c.get(j).map_or(T::zero(), |&v| v * factorial::<T>(j))),
            Repr::Custom { taylor, .. } => taylor.get(j).copied().ok_or_else(|| {
                Error::Capability(format!("Taylor coefficient V^({j})(0) not available"))
            }),
        }
    }

    /// `V_s(ξ) = V(√ε ξ)/ε`, the potential seen in the dilated variable with unit ε.
    pub fn dilated(&self, eps: T) -> Self {
        let r = eps.sqrt();
        match &self.repr {
            Repr::Poly(c) => {
                let c: Vec<T> = c
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| v * r.powi(j as i32) / eps)
                    .collect();
                Self {
                    kind: kind_of(&c),
                    repr: Repr::Poly(c),
                }
            }
            Repr::Custom {
                eval,
                d_max,
                taylor,
            } => {
                let eval = Arc::clone(eval);
                let f: DerivativeFn<T> =
                    Arc::new(move |x, j| eval(r * x, j) * r.powi(j as i32) / eps);
                let taylor = taylor
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| v * r.powi(j as i32) / eps)
                    .collect();
                Self {
                    kind: PotentialKind::Custom,
                    repr: Repr::Custom {
                        eval: f,
                        d_max: *d_max,
                        taylor,
                    },
                }
            }
        }
    }
}

fn kind_of<T: Real>(c: &[T]) -> PotentialKind<T> {
    match c.len() {
        3 if (c[2] - T::half()).mag() <= T::epsilon() => PotentialKind::Harmonic,
        5 if c[3] == T::zero() && (c[2] - T::half()).mag() <= T::epsilon() => {
            PotentialKind::Quartic {
                mu: T::lit(4.0) * c[4],
            }
        }
        _ => PotentialKind::Polynomial,
    }
}

fn check_well<T: Real>(v0: T, v1: T, v2: T) -> Result<()> {
    if v0 != T::zero() || v1 != T::zero() {
        return Err(Error::Config(
            "potential must satisfy V(0) = V'(0) = 0".into(),
        ));
    }
    if !(v2 > T::zero()) {
        return Err(Error::Config("potential must satisfy V''(0) > 0".into()));
    }
    Ok(())
}
