use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    GaussHermite,
    TrapezoidPeriodic,
    GaussLegendre,
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss-hermite" => Ok(Self::GaussHermite),
            "trapezoid-periodic" => Ok(Self::TrapezoidPeriodic),
            "gauss-legendre" => Ok(Self::GaussLegendre),
            other => Err(Error::Capability(format!(
                "unsupported quadrature kind '{other}'"
            ))),
        }
    }
}

/// Nodes and strictly positive weights.
///
/// * Gauss–Hermite with scale `s` integrates `∫ e^{-(x/s)²} f(x) dx`.
/// * Gauss–Legendre with scale `s` integrates over `[-s, s]`.
/// * Periodic trapezoid with scale `L` integrates over `[0, L)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub kind: RuleKind,
}

impl<T: Real> QuadratureRule<T> {
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affinely maps a Gauss–Legendre rule on `[-s, s]` onto `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> Self {
        let (lo, hi) = match self.kind {
            RuleKind::TrapezoidPeriodic => (T::zero(), self.span()),
            _ => {
                let s = self.span() * T::half();
                (-s, s)
            }
        };
        let scale = (b - a) / (hi - lo);
        Self {
            nodes: self.nodes.iter().map(|&x| a + (x - lo) * scale).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
            kind: self.kind,
        }
    }

    fn span(&self) -> T {
        self.weights.iter().copied().sum::<T>()
    }
}

pub fn make_rule<T: Real>(kind: RuleKind, n: usize, scale: T) -> Result<QuadratureRule<T>> {
    if n == 0 {
        return Err(Error::Config(
            "quadrature rule needs at least one node".into(),
        ));
    }
    if !(scale > T::zero()) {
        return Err(Error::Config(format!(
            "quadrature scale must be positive, got {scale}"
        )));
    }
    let (nodes, weights) = match kind {
        RuleKind::GaussHermite => {
            let (x, w) = gauss_hermite(n)?;
            (
                x.iter().map(|&v| T::lit(v) * scale).collect(),
                w.iter().map(|&v| T::lit(v) * scale).collect(),
            )
        }
        RuleKind::GaussLegendre => {
            let (x, w) = gauss_legendre(n)?;
            (
                x.iter().map(|&v| T::lit(v) * scale).collect(),
                w.iter().map(|&v| T::lit(v) * scale).collect(),
            )
        }
        RuleKind::TrapezoidPeriodic => {
            let h = scale / T::from_index(n);
            ((0..n).map(|j| T::from_index(j) * h).collect(), vec![h; n])
        }
    };
    Ok(QuadratureRule {
        nodes,
        weights,
        kind,
    })
}

/// Eigenvalues of the symmetric Jacobi matrix with zero diagonal.
fn jacobi_eigenvalues(off: &[f64]) -> Vec<f64> {
    let n = off.len() + 1;
    let mut j = DMatrix::<f64>::zeros(n, n);
    for (i, &b) in off.iter().enumerate() {
        j[(i, i + 1)] = b;
        j[(i + 1, i)] = b;
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(j).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Golub–Welsch starting values polished by Newton on the orthonormal recurrence;
/// weights from the Christoffel sum (`e^{-x²}/Σψ_k²`) for relative accuracy in the tails.
fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 1 {
        return Ok((vec![0.0], vec![std::f64::consts::PI.sqrt()]));
    }
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut nodes = jacobi_eigenvalues(&off);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let psi = crate::specfun::hermite_fns(n, *x);
            // ψ_n' = √(2n) ψ_{n-1} − x ψ_n
            let d = (2.0 * n as f64).sqrt() * psi[n - 1] - *x * psi[n];
            if d == 0.0 {
                break;
            }
            let step = psi[n] / d;
            *x -= step;
            if step.abs() < 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let psi = crate::specfun::hermite_fns(n - 1, *x);
        let s: f64 = psi.iter().map(|v| v * v).sum();
        weights.push((-*x * *x).exp() / s);
    }
    symmetrize(&mut nodes, &mut weights);
    check_weights(&weights)?;
    Ok((nodes, weights))
}

fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let off: Vec<f64> = (1..n)
        .map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt())
        .collect();
    let mut nodes = if n == 1 {
        vec![0.0]
    } else {
        jacobi_eigenvalues(&off)
    };
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        let mut dp = 1.0;
        for _ in 0..8 {
            let (p, d) = legendre_with_derivative(n, *x);
            dp = d;
            let step = p / d;
            *x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, *x);
        if d.is_finite() {
            dp = d;
        }
        weights.push(2.0 / ((1.0 - *x * *x) * dp * dp));
    }
    symmetrize(&mut nodes, &mut weights);
    check_weights(&weights)?;
    Ok((nodes, weights))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Enforces the exact reflection symmetry of symmetric-weight rules.
fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

fn check_weights(w: &[f64]) -> Result<()> {
    if w.iter().all(|&v| v > 0.0 && v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric("non-positive quadrature weight".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gamma_half(k: usize) -> f64 {
        // Γ(k + 1/2) = (2k-1)!! √π / 2^k
        let mut v = PI.sqrt();
        for j in 0..k {
            v *= j as f64 + 0.5;
        }
        v
    }

    #[test]
    fn small_rules() {
        let r = make_rule::<f64>(RuleKind::GaussHermite, 1, 1.0).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - PI.sqrt()).abs() < 1e-15);
        let r = make_rule::<f64>(RuleKind::GaussHermite, 2, 1.0).unwrap();
        assert!((r.integrate(|x| x * x) - PI.sqrt() / 2.0).abs() < 1e-14);
        let r = make_rule::<f64>(RuleKind::TrapezoidPeriodic, 64, 2.0 * PI).unwrap();
        assert!((r.integrate(|t| t.sin().powi(2)) - PI).abs() < 1e-12);
    }

    #[test]
    fn hermite_exactness_degree() {
        for &n in &[3usize, 10, 20, 40] {
            let r = make_rule::<f64>(RuleKind::GaussHermite, n, 1.0).unwrap();
            for deg in (0..2 * n).step_by(2) {
                let exact = gamma_half(deg / 2);
                let got = r.integrate(|x| x.powi(deg as i32));
                assert!(
                    ((got - exact) / exact).abs() < 1e-12,
                    "n={n} deg={deg} {got} {exact}"
                );
                assert!(r.integrate(|x| x.powi(deg as i32 + 1)).abs() < 1e-12 * exact.max(1.0));
            }
        }
    }

    #[test]
    fn legendre_exactness() {
        let r = make_rule::<f64>(RuleKind::GaussLegendre, 12, 1.0).unwrap();
        for deg in 0..24 {
            let exact = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            assert!((r.integrate(|x| x.powi(deg)) - exact).abs() < 1e-14);
        }
        let m = r.mapped(0.0, 3.0);
        assert!((m.integrate(|x| x * x) - 9.0).abs() < 1e-13);
    }

    #[test]
    fn large_hermite_rule() {
        let r = make_rule::<f64>(RuleKind::GaussHermite, 300, 1.0).unwrap();
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!((r.integrate(|_| 1.0) - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn unknown_kind() {
        assert!(matches!(
            "gauss-laguerre".parse::<RuleKind>(),
            Err(Error::Capability(_))
        ));
    }
}
