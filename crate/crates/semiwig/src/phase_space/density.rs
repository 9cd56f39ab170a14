use crate::scalar::Real;

/// A phase-space function known in closed form, with directional derivatives.
pub trait PhaseDensity<T: Real>: Send + Sync {
    fn value(&self, x: T, k: T) -> T;

    /// `(v·∇)^order f` at `(x, k)`.
    fn directional(&self, x: T, k: T, v: (T, T), order: usize) -> T;
}

/// `amp · exp(-(z - c)ᵀ A (z - c))` with symmetric positive definite `A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianDensity<T> {
    pub amp: T,
    pub center: (T, T),
    /// `(a_xx, a_xk, a_kk)`
    pub form: (T, T, T),
}

impl<T: Real> GaussianDensity<T> {
    fn exponent_parts(&self, x: T, k: T, v: (T, T)) -> (T, T, T) {
        let (dx, dk) = (x - self.center.0, k - self.center.1);
        let (a, b, c) = self.form;
        let q = a * dx * dx + T::two() * b * dx * dk + c * dk * dk;
        let grad = (-T::two() * (a * dx + b * dk), -T::two() * (b * dx + c * dk));
        let first = grad.0 * v.0 + grad.1 * v.1;
        let second = -T::two() * (a * v.0 * v.0 + T::two() * b * v.0 * v.1 + c * v.1 * v.1);
        (-q, first, second)
    }
}

impl<T: Real> PhaseDensity<T> for GaussianDensity<T> {
    fn value(&self, x: T, k: T) -> T {
        let (phi, _, _) = self.exponent_parts(x, k, (T::zero(), T::zero()));
        self.amp * phi.exp()
    }

    /// For quadratic `φ`, `∂_v^n e^φ = P_n(φ_v) e^φ` with `P_{n+1}(a) = a P_n(a) + φ_vv P_n'(a)`.
    fn directional(&self, x: T, k: T, v: (T, T), order: usize) -> T {
        let (phi, a, b) = self.exponent_parts(x, k, v);
        let mut p = vec![T::one()];
        for _ in 0..order {
            let mut next = vec![T::zero(); p.len() + 1];
            for (j, &c) in p.iter().enumerate() {
                next[j + 1] = next[j + 1] + c;
                if j > 0 {
                    next[j - 1] = next[j - 1] + b * c * T::from_index(j);
                }
            }
            p = next;
        }
        let poly = p.iter().rev().fold(T::zero(), |acc, &c| acc * a + c);
        self.amp * phi.exp() * poly
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directional_derivatives_match_finite_differences() {
        let g = GaussianDensity {
            amp: 0.7,
            center: (0.3, -0.2),
            form: (1.3, -0.4, 0.9),
        };
        let v = (0.6f64, -0.8f64);
        let (x, k) = (0.4, 0.1);
        let h = 1e-3;
        let f = |s: f64| g.value(x + s * v.0, k + s * v.1);
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        let d3 = (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h);
        assert!((g.directional(x, k, v, 1) - d1).abs() < 1e-6);
        assert!((g.directional(x, k, v, 3) - d3).abs() < 1e-4);
        assert!((g.directional(x, k, v, 0) - g.value(x, k)).abs() < 1e-15);
    }
}
