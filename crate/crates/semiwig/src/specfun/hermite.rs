use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest Hermite index served by [`hermite_fn`].
pub const HERMITE_N_MAX: usize = 256;

/// Normalized Hermite function `ψ_n(x) = (2ⁿ n! √π)^{-1/2} e^{-x²/2} H_n(x)`.
pub fn hermite_fn<T: Real>(n: usize, x: T) -> Result<T> {
    if n > HERMITE_N_MAX {
        return Err(Error::Capability(format!(
            "hermite index {n} above n_max {HERMITE_N_MAX}"
        )));
    }
    Ok(hermite_fns(n, x)[n])
}

/// All of `ψ_0(x) … ψ_{n_max}(x)`, via the recurrence on the normalized functions.
pub fn hermite_fns<T: Real>(n_max: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n_max + 1);
    let psi0 = T::PI().powf(T::lit(-0.25)) * (-x * x * T::half()).exp();
    out.push(psi0);
    if n_max == 0 {
        return out;
    }
    out.push(T::two().sqrt() * x * psi0);
    for n in 1..n_max {
        let nf = T::from_index(n);
        let next = (T::two() / (nf + T::one())).sqrt() * x * out[n]
            - (nf / (nf + T::one())).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{make_rule, RuleKind};
    use approx::assert_abs_diff_eq;

    #[test]
    fn ground_state_at_origin() {
        assert_abs_diff_eq!(
            hermite_fn(0, 0.0f64).unwrap(),
            0.751_125_544_464_942_5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn orthonormal_under_gauss_hermite() {
        let rule = make_rule::<f64>(RuleKind::GaussHermite, 200, 1.0).unwrap();
        let table: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| hermite_fns(40, x)).collect();
        for n in 0..=40 {
            for m in 0..=40 {
                let s: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .zip(&table)
                    .map(|((&x, &w), row)| w * (x * x).exp() * row[n] * row[m])
                    .sum();
                let expect = if n == m { 1.0 } else { 0.0 };
                assert!((s - expect).abs() <= 1e-10, "n={n} m={m} s={s}");
            }
        }
    }

    #[test]
    fn high_index_is_bounded() {
        let v = hermite_fn(100, 0.0f64).unwrap();
        assert!(v.is_finite() && v.abs() < 1.0);
        // ψ_{2j}(0) = (-1)^j π^{-1/4} sqrt((2j)!)/(2^j j!), accumulated in log space.
        let j = 50.0f64;
        let mut log = -0.25 * std::f64::consts::PI.ln() - j * 2f64.ln();
        for i in 1..=100 {
            log += 0.5 * (i as f64).ln();
        }
        for i in 1..=50 {
            log -= (i as f64).ln();
        }
        assert!((v - log.exp()).abs() < 1e-13, "{v} vs {}", log.exp());
    }

    #[test]
    fn index_limit() {
        assert!(matches!(
            hermite_fn(HERMITE_N_MAX + 1, 0.1f64),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn single_precision() {
        let v = hermite_fn(3, 0.7f32).unwrap();
        let w = hermite_fn(3, 0.7f64).unwrap();
        assert!((v as f64 - w).abs() < 1e-6);
    }
}
