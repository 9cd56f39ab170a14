use crate::scalar::Real;

/// Generalized Laguerre polynomial `L_n^α(x)` by the three-term recurrence.
pub fn laguerre_fn<T: Real>(n: usize, alpha: T, x: T) -> T {
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = T::one() + alpha - x;
    for j in 1..n {
        let jf = T::from_index(j);
        let next =
            ((T::two() * jf + T::one() + alpha - x) * cur - (jf + alpha) * prev) / (jf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        assert_eq!(laguerre_fn(0, 0.3, 1.7f64), 1.0);
        assert!((laguerre_fn(1, 0.3, 1.7f64) - (1.0 + 0.3 - 1.7)).abs() < 1e-15);
        let (a, x) = (2.0f64, 0.4f64);
        let l2 = 0.5 * (x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0));
        assert!((laguerre_fn(2, a, x) - l2).abs() < 1e-14);
    }

    #[test]
    fn value_at_zero_is_binomial() {
        // L_n^α(0) = C(n+α, n)
        let a = 3.0f64;
        let n = 7;
        let mut c = 1.0;
        for j in 1..=n {
            c *= (a + j as f64) / j as f64;
        }
        assert!((laguerre_fn(n, a, 0.0) - c).abs() < 1e-10);
    }
}
