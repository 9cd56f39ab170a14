use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITER: usize = 32;
const TOL: f64 = 1e-15;

/// Modulus-squared `m` with its quarter period `K(m)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticParams<T> {
    pub m: T,
    pub quarter_period: T,
}

impl<T: Real> EllipticParams<T> {
    pub fn new(m: T) -> Result<Self> {
        Ok(Self {
            m,
            quarter_period: ellipk(m)?,
        })
    }
}

fn check_modulus<T: Real>(m: T) -> Result<()> {
    if !(m >= T::zero() && m < T::one()) {
        return Err(Error::Domain(format!("modulus m = {m} outside [0, 1)")));
    }
    Ok(())
}

fn tol<T: Real>() -> T {
    T::lit(TOL).max(T::epsilon())
}

/// Complete elliptic integral of the first kind, `K(m) = π / (2 AGM(1, √(1-m)))`.
pub fn ellipk<T: Real>(m: T) -> Result<T> {
    check_modulus(m)?;
    let (mut a, mut b) = (T::one(), (T::one() - m).sqrt());
    for _ in 0..MAX_ITER {
        if (a - b).mag() <= tol::<T>() * a {
            return Ok(T::PI() / (T::two() * a));
        }
        let an = (a + b) * T::half();
        b = (a * b).sqrt();
        a = an;
    }
    Err(Error::Numeric(format!("AGM did not converge for m = {m}")))
}

/// `(sn, cn, dn, am)` at `(u | m)` by the descending Landen (AGM) scheme.
pub fn jacobi_sncndn<T: Real>(u: T, m: T) -> Result<(T, T, T, T)> {
    check_modulus(m)?;
    if m == T::zero() {
        return Ok((u.sin(), u.cos(), T::one(), u));
    }
    let mut a = vec![T::one()];
    let mut c = vec![m.sqrt()];
    let mut b = (T::one() - m).sqrt();
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let an = *a.last().unwrap();
        let cn = (an - b) * T::half();
        let bn = (an * b).sqrt();
        a.push((an + b) * T::half());
        c.push(cn);
        b = bn;
        if cn.mag() <= tol::<T>() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "Landen recursion did not converge for m = {m}"
        )));
    }
    let n = a.len() - 1;
    let mut phi = T::two().powi(n as i32) * a[n] * u;
    let mut prev = phi;
    for j in (1..=n).rev() {
        prev = phi;
        phi = (phi + (c[j] / a[j] * phi.sin()).asin()) * T::half();
    }
    let (sn, cn) = (phi.sin(), phi.cos());
    // The square-root form cancels badly only when m·sn² approaches one.
    let dn = if m * sn * sn < T::half() {
        (T::one() - m * sn * sn).sqrt()
    } else {
        cn / (prev - phi).cos()
    };
    Ok((sn, cn, dn, phi))
}

/// Jacobi amplitude `am(u | m)`.
pub fn jacobi_am<T: Real>(u: T, m: T) -> Result<T> {
    Ok(jacobi_sncndn(u, m)?.3)
}

/// `sd(u | m) = sn / dn`.
pub fn jacobi_sd<T: Real>(u: T, m: T) -> Result<T> {
    let (sn, _, dn, _) = jacobi_sncndn(u, m)?;
    Ok(sn / dn)
}

/// Principal-branch inverse of `sd`: the unique `u ∈ (-K, K)` with `sd(u|m) = v`.
pub fn jacobi_sd_inverse<T: Real>(v: T, m: T) -> Result<T> {
    check_modulus(m)?;
    if !(v * v * (T::one() - m) < T::one()) {
        return Err(Error::Domain(format!(
            "sd⁻¹ argument {v} outside the principal range for m = {m}"
        )));
    }
    let k = ellipk(m)?;
    bracketed_newton(-k, k, |u| {
        let (sn, cn, dn, _) = jacobi_sncndn(u, m)?;
        Ok((sn / dn - v, cn / (dn * dn)))
    })
}

/// Inverse amplitude: the `u` with `am(u | m) = φ`, i.e. the incomplete integral `F(φ | m)`.
pub fn jacobi_am_inverse<T: Real>(phi: T, m: T) -> Result<T> {
    check_modulus(m)?;
    if phi == T::zero() {
        return Ok(T::zero());
    }
    let stretch = T::one() / (T::one() - m).sqrt();
    let (lo, hi) = if phi > T::zero() {
        (phi, phi * stretch)
    } else {
        (phi * stretch, phi)
    };
    bracketed_newton(lo, hi, |u| {
        let (_, _, dn, am) = jacobi_sncndn(u, m)?;
        Ok((am - phi, dn))
    })
}

/// Newton iteration safeguarded by bisection on an increasing function.
fn bracketed_newton<T: Real, F>(mut lo: T, mut hi: T, f: F) -> Result<T>
where
    F: Fn(T) -> Result<(T, T)>,
{
    let mut x = (lo + hi) * T::half();
    for _ in 0..200 {
        let (fx, dfx) = f(x)?;
        if fx == T::zero() {
            return Ok(x);
        }
        if fx > T::zero() {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx > T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::half()
        };
        let scale = T::one().max(next.mag());
        if (next - x).mag() <= T::lit(4.0) * T::epsilon() * scale
            || hi - lo <= T::lit(4.0) * T::epsilon() * scale
        {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Numeric(
        "bracketed root search did not converge".into(),
    ))
}
