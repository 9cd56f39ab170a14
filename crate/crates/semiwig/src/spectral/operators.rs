use crate::error::{Error, Result};
use crate::fourier::{along_k, derivative, Direction};
use crate::phase_space::PhaseField;
use crate::scalar::{cplx, creal, Complex, Real};
use crate::spectral::Potential;

/// `Θ^ε[V]W`: Fourier transform in `k` (dual variable `y`), multiplication by
/// `(i/ε)[V(x + εy/2) − V(x − εy/2)]`, inverse transform. For smooth `V` this is
/// `V'(x)∂_k + O(ε²)`.
pub fn apply_theta_symbol<T: Real>(w: &PhaseField<T>, v: &Potential<T>, eps: T) -> PhaseField<T> {
    symbol_action(
        w,
        |x, y| {
            let d = eps * y * T::half();
            cplx(T::zero(), (v.value(x + d) - v.value(x - d)) / eps)
        },
        true,
    )
}

/// `½[V(x + εy/2) + V(x − εy/2)]` acting through the `k`-Fourier variable: the
/// potential part of the cosine bracket, valid for any potential.
pub fn apply_cosine_symbol<T: Real>(w: &PhaseField<T>, v: &Potential<T>, eps: T) -> PhaseField<T> {
    symbol_action(
        w,
        |x, y| {
            let d = eps * y * T::half();
            creal((v.value(x + d) + v.value(x - d)) * T::half())
        },
        false,
    )
}

fn symbol_action<T: Real, F>(w: &PhaseField<T>, sym: F, odd: bool) -> PhaseField<T>
where
    F: Fn(T, T) -> Complex<T> + Sync,
{
    let mut out = w.clone();
    let (nx, nk) = (w.grid.x.n, w.grid.k.n);
    let xs = w.grid.x.points();
    let ys = w.grid.k.wavenumbers();
    along_k(&mut out.values, nx, nk, |ix, s| {
        for (j, v) in s.iter_mut().enumerate() {
            *v = if odd && j == nk / 2 {
                creal(T::zero())
            } else {
                *v * sym(xs[ix], ys[j])
            };
        }
    });
    out
}

/// `L^ε W = k∂_x W − Θ^ε[V]W`.
pub fn apply_liouville<T: Real>(w: &PhaseField<T>, v: &Potential<T>, eps: T) -> PhaseField<T> {
    let dx = derivative(w, Direction::X, 1);
    let theta = apply_theta_symbol(w, v, eps);
    let ks = w.grid.k.points();
    let nk = w.grid.k.n;
    let mut out = dx;
    for (i, (o, t)) in out.values.iter_mut().zip(&theta.values).enumerate() {
        *o = *o * ks[i % nk] - t;
    }
    out
}

/// `M^ε W = (k²/2)W − (ε²/8)∂²_x W + Σ_j (−ε²/4)^j/(2j)! V^{(2j)}(x) ∂_k^{2j} W`; the
/// series terminates for polynomial `V`.
pub fn apply_cosine_bracket<T: Real>(
    w: &PhaseField<T>,
    v: &Potential<T>,
    eps: T,
) -> Result<PhaseField<T>> {
    let deg = v.degree().ok_or_else(|| {
        Error::Capability(
            "cosine bracket series needs a polynomial potential; use the truncated form".into(),
        )
    })?;
    cosine_series(w, v, eps, deg / 2)
}

/// The cosine-bracket series cut after `V^{(2·terms)}` for non-polynomial potentials.
pub fn apply_cosine_bracket_truncated<T: Real>(
    w: &PhaseField<T>,
    v: &Potential<T>,
    eps: T,
    terms: usize,
) -> Result<PhaseField<T>> {
    cosine_series(w, v, eps, terms)
}

fn cosine_series<T: Real>(
    w: &PhaseField<T>,
    v: &Potential<T>,
    eps: T,
    terms: usize,
) -> Result<PhaseField<T>> {
    let xs = w.grid.x.points();
    let ks = w.grid.k.points();
    let nk = w.grid.k.n;
    let dxx = derivative(w, Direction::X, 2);
    let mut out = w.clone();
    let e2 = eps * eps;
    for (i, (o, d)) in out.values.iter_mut().zip(&dxx.values).enumerate() {
        let k = ks[i % nk];
        *o = *o * (k * k * T::half()) - d * (e2 / T::lit(8.0));
    }
    let mut coef = T::one();
    for j in 0..=terms {
        if j > 0 {
            coef = coef * (-e2 / T::lit(4.0)) / (T::from_index(2 * j - 1) * T::from_index(2 * j));
        }
        let vd: Vec<T> = xs
            .iter()
            .map(|&x| v.derivative(x, 2 * j))
            .collect::<Result<_>>()?;
        if vd.iter().all(|&a| a == T::zero()) {
            continue;
        }
        let dk = derivative(w, Direction::K, 2 * j);
        for (i, (o, d)) in out.values.iter_mut().zip(&dk.values).enumerate() {
            *o = *o + d * (coef * vd[i / nk]);
        }
    }
    Ok(out)
}
