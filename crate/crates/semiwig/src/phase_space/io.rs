//! Binary and CSV serialization of sampled fields.
//!
//! Phase fields: little-endian header `nx: u64, nk: u64, x_min, x_max, k_min, k_max,
//! eps: f64, flags: u64` (bit 0 scaled, bit 1 complex) followed by `f64` samples
//! row-major with `x` outer (`re` or `re, im` pairs). Wavefunctions: `nx: u64, x_min,
//! x_max, eps, t: f64` then `re, im` pairs.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::phase_space::{Axis, ComplexField, PhaseField, PhaseGrid};
use crate::scalar::{Complex, Real};

fn put_u64<W: Write>(w: &mut W, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn put_f64<W: Write>(w: &mut W, v: f64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn get_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn get_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn write_phase_field<T: Real, W: Write>(field: &PhaseField<T>, mut w: W) -> Result<()> {
    let g = &field.grid;
    let complex = field.values.iter().any(|v| v.im != T::zero());
    put_u64(&mut w, g.x.n as u64)?;
    put_u64(&mut w, g.k.n as u64)?;
    for v in [g.x.min, g.x.max, g.k.min, g.k.max, g.eps] {
        put_f64(&mut w, v.as_f64())?;
    }
    put_u64(&mut w, u64::from(field.scaled) | (u64::from(complex) << 1))?;
    for v in &field.values {
        put_f64(&mut w, v.re.as_f64())?;
        if complex {
            put_f64(&mut w, v.im.as_f64())?;
        }
    }
    Ok(())
}

pub fn read_phase_field<T: Real, R: Read>(mut r: R) -> Result<PhaseField<T>> {
    let nx = get_u64(&mut r)? as usize;
    let nk = get_u64(&mut r)? as usize;
    let mut h = [0.0; 5];
    for v in h.iter_mut() {
        *v = get_f64(&mut r)?;
    }
    let flags = get_u64(&mut r)?;
    let grid = PhaseGrid::new(
        Axis::new(T::lit(h[0]), T::lit(h[1]), nx)?,
        Axis::new(T::lit(h[2]), T::lit(h[3]), nk)?,
        T::lit(h[4]),
    )?;
    let complex = flags & 2 != 0;
    let mut values = Vec::with_capacity(nx * nk);
    for _ in 0..nx * nk {
        let re = get_f64(&mut r)?;
        let im = if complex { get_f64(&mut r)? } else { 0.0 };
        values.push(Complex::new(T::lit(re), T::lit(im)));
    }
    PhaseField::new(grid, values, flags & 1 != 0)
}

/// CSV with columns `x,k,value` (real part) or `x,k,re,im` for complex fields.
pub fn write_phase_field_csv<T: Real, W: Write>(field: &PhaseField<T>, mut w: W) -> Result<()> {
    let complex = field.values.iter().any(|v| v.im != T::zero());
    let (xs, ks) = (field.grid.x.points(), field.grid.k.points());
    if complex {
        writeln!(w, "x,k,re,im")?;
    } else {
        writeln!(w, "x,k,value")?;
    }
    for (i, v) in field.values.iter().enumerate() {
        let (x, k) = (xs[i / field.grid.k.n], ks[i % field.grid.k.n]);
        if complex {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e}",
                x.as_f64(),
                k.as_f64(),
                v.re.as_f64(),
                v.im.as_f64()
            )?;
        } else {
            writeln!(w, "{:e},{:e},{:e}", x.as_f64(), k.as_f64(), v.re.as_f64())?;
        }
    }
    Ok(())
}

pub fn write_complex_field<T: Real, W: Write>(
    field: &ComplexField<T>,
    eps: T,
    t: T,
    mut w: W,
) -> Result<()> {
    put_u64(&mut w, field.axis.n as u64)?;
    for v in [field.axis.min, field.axis.max, eps, t] {
        put_f64(&mut w, v.as_f64())?;
    }
    for v in &field.values {
        put_f64(&mut w, v.re.as_f64())?;
        put_f64(&mut w, v.im.as_f64())?;
    }
    Ok(())
}

/// Returns the field with its `(ε, t)` header values.
pub fn read_complex_field<T: Real, R: Read>(mut r: R) -> Result<(ComplexField<T>, T, T)> {
    let n = get_u64(&mut r)? as usize;
    let (lo, hi, eps, t) = (
        get_f64(&mut r)?,
        get_f64(&mut r)?,
        get_f64(&mut r)?,
        get_f64(&mut r)?,
    );
    let axis = Axis::new(T::lit(lo), T::lit(hi), n)?;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let re = get_f64(&mut r)?;
        let im = get_f64(&mut r)?;
        values.push(Complex::new(T::lit(re), T::lit(im)));
    }
    if values.len() != n {
        return Err(Error::Config("truncated wavefunction dump".into()));
    }
    Ok((ComplexField::new(axis, values)?, T::lit(eps), T::lit(t)))
}
