use std::io::Write;

use crate::error::{Error, Result};
use crate::phase_space::{weighted_norm, PhaseField, Weight};
use crate::scalar::{creal, Real};
use crate::stats::{fit_line, fit_loglog, LinearFit};

use super::series::ExpansionSeries;

/// Minimum number of distinct ε values for a slope fit.
pub const MIN_EPS_SAMPLES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemainderRow {
    pub eps: f64,
    pub order: usize,
    pub t: f64,
    pub norm: Weight,
    pub value: f64,
}

/// Remainder norms with the fitted ε-slope (at the latest time) and the
/// growth rate in `t` (at the smallest ε).
#[derive(Clone, Debug, PartialEq)]
pub struct RemainderReport {
    pub rows: Vec<RemainderRow>,
    pub slope: LinearFit,
    /// Least-squares rate `γ` of `ln value ≈ γ t + c`, when several times are present.
    pub growth_rate: Option<f64>,
}

impl RemainderReport {
    pub fn from_rows(rows: Vec<RemainderRow>) -> Result<Self> {
        let t_last = rows.iter().map(|r| r.t).fold(f64::NEG_INFINITY, f64::max);
        let mut at_t: Vec<&RemainderRow> = rows
            .iter()
            .filter(|r| (r.t - t_last).abs() < 1e-12)
            .collect();
        at_t.sort_by(|a, b| b.eps.total_cmp(&a.eps));
        at_t.dedup_by(|a, b| (a.eps - b.eps).abs() < 1e-15);
        if at_t.len() < MIN_EPS_SAMPLES {
            return Err(Error::Statistics(format!(
                "remainder slope needs at least {MIN_EPS_SAMPLES} ε samples, got {}",
                at_t.len()
            )));
        }
        let xs: Vec<f64> = at_t.iter().map(|r| r.eps).collect();
        let ys: Vec<f64> = at_t.iter().map(|r| r.value).collect();
        let slope = fit_loglog(&xs, &ys, MIN_EPS_SAMPLES)?;
        let eps_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let over_t: Vec<&RemainderRow> = rows
            .iter()
            .filter(|r| (r.eps - eps_min).abs() < 1e-15)
            .collect();
        let growth_rate = if over_t.len() >= 2 && over_t.iter().all(|r| r.value > 0.0) {
            let ts: Vec<f64> = over_t.iter().map(|r| r.t).collect();
            let ls: Vec<f64> = over_t.iter().map(|r| r.value.ln()).collect();
            fit_line(&ts, &ls).ok().map(|f| f.slope)
        } else {
            None
        };
        Ok(Self {
            rows,
            slope,
            growth_rate,
        })
    }

    /// CSV with header `eps,N,t,norm,value,fitted_slope`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "eps,N,t,norm,value,fitted_slope")?;
        for r in &self.rows {
            let norm = match r.norm {
                Weight::PlainL2 => "plain-l2",
                Weight::GaussianREps => "gaussian-r-eps",
            };
            writeln!(
                w,
                "{:e},{},{:e},{},{:e},{:e}",
                r.eps, r.order, r.t, norm, r.value, self.slope.slope
            )?;
        }
        Ok(())
    }
}

/// One `(oracle, series)` pair at a given ε and time.
pub struct RemainderSample<'a, T> {
    pub oracle: &'a PhaseField<T>,
    pub series: &'a ExpansionSeries<T>,
}

/// `‖W̃^ε − W̃_h − Σ_{l≤N} ε^{l/2} Z̃^{(l)}‖` per sample, plus slope and growth fits.
pub fn remainder_diagnostics<T: Real>(
    samples: &[RemainderSample<'_, T>],
    n: usize,
    norm: Weight,
) -> Result<RemainderReport> {
    let mut rows = Vec::with_capacity(samples.len());
    for s in samples {
        s.oracle.check_compatible(s.series.base())?;
        let mut diff = s.oracle.clone();
        diff.axpy(creal(-T::one()), &s.series.partial_sum(n)?);
        rows.push(RemainderRow {
            eps: s.series.eps.as_f64(),
            order: n,
            t: s.series.t.as_f64(),
            norm,
            value: weighted_norm(&diff, norm)?.as_f64(),
        });
    }
    RemainderReport::from_rows(rows)
}
