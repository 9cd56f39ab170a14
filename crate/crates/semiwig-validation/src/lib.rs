//! Reporting helpers of the acceptance suite in `tests/acceptance.rs`.
//!
//! The suite lives in its own crate so that its long-running checks build and run
//! after the unit and integration tests of the other workspace members.

use std::io::Write;

use semiwig::stats::fit_loglog;

/// Writes `ID PASS|FAIL detail` to stderr, bypassing test output capture, and returns `pass`.
pub fn report(id: &str, pass: bool, detail: &str) -> bool {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "{id} {verdict} {detail}");
    pass
}

/// Log-log slope of `values` against `eps` over at least three samples.
pub fn slope_of(eps: &[f64], values: &[f64]) -> f64 {
    fit_loglog(eps, values, 3).expect("slope fit").slope
}
