use std::f64::consts::PI;

use super::*;
use crate::error::Error;
use crate::harmonic_expansion::harmonic_term;
use crate::phase_space::{
    dilate, wigner_transform, wigner_transform_scaled, Axis, ComplexField, DilationDirection,
    InitialData, PhaseDensity, PhaseField, PhaseGrid,
};
use crate::scalar::{cis, Complex};
use crate::spectral::{harmonic_corrections, solve_spectrum, EigenPair, Potential};
use crate::stats::fit_loglog;

fn mean_x(psi: &ComplexField<f64>) -> f64 {
    let xs = psi.axis.points();
    psi.values
        .iter()
        .zip(&xs)
        .map(|(v, x)| x * v.norm_sqr())
        .sum::<f64>()
        * psi.axis.step()
        / psi.norm_sqr()
}

fn quartic_pairs(eps: f64, n_max: usize) -> (Axis<f64>, Vec<EigenPair<f64>>) {
    let axis = Axis::symmetric(5.0, 512).unwrap();
    (
        axis,
        solve_spectrum(&Potential::quartic(0.1).unwrap(), eps, n_max, axis).unwrap(),
    )
}

#[test]
fn harmonic_coherent_state_follows_the_classical_orbit() {
    let eps = 0.05f64;
    let axis = Axis::symmetric(5.0, 512).unwrap();
    let psi0 = InitialData::Coherent { x0: 1.0, k0: 0.5 }
        .wavefunction(axis, eps)
        .unwrap();
    let cfg = EvolutionConfig::new(1.3).with_method(SplitMethod::Fourth);
    let psi = split_step_evolve(&psi0, &Potential::harmonic(), eps, &cfg).unwrap();
    let want = 1.0 * 1.3f64.cos() + 0.5 * 1.3f64.sin();
    assert!((mean_x(&psi) - want).abs() < 1e-6, "{}", mean_x(&psi));
}

#[test]
fn free_gaussian_spreads_as_in_closed_form() {
    let eps = 0.1f64;
    let axis = Axis::symmetric(12.0, 512).unwrap();
    let psi0 = InitialData::Coherent { x0: 0.0, k0: 0.0 }
        .wavefunction(axis, eps)
        .unwrap();
    let t = 1.5;
    let psi = split_step_evolve_with(&psi0, |_| 0.0, eps, &EvolutionConfig::new(t)).unwrap();
    let z = Complex::new(1.0, t);
    let want = ComplexField::from_fn(axis, |x: f64| {
        (PI * eps).powf(-0.25) / z.sqrt() * (-(x * x) / (2.0 * eps * z)).exp()
    });
    assert!(psi.distance(&want) < 1e-8, "{}", psi.distance(&want));
}

#[test]
fn splitting_agrees_with_the_eigenseries() {
    let eps = 0.1f64;
    let (axis, pairs) = quartic_pairs(eps, 45);
    let psi0 = InitialData::Coherent { x0: 1.0, k0: 0.0 }
        .wavefunction(axis, eps)
        .unwrap();
    let cfg = EvolutionConfig::new(1.0).with_method(SplitMethod::Fourth);
    let a = split_step_evolve(&psi0, &Potential::quartic(0.1).unwrap(), eps, &cfg).unwrap();
    let b = eigenseries_evolve(&psi0, &pairs, eps, 1.0).unwrap();
    assert!(a.distance(&b) < 1e-6, "{}", a.distance(&b));
}

#[test]
fn stationary_states_and_parseval() {
    let eps = 0.1f64;
    let (axis, pairs) = quartic_pairs(eps, 45);
    let psi = eigenseries_evolve(&pairs[3].u, &pairs, eps, 2.0).unwrap();
    for (a, b) in psi.values.iter().zip(&pairs[3].u.values) {
        assert!((a.norm() - b.norm()).abs() < 1e-10);
    }
    let psi0 = InitialData::Coherent { x0: 1.0, k0: 0.3 }
        .wavefunction(axis, eps)
        .unwrap();
    let c = project(&psi0, &pairs).unwrap();
    let s: f64 = c.iter().map(|v| v.norm_sqr()).sum();
    assert!((s - psi0.norm_sqr()).abs() < 1e-8);
    assert!(matches!(
        eigenseries_evolve(&psi0, &pairs[..10], eps, 1.0),
        Err(Error::Truncation { tail_mass, .. }) if tail_mass > 1e-8
    ));
}

#[test]
fn wigner_coefficients_match_direct_projection() {
    let eps = 0.1f64;
    let (axis, pairs) = quartic_pairs(eps, 45);
    let grid = PhaseGrid::new(axis, Axis::symmetric(2.5, 256).unwrap(), eps).unwrap();
    let psi0 = InitialData::Coherent { x0: 0.5, k0: 0.0 }
        .wavefunction(axis, eps)
        .unwrap();
    let t = 0.8;
    let c = project(&psi0, &pairs).unwrap();
    let a = wigner_coefficients(&c, &pairs, eps, t);
    let w = wigner_transform(&eigenseries_evolve(&psi0, &pairs, eps, t).unwrap(), &grid).unwrap();
    for n in 0..3 {
        for m in 0..3 {
            let phi = crate::phase_space::cross_wigner(&pairs[n].u, &pairs[m].u, &grid).unwrap();
            let direct = w.inner(&phi) * (2.0 * PI * eps);
            assert!(
                (direct - a[n][m]).norm() < 1e-8,
                "{n}{m}: {direct} vs {}",
                a[n][m]
            );
        }
    }
}

#[test]
fn step_bounds_and_unitarity() {
    let eps = 0.1f64;
    let axis = Axis::symmetric(5.0, 256).unwrap();
    let psi0 = InitialData::Coherent { x0: 1.0, k0: 0.0 }
        .wavefunction(axis, eps)
        .unwrap();
    let v = Potential::quartic(0.1).unwrap();
    let bad = EvolutionConfig::new(1.0).with_dt(0.2);
    assert!(matches!(
        split_step_evolve(&psi0, &v, eps, &bad),
        Err(Error::Config(_))
    ));
    let cfg = EvolutionConfig::new(10.0).with_dt(1e-3);
    let psi = split_step_evolve(&psi0, &v, eps, &cfg).unwrap();
    assert!(((psi.norm_sqr() - psi0.norm_sqr()) / psi0.norm_sqr()).abs() < 1e-10);
    let wide = ComplexField::from_fn(axis, |x: f64| cis(x) * (-(x * x) / 20.0).exp());
    assert!(matches!(
        split_step_evolve(&wide, &v, eps, &EvolutionConfig::new(0.1)),
        Err(Error::Coverage(_))
    ));
}

#[test]
fn reference_wigner_identities() {
    let eps = 0.1f64;
    let grid = PhaseGrid::square(4.0, 256, eps).unwrap();
    let psi0 = InitialData::Coherent { x0: 1.0, k0: 0.0 }
        .wavefunction(grid.x, eps)
        .unwrap();
    let v = Potential::quartic(0.1).unwrap();
    let w0 = reference_wigner(&psi0, &v, &grid, &EvolutionConfig::new(0.0)).unwrap();
    assert!(w0.distance(&wigner_transform(&psi0, &grid).unwrap()) < 1e-14);
    for t in [0.5, 1.0] {
        let w = reference_wigner(&psi0, &v, &grid, &EvolutionConfig::new(t)).unwrap();
        assert!((w.integral().re - w0.integral().re).abs() < 1e-8);
    }
}

#[test]
fn harmonic_reference_equals_rotated_initial_field() {
    let eps = 0.1f64;
    let t = 0.9;
    let data = InitialData::Coherent { x0: 1.0, k0: 0.0 };
    let sgrid = PhaseGrid::square(12.0, 128, eps).unwrap();
    let phi0 = data.scaled_wavefunction(sgrid.x, eps).unwrap();
    let w0 = wigner_transform_scaled(&phi0, &sgrid).unwrap();
    let rotated = harmonic_term(&w0, t).unwrap();
    let cfg = EvolutionConfig::new(t).with_method(SplitMethod::Fourth);
    let scaled = reference_wigner_scaled(&phi0, &Potential::harmonic(), &sgrid, &cfg).unwrap();
    assert!(scaled.distance(&rotated) < 1e-6);
    // the same comparison in the original variables
    let grid = PhaseGrid::square(3.5, 256, eps).unwrap();
    let psi0 = data.wavefunction(grid.x, eps).unwrap();
    let reference = reference_wigner(&psi0, &Potential::harmonic(), &grid, &cfg).unwrap();
    let undilated = dilate(&rotated, DilationDirection::ToUnscaled, &grid).unwrap();
    assert!(reference.distance(&undilated) < 1e-6 * reference.l2_norm().max(1.0));
    let d = data.wigner_density(eps).unwrap();
    let exact0 = PhaseField::from_real_fn(grid, false, |x: f64, k: f64| d.value(x, k));
    assert!(reference.distance(&exact0) > 1e-2);
}

#[test]
fn harmonic_potential_has_no_coefficient_corrections() {
    let eps = 0.1f64;
    let axis = Axis::symmetric(8.0, 256).unwrap();
    let phi0 = InitialData::Coherent { x0: 0.3, k0: 0.1 }
        .scaled_wavefunction(axis, eps)
        .unwrap();
    let v = Potential::harmonic();
    let corr: Vec<_> = (0..5)
        .map(|n| harmonic_corrections(&v, n, 3).unwrap())
        .collect();
    let e = coefficient_expansion(&phi0, &corr, eps, 1.0, 3).unwrap();
    for d in &e.deltas {
        for row in d {
            assert!(row.iter().all(|v| v.norm() < 1e-14));
        }
    }
    assert!(matches!(
        coefficient_expansion(&phi0, &corr, eps, 1.0, 4),
        Err(Error::Dependency(_))
    ));
}

#[test]
fn phase_space_and_line_projections_agree() {
    let eps = 0.1f64;
    let grid = PhaseGrid::square(8.0, 128, eps).unwrap();
    let phi0 = InitialData::Coherent { x0: 0.3, k0: 0.1 }
        .scaled_wavefunction(grid.x, eps)
        .unwrap();
    let w0 = wigner_transform_scaled(&phi0, &grid).unwrap();
    let v = Potential::quartic(0.1).unwrap();
    let corr: Vec<_> = (0..4)
        .map(|n| harmonic_corrections(&v, n, 2).unwrap())
        .collect();
    let e = coefficient_expansion(&phi0, &corr, eps, 0.7, 2).unwrap();
    for n in 0..4 {
        for m in 0..4 {
            let a = harmonic_coefficient(&w0, n, m, 0.7).unwrap();
            assert!((a - e.harmonic[n][m]).norm() < 1e-10);
        }
    }
}

/// Exact `A_nm(t)` in dilated variables for fixed dilated data.
fn exact_scaled(
    eps: f64,
    phi0: &ComplexField<f64>,
    t: f64,
    n_max: usize,
) -> Vec<Vec<Complex<f64>>> {
    let pairs = solve_spectrum(
        &Potential::quartic(0.1).unwrap().dilated(eps),
        1.0,
        n_max,
        phi0.axis,
    )
    .unwrap();
    let c = project(phi0, &pairs).unwrap();
    wigner_coefficients(&c, &pairs, 1.0, t)
}

#[test]
fn quartic_coefficients_approach_the_harmonic_ones_at_rate_eps() {
    let axis = Axis::symmetric(8.0, 256).unwrap();
    let t = 1.0;
    let mut errs = Vec::new();
    let epss = [0.2f64, 0.1, 0.05];
    for &eps in &epss {
        // fixed dilated data: a coherent state centred at ξ = 1
        let phi0 = InitialData::Coherent {
            x0: eps.sqrt(),
            k0: 0.0,
        }
        .scaled_wavefunction(axis, eps)
        .unwrap();
        let exact = exact_scaled(eps, &phi0, t, 3);
        let v = Potential::quartic(0.1).unwrap();
        let corr: Vec<_> = (0..4)
            .map(|n| harmonic_corrections(&v, n, 2).unwrap())
            .collect();
        let e = coefficient_expansion(&phi0, &corr, eps, t, 2).unwrap();
        let err = (0..4)
            .flat_map(|n| (0..4).map(move |m| (n, m)))
            .map(|(n, m)| (exact[n][m] - e.harmonic[n][m]).norm())
            .fold(0.0, f64::max);
        let odd = e.deltas[0]
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(odd < 1e-12);
        errs.push(err);
    }
    let slope = fit_loglog(&epss, &errs, 3).unwrap().slope;
    assert!((slope - 1.0).abs() < 0.2, "slope {slope}");
}

#[test]
fn secular_phase_drift_matches_the_energy_corrections() {
    let eps = 0.05f64;
    let axis = Axis::symmetric(8.0, 256).unwrap();
    let phi0 = InitialData::Coherent {
        x0: eps.sqrt(),
        k0: 0.0,
    }
    .scaled_wavefunction(axis, eps)
    .unwrap();
    let v = Potential::quartic(0.1).unwrap();
    let corr: Vec<_> = (0..4)
        .map(|n| harmonic_corrections(&v, n, 2).unwrap())
        .collect();
    let (n, m) = (2, 0);
    let phase = |t: f64| {
        let exact = exact_scaled(eps, &phi0, t, 3)[n][m];
        let h = coefficient_expansion(&phi0, &corr, eps, t, 2)
            .unwrap()
            .harmonic[n][m];
        (exact / h).arg()
    };
    let (t, h) = (1.0, 0.05);
    let rate = (phase(t + h) - phase(t - h)) / (2.0 * h);
    let want = -0.5 * eps * (corr[n].a(2) - corr[m].a(2));
    assert!((rate - want).abs() < 0.1 * want.abs(), "{rate} vs {want}");
}
