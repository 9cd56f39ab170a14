use proptest::prelude::*;

use super::*;
use crate::duhamel::TimeRule;
use crate::error::Error;
use crate::harmonic_expansion::{harmonic_flow, harmonic_term, FlowDirection};
use crate::phase_space::{
    dilate, wigner_transform_scaled, DilationDirection, InitialData, PhaseDensity, PhaseField,
    PhaseGrid,
};
use crate::scalar::creal;
use crate::spectral::{apply_liouville, Potential};

fn coherent(eps: f64, x0: f64, k0: f64) -> crate::phase_space::GaussianDensity<f64> {
    InitialData::Coherent { x0, k0 }
        .wigner_density(eps)
        .unwrap()
}

#[test]
fn harmonic_flow_is_reproduced() {
    let v = Potential::harmonic();
    let (q, p) = integrate_flow(&v, 0.7f64, -0.4, 5.0, 1e-3).unwrap();
    let (a, b) = harmonic_flow(0.7, -0.4, 5.0, FlowDirection::Forward);
    assert!((q - a).abs() < 1e-10 && (p - b).abs() < 1e-10);
}

proptest! {
    #[test]
    fn flow_is_reversible(q in -2.0f64..2.0, p in -2.0f64..2.0) {
        let v = Potential::quartic(0.1).unwrap();
        let (a, b) = integrate_flow(&v, q, p, 1.7, 1e-3).unwrap();
        let (c, d) = integrate_flow(&v, a, b, -1.7, 1e-3).unwrap();
        prop_assert!((c - q).abs() < 1e-9 && (d - p).abs() < 1e-9);
    }

    #[test]
    fn multiscale_inverse_undoes_forward(q in -2.0f64..2.0, p in -2.0f64..2.0, t in 0.0f64..6.0) {
        let (x, k) = multiscale_flow(0.2, q, p, t, FlowDirection::Forward).unwrap();
        let (a, b) = multiscale_flow(0.2, x, k, t, FlowDirection::Inverse).unwrap();
        prop_assert!((a - q).abs() < 1e-10 && (b - p).abs() < 1e-10);
    }
}

#[test]
fn energy_is_conserved_and_large_steps_are_rejected() {
    let v = Potential::quartic(0.1).unwrap();
    let pts = integrate_trajectory(&v, 1.5, 0.3, 10.0, DEFAULT_STEP, 20).unwrap();
    let h0 = pts[0].energy;
    assert!(pts
        .iter()
        .all(|p| (p.energy - h0).abs() <= ENERGY_TOL * (1.0 + h0.abs())));
    match integrate_flow(&v, 3.0, 0.0, 1.0, 0.3) {
        Err(Error::Accuracy { suggested_step, .. }) => assert!(suggested_step < 0.3),
        other => panic!("expected an accuracy error, got {other:?}"),
    }
    assert!(matches!(
        integrate_flow(&v, 1.0, 0.0, 1.0, 1e-8),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        integrate_flow(&v, 1.0, 0.0, 1.0, 0.0),
        Err(Error::Config(_))
    ));
    let mut buf = Vec::new();
    write_trajectory_csv(&pts, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("t,q,p,H\n"));
    assert_eq!(text.lines().count(), 22);
}

#[test]
fn scattered_interpolation_is_accurate() {
    let grid = PhaseGrid::square(4.0, 64, 0.1).unwrap();
    let g =
        |x: f64, k: f64| (-(x - 0.3).powi(2) / 0.4 - (k + 0.2).powi(2) / 0.3).exp() * (1.0 + x * k);
    let f = PhaseField::from_real_fn(grid, false, g);
    let up = Upsampled::new(&f);
    for &(x, k) in &[(0.123, -0.456), (0.77, 0.01), (-1.3, 0.9), (0.3, -0.2)] {
        assert!((up.eval(x, k).re - g(x, k)).abs() < 1e-10, "({x},{k})");
    }
    assert_eq!(up.eval(5.0, 0.0).re, 0.0);
}

#[test]
fn harmonic_liouville_term_is_the_undilated_rotation() {
    let eps = 0.1f64;
    let t = 0.8;
    let data = InitialData::Coherent { x0: 1.0, k0: 0.0 };
    let grid = PhaseGrid::square(4.0, 128, eps).unwrap();
    let d = data.wigner_density(eps).unwrap();
    let w0 = PhaseField::from_real_fn(grid, false, |x: f64, k: f64| d.value(x, k));
    let flow = FlowMap::new(&Potential::harmonic(), grid);
    let wc = liouville_term(&w0, &flow, t).unwrap();
    let sgrid = PhaseGrid::square(12.0, 128, eps).unwrap();
    let ws =
        wigner_transform_scaled(&data.scaled_wavefunction(sgrid.x, eps).unwrap(), &sgrid).unwrap();
    let rotated = dilate(
        &harmonic_term(&ws, t).unwrap(),
        DilationDirection::ToUnscaled,
        &grid,
    )
    .unwrap();
    assert!(
        wc.distance(&rotated) < 1e-8 * wc.l2_norm().max(1.0),
        "{}",
        wc.distance(&rotated)
    );
    let exact = flow.pullback_density(&d, t).unwrap();
    assert!(wc.distance(&exact) < 1e-8 * wc.l2_norm().max(1.0));
}

#[test]
fn liouville_term_conserves_mass_and_norm() {
    let eps = 0.1f64;
    let grid = PhaseGrid::square(4.0, 128, eps).unwrap();
    let d = coherent(eps, 1.0, 0.5);
    let w0 = PhaseField::from_real_fn(grid, false, |x: f64, k: f64| d.value(x, k));
    let flow = FlowMap::new(&Potential::quartic(0.1).unwrap(), grid);
    for t in [0.5, 1.0, 2.0] {
        let w = liouville_term(&w0, &flow, t).unwrap();
        assert!(((w.integral().re - w0.integral().re) / w0.integral().re).abs() < 1e-6);
        assert!(((w.l2_norm() - w0.l2_norm()) / w0.l2_norm()).abs() < 1e-6);
    }
    let small = PhaseGrid::square(2.0, 64, eps).unwrap();
    let w0 = PhaseField::from_real_fn(small, false, |x: f64, k: f64| {
        d.value(x, k) * (x * x < 2.0) as i32 as f64
    });
    let flow = FlowMap::new(&Potential::quartic(0.1).unwrap(), small);
    assert!(matches!(
        liouville_term(&w0, &flow, 1.5),
        Err(Error::Coverage(_))
    ));
}

#[test]
fn wkb_data_concentrate_on_the_transported_manifold() {
    let eps = 0.2f64;
    let t = 1.0;
    let grid = PhaseGrid::square(6.0, 256, eps).unwrap();
    let v = Potential::quartic(0.1).unwrap();
    let d = InitialData::<f64>::GaussFresnel
        .wigner_density(eps)
        .unwrap();
    let w0 = PhaseField::from_real_fn(grid, false, |x: f64, k: f64| d.value(x, k));
    let flow = FlowMap::new(&v, grid);
    let wc = liouville_term(&w0, &flow, t).unwrap();
    // ray-traced manifold: images of (y, S_0'(y)) = (y, y)
    let rays: Vec<(f64, f64)> = (0..=400)
        .map(|i| {
            let y = -2.0 + 4.0 * i as f64 / 400.0;
            integrate_flow(&v, y, y, t, 1e-3).unwrap()
        })
        .collect();
    let dk = grid.k.step();
    let nk = grid.k.n;
    let mut checked = 0;
    for ix in 0..grid.x.n {
        let x = grid.x.point(ix);
        if x.abs() > 1.0 {
            continue;
        }
        let Some(j) = rays
            .windows(2)
            .position(|w| (w[0].0 - x) * (w[1].0 - x) <= 0.0)
        else {
            continue;
        };
        let (a, b) = (rays[j], rays[j + 1]);
        let p = a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0);
        let row = &wc.values[ix * nk..(ix + 1) * nk];
        let ik = (0..nk)
            .max_by(|&i, &j| row[i].re.total_cmp(&row[j].re))
            .unwrap();
        assert!(
            (grid.k.point(ik) - p).abs() <= dk,
            "x={x}: argmax {} vs ray {p}",
            grid.k.point(ik)
        );
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn theta_operators() {
    let mu = 0.3f64;
    let grid = PhaseGrid::square(6.0, 128, 0.1).unwrap();
    let v = Potential::quartic(mu).unwrap();
    let w = PhaseField::from_real_fn(grid, false, |x: f64, k: f64| (-x * x - k * k).exp());
    // ∂³_k e^{−k²} = (−8k³ + 12k) e^{−k²}
    let want = PhaseField::from_real_fn(grid, false, |x: f64, k: f64| {
        -mu * x / 4.0 * (-8.0 * k.powi(3) + 12.0 * k) * (-x * x - k * k).exp()
    });
    assert!(apply_theta(1, &w, &v).unwrap().distance(&want) < 1e-10);
    assert_eq!(apply_theta(2, &w, &v).unwrap().max_abs(), 0.0);
    assert!(ThetaOperator::new(2, &v).unwrap().is_zero());
    for j in 1..4 {
        assert_eq!(
            apply_theta(j, &w, &Potential::harmonic())
                .unwrap()
                .max_abs(),
            0.0
        );
    }
    let scaled = PhaseField::from_real_fn(grid, true, |x: f64, k: f64| (-x * x - k * k).exp());
    assert!(matches!(apply_theta(1, &scaled, &v), Err(Error::Config(_))));
    // for the quartic, L^ε = L_c − ε²Θ_1 exactly
    let eps = 0.1f64;
    let mut full = apply_liouville(&w, &v, eps);
    full.axpy(creal(-1.0), &apply_liouville(&w, &v, eps / 2.0));
    let expected = apply_theta(1, &w, &v)
        .unwrap()
        .scaled_by(creal(-0.75 * eps * eps));
    assert!(full.distance(&expected) < 1e-8);
}

#[test]
fn harmonic_classical_correctors_vanish() {
    let eps = 0.1f64;
    let grid = PhaseGrid::square(4.0, 64, eps).unwrap();
    let flow = FlowMap::new(&Potential::harmonic(), grid);
    let e = ClassicalExpansion::new(
        flow,
        ClassicalBase::Gaussian(coherent(eps, 1.0, 0.0)),
        2,
        TimeRule::default(),
    )
    .unwrap();
    for l in 1..=2 {
        assert_eq!(classical_corrector(&e, l, 0.7).unwrap().max_abs(), 0.0);
    }
}

fn quartic_classical(eps: f64, n: usize) -> (ClassicalExpansion<f64>, Potential<f64>) {
    let grid = PhaseGrid::square(3.5, n, eps).unwrap();
    let v = Potential::quartic(0.1).unwrap();
    let flow = FlowMap::new(&v, grid);
    let e = ClassicalExpansion::new(
        flow,
        ClassicalBase::Gaussian(coherent(eps, 1.0, 0.0)),
        1,
        TimeRule::default(),
    )
    .unwrap();
    (e, v)
}

#[test]
fn quartic_first_corrector_solves_the_wigner_equation_to_next_order() {
    let eps = 0.1f64;
    let (e, v) = quartic_classical(eps, 128);
    assert_eq!(e.term(1, 0.0).unwrap().max_abs(), 0.0);
    let t = 1.0;
    let h = 1e-3;
    let at = |s: f64| {
        let mut u = e.term(0, s).unwrap();
        u.axpy(creal(eps * eps), &e.term(1, s).unwrap());
        u
    };
    let mut res = at(t - 2.0 * h);
    res.axpy(creal(-8.0), &at(t - h));
    res.axpy(creal(8.0), &at(t + h));
    res.axpy(creal(-1.0), &at(t + 2.0 * h));
    let mut res = res.scaled_by(creal(1.0 / (12.0 * h)));
    // the quartic Wigner operator k∂_x − (x + μx³)∂_k + (ε²μx/4)∂³_k
    res.axpy(creal(1.0), &apply_liouville(&at(t), &v, eps));
    let z1 = e.term(1, t).unwrap();
    res.axpy(creal(eps.powi(4)), &apply_theta(1, &z1, &v).unwrap());
    let scale = eps
        * eps
        * apply_theta(1, &e.term(0, t).unwrap(), &v)
            .unwrap()
            .l2_norm();
    assert!(
        res.l2_norm() <= 1e-4 * scale,
        "{} vs {scale}",
        res.l2_norm()
    );

    let s = e.series(t, 1).unwrap();
    assert!(s.partial_sum(1).unwrap().distance(&at(t)) < 1e-14);
}

#[test]
fn first_classical_corrector_is_localized_and_captures_the_leading_error() {
    use crate::schrodinger_oracle::{reference_wigner, EvolutionConfig, SplitMethod};
    let (eps, mu, t) = (0.05f64, 0.1, 0.5);
    let grid = PhaseGrid::square(3.0, 256, eps).unwrap();
    let v = Potential::quartic(mu).unwrap();
    let data = InitialData::Coherent { x0: 1.0, k0: 0.0 };
    let flow = FlowMap::new(&v, grid);
    let e = ClassicalExpansion::new(
        flow,
        ClassicalBase::Gaussian(coherent(eps, 1.0, 0.0)),
        1,
        TimeRule::default(),
    )
    .unwrap();
    let s = e.series(t, 1).unwrap();
    let psi0 = data.wavefunction(grid.x, eps).unwrap();
    let cfg = EvolutionConfig::new(t).with_method(SplitMethod::Fourth);
    let oracle = reference_wigner(&psi0, &v, &grid, &cfg).unwrap();
    let lead = oracle.distance(&s.partial_sum(0).unwrap());
    let next = oracle.distance(&s.partial_sum(1).unwrap());
    assert!(lead / next >= 3.0, "{lead} / {next}");

    // Z_c^{(1)} lives where W_c exceeds e^{-25/2} of its peak (five standard deviations)
    let wc = &s.terms[0];
    let z = &s.terms[1];
    let cut = wc.max_abs() * (-12.5f64).exp();
    let (mut outside, mut total) = (0.0, 0.0);
    for (a, b) in wc.values.iter().zip(&z.values) {
        total += b.norm_sqr();
        if a.re < cut {
            outside += b.norm_sqr();
        }
    }
    assert!(outside / total <= 1e-6, "{}", outside / total);
}
