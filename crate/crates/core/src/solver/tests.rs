use std::f64::consts::PI;

use super::*;
use crate::field::{dilatation, MuGenerator};
use crate::geometry::{domain_mask, make_grid, BBox, DomainSpec, Grid};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn full(grid: Grid, f: impl Fn(C64) -> C64) -> ComplexField {
    ComplexField::from_fn(grid, vec![true; grid.len()], f)
}

fn disk_mu(grid: Grid, k: C64) -> ComplexField {
    MuGenerator::Constant(k).sample(grid, &DomainSpec::UnitDisk).unwrap()
}

/// `z + c z̄` on the closed unit disk, `z + c/z` outside.
fn disk_solution(k: C64, z: C64) -> C64 {
    if z.norm() <= 1.0 {
        z + k * z.conj()
    } else {
        z + k / z
    }
}

#[test]
fn wirtinger_is_exact_on_affine_maps() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 1.0), 17).unwrap();
    let (fz, fzb) = wirtinger(&full(g, |z| z));
    assert!(fz.values.iter().all(|v| (v - 1.0).norm() < 1e-12));
    assert!(fzb.values.iter().all(|v| v.norm() < 1e-12));
    let (fz, fzb) = wirtinger(&full(g, |z| z.conj()));
    assert!(fz.values.iter().all(|v| v.norm() < 1e-12));
    assert!(fzb.values.iter().all(|v| (v - 1.0).norm() < 1e-12));
}

#[test]
fn wirtinger_of_a_cubic_converges_at_second_order() {
    let err = |n: usize| {
        let g = make_grid(BBox::square(c(0.0, 0.0), 1.0), n).unwrap();
        let (fz, _) = wirtinger(&full(g, |z| z * z * z));
        fz.values
            .iter()
            .enumerate()
            .map(|(k, v)| (v - 3.0 * g.point_at(k).powu(2)).norm())
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(33), err(65));
    assert!(e1 > 0.0 && e1 / e2 > 3.5, "{e1} {e2}");
    // z² itself is differentiated exactly, edges included
    let g = make_grid(BBox::square(c(0.0, 0.0), 1.0), 9).unwrap();
    let (fz, _) = wirtinger(&full(g, |z| z * z));
    for (k, v) in fz.values.iter().enumerate() {
        assert!((v - 2.0 * g.point_at(k)).norm() < 1e-12);
    }
}

#[test]
fn beurling_of_zero_is_zero_and_contracts() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 2.0), 64).unwrap();
    let zero = ComplexField::zeros(g, vec![true; g.len()]);
    assert!(beurling_transform(&zero).unwrap().values.iter().all(|v| v.norm() == 0.0));
    let w = full(g, |z| if z.norm() < 0.8 { c(z.re.sin(), z.im * z.re) } else { c(0.0, 0.0) });
    let s = beurling_transform(&w).unwrap();
    assert!(s.l2_norm() <= w.l2_norm() * (1.0 + 1e-10));
    // the multiplier is unimodular off ξ = 0, so only the mean is lost
    let mean: C64 = w.values.iter().sum::<C64>() / w.values.len() as f64;
    let lost = mean.norm_sqr() * g.len() as f64 * g.cell_area();
    assert!((s.l2_norm().powi(2) + lost - w.l2_norm().powi(2)).abs() < 1e-10 * w.l2_norm().powi(2));
}

#[test]
fn beurling_of_the_disk_indicator() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 4.0), 1024).unwrap();
    let chi = full(g, |z| if z.norm() < 1.0 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let s = beurling_transform(&chi).unwrap();
    // periodic images add about 3 G₄ z² with G₄ ≈ 3.15/8⁴, so the samples
    // stay within |z| ≤ 1.6
    for z in [c(1.5, 0.0), c(0.0, 1.3), c(1.0, 1.0), c(-1.2, 0.7), c(0.3, -1.5), c(-1.1, -1.1)] {
        let want = -1.0 / (z * z);
        let got = s.sample(z).unwrap();
        assert!((got - want).norm() < 0.02 * want.norm(), "{z}: {got} vs {want}");
    }
}

#[test]
fn support_in_the_guard_band_is_rejected() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 1.0), 32).unwrap();
    let w = full(g, |z| if z.re > 0.6 { c(0.1, 0.0) } else { c(0.0, 0.0) });
    assert!(matches!(beurling_transform(&w), Err(Error::SupportViolation { .. })));
    let mu = ComplexField::from_fn(g, vec![true; g.len()], |_| c(0.2, 0.0));
    assert!(matches!(mrm_solve(&mu, &SolverOptions::default()), Err(Error::SupportViolation { .. })));
}

#[test]
fn cauchy_transform_inverts_dbar() {
    // ω = 1 on the unit disk: C ω = z̄ inside and 1/z outside.
    let g = make_grid(BBox::square(c(0.0, 0.0), 4.0), 512).unwrap();
    let chi = full(g, |z| if z.norm() < 1.0 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let u = cauchy_transform(&chi).unwrap();
    for z in [c(0.3, 0.2), c(-0.5, 0.1), c(1.5, 0.5), c(0.0, -2.5)] {
        let want = if z.norm() < 1.0 { z.conj() } else { 1.0 / z };
        assert!((u.sample(z).unwrap() - want).norm() < 0.02, "{z}");
    }
}

#[test]
fn zero_coefficient_gives_the_identity() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 2.0), 64).unwrap();
    let b = mrm_solve(&disk_mu(g, c(0.0, 0.0)), &SolverOptions::default()).unwrap();
    assert_eq!(b.residual, 0.0);
    for (k, v) in b.f.values.iter().enumerate() {
        let z = g.point_at(k);
        if z.re.abs() <= 1.0 && z.im.abs() <= 1.0 {
            assert!((v - z).norm() < 1e-10);
        }
    }
}

#[test]
fn constant_disk_coefficient_matches_closed_form() {
    let k = c(0.3, 0.0);
    let g = make_grid(BBox::square(c(0.0, 0.0), 2.0), 1024).unwrap();
    let opts = SolverOptions { tol: 1e-10, max_iter: 200 };
    let b = mrm_solve(&disk_mu(g, k), &opts).unwrap();
    let mut worst: f64 = 0.0;
    for (idx, v) in b.f.values.iter().enumerate() {
        let z = g.point_at(idx);
        if z.norm() <= 0.9 {
            let want = disk_solution(k, z);
            worst = worst.max((v - want).norm() / want.norm().max(0.1));
        }
    }
    assert!(worst < 0.01, "relative error {worst}");
    assert!(b.provenance.iterations <= contraction_bound(0.3, opts.tol));
    assert!(b.residual <= 10.0 * opts.tol * PI);
}

#[test]
fn residual_history_decreases_and_tracks_tol() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 2.0), 128).unwrap();
    let mu = disk_mu(g, c(0.2, 0.4));
    let mut ratios = Vec::new();
    for tol in [1e-6, 1e-7, 1e-8] {
        let b = mrm_solve(&mu, &SolverOptions { tol, max_iter: 200 }).unwrap();
        assert!(b.provenance.updates.windows(2).all(|w| w[1] < w[0]));
        ratios.push(b.residual / tol);
    }
    for r in ratios {
        assert!((0.01..=1.0).contains(&r), "{r}");
    }
}

#[test]
fn solver_errors() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 2.0), 64).unwrap();
    let opts = SolverOptions { tol: 1e-12, max_iter: 2 };
    let err = mrm_solve(&disk_mu(g, c(0.5, 0.0)), &opts).unwrap_err();
    assert!(matches!(err, Error::NoConvergence { iterations: 2, .. }));
    let b = mrm_iterate(&disk_mu(g, c(0.5, 0.0)), &opts).unwrap();
    assert!(!b.provenance.converged);
    let err = mrm_solve(&disk_mu(g, c(1.0, 0.0)), &SolverOptions::default()).unwrap_err();
    assert!(matches!(err, Error::EllipticityViolation { .. }));
}

#[test]
fn bundle_invariants_hold() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 2.0), 64).unwrap();
    let b = mrm_solve(&disk_mu(g, c(0.1, -0.3)), &SolverOptions::default()).unwrap();
    assert!((b.residual_norm() - b.residual).abs() <= 1e-12);
    assert_eq!(b.recompute_jacobian(), b.jacobian);
    let mut buf = Vec::new();
    b.write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), g.len() + 1);
    assert!(b.apply(c(0.0, 0.0)).is_some() && b.apply(c(3.0, 0.0)).is_none());
}

#[test]
fn truncated_solve_records_the_cap() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 2.0), 64).unwrap();
    let mu = MuGenerator::LogarithmicBlowup { center: c(0.0, 0.0) }
        .sample(g, &DomainSpec::UnitDisk)
        .unwrap();
    let b = mrm_solve_truncated(&mu, 4.0, &SolverOptions::default()).unwrap();
    assert_eq!(b.provenance.truncation, Some(4.0));
    assert!(b.provenance.mu_sup <= 0.6 + 1e-12);
}

#[test]
fn residual_of_affine_and_quadratic_maps() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 1.0), 33).unwrap();
    let mask = domain_mask(&DomainSpec::UnitDisk, &g).unwrap();
    let f = ComplexField::from_fn(g, mask.clone(), |z| z + 0.3 * z.conj());
    let mu = ComplexField::from_fn(g, mask.clone(), |_| c(0.3, 0.0));
    assert!(beltrami_residual(&f, &mu).unwrap() < 1e-10);
    let f = ComplexField::from_fn(g, mask.clone(), |z| z * z);
    let mu = ComplexField::from_fn(g, mask.clone(), |_| c(0.5, 0.0));
    let want = 0.5 * ComplexField::from_fn(g, mask, |z| 2.0 * z).l2_norm();
    let got = beltrami_residual(&f, &mu).unwrap();
    assert!(got > 0.0 && (got - want).abs() < 1e-10 * want);
}

#[test]
fn residual_of_the_radial_stretch_converges() {
    let annulus = DomainSpec::annulus(c(0.0, 0.0), 0.2, 0.9).unwrap();
    let res = |n: usize| {
        let g = make_grid(BBox::square(c(0.0, 0.0), 1.0), n).unwrap();
        let mu = MuGenerator::RadialStretch { k: 2.0 }.sample(g, &annulus).unwrap();
        let f = ComplexField::from_fn(g, mu.mask.clone(), |z| z * z.norm());
        beltrami_residual(&f, &mu).unwrap()
    };
    let (r1, r2) = (res(65), res(129));
    assert!(r1 / r2 > 3.5, "{r1} {r2}");
}

#[test]
fn radial_stretch_has_constant_dilatation() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 1.0), 32).unwrap();
    for k in [2.0, 0.5, 3.0] {
        let mu = MuGenerator::RadialStretch { k }.sample(g, &DomainSpec::UnitDisk).unwrap();
        let kk = dilatation(&mu).unwrap();
        for v in kk.masked_values() {
            assert!((v - f64::max(k, 1.0 / k)).abs() < 1e-12);
        }
    }
}

#[test]
fn homeo_check_on_simple_maps() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 1.0), 64).unwrap();
    let mask = domain_mask(&DomainSpec::UnitDisk, &g).unwrap();
    let zero = ComplexField::zeros(g, mask.clone());
    let id = SolutionBundle::from_samples(ComplexField::from_fn(g, mask.clone(), |z| z), zero.clone()).unwrap();
    let r = homeo_check(&id, 1);
    assert_eq!(r.positive_fraction, 1.0);
    assert!(r.consistent && r.sampled_cells > 0);
    let bar = SolutionBundle::from_samples(ComplexField::from_fn(g, mask, |z| z.conj()), zero).unwrap();
    let r = homeo_check(&bar, 1);
    assert_eq!(r.positive_fraction, 0.0);
    assert_eq!(r.reversed_cells, r.sampled_cells);
    assert!(!r.consistent);
}

#[test]
fn homeo_check_detects_a_double_cover() {
    let annulus = DomainSpec::annulus(c(0.0, 0.0), 0.3, 0.9).unwrap();
    let g = make_grid(BBox::square(c(0.0, 0.0), 1.0), 96).unwrap();
    let mask = domain_mask(&annulus, &g).unwrap();
    let f = ComplexField::from_fn(g, mask.clone(), |z| z * z);
    let b = SolutionBundle::from_samples(f, ComplexField::zeros(g, mask)).unwrap();
    let r = homeo_check(&b, 5);
    assert_eq!(r.positive_fraction, 1.0);
    assert_eq!(r.reversed_cells, 0);
    assert!(r.overlapping_pairs > 0);
    assert!(!r.consistent);
}

#[test]
fn solver_output_is_a_homeomorphism() {
    let g = make_grid(BBox::square(c(0.0, 0.0), 2.0), 128).unwrap();
    let b = mrm_solve(&disk_mu(g, c(0.5, 0.2)), &SolverOptions::default()).unwrap();
    let r = homeo_check(&b, 9);
    assert!(r.consistent, "{r:?}");
}
