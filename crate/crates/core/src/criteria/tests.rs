use std::f64::consts::{E, PI, TAU};

use super::*;
use crate::field::{Analytic, ComplexField, RealField};
use crate::geometry::{domain_mask, make_grid, DomainSpec, C64};

fn origin() -> C64 {
    C64::new(0.0, 0.0)
}

fn halving(start: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| start * 0.5f64.powi(k as i32)).collect()
}

#[test]
fn bmo_of_a_constant_is_zero() {
    let est = bmo_norm(&Analytic(|_z: C64| 3.5), &DomainSpec::UnitDisk, 100, 7).unwrap();
    assert!(est.value.abs() < 1e-12);
    assert_eq!(est.discs, 100);
}

#[test]
fn bmo_of_re_z_is_stable_under_more_discs() {
    let u = Analytic(|z: C64| z.re);
    let a = bmo_norm(&u, &DomainSpec::UnitDisk, 200, 1).unwrap().value;
    let b = bmo_norm(&u, &DomainSpec::UnitDisk, 400, 1).unwrap().value;
    assert!(a > 0.0 && a.is_finite());
    assert!((b - a).abs() < 0.1 * a, "{a} vs {b}");
    // A disc of radius r has mean deviation of Re z equal to 4r/(3π) ≤ 4/(3π).
    assert!(b <= 4.0 / (3.0 * PI) + 1e-3);
}

#[test]
fn bmo_of_log_is_finite_and_translation_invariant() {
    let u = Analytic(|z: C64| (1.0 / z.norm()).ln());
    let v = Analytic(|z: C64| (1.0 / z.norm()).ln() + 10.0);
    let a = bmo_norm(&u, &DomainSpec::UnitDisk, 300, 3).unwrap();
    let b = bmo_norm(&v, &DomainSpec::UnitDisk, 300, 3).unwrap();
    assert!(a.value.is_finite() && a.value > 0.0);
    // the deviation on any disc centred at 0 is 1/e
    assert!(a.value < 1.0);
    assert!((a.value - b.value).abs() < 1e-9);
}

#[test]
fn bmo_needs_enough_discs() {
    assert!(bmo_norm(&Analytic(|_z: C64| 0.0), &DomainSpec::UnitDisk, 99, 0).is_err());
}

#[test]
fn fmo_holds_for_bounded_functions() {
    for z0 in [origin(), C64::new(1.0, 0.0)] {
        let r = fmo_probe(&Analytic(|z: C64| z.re), &DomainSpec::UnitDisk, z0, &halving(0.5, 10)).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{z0}");
        let r = fmo_probe(&Analytic(|_z: C64| 2.0), &DomainSpec::UnitDisk, z0, &halving(0.5, 10)).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }
}

#[test]
fn fmo_log_holds_while_means_diverge() {
    let phi = Analytic(|z: C64| (1.0 / z.norm()).ln());
    let ladder = halving(0.5, 12);
    let r = fmo_probe(&phi, &DomainSpec::UnitDisk, origin(), &ladder).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let means = r.evidence.column("mean").unwrap();
    let devs = r.evidence.column("deviation").unwrap();
    for (k, eps) in ladder.iter().enumerate() {
        // disc mean log(1/ε) + 1/2, mean deviation 1/e
        assert!((means[k] - ((1.0 / eps).ln() + 0.5)).abs() < 2e-3, "{}", means[k]);
        assert!((devs[k] - 1.0 / E).abs() < 2e-3, "{}", devs[k]);
    }
    assert!(means.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn fmo_never_holds_for_inverse_square() {
    let phi = Analytic(|z: C64| 1.0 / z.norm_sqr());
    let r = fmo_probe(&phi, &DomainSpec::UnitDisk, origin(), &halving(0.5, 10)).unwrap();
    assert_ne!(r.verdict, Verdict::Holds);
    let devs = r.evidence.column("deviation").unwrap();
    assert!(devs.windows(2).all(|w| w[1] > 3.0 * w[0]));
}

#[test]
fn fmo_evidence_scales_with_the_function() {
    let ladder = halving(0.5, 8);
    let a = fmo_probe(&Analytic(|z: C64| z.norm().sqrt()), &DomainSpec::UnitDisk, origin(), &ladder).unwrap();
    let b = fmo_probe(&Analytic(|z: C64| 3.0 * z.norm().sqrt()), &DomainSpec::UnitDisk, origin(), &ladder).unwrap();
    let (da, db) = (a.evidence.column("deviation").unwrap(), b.evidence.column("deviation").unwrap());
    for (x, y) in da.iter().zip(&db) {
        assert!((3.0 * x - y).abs() < 1e-12 * y.abs().max(1.0));
    }
    assert_eq!(a.verdict, Verdict::Holds);
    assert_eq!(b.verdict, Verdict::Holds);
}

#[test]
fn fmo_rejects_bad_ladders() {
    let phi = Analytic(|z: C64| z.re);
    assert!(fmo_probe(&phi, &DomainSpec::UnitDisk, origin(), &halving(0.5, 5)).is_err());
    assert!(fmo_probe(&phi, &DomainSpec::UnitDisk, origin(), &[0.1, 0.2, 0.05, 0.02, 0.01, 0.005]).is_err());
    assert!(fmo_probe(&phi, &DomainSpec::UnitDisk, C64::new(2.0, 0.0), &halving(0.5, 8)).is_err());
}

#[test]
fn fmo_on_a_grid_truncates_the_ladder() {
    let grid = make_grid(DomainSpec::UnitDisk.bbox(), 65).unwrap();
    let mask = domain_mask(&DomainSpec::UnitDisk, &grid).unwrap();
    let f = RealField::from_fn(grid, mask, |z| z.re);
    let r = fmo_probe(&f, &DomainSpec::UnitDisk, origin(), &halving(0.5, 10)).unwrap();
    assert_eq!(r.evidence.rows.len(), 4);
    let r = fmo_probe(&f, &DomainSpec::UnitDisk, origin(), &halving(0.1, 10)).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

#[test]
fn loglog_ring_integral_of_one_matches_closed_form() {
    let eps0 = 0.05;
    let ladder = halving(0.02, 10);
    let r = fmo_loglog_check(&Analytic(|_z: C64| 1.0), &DomainSpec::UnitDisk, origin(), eps0, &ladder).unwrap();
    let ring = r.evidence.column("ring_integral").unwrap();
    for (k, eps) in ladder.iter().enumerate() {
        let want = TAU * (1.0 / (1.0 / eps0).ln() - 1.0 / (1.0 / eps).ln());
        assert!((ring[k] - want).abs() < 1e-5 * want, "{} vs {want}", ring[k]);
    }
    assert_eq!(r.verdict, Verdict::Holds);
}

#[test]
fn loglog_ratio_is_bounded_for_log_and_grows_for_inverse_square() {
    let ladder = halving(0.02, 12);
    let r = fmo_loglog_check(
        &Analytic(|z: C64| (1.0 / z.norm()).ln()),
        &DomainSpec::UnitDisk,
        origin(),
        0.05,
        &ladder,
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let r = fmo_loglog_check(&Analytic(|z: C64| 1.0 / z.norm_sqr()), &DomainSpec::UnitDisk, origin(), 0.05, &ladder).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
}

#[test]
fn loglog_outer_radius_is_enforced() {
    let r = fmo_loglog_check(&Analytic(|_z: C64| 1.0), &DomainSpec::UnitDisk, origin(), 0.07, &halving(0.02, 6));
    assert!(matches!(r, Err(crate::Error::InvalidArgument(_))));
    assert!((LOGLOG_RADIUS - (-E).exp()).abs() < 1e-15);
}

#[test]
fn radial_divergence_of_constant_k_has_the_log_slope() {
    for c in [1.0, 2.0, 5.0] {
        let r = radial_divergence(&Analytic(move |_z: C64| c), &DomainSpec::UnitDisk, origin(), 0.5).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let fit = r.fit.unwrap();
        assert_eq!(fit.model, GrowthModel::Log);
        let want = 1.0 / (TAU * c);
        assert!((fit.slope - want).abs() < 0.05 * want, "{} vs {want}", fit.slope);
    }
}

#[test]
fn radial_divergence_of_constant_k_on_a_grid() {
    let grid = make_grid(DomainSpec::UnitDisk.bbox(), 1025).unwrap();
    let mask = domain_mask(&DomainSpec::UnitDisk, &grid).unwrap();
    let k = RealField::constant(grid, mask, 3.0);
    let r = radial_divergence(&k, &DomainSpec::UnitDisk, C64::new(0.1, 0.05), 0.5).unwrap();
    let fit = r.fit.unwrap();
    assert_eq!(fit.model, GrowthModel::Log);
    assert!((fit.slope * TAU * 3.0 - 1.0).abs() < 0.05);
}

#[test]
fn radial_divergence_of_log_k_is_loglog() {
    let k = Analytic(|z: C64| (1.0 / z.norm()).ln());
    let r = radial_divergence(&k, &DomainSpec::UnitDisk, origin(), 0.5).unwrap();
    assert_eq!(r.label, "divergent");
    assert_eq!(r.fit.unwrap().model, GrowthModel::LogLog);
    // F(ε) = (1/2π) log(log(1/ε) / log(1/δ))
    let partial = r.evidence.column("partial_integral").unwrap();
    let eps = r.evidence.column("eps").unwrap();
    for (f, e) in partial.iter().zip(&eps) {
        let want = ((1.0 / e).ln() / 2f64.ln()).ln() / TAU;
        assert!((f - want).abs() < 1e-3 * want, "{f} vs {want}");
    }
}

#[test]
fn radial_divergence_of_inverse_distance_is_convergent() {
    let k = Analytic(|z: C64| 1.0 / z.norm());
    let r = radial_divergence(&k, &DomainSpec::UnitDisk, origin(), 0.5).unwrap();
    assert_eq!(r.label, "convergent");
    assert_eq!(r.verdict, Verdict::Fails);
    assert_eq!(r.fit.unwrap().model, GrowthModel::Bounded);
    // F(ε) = (δ - ε)/2π
    let partial = r.evidence.column("partial_integral").unwrap();
    let eps = r.evidence.column("eps").unwrap();
    for (f, e) in partial.iter().zip(&eps) {
        assert!((f - (0.5 - e) / TAU).abs() < 1e-3 * f);
    }
}

#[test]
fn radial_divergence_checks_its_arguments() {
    let k = Analytic(|_z: C64| 1.0);
    assert!(radial_divergence(&k, &DomainSpec::UnitDisk, C64::new(1.5, 0.0), 0.5).is_err());
    assert!(radial_divergence(&k, &DomainSpec::UnitDisk, origin(), 0.0).is_err());
    assert!(radial_divergence(&k, &DomainSpec::UnitDisk, origin(), 10.0).is_err());
}

fn disk_field(n: usize, f: impl Fn(C64) -> C64) -> ComplexField {
    let grid = make_grid(DomainSpec::UnitDisk.bbox(), n).unwrap();
    let mask = domain_mask(&DomainSpec::UnitDisk, &grid).unwrap();
    ComplexField::from_fn(grid, mask, f)
}

fn sample_points() -> Vec<C64> {
    vec![origin(), C64::new(1.0, 0.0), C64::new(0.0, -1.0)]
}

#[test]
fn applicability_holds_for_bounded_dilatation() {
    let zero = disk_field(257, |_| C64::new(0.0, 0.0));
    let stretch = disk_field(257, |z| {
        // radial stretch with k = 2: μ = (1/3) z/z̄, K ≡ 2
        if z.norm() > 0.0 {
            z / z.conj() / 3.0
        } else {
            C64::new(1.0 / 3.0, 0.0)
        }
    });
    for mu in [zero, stretch] {
        let a = theorem_applicability(&mu, &DomainSpec::UnitDisk, &sample_points(), &ApplicabilityOptions::default()).unwrap();
        assert!(a.fmo.iter().all(|r| r.verdict == Verdict::Holds));
        assert!(a.radial.iter().all(|r| r.verdict == Verdict::Holds), "{:?}", a.radial);
        assert_eq!(a.phi.verdict, Verdict::Holds);
        assert!(a.unverified.is_empty());
        assert_eq!(a.report.verdict, Verdict::Holds);
    }
}

#[test]
fn applicability_flags_a_strong_boundary_singularity() {
    let mu = disk_field(513, |z| {
        let k = (1.0 / (z - C64::new(1.0, 0.0)).norm_sqr()).clamp(1.0, 1e8);
        C64::new((k - 1.0) / (k + 1.0), 0.0)
    });
    let one = C64::new(1.0, 0.0);
    let a = theorem_applicability(&mu, &DomainSpec::UnitDisk, &[one], &ApplicabilityOptions::default()).unwrap();
    assert_eq!(a.radial[0].label, "convergent");
    assert_eq!(a.unverified, vec![one]);
    assert!(a.report.label.contains("unverified"));
}
