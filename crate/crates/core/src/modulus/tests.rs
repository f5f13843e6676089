use std::f64::consts::{E, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::criteria::Verdict;
use crate::field::{Analytic, RealField};
use crate::geometry::{make_grid, AnalyticMap, BBox, PlaneMap};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn unit_grid(n: usize) -> Grid {
    make_grid(BBox::square(c(0.0, 0.0), 1.05), n).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn line_integral_of_simple_densities() {
    let g = unit_grid(64);
    let seg = Curve::polyline(vec![c(-1.0, 0.1), c(1.0, 0.1)]);
    let one = DensityField::constant(g, 1.0).unwrap();
    assert!((line_integral(&one, &seg) - 2.0).abs() < 1e-12);
    let zero = DensityField::constant(g, 0.0).unwrap();
    assert_eq!(line_integral(&zero, &seg), 0.0);
    let g = unit_grid(512);
    let r = 0.5;
    let radial = DensityField::from_fn(g, |z| z.norm()).unwrap();
    let circle = Curve::polyline(arc_points(c(0.0, 0.0), r, 0.0, TAU, 1e-3));
    assert!(rel(line_integral(&radial, &circle), TAU * r * r) < 1e-3);
}

#[test]
fn density_rejects_negative_values() {
    let g = unit_grid(8);
    assert!(DensityField::new(g, vec![-1.0; g.len()]).is_err());
    assert!(DensityField::new(g, vec![1.0; 3]).is_err());
}

#[test]
fn family_rejects_curves_outside_the_grid() {
    let g = unit_grid(16);
    let out = Curve::polyline(vec![c(0.0, 0.0), c(2.0, 0.0)]);
    assert!(CurveFamily::new(g, FamilyKind::Paths, vec![out]).is_err());
    let short = Curve::polyline(vec![c(0.0, 0.0)]);
    assert!(CurveFamily::new(g, FamilyKind::Paths, vec![short]).is_err());
    let degenerate = Curve::polyline(vec![c(0.0, 0.0), c(0.0, 0.0)]);
    assert!(CurveFamily::new(g, FamilyKind::Paths, vec![degenerate]).is_err());
}

#[test]
fn annulus_families_match_closed_forms() {
    let g = unit_grid(256);
    let radial = discrete_modulus(&CurveFamily::radial_segments(g, c(0.0, 0.0), 0.25, 1.0).unwrap(), 1e-3).unwrap();
    let circles = discrete_modulus(&CurveFamily::circles(g, c(0.0, 0.0), 0.25, 1.0).unwrap(), 1e-3).unwrap();
    let log4 = 4f64.ln();
    assert!(rel(radial.value, TAU / log4) < 0.03, "{}", radial.value);
    assert!(rel(circles.value, log4 / TAU) < 0.03, "{}", circles.value);
    assert!((radial.value * circles.value - 1.0).abs() < 0.06);
    assert!(radial.converged && circles.converged);
}

#[test]
fn optimal_density_is_admissible() {
    let g = unit_grid(128);
    let fam = CurveFamily::circles(g, c(0.1, 0.0), 0.2, 0.8).unwrap();
    let res = discrete_modulus(&fam, 1e-3).unwrap();
    let ls = line_integrals(&res.density, &fam);
    let min = ls.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(min >= 1.0 - 1e-3, "{min}");
    assert!(res.kkt_residual <= 1e-3);
    assert!((res.value - res.density.energy()).abs() < 1e-12 * res.value);
}

#[test]
fn subfamilies_have_smaller_modulus() {
    let g = unit_grid(128);
    let full = CurveFamily::circles(g, c(0.0, 0.0), 0.25, 1.0).unwrap();
    let half = full.subfamily(|k| k % 2 == 0);
    let inner = CurveFamily::circles(g, c(0.0, 0.0), 0.25, 0.5).unwrap();
    let m_full = discrete_modulus(&full, 1e-4).unwrap().value;
    let m_half = discrete_modulus(&half, 1e-4).unwrap().value;
    let m_inner = discrete_modulus(&inner, 1e-4).unwrap().value;
    assert!(m_half <= m_full * (1.0 + 1e-3));
    assert!(m_inner <= m_full * (1.0 + 1e-3));
    assert!(m_inner < m_full);
}

#[test]
fn single_segment_density_stays_near_the_segment() {
    let g = unit_grid(64);
    let fam = CurveFamily::new(g, FamilyKind::Paths, vec![Curve::polyline(vec![c(-0.5, 0.0), c(0.5, 0.0)])]).unwrap();
    let res = discrete_modulus(&fam, 1e-6).unwrap();
    assert!(res.value > 0.0);
    let h = g.spacing();
    for (k, &v) in res.density.values.iter().enumerate() {
        if v > 0.0 {
            assert!(g.point_at(k).im.abs() <= h + 1e-12);
        }
    }
}

#[test]
fn solver_arguments_are_validated() {
    let g = unit_grid(32);
    let fam = CurveFamily::circles(g, c(0.0, 0.0), 0.25, 1.0).unwrap();
    assert!(discrete_modulus(&fam, 0.0).is_err());
    assert!(discrete_modulus(&fam, 0.1).is_err());
    assert!(discrete_modulus(&fam.subfamily(|_| false), 1e-3).is_err());
    assert!(CurveFamily::circles(g, c(0.0, 0.0), 1.0, 0.5).is_err());
}

#[test]
fn sweep_cap_is_reported() {
    let g = unit_grid(128);
    let fam = CurveFamily::radial_segments(g, c(0.3, 0.0), 0.1, 0.6).unwrap();
    let opts = ModulusOptions {
        tol: 1e-9,
        max_sweeps: 1,
        ..ModulusOptions::default()
    };
    let res = discrete_modulus_with(&fam, &opts).unwrap();
    assert!(!res.converged);
    assert_eq!(res.iterations, 1);
    assert!(res.value > 0.0);
    assert!(matches!(res.check(), Err(Error::NoConvergence { .. })));
}

#[test]
fn node_weights_scale_the_modulus() {
    let g = unit_grid(128);
    let fam = CurveFamily::circles(g, c(0.0, 0.0), 0.25, 1.0).unwrap();
    let plain = discrete_modulus(&fam, 1e-4).unwrap().value;
    let opts = ModulusOptions {
        tol: 1e-4,
        node_weights: Some(vec![0.25; g.len()]),
        ..ModulusOptions::default()
    };
    let weighted = discrete_modulus_with(&fam, &opts).unwrap().value;
    assert!(rel(weighted, 0.25 * plain) < 1e-3);
}

#[test]
fn summary_csv_has_one_row() {
    let g = unit_grid(32);
    let res = discrete_modulus(&CurveFamily::circles(g, c(0.0, 0.0), 0.25, 1.0).unwrap(), 1e-3).unwrap();
    let mut buf = Vec::new();
    res.write_summary_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("value,kkt_residual,iterations"));
    let mut buf = Vec::new();
    res.density.write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), g.len() + 1);
}

/// Minimizes `Σ a β^p` on the probability simplex by projected gradient.
fn simplex_minimum(a: &[f64], p: f64) -> f64 {
    let n = a.len();
    let mut beta = vec![1.0 / n as f64; n];
    let amax = a.iter().copied().fold(0.0, f64::max);
    for _ in 0..50_000 {
        let step = 0.5 / (p * (p - 1.0) * amax);
        let y: Vec<f64> = beta
            .iter()
            .zip(a)
            .map(|(b, ai)| b - step * p * ai * b.powf(p - 1.0))
            .collect();
        let next = project_simplex(&y);
        let change: f64 = next.iter().zip(&beta).map(|(x, y)| (x - y).abs()).sum();
        beta = next;
        if change < 1e-15 {
            break;
        }
    }
    beta.iter().zip(a).map(|(b, ai)| ai * b.powf(p)).sum()
}

fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        acc += uk;
        let t = (acc - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|v| (v - theta).max(0.0)).collect()
}

#[test]
fn weighted_minimum_trivial_cases() {
    let w = weighted_min_closed_form(&[1.0], &[1.0], 2.0).unwrap();
    assert!((w.value - 1.0).abs() < 1e-15 && (w.alpha[0] - 1.0).abs() < 1e-15);
    let w = weighted_min_closed_form(&[3.0; 4], &[0.5; 4], 2.0).unwrap();
    assert!((w.value - 1.5).abs() < 1e-14);
    assert!(w.alpha.iter().all(|a| (a - 0.5).abs() < 1e-15));
    assert!(weighted_min_closed_form(&[1.0, 0.0], &[1.0, 1.0], 2.0).is_err());
    assert!(weighted_min_closed_form(&[1.0, -2.0], &[1.0, 1.0], 2.0).is_err());
    assert!(weighted_min_closed_form(&[1.0], &[1.0], 1.0).is_err());
}

#[test]
fn weighted_minimum_matches_projected_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2.0, 3.0] {
        for _ in 0..20 {
            let n = rng.gen_range(1..=64);
            let phi: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
            let m: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5) / n as f64).collect();
            let w = weighted_min_closed_form(&phi, &m, p).unwrap();
            // β = m α turns the constraint into the simplex
            let a: Vec<f64> = phi.iter().zip(&m).map(|(f, mk)| f * mk.powf(1.0 - p)).collect();
            let brute = simplex_minimum(&a, p);
            assert!(rel(w.value, brute) < 1e-6, "{} vs {brute}", w.value);
            let mass: f64 = w.alpha.iter().zip(&m).map(|(x, y)| x * y).sum();
            assert!((mass - 1.0).abs() < 1e-10);
            let attained: f64 = w.alpha.iter().zip(&phi).zip(&m).map(|((x, f), mk)| f * x.powf(p) * mk).sum();
            assert!(rel(attained, w.value) < 1e-12);
        }
    }
}

#[test]
fn ring_bound_for_unit_weight() {
    let rb = ring_bound(&Analytic(|_| 1.0), c(0.0, 0.0), 0.25, 1.0).unwrap();
    let exact = 4f64.ln() / TAU;
    assert!(rel(rb.integral, exact) < 1e-5);
    assert!(rel(rb.bound, TAU / 4f64.ln()) < 1e-5);
    assert!((rb.mass(&rb.eta) - 1.0).abs() < 1e-10);
    assert_eq!(rb.zero_norm_radii, 0);
}

#[test]
fn ring_bound_extremal_profile_wins() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let z0 = c(0.2, -0.1);
    let q = Analytic(|z: C64| 1.0 + z.norm_sqr());
    let rb = ring_bound(&q, z0, 0.1, 0.9).unwrap();
    // exact circle norms of 1 + |z|² about z0
    let norms: Vec<f64> = rb.radii.iter().map(|r| TAU * r * (1.0 + z0.norm_sqr() + r * r)).collect();
    let energy = |eta: &[f64]| eta.iter().zip(&norms).map(|(e, n)| e * e * n).sum::<f64>() * rb.dr;
    assert!((energy(&rb.eta) - rb.bound).abs() < 1e-8);
    for _ in 0..100 {
        let raw: Vec<f64> = rb.radii.iter().map(|_| rng.gen_range(0.0..1.0)).collect();
        let s = raw.iter().sum::<f64>() * rb.dr;
        let eta: Vec<f64> = raw.iter().map(|v| v / s).collect();
        assert!(energy(&eta) >= rb.bound - 1e-8);
    }
}

#[test]
fn ring_bound_with_vanishing_norm() {
    let rb = ring_bound(&Analytic(|_| 0.0), c(0.0, 0.0), 0.25, 1.0).unwrap();
    assert!(rb.integral.is_infinite());
    assert_eq!(rb.bound, 0.0);
    assert_eq!(rb.zero_norm_radii, RADIAL_NODES);
    assert!((rb.mass(&rb.eta) - 1.0).abs() < 1e-10);
    assert!(ring_bound(&Analytic(|_| 1.0), c(0.0, 0.0), 0.5, 0.5).is_err());
}

#[test]
fn dashed_line_bound_examples() {
    let d = DomainSpec::UnitDisk;
    let one = Analytic(|_| 1.0);
    let b = dashed_line_bound(&one, &d, c(0.0, 0.0), 0.1, 0.5).unwrap();
    assert!(rel(b, 5f64.ln() / TAU) < 1e-5);
    assert!((b - 0.2562).abs() < 1e-4);
    let four = Analytic(|_| 4.0);
    let b4 = dashed_line_bound(&four, &d, c(0.0, 0.0), 0.1, 0.5).unwrap();
    assert!(rel(b4, 0.25 * b) < 1e-14);
    let edge = dashed_line_bound(&one, &d, c(1.0, 0.0), 0.1, 0.5).unwrap();
    assert!(edge > b);
}

#[test]
fn dashed_line_bound_on_grid_fields() {
    let g = unit_grid(128);
    let mask = vec![true; g.len()];
    let d = DomainSpec::UnitDisk;
    let k1 = dashed_line_bound(&RealField::constant(g, mask.clone(), 1.0), &d, c(0.1, 0.0), 0.1, 0.6).unwrap();
    let k3 = dashed_line_bound(&RealField::constant(g, mask, 3.0), &d, c(0.1, 0.0), 0.1, 0.6).unwrap();
    assert!(rel(k3, k1 / 3.0) < 1e-12);
}

#[test]
fn grotzsch_bound_examples() {
    assert!((grotzsch_bound(1.0, E).unwrap() - 2.0 / PI).abs() < 1e-15);
    assert!(grotzsch_bound(1.0, 1.0).is_err());
    assert!(grotzsch_bound(2.0, 1.0).is_err());
    assert!(grotzsch_bound(0.0, 1.0).is_err());
}

#[test]
fn crossing_family_exceeds_grotzsch_bound() {
    let g = unit_grid(256);
    let fam = CurveFamily::crossing_family(g, c(0.0, 0.0), 0.25, 1.0).unwrap();
    let m = discrete_modulus(&fam, 1e-3).unwrap().value;
    assert!(m >= 0.95 * grotzsch_bound(0.25, 1.0).unwrap(), "{m}");
}

#[test]
fn flatness_probe_requires_a_boundary_point() {
    let ladder = [0.1, 0.05];
    let err = weak_flatness_probe(&DomainSpec::UnitDisk, c(0.5, 0.0), 0.2, &ladder, &FlatnessOptions::default());
    assert!(matches!(err, Err(Error::InvalidArgument(_))));
    let err = weak_flatness_probe(&DomainSpec::UnitDisk, c(1.0, 0.0), 0.2, &[0.3], &FlatnessOptions::default());
    assert!(err.is_err());
}

#[test]
fn flatness_profile_grows_at_a_square_edge() {
    let ladder: Vec<f64> = (1..=3).map(|k| 0.4 * 0.5f64.powi(k)).collect();
    let opts = FlatnessOptions {
        resolution: 256,
        ..FlatnessOptions::default()
    };
    let p = weak_flatness_probe(&DomainSpec::square(1.0), c(1.0, 0.0), 0.4, &ladder, &opts).unwrap();
    assert!(p.moduli.windows(2).all(|w| w[1] > w[0]), "{:?}", p.moduli);
    let profile = p.to_radial_profile().unwrap();
    assert_eq!(profile.radii[0], ladder[2]);
}

struct Partial;

impl PlaneMap for Partial {
    fn apply(&self, z: C64) -> Option<C64> {
        (z.re < 0.3).then_some(z)
    }
}

#[test]
fn identity_meets_both_bounds() {
    let opts = InequalityOptions::default();
    let r = modulus_inequality_check(&AnalyticMap(|z| z), &Analytic(|_| 1.0), &DomainSpec::UnitDisk, c(0.0, 0.0), 0.1, 0.5, &opts).unwrap();
    assert!(rel(r.dashed_bound, 5f64.ln() / TAU) < 1e-5);
    assert!(r.dashed_margin >= -0.03 && r.weighted_margin >= -0.03);
    assert_eq!(r.dashed_verdict, Verdict::Holds);
    assert!(!r.clipped);
}

#[test]
fn affine_map_meets_dashed_line_bound() {
    let opts = InequalityOptions::default();
    let k = Analytic(|_| 1.3 / 0.7);
    let r = modulus_inequality_check(&AnalyticMap(|z: C64| z + 0.3 * z.conj()), &k, &DomainSpec::UnitDisk, c(0.2, 0.1), 0.2, 0.7, &opts).unwrap();
    assert!(r.dashed_margin >= 0.0, "{r:?}");
    assert_eq!(r.weighted_verdict, Verdict::Holds);
}

#[test]
fn undefined_images_make_the_check_inconclusive() {
    let opts = InequalityOptions {
        resolution: 64,
        ..InequalityOptions::default()
    };
    let r = modulus_inequality_check(&Partial, &Analytic(|_| 1.0), &DomainSpec::UnitDisk, c(0.0, 0.0), 0.1, 0.5, &opts).unwrap();
    assert!(r.clipped);
    assert_eq!(r.dashed_verdict, Verdict::Inconclusive);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn dashed_line_bound_is_linear_in_k(k in 1.0f64..50.0, x in -0.9f64..0.9, eps in 0.01f64..0.2) {
            let d = DomainSpec::UnitDisk;
            let z0 = c(x, 0.0);
            let one = dashed_line_bound(&Analytic(|_| 1.0), &d, z0, eps, 0.5).unwrap();
            let kk = dashed_line_bound(&Analytic(move |_| k), &d, z0, eps, 0.5).unwrap();
            prop_assert!(rel(kk, one / k) < 1e-12);
        }

        #[test]
        fn grotzsch_bound_is_additive(a in 0.01f64..1.0, s in 1.01f64..5.0, t in 1.01f64..5.0) {
            let b1 = grotzsch_bound(a, a * s).unwrap();
            let b2 = grotzsch_bound(a * s, a * s * t).unwrap();
            let b = grotzsch_bound(a, a * s * t).unwrap();
            prop_assert!((b1 + b2 - b).abs() < 1e-12);
        }
    }
}
