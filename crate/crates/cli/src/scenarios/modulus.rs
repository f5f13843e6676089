//! Discrete modulus, closed-form bounds and the modulus inequality.

use std::f64::consts::{PI, TAU};

use beltrami_core::error::Result as CoreResult;
use beltrami_core::field::{Analytic, MuGenerator};
use beltrami_core::geometry::{make_grid, AnalyticMap, BBox, DomainSpec, PlaneMap, C64};
use beltrami_core::modulus::{
    dashed_line_bound, discrete_modulus, modulus_inequality_check, ring_bound, weak_flatness_probe, weighted_min_closed_form,
    CurveFamily, FlatnessOptions, InequalityOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Entry, Job};
use crate::config::{DomainConfig, MuConfig, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::row;
use crate::table::{col, Column, Plot, Table, TableSpec};

pub(super) static ENTRIES: &[&Entry] = &[
    &ANNULUS,
    &CIRCLES,
    &WEIGHTED_MIN,
    &RING_BOUND,
    &DASHED_BOUND,
    &INEQUALITY,
    &FLATNESS,
];

const RING_COLUMNS: &[Column] = &[
    col("family", "label", "curve family: radial segments or concentric circles"),
    col("resolution", "nodes", "grid nodes per side"),
    col("inner", "length", "inner radius r1"),
    col("outer", "length", "outer radius r2"),
    col("curves", "count", "curves in the family"),
    col("modulus", "1", "discrete modulus"),
    col("closed_form", "1", "ring modulus: 2π/log(r2/r1) for segments, log(r2/r1)/2π for circles"),
    col("relative_error", "1", "|modulus - closed_form| / closed_form"),
    col("kkt_residual", "1", "largest KKT violation of the dual multipliers"),
    col("iterations", "count", "dual ascent sweeps"),
    col("converged", "flag", "sweep tolerance reached"),
];

static RING_TABLE: TableSpec = TableSpec {
    name: "modulus",
    description: "discrete modulus of a ring family against its closed form",
    columns: RING_COLUMNS,
    plot: None,
};

const RING_KEYS: &[(&str, &str)] = &[
    ("resolution", "grid nodes per side (512)"),
    ("radii", "[r1, r2] of the ring ([0.25, 1.0])"),
    ("center", "ring centre ([0, 0])"),
    ("tol", "dual ascent tolerance (1e-3)"),
];

static ANNULUS: Entry = Entry {
    name: "annulus-modulus",
    description: "modulus of the radial segments crossing a ring, against 2π/log(r2/r1)",
    tags: &["modulus"],
    keys: RING_KEYS,
    tables: &[&RING_TABLE],
    build: |cfg, _| ring_job(cfg, true),
};

static CIRCLES: Entry = Entry {
    name: "circle-family-modulus",
    description: "modulus of the circles separating a ring, against log(r2/r1)/2π",
    tags: &["modulus"],
    keys: RING_KEYS,
    tables: &[&RING_TABLE],
    build: |cfg, _| ring_job(cfg, false),
};

fn ring_job(cfg: &ScenarioConfig, radial: bool) -> CliResult<Job> {
    let n = cfg.resolution_or(512)?;
    let (r1, r2) = cfg.radii_or([0.25, 1.0])?;
    let z0 = cfg.center_or(C64::new(0.0, 0.0));
    let tol = cfg.tol_or(1e-3)?;
    Ok(Box::new(move || {
        let grid = make_grid(BBox::square(z0, 1.05 * r2), n)?;
        let (family, label, exact) = if radial {
            (CurveFamily::radial_segments(grid, z0, r1, r2)?, "radial-segments", TAU / (r2 / r1).ln())
        } else {
            (CurveFamily::circles(grid, z0, r1, r2)?, "circles", (r2 / r1).ln() / TAU)
        };
        let m = discrete_modulus(&family, tol)?.check()?;
        let mut t = Table::new(&RING_TABLE);
        t.push(row![
            label,
            n,
            r1,
            r2,
            m.curves,
            m.value,
            exact,
            (m.value - exact).abs() / exact,
            m.kkt_residual,
            m.iterations,
            m.converged,
        ]);
        Ok(vec![t])
    }))
}

static WEIGHTED_TRIALS: TableSpec = TableSpec {
    name: "trials",
    description: "closed-form minimum of ∫φα² dμ over normalized α against projected gradient on the simplex",
    columns: &[
        col("trial", "index", "trial number"),
        col("atoms", "count", "atoms of the measure space"),
        col("closed_form", "1", "(∫φ^-1 dμ)^-1"),
        col("brute_force", "1", "projected-gradient minimum"),
        col("relative_error", "1", "|closed_form - brute_force| / brute_force"),
        col("mass_defect", "1", "|∫α₀ dμ - 1| of the extremal density"),
        col("attained_defect", "1", "relative gap between ∫φα₀² dμ and closed_form"),
    ],
    plot: None,
};

static WEIGHTED_SUMMARY: TableSpec = TableSpec {
    name: "summary",
    description: "worst case over all trials",
    columns: &[
        col("trials", "count", "number of random weight vectors"),
        col("max_relative_error", "1", "largest closed-form vs brute-force relative error"),
        col("max_mass_defect", "1", "largest admissibility defect of α₀"),
    ],
    plot: None,
};

static WEIGHTED_MIN: Entry = Entry {
    name: "weighted-min",
    description: "closed-form weighted minimum (p = 2) against a brute-force convex minimum",
    tags: &["modulus", "bounds"],
    keys: &[
        ("trials", "random weight vectors (200)"),
        ("samples", "largest number of atoms (64)"),
    ],
    tables: &[&WEIGHTED_TRIALS, &WEIGHTED_SUMMARY],
    build: weighted_min_job,
};

const WEIGHTED_P: f64 = 2.0;

fn weighted_min_job(cfg: &ScenarioConfig, seed: u64) -> CliResult<Job> {
    let trials = cfg.count_or(cfg.trials, "trials", 200, 1)?;
    let atoms = cfg.count_or(cfg.samples, "samples", 64, 1)?;
    Ok(Box::new(move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Table::new(&WEIGHTED_TRIALS);
        let (mut worst, mut worst_mass) = (0.0f64, 0.0f64);
        for trial in 0..trials {
            let n = rng.gen_range(1..=atoms);
            let phi: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-1.0..1.0))).collect();
            let m: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5) / n as f64).collect();
            let w = weighted_min_closed_form(&phi, &m, WEIGHTED_P)?;
            // β = mα turns the constraint into the probability simplex
            let a: Vec<f64> = phi.iter().zip(&m).map(|(f, mk)| f * mk.powf(1.0 - WEIGHTED_P)).collect();
            let brute = simplex_minimum(&a, WEIGHTED_P);
            let mass: f64 = w.alpha.iter().zip(&m).map(|(x, y)| x * y).sum();
            let attained: f64 = w
                .alpha
                .iter()
                .zip(&phi)
                .zip(&m)
                .map(|((x, f), mk)| f * x.powf(WEIGHTED_P) * mk)
                .sum();
            let err = (w.value - brute).abs() / brute;
            worst = worst.max(err);
            worst_mass = worst_mass.max((mass - 1.0).abs());
            t.push(row![
                trial,
                n,
                w.value,
                brute,
                err,
                (mass - 1.0).abs(),
                (attained - w.value).abs() / w.value,
            ]);
        }
        let mut s = Table::new(&WEIGHTED_SUMMARY);
        s.push(row![trials, worst, worst_mass]);
        Ok(vec![t, s])
    }))
}

/// Minimizes `Σ a β^p` on the probability simplex by projected gradient.
fn simplex_minimum(a: &[f64], p: f64) -> f64 {
    let n = a.len();
    let mut beta = vec![1.0 / n as f64; n];
    let amax = a.iter().copied().fold(0.0, f64::max);
    let step = 0.5 / (p * (p - 1.0) * amax);
    for _ in 0..200_000 {
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

/// Euclidean projection onto `{β ≥ 0, Σβ = 1}`.
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

static RING_PROFILES: TableSpec = TableSpec {
    name: "profiles",
    description: "energy ∫∫Qη² of admissible radial profiles against the lower bound I⁻¹",
    columns: &[
        col("weight", "label", "Q: one (Q ≡ 1) or one-plus-r2 (Q = 1 + |z|²)"),
        col("trial", "index", "0 for the extremal profile, then the random ones"),
        col("kind", "label", "extremal or random"),
        col("mass", "1", "∫η dr (admissibility, 1 up to rounding)"),
        col("energy", "1", "∫∫Qη² dm with exact circle norms of Q"),
        col("bound", "1", "I⁻¹ from the numerical circle norms"),
        col("excess", "1", "energy - bound"),
    ],
    plot: None,
};

static RING_BOUNDS: TableSpec = TableSpec {
    name: "bounds",
    description: "ring integral I = ∫dr/‖Q‖₁ against its closed form",
    columns: &[
        col("weight", "label", "Q"),
        col("inner", "length", "r1"),
        col("outer", "length", "r2"),
        col("integral", "1", "I by the midpoint rule on numerical circle norms"),
        col("exact_integral", "1", "closed-form I"),
        col("relative_error", "1", "|integral - exact_integral| / exact_integral"),
        col("bound", "1", "I⁻¹"),
        col("min_random_excess", "1", "smallest energy - bound over the random profiles"),
    ],
    plot: None,
};

static RING_BOUND: Entry = Entry {
    name: "ring-bound",
    description: "extremality of η₀ = 1/(I‖Q‖₁) among random admissible radial profiles",
    tags: &["modulus", "bounds"],
    keys: &[
        ("functions", "weights Q among one, one-plus-r2 (both)"),
        ("center", "ring centre ([0.2, -0.1])"),
        ("radii", "[r1, r2] ([0.1, 0.9])"),
        ("trials", "random profiles per weight (100)"),
    ],
    tables: &[&RING_PROFILES, &RING_BOUNDS],
    build: ring_bound_job,
};

fn ring_bound_job(cfg: &ScenarioConfig, seed: u64) -> CliResult<Job> {
    let weights = cfg.functions_or(&["one", "one-plus-r2"], &["one", "one-plus-r2"])?;
    let z0 = cfg.center_or(C64::new(0.2, -0.1));
    let (r1, r2) = cfg.radii_or([0.1, 0.9])?;
    let trials = cfg.count_or(cfg.trials, "trials", 100, 1)?;
    Ok(Box::new(move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut profiles = Table::new(&RING_PROFILES);
        let mut bounds = Table::new(&RING_BOUNDS);
        for w in &weights {
            let quadratic = w == "one-plus-r2";
            let a = 1.0 + z0.norm_sqr();
            let rb = if quadratic {
                ring_bound(&Analytic(|z: C64| 1.0 + z.norm_sqr()), z0, r1, r2)?
            } else {
                ring_bound(&Analytic(|_| 1.0), z0, r1, r2)?
            };
            // exact circle norms: 2πr for Q ≡ 1, 2πr(1 + |z0|² + r²) for 1 + |z|²
            let norms: Vec<f64> = rb
                .radii
                .iter()
                .map(|r| if quadratic { TAU * r * (a + r * r) } else { TAU * r })
                .collect();
            let energy = |eta: &[f64]| eta.iter().zip(&norms).map(|(e, n)| e * e * n).sum::<f64>() * rb.dr;
            let exact = if quadratic {
                let g = |r: f64| (r / (a + r * r).sqrt()).ln();
                (g(r2) - g(r1)) / (TAU * a)
            } else {
                (r2 / r1).ln() / TAU
            };
            let e0 = energy(&rb.eta);
            profiles.push(row![w.as_str(), 0usize, "extremal", rb.mass(&rb.eta), e0, rb.bound, e0 - rb.bound]);
            let mut min_excess = f64::INFINITY;
            for trial in 1..=trials {
                let raw: Vec<f64> = rb.radii.iter().map(|_| rng.gen_range(0.0..1.0)).collect();
                let s = raw.iter().sum::<f64>() * rb.dr;
                let eta: Vec<f64> = raw.iter().map(|v| v / s).collect();
                let e = energy(&eta);
                min_excess = min_excess.min(e - rb.bound);
                profiles.push(row![w.as_str(), trial, "random", rb.mass(&eta), e, rb.bound, e - rb.bound]);
            }
            bounds.push(row![
                w.as_str(),
                r1,
                r2,
                rb.integral,
                exact,
                (rb.integral - exact).abs() / exact,
                rb.bound,
                min_excess,
            ]);
        }
        Ok(vec![profiles, bounds])
    }))
}

static DASHED_TABLE: TableSpec = TableSpec {
    name: "bounds",
    description: "lower bound ∫dr/‖K‖₁ over the dashed lines D ∩ S(z0, r), ε < r < ε₀",
    columns: &[
        col("eps", "length", "inner radius ε"),
        col("eps0", "length", "outer radius ε₀"),
        col("bound", "1", "∫_ε^ε₀ dr / ‖K_μ‖₁(z0, r)"),
        col("closed_form", "1", "log(ε₀/ε)/(2πK) for constant K on full circles, NaN otherwise"),
        col("relative_error", "1", "|bound - closed_form| / closed_form"),
    ],
    plot: Some(Plot::Lines {
        x: "eps",
        y: &["bound", "closed_form"],
        group: None,
        log_x: true,
        log_y: false,
    }),
};

static DASHED_BOUND: Entry = Entry {
    name: "dashed-line-bound",
    description: "dashed-line lower bound for the modulus of Σ_ε along a ladder of ε",
    tags: &["modulus", "bounds"],
    keys: &[
        ("domain", "domain (disk)"),
        ("mu", "coefficient generator (zero)"),
        ("center", "z0 ([0, 0])"),
        ("ladder", "ε values, decreasing ([0.4, 0.2, 0.1, 0.05, 0.025, 0.0125])"),
        ("outer", "ε₀ (0.5)"),
    ],
    tables: &[&DASHED_TABLE],
    build: dashed_bound_job,
};

fn dilatation_of(mu: C64) -> f64 {
    let m = mu.norm();
    (1.0 + m) / (1.0 - m)
}

fn dashed_bound_job(cfg: &ScenarioConfig, _seed: u64) -> CliResult<Job> {
    let domain = cfg.domain_or(DomainConfig::Disk)?;
    let gen = cfg.mu.clone().unwrap_or(MuConfig::Zero).generator()?;
    let z0 = cfg.center_or(C64::new(0.0, 0.0));
    let ladder = cfg.ladder_or(&[0.4, 0.2, 0.1, 0.05, 0.025, 0.0125], 1)?;
    let eps0 = cfg.outer_or(0.5)?;
    if ladder[0] >= eps0 {
        return Err(CliError::config("ladder values must be below outer"));
    }
    Ok(Box::new(move || {
        let constant_k = match gen {
            MuGenerator::Constant(c) => Some(dilatation_of(c)),
            MuGenerator::RadialStretch { k } => Some(k.max(1.0 / k)),
            MuGenerator::LogarithmicBlowup { .. } => None,
        }
        .filter(|_| domain.boundary_distance(z0) >= eps0 && domain.contains(z0));
        let kf = Analytic(|z: C64| dilatation_of(gen.value(z)));
        let mut t = Table::new(&DASHED_TABLE);
        for &eps in &ladder {
            let b = dashed_line_bound(&kf, &domain, z0, eps, eps0)?;
            let exact = constant_k.map_or(f64::NAN, |k| (eps0 / eps).ln() / (TAU * k));
            t.push(row![eps, eps0, b, exact, (b - exact).abs() / exact]);
        }
        Ok(vec![t])
    }))
}

static INEQUALITY_TABLE: TableSpec = TableSpec {
    name: "checks",
    description: "modulus of the image family fΣ_ε against the 1/K-weighted modulus and the dashed-line bound",
    columns: &[
        col("map", "label", "identity, affine (z + 0.3 z̄) or stretch (z|z|)"),
        col("resolution", "nodes", "source and image grid nodes per side"),
        col("z0_re", "length", "Re z0"),
        col("z0_im", "length", "Im z0"),
        col("eps", "length", "inner radius ε"),
        col("eps0", "length", "outer radius ε₀"),
        col("image_modulus", "1", "discrete modulus of fΣ_ε"),
        col("weighted_bound", "1", "discrete inf ∫ρ²/K dm over densities admissible for Σ_ε"),
        col("dashed_bound", "1", "∫_ε^ε₀ dr / ‖K‖₁(z0, r)"),
        col("weighted_margin", "1", "(image_modulus - weighted_bound) / weighted_bound"),
        col("dashed_margin", "1", "(image_modulus - dashed_bound) / dashed_bound"),
        col("weighted_verdict", "label", "holds when weighted_margin ≥ -slack"),
        col("dashed_verdict", "label", "holds when dashed_margin ≥ -slack"),
        col("dashed_lines", "count", "dashed lines pushed through the map"),
        col("clipped", "flag", "some dashed line left the domain of the map"),
        col("converged", "flag", "both modulus computations converged"),
    ],
    plot: None,
};

static INEQUALITY: Entry = Entry {
    name: "modulus-inequality",
    description: "modulus inequality M(fΣ_ε) ≥ ∫ρ²/K for model maps on the unit disk",
    tags: &["modulus"],
    keys: &[
        ("functions", "maps among identity, affine, stretch (all three)"),
        ("resolutions", "grid resolutions ([256, 512])"),
        ("points", "centres z0 ([[0, 0], [0.2, 0.1]])"),
        ("ladder", "ε values, decreasing ([0.2, 0.1])"),
        ("outer", "ε₀ (0.6)"),
        ("tol", "modulus tolerance (2e-3)"),
    ],
    tables: &[&INEQUALITY_TABLE],
    build: inequality_job,
};

/// Slack on the margins accepted as discretization error.
const INEQUALITY_SLACK: f64 = 0.03;

fn inequality_job(cfg: &ScenarioConfig, _seed: u64) -> CliResult<Job> {
    let maps = cfg.functions_or(&["identity", "affine", "stretch"], &["identity", "affine", "stretch"])?;
    let resolutions = cfg.resolutions_or(&[256, 512])?;
    let points = cfg.points_or(&[C64::new(0.0, 0.0), C64::new(0.2, 0.1)])?;
    let ladder = cfg.ladder_or(&[0.2, 0.1], 1)?;
    let eps0 = cfg.outer_or(0.6)?;
    let tol = cfg.tol_or(2e-3)?;
    if ladder[0] >= eps0 {
        return Err(CliError::config("ladder values must be below outer"));
    }
    if let Some(p) = points.iter().find(|p| !(p.norm() <= 1.0)) {
        return Err(CliError::config(format!("point {p} lies outside the closed unit disk")));
    }
    Ok(Box::new(move || {
        let domain = DomainSpec::UnitDisk;
        let mut t = Table::new(&INEQUALITY_TABLE);
        for name in &maps {
            for &n in &resolutions {
                let opts = InequalityOptions {
                    resolution: n,
                    tol,
                    slack: INEQUALITY_SLACK,
                };
                for &z0 in &points {
                    for &eps in &ladder {
                        let r = match name.as_str() {
                            "identity" => check(&AnalyticMap(|z| z), 1.0, &domain, z0, eps, eps0, &opts)?,
                            "affine" => check(&AnalyticMap(|z: C64| z + 0.3 * z.conj()), 1.3 / 0.7, &domain, z0, eps, eps0, &opts)?,
                            _ => check(&AnalyticMap(|z: C64| z * z.norm()), 2.0, &domain, z0, eps, eps0, &opts)?,
                        };
                        t.push(row![
                            name.as_str(),
                            n,
                            z0.re,
                            z0.im,
                            eps,
                            eps0,
                            r.image_modulus,
                            r.weighted_bound,
                            r.dashed_bound,
                            r.weighted_margin,
                            r.dashed_margin,
                            r.weighted_verdict.as_str(),
                            r.dashed_verdict.as_str(),
                            r.dashed_lines,
                            r.clipped,
                            r.converged,
                        ]);
                    }
                }
            }
        }
        Ok(vec![t])
    }))
}

fn check(
    f: &impl PlaneMap,
    k: f64,
    domain: &DomainSpec,
    z0: C64,
    eps: f64,
    eps0: f64,
    opts: &InequalityOptions,
) -> CoreResult<beltrami_core::modulus::InequalityReport> {
    modulus_inequality_check(f, &Analytic(move |_| k), domain, z0, eps, eps0, opts)
}

static FLATNESS_PROFILE: TableSpec = TableSpec {
    name: "profile",
    description: "discrete modulus of curves joining two boundary continua across r < |z - z0| < R",
    columns: &[
        col("configuration", "label", "disk (z0 = 1), slit (cut toward the free end) or slit-tipward"),
        col("inner_radius", "length", "r"),
        col("outer_radius", "length", "R"),
        col("modulus", "1", "discrete modulus of the joining family"),
        col("curves", "count", "curves in the family"),
        col("converged", "flag", "dual ascent converged"),
    ],
    plot: Some(Plot::Lines {
        x: "inner_radius",
        y: &["modulus"],
        group: Some("configuration"),
        log_x: true,
        log_y: false,
    }),
};

static FLATNESS_GROWTH: TableSpec = TableSpec {
    name: "growth",
    description: "growth of the profile between the first and last rung",
    columns: &[
        col("configuration", "label", "probe configuration"),
        col("center_re", "length", "Re z0"),
        col("center_im", "length", "Im z0"),
        col("cut_angle", "rad", "direction separating the two continua"),
        col("shrink", "1", "first inner radius / last inner radius"),
        col("growth", "1", "last modulus / first modulus"),
    ],
    plot: None,
};

static FLATNESS: Entry = Entry {
    name: "weak-flatness",
    description: "weak-flatness probe at a disk boundary point and on the face of a slit",
    tags: &["modulus", "boundary"],
    keys: &[
        ("functions", "configurations among disk, slit, slit-tipward (disk, slit)"),
        ("resolution", "probe grid nodes per side (384)"),
        ("ladder", "inner radii as fractions of R, decreasing ([1/2, 1/4, 1/8, 1/16, 1/32])"),
        ("tol", "modulus tolerance (2e-3)"),
    ],
    tables: &[&FLATNESS_PROFILE, &FLATNESS_GROWTH],
    build: flatness_job,
};

/// Half opening of the slit configuration.
const SLIT_OPENING: f64 = 0.004;

fn flatness_job(cfg: &ScenarioConfig, _seed: u64) -> CliResult<Job> {
    let configs = cfg.functions_or(&["disk", "slit"], &["disk", "slit", "slit-tipward"])?;
    let n = cfg.resolution_or(384)?;
    let fractions = cfg.ladder_or(&[0.5, 0.25, 0.125, 0.0625, 0.03125], 2)?;
    if fractions[0] >= 1.0 {
        return Err(CliError::config("ladder fractions must be below 1"));
    }
    let tol = cfg.tol_or(2e-3)?;
    Ok(Box::new(move || {
        let mut profile = Table::new(&FLATNESS_PROFILE);
        let mut growth = Table::new(&FLATNESS_GROWTH);
        for name in &configs {
            let (domain, z0, big_r, cut) = match name.as_str() {
                "disk" => (DomainSpec::UnitDisk, C64::new(1.0, 0.0), 0.5, None),
                "slit" => (DomainSpec::slit_square(SLIT_OPENING), C64::new(0.5, 0.5 * SLIT_OPENING), 0.25, Some(0.0)),
                _ => (DomainSpec::slit_square(SLIT_OPENING), C64::new(0.5, 0.5 * SLIT_OPENING), 0.25, Some(PI)),
            };
            let radii: Vec<f64> = fractions.iter().map(|f| f * big_r).collect();
            let opts = FlatnessOptions {
                cut_angle: cut,
                resolution: n,
                tol,
                ..FlatnessOptions::default()
            };
            let p = weak_flatness_probe(&domain, z0, big_r, &radii, &opts)?;
            for k in 0..radii.len() {
                profile.push(row![name.as_str(), p.inner_radii[k], big_r, p.moduli[k], p.curves[k], p.converged[k]]);
            }
            growth.push(row![
                name.as_str(),
                z0.re,
                z0.im,
                p.cut_angle,
                radii[0] / radii[radii.len() - 1],
                p.growth(),
            ]);
        }
        Ok(vec![profile, growth])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projected_gradient_finds_the_uniform_minimum() {
        // Σ β² on the simplex is minimal at β = 1/n
        assert!((simplex_minimum(&[1.0; 4], 2.0) - 0.25).abs() < 1e-12);
        let p = project_simplex(&[2.0, 0.0, 0.0]);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
    }
}
