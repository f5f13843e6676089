//! Oscillation and integrability criteria for the dilatation.

use beltrami_core::criteria::{
    bmo_norm, fmo_probe, phi_divergence, phi_equivalents, radial_divergence, theorem_applicability, ApplicabilityOptions,
    CriterionReport, PhiFunction, PHI_CATALOG, PHI_INTEGRALS,
};
use beltrami_core::field::Analytic;
use beltrami_core::geometry::{make_grid, C64};

use super::{Entry, Job};
use crate::config::{DomainConfig, MuConfig, ScenarioConfig};
use crate::error::CliResult;
use crate::row;
use crate::table::{col, Plot, Table, TableSpec};

pub(super) static ENTRIES: &[&Entry] = &[&FMO, &PHI, &RADIAL, &BMO, &APPLICABILITY];

/// Closed-form test functions about `z0`.
const FUNCTIONS: [&str; 5] = ["constant", "re-z", "log-inverse", "inverse-distance", "inverse-square"];

fn catalog(name: &str, z0: C64) -> Analytic<Box<dyn Fn(C64) -> f64 + Send + Sync>> {
    let f: Box<dyn Fn(C64) -> f64 + Send + Sync> = match name {
        "constant" => Box::new(|_| 2.0),
        "re-z" => Box::new(|z: C64| z.re),
        "log-inverse" => Box::new(move |z: C64| (1.0 / (z - z0).norm()).ln()),
        "inverse-distance" => Box::new(move |z: C64| 1.0 / (z - z0).norm()),
        _ => Box::new(move |z: C64| 1.0 / (z - z0).norm_sqr()),
    };
    Analytic(f)
}

fn halving(start: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| start * 0.5f64.powi(k as i32)).collect()
}

fn fit_cells(r: &CriterionReport) -> (String, f64, f64) {
    match r.fit {
        Some(f) => (f.model.as_str().to_string(), f.slope, f.r2),
        None => ("none".to_string(), f64::NAN, f64::NAN),
    }
}

static FMO_LADDER: TableSpec = TableSpec {
    name: "ladder",
    description: "disc means and mean deviations ⨍|φ - φ̃_ε| over B(z0, ε)",
    columns: &[
        col("function", "label", "test function φ"),
        col("eps", "length", "disc radius ε"),
        col("mean", "1", "disc mean φ̃_ε"),
        col("deviation", "1", "mean deviation about φ̃_ε"),
    ],
    plot: Some(Plot::Lines {
        x: "eps",
        y: &["deviation"],
        group: Some("function"),
        log_x: true,
        log_y: true,
    }),
};

static FMO_VERDICTS: TableSpec = TableSpec {
    name: "verdicts",
    description: "finite mean oscillation at z0 per function",
    columns: &[
        col("function", "label", "test function φ"),
        col("verdict", "label", "holds, fails or inconclusive"),
        col("label", "label", "growth classification of the deviations"),
        col("model", "label", "fitted growth model against log(1/ε)"),
        col("slope", "1", "fitted slope"),
        col("r2", "1", "fit R²"),
        col("mean_growth", "1", "last disc mean - first disc mean"),
    ],
    plot: None,
};

static FMO: Entry = Entry {
    name: "fmo-catalog",
    description: "finite mean oscillation of closed-form functions at a point",
    tags: &["criteria"],
    keys: &[
        ("functions", "among constant, re-z, log-inverse, inverse-distance, inverse-square (all but inverse-distance)"),
        ("domain", "domain (disk)"),
        ("center", "z0 ([0, 0])"),
        ("ladder", "radii, decreasing, at least 6 (0.5 · 2^-k, k < 12)"),
    ],
    tables: &[&FMO_LADDER, &FMO_VERDICTS],
    build: fmo_job,
};

fn fmo_job(cfg: &ScenarioConfig, _seed: u64) -> CliResult<Job> {
    let funcs = cfg.functions_or(&["constant", "re-z", "log-inverse", "inverse-square"], &FUNCTIONS)?;
    let domain = cfg.domain_or(DomainConfig::Disk)?;
    let z0 = cfg.center_or(C64::new(0.0, 0.0));
    let ladder = cfg.ladder_or(&halving(0.5, 12), 6)?;
    Ok(Box::new(move || {
        let mut lad = Table::new(&FMO_LADDER);
        let mut ver = Table::new(&FMO_VERDICTS);
        for name in &funcs {
            let r = fmo_probe(&catalog(name, z0), &domain, z0, &ladder)?;
            let eps = r.evidence.column("eps").unwrap_or_default();
            let mean = r.evidence.column("mean").unwrap_or_default();
            let dev = r.evidence.column("deviation").unwrap_or_default();
            for k in 0..eps.len() {
                lad.push(row![name.as_str(), eps[k], mean[k], dev[k]]);
            }
            let growth = match (mean.first(), mean.last()) {
                (Some(a), Some(b)) => b - a,
                _ => f64::NAN,
            };
            let (model, slope, r2) = fit_cells(&r);
            ver.push(row![name.as_str(), r.verdict.as_str(), r.label.as_str(), model, slope, r2, growth]);
        }
        Ok(vec![lad, ver])
    }))
}

static PHI_INTEGRAL_TABLE: TableSpec = TableSpec {
    name: "integrals",
    description: "classification of the five equivalent integrals in H = log Φ",
    columns: &[
        col("function", "label", "Φ from the built-in catalog"),
        col("integral", "label", "integral form"),
        col("class", "label", "convergent, divergent or inconclusive"),
        col("tail_ratio", "1", "largest ratio of successive decade increments over the last three"),
        col("exponent", "1", "decay exponent s of the increments I_k ~ x^-s"),
        col("r2", "1", "R² of the exponent fit"),
    ],
    plot: None,
};

static PHI_SUMMARY: TableSpec = TableSpec {
    name: "summary",
    description: "agreement of the five classifications and the Φ-condition verdict",
    columns: &[
        col("function", "label", "Φ"),
        col("agreement", "flag", "all five classes coincide and none is inconclusive"),
        col("class", "label", "common class (first integral when they disagree)"),
        col("lower", "1", "lower limit Δ of the t integrals"),
        col("divergence_verdict", "label", "∫ dτ/Φ⁻¹(τ) test from δ₀ = 2 max(1, Φ(0))"),
    ],
    plot: None,
};

static PHI: Entry = Entry {
    name: "phi-catalog",
    description: "equivalent Φ-integral classifications over the built-in catalog",
    tags: &["criteria", "phi"],
    keys: &[("functions", "catalog names among t, t2, exp, exp-sqrt, t-log, exp-over-t (all)")],
    tables: &[&PHI_INTEGRAL_TABLE, &PHI_SUMMARY],
    build: phi_job,
};

fn phi_job(cfg: &ScenarioConfig, _seed: u64) -> CliResult<Job> {
    let funcs = cfg.functions_or(&PHI_CATALOG, &PHI_CATALOG)?;
    Ok(Box::new(move || {
        let mut ints = Table::new(&PHI_INTEGRAL_TABLE);
        let mut sum = Table::new(&PHI_SUMMARY);
        for name in &funcs {
            let phi = PhiFunction::catalog(name)?;
            let eq = phi_equivalents(&phi)?;
            for (k, integral) in PHI_INTEGRALS.iter().enumerate() {
                let f = eq.fits[k];
                ints.push(row![name.as_str(), *integral, eq.classes[k].as_str(), f.tail_ratio, f.exponent, f.r2]);
            }
            let delta0 = 2.0 * phi.value(0.0)?.max(1.0);
            let div = phi_divergence(&phi, delta0)?;
            sum.push(row![name.as_str(), eq.agreement, eq.classes[0].as_str(), eq.lower, div.verdict.as_str()]);
        }
        Ok(vec![ints, sum])
    }))
}

static RADIAL_INCREMENTS: TableSpec = TableSpec {
    name: "increments",
    description: "partial integrals F(ε) = ∫_ε^δ dr / ‖K‖₁(z0, r)",
    columns: &[
        col("function", "label", "dilatation K"),
        col("eps", "length", "lower limit ε"),
        col("increment", "1", "octave increment of F"),
        col("partial_integral", "1", "F(ε)"),
    ],
    plot: Some(Plot::Lines {
        x: "eps",
        y: &["partial_integral"],
        group: Some("function"),
        log_x: true,
        log_y: false,
    }),
};

static RADIAL_VERDICTS: TableSpec = TableSpec {
    name: "verdicts",
    description: "divergence of the radial integral as ε → 0",
    columns: &[
        col("function", "label", "dilatation K"),
        col("verdict", "label", "holds when the integral diverges"),
        col("label", "label", "divergent or convergent"),
        col("model", "label", "fitted growth model"),
        col("slope", "1", "fitted slope"),
        col("r2", "1", "fit R²"),
    ],
    plot: None,
};

static RADIAL: Entry = Entry {
    name: "radial-divergence",
    description: "divergence of ∫dr/‖K‖₁(z0, r) for closed-form dilatations",
    tags: &["criteria"],
    keys: &[
        ("functions", "among constant, log-inverse, inverse-distance, inverse-square (constant, log-inverse, inverse-distance)"),
        ("domain", "domain (disk)"),
        ("center", "z0 ([0, 0])"),
        ("outer", "δ (0.5)"),
    ],
    tables: &[&RADIAL_INCREMENTS, &RADIAL_VERDICTS],
    build: radial_job,
};

fn radial_job(cfg: &ScenarioConfig, _seed: u64) -> CliResult<Job> {
    let known = ["constant", "log-inverse", "inverse-distance", "inverse-square"];
    let funcs = cfg.functions_or(&known[..3], &known)?;
    let domain = cfg.domain_or(DomainConfig::Disk)?;
    let z0 = cfg.center_or(C64::new(0.0, 0.0));
    let delta = cfg.outer_or(0.5)?;
    Ok(Box::new(move || {
        let mut inc = Table::new(&RADIAL_INCREMENTS);
        let mut ver = Table::new(&RADIAL_VERDICTS);
        for name in &funcs {
            let r = radial_divergence(&catalog(name, z0), &domain, z0, delta)?;
            let eps = r.evidence.column("eps").unwrap_or_default();
            let incr = r.evidence.column("increment").unwrap_or_else(|| vec![f64::NAN; eps.len()]);
            let part = r.evidence.column("partial_integral").unwrap_or_default();
            for k in 0..eps.len() {
                inc.push(row![name.as_str(), eps[k], incr[k], part[k]]);
            }
            let (model, slope, r2) = fit_cells(&r);
            ver.push(row![name.as_str(), r.verdict.as_str(), r.label.as_str(), model, slope, r2]);
        }
        Ok(vec![inc, ver])
    }))
}

static BMO_TABLE: TableSpec = TableSpec {
    name: "estimates",
    description: "largest disc mean deviation over random discs, a lower estimate of the BMO norm",
    columns: &[
        col("function", "label", "test function u"),
        col("bmo", "1", "largest mean deviation found"),
        col("discs", "count", "random discs sampled"),
        col("argmax_re", "length", "Re of the maximizing disc centre"),
        col("argmax_im", "length", "Im of the maximizing disc centre"),
        col("argmax_radius", "length", "radius of the maximizing disc"),
    ],
    plot: None,
};

static BMO: Entry = Entry {
    name: "bmo-estimate",
    description: "random-disc BMO estimates of closed-form functions",
    tags: &["criteria"],
    keys: &[
        ("functions", "among constant, re-z, log-inverse, inverse-distance, inverse-square (constant, re-z, log-inverse)"),
        ("domain", "domain (disk)"),
        ("center", "singular point of the log and inverse functions ([0, 0])"),
        ("samples", "random discs, at least 100 (400)"),
    ],
    tables: &[&BMO_TABLE],
    build: bmo_job,
};

fn bmo_job(cfg: &ScenarioConfig, seed: u64) -> CliResult<Job> {
    let funcs = cfg.functions_or(&["constant", "re-z", "log-inverse"], &FUNCTIONS)?;
    let domain = cfg.domain_or(DomainConfig::Disk)?;
    let z0 = cfg.center_or(C64::new(0.0, 0.0));
    let discs = cfg.count_or(cfg.samples, "samples", 400, 100)?;
    Ok(Box::new(move || {
        let mut t = Table::new(&BMO_TABLE);
        for name in &funcs {
            let e = bmo_norm(&catalog(name, z0), &domain, discs, seed)?;
            t.push(row![name.as_str(), e.value, e.discs, e.argmax.0.re, e.argmax.0.im, e.argmax.1]);
        }
        Ok(vec![t])
    }))
}

static APPLICABILITY_POINTS: TableSpec = TableSpec {
    name: "points",
    description: "FMO and radial-divergence hypotheses for K_μ at each sample point",
    columns: &[
        col("point_re", "length", "Re z0"),
        col("point_im", "length", "Im z0"),
        col("fmo_verdict", "label", "finite mean oscillation of K_μ at z0"),
        col("radial_verdict", "label", "divergence of ∫dr/‖K_μ‖₁(z0, r)"),
        col("radial_label", "label", "divergent or convergent"),
    ],
    plot: None,
};

static APPLICABILITY_SUMMARY: TableSpec = TableSpec {
    name: "summary",
    description: "Φ hypothesis and the overall verdict (best of the three hypotheses)",
    columns: &[
        col("phi_verdict", "label", "Φ-condition with Φ = e^t"),
        col("phi_integral", "1", "∫_D Φ(K_μ) dm by the node rule"),
        col("unverified", "count", "points where the radial hypothesis is not confirmed"),
        col("verdict", "label", "overall verdict"),
        col("label", "label", "overall classification"),
    ],
    plot: None,
};

static APPLICABILITY: Entry = Entry {
    name: "theorem-applicability",
    description: "which existence hypotheses a sampled coefficient satisfies",
    tags: &["criteria"],
    keys: &[
        ("mu", "coefficient generator (radial-stretch, k = 2)"),
        ("domain", "domain (disk)"),
        ("resolution", "grid nodes per side (257)"),
        ("points", "sample points ([[0, 0], [1, 0], [0, -1]])"),
        ("outer", "outer radius δ of the ladders (0.25)"),
    ],
    tables: &[&APPLICABILITY_POINTS, &APPLICABILITY_SUMMARY],
    build: applicability_job,
};

fn applicability_job(cfg: &ScenarioConfig, _seed: u64) -> CliResult<Job> {
    let gen = cfg.mu.clone().unwrap_or(MuConfig::RadialStretch { k: 2.0 }).generator()?;
    let domain = cfg.domain_or(DomainConfig::Disk)?;
    let n = cfg.resolution_or(257)?;
    let points = cfg.points_or(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, -1.0)])?;
    let delta = cfg.outer_or(0.25)?;
    Ok(Box::new(move || {
        let grid = make_grid(domain.bbox(), n)?;
        let mu = gen.sample(grid, &domain)?;
        let opts = ApplicabilityOptions {
            delta,
            ..ApplicabilityOptions::default()
        };
        let a = theorem_applicability(&mu, &domain, &points, &opts)?;
        let mut pts = Table::new(&APPLICABILITY_POINTS);
        for (k, z) in points.iter().enumerate() {
            pts.push(row![z.re, z.im, a.fmo[k].verdict.as_str(), a.radial[k].verdict.as_str(), a.radial[k].label.as_str()]);
        }
        let mut sum = Table::new(&APPLICABILITY_SUMMARY);
        sum.push(row![
            a.phi.verdict.as_str(),
            a.phi_integral,
            a.unverified.len(),
            a.report.verdict.as_str(),
            a.report.label.as_str(),
        ]);
        Ok(vec![pts, sum])
    }))
}

