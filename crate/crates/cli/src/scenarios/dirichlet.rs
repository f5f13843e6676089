//! Schwarz integral, the composed Dirichlet pipeline and its probes.

use std::f64::consts::TAU;

use beltrami_core::dirichlet::{
    boundary_oscillation, sample_map, schwarz_integral, solve_dirichlet, stoilow_factor_check, trace_check, BoundaryData,
    BoundaryFunction, DirichletOptions, DirichletReport, SchwarzEvaluator, MIN_NODES,
};
use beltrami_core::field::{ComplexField, MuGenerator};
use beltrami_core::geometry::{make_grid, AnalyticMap, BBox, DomainSpec, C64};
use beltrami_core::solver::{mrm_solve, SolverOptions};

use super::{Entry, Job};
use crate::config::{BoundaryConfig, DomainConfig, MuConfig, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::row;
use crate::table::{col, Plot, Table, TableSpec};

pub(super) static ENTRIES: &[&Entry] = &[&SCHWARZ, &MU0_COS, &CONST_MU, &OSCILLATION, &STOILOW];

/// Half width of the solver window; coefficients live on the central half.
const WINDOW: f64 = 2.0;

/// Radii of the pipeline trace ladders, ending on the boundary.
const TRACE_RADII: [f64; 8] = [0.5, 0.75, 0.9, 0.95, 0.98, 0.99, 0.999, 1.0];

fn nodes_or(cfg: &ScenarioConfig, default: usize) -> CliResult<usize> {
    cfg.count_or(cfg.nodes, "nodes", default, MIN_NODES)
}

static POWERS: TableSpec = TableSpec {
    name: "powers",
    description: "Schwarz integral of cos nθ against zⁿ",
    columns: &[
        col("n", "1", "degree"),
        col("nodes", "count", "quadrature nodes N"),
        col("radius", "length", "errors are taken over |z| ≤ radius"),
        col("series_error", "1", "max |h(z) - zⁿ| of the FFT power series"),
        col("trapezoid_error", "1", "max |h(z) - zⁿ| of the trapezoid-rule integral"),
    ],
    plot: Some(Plot::Lines {
        x: "n",
        y: &["series_error", "trapezoid_error"],
        group: None,
        log_x: false,
        log_y: true,
    }),
};

static SCHWARZ_TRACE: TableSpec = TableSpec {
    name: "trace",
    description: "sup over data nodes of |Re h(r e^iθ) - φ(e^iθ)| along a radius ladder",
    columns: &[
        col("function", "label", "cos (cos θ) or random-trig (40 seeded terms, coefficients scaled by 1/m²)"),
        col("radius", "length", "r"),
        col("error", "1", "trace error at r"),
    ],
    plot: Some(Plot::Lines {
        x: "radius",
        y: &["error"],
        group: Some("function"),
        log_x: false,
        log_y: true,
    }),
};

static SCHWARZ: Entry = Entry {
    name: "schwarz-trace",
    description: "Schwarz integral on the unit disk: zⁿ reproduction and boundary traces",
    tags: &["dirichlet", "schwarz"],
    keys: &[
        ("nodes", "quadrature nodes N, at least 256 (2048)"),
        ("outer", "radius of the zⁿ comparison (0.9)"),
    ],
    tables: &[&POWERS, &SCHWARZ_TRACE],
    build: schwarz_job,
};

/// Degree of the random trigonometric data of the trace table.
const TRIG_DEGREE: u32 = 40;

fn schwarz_job(cfg: &ScenarioConfig, seed: u64) -> CliResult<Job> {
    let n = nodes_or(cfg, 2048)?;
    let radius = cfg.outer_or(0.9)?;
    if radius > 1.0 - TAU / n as f64 {
        return Err(CliError::config("outer must stay inside the resolution guard 1 - 2π/N"));
    }
    Ok(Box::new(move || {
        let points: Vec<C64> = (0..=18)
            .flat_map(|i| {
                (0..64).map(move |k| C64::from_polar(radius * i as f64 / 18.0, TAU * (k as f64 + 0.5 * i as f64) / 64.0))
            })
            .collect();
        let mut powers = Table::new(&POWERS);
        for deg in 1..=8u32 {
            let phi = BoundaryData::on_circle(n, |t| (deg as f64 * t).cos())?;
            let h = SchwarzEvaluator::new(&phi, n, 0.0)?;
            let (mut series, mut trap) = (0.0f64, 0.0f64);
            for &z in &points {
                let want = z.powu(deg);
                series = series.max((h.eval(z) - want).norm());
                trap = trap.max((schwarz_integral(&phi, z, n, 0.0)? - want).norm());
            }
            powers.push(row![deg, n, radius, series, trap]);
        }
        let radii = [0.5, 0.9, 0.99, 0.999, 1.0];
        let mut trace = Table::new(&SCHWARZ_TRACE);
        let trig = BoundaryFunction::RandomTrig {
            seed,
            degree: TRIG_DEGREE,
        };
        for (name, f) in [("cos", BoundaryFunction::Cos { k: 1 }), ("random-trig", trig)] {
            let phi = BoundaryData::on_circle(n, |t| f.at_angle(t))?;
            let h = SchwarzEvaluator::new(&phi, n, 0.0)?;
            let p = trace_check(&h, &phi, &radii)?;
            for (r, e) in p.radii.iter().zip(&p.errors) {
                trace.push(row![name, *r, *e]);
            }
        }
        Ok(vec![powers, trace])
    }))
}

static PIPELINE_SUMMARY: TableSpec = TableSpec {
    name: "summary",
    description: "Dirichlet problem f_z̄ = μ_n f_z in D, Re f = φ on ∂D, solved as f = h ∘ R ∘ g₀",
    columns: &[
        col("resolution", "nodes", "solver grid nodes per side on [-2, 2]²"),
        col("truncation", "1", "dilatation cap n of μ_n"),
        col("constant_branch", "flag", "φ constant, f ≡ φ + i gauge"),
        col("residual", "1", "L² norm of f_z̄ - μ_n f_z over the evaluation grid (chain rule)"),
        col("jacobian_positive", "1", "fraction of solver nodes in D with J_g₀ > 0"),
        col("trace_final", "1", "trace error at the last radius of the ladder"),
        col("trace_decreasing", "flag", "trace errors decrease along the ladder"),
        col("exact_error", "1", "max |f - zᵏ| on |z| ≤ 0.9 when μ ≡ 0 on the disk with φ = cos kθ, NaN otherwise"),
        col("gauge", "1", "imaginary constant added by the shifted run"),
        col("gauge_defect", "1", "max |f_shifted - i gauge - f| over the evaluation grid"),
    ],
    plot: None,
};

static PIPELINE_TRACE: TableSpec = TableSpec {
    name: "trace",
    description: "sup over data nodes p of |Re f(c + r(p - c)) - φ(p)|",
    columns: &[col("radius", "length", "r"), col("error", "1", "trace error at r")],
    plot: Some(Plot::Lines {
        x: "radius",
        y: &["error"],
        group: None,
        log_x: false,
        log_y: true,
    }),
};

static PIPELINE_BOUNDARY: TableSpec = TableSpec {
    name: "boundary",
    description: "image boundary g₀(∂D) - g₀(c) along the rays and its straightened angles",
    columns: &[
        col("index", "index", "ray number"),
        col("param", "1", "boundary data parameter of the ray"),
        col("image_re", "length", "Re of the image boundary point"),
        col("image_im", "length", "Im of the image boundary point"),
        col("angle", "rad", "angle of the point after the Riemann map"),
    ],
    plot: Some(Plot::Curve {
        x: "image_re",
        y: "image_im",
        angle: "angle",
    }),
};

static PIPELINE_FIELD: TableSpec = TableSpec {
    name: "field",
    description: "solution f and straightened map g on the evaluation grid",
    columns: &[
        col("i", "index", "column of the evaluation node"),
        col("j", "index", "row of the evaluation node"),
        col("x", "length", "Re z"),
        col("y", "length", "Im z"),
        col("re_f", "1", "Re f"),
        col("im_f", "1", "Im f"),
        col("re_g", "length", "Re g"),
        col("im_g", "length", "Im g"),
    ],
    plot: None,
};

const PIPELINE_KEYS: &[(&str, &str)] = &[
    ("domain", "domain (disk)"),
    ("mu", "coefficient generator"),
    ("phi", "boundary data (cos, k = 1)"),
    ("resolution", "solver grid nodes per side"),
    ("truncation", "dilatation cap n"),
    ("tol", "solver tolerance (1e-10)"),
    ("nodes", "boundary data and Schwarz nodes (2048)"),
    ("gauge", "imaginary constant of the shifted run (0.75)"),
];

static MU0_COS: Entry = Entry {
    name: "dirichlet-disk-mu0-cos",
    description: "Dirichlet pipeline with μ ≡ 0 and φ = cos θ, where f = z",
    tags: &["dirichlet"],
    keys: PIPELINE_KEYS,
    tables: &[&PIPELINE_SUMMARY, &PIPELINE_TRACE, &PIPELINE_BOUNDARY, &PIPELINE_FIELD],
    build: |cfg, _| pipeline_job(cfg, MuConfig::Zero, 256, 2.0),
};

static CONST_MU: Entry = Entry {
    name: "dirichlet-disk-const-mu",
    description: "Dirichlet pipeline with μ = 0.3 on the disk and φ = cos θ",
    tags: &["dirichlet"],
    keys: PIPELINE_KEYS,
    tables: &[&PIPELINE_SUMMARY, &PIPELINE_TRACE, &PIPELINE_BOUNDARY, &PIPELINE_FIELD],
    build: |cfg, _| pipeline_job(cfg, MuConfig::Constant { re: 0.3, im: 0.0 }, 1024, 4.0),
};

fn pipeline_job(cfg: &ScenarioConfig, mu: MuConfig, resolution: usize, truncation: f64) -> CliResult<Job> {
    let domain_cfg = cfg.domain.clone().unwrap_or(DomainConfig::Disk);
    let domain = domain_cfg.to_spec()?;
    let gen = cfg.mu.clone().unwrap_or(mu).generator()?;
    let phi_cfg = cfg.phi.clone().unwrap_or(BoundaryConfig::Cos { k: 1 });
    let phi = phi_cfg.function()?;
    let n = cfg.resolution_or(resolution)?;
    let cap = cfg.truncation_or(truncation)?;
    let tol = cfg.tol_or(1e-10)?;
    let nodes = nodes_or(cfg, 2048)?;
    let shift = cfg.gauge.unwrap_or(0.75);
    if !shift.is_finite() {
        return Err(CliError::config("gauge must be finite"));
    }
    let bb = domain.bbox();
    if bb.re_min < -1.0 || bb.re_max > 1.0 || bb.im_min < -1.0 || bb.im_max > 1.0 {
        return Err(CliError::config("the domain must lie in [-1, 1]²"));
    }
    let exact_power = match (&domain, &gen, &phi) {
        (DomainSpec::UnitDisk, MuGenerator::Constant(c), BoundaryFunction::Cos { k }) if c.norm() == 0.0 => Some(*k),
        _ => None,
    };
    Ok(Box::new(move || {
        let grid = make_grid(BBox::square(C64::new(0.0, 0.0), WINDOW), n)?;
        let mu = gen.sample(grid, &domain)?;
        let data = BoundaryData::named(&domain, nodes, &phi)?;
        let opts = DirichletOptions {
            solver: SolverOptions {
                tol,
                ..SolverOptions::default()
            },
            schwarz_nodes: nodes,
            trace_radii: TRACE_RADII.to_vec(),
            ..DirichletOptions::default()
        };
        let r = solve_dirichlet(&mu, &domain, &data, cap, &opts)?;
        let shifted = solve_dirichlet(&mu, &domain, &data, cap, &DirichletOptions { gauge: shift, ..opts.clone() })?;
        let gauge_defect = r
            .f
            .values
            .iter()
            .zip(&shifted.f.values)
            .zip(&r.f.mask)
            .filter(|(_, &m)| m)
            .map(|((a, b), _)| (b - C64::new(0.0, shift) - a).norm())
            .fold(0.0, f64::max);
        let exact_error = exact_power.map_or(f64::NAN, |k| exact_error(&r.f, k));
        let mut summary = Table::new(&PIPELINE_SUMMARY);
        summary.push(row![
            n,
            cap,
            r.constant,
            r.residual,
            r.jacobian_positive,
            r.trace.last(),
            r.trace.is_decreasing(),
            exact_error,
            shift,
            gauge_defect,
        ]);
        Ok(vec![summary, trace_table(&r), boundary_table(&r), field_table(&r)])
    }))
}

fn exact_error(f: &ComplexField, k: u32) -> f64 {
    let g = f.grid;
    (0..g.len())
        .filter(|&i| f.mask[i] && g.point_at(i).norm() <= 0.9)
        .map(|i| (f.values[i] - g.point_at(i).powu(k)).norm())
        .fold(0.0, f64::max)
}

fn trace_table(r: &DirichletReport) -> Table {
    let mut t = Table::new(&PIPELINE_TRACE);
    for (x, e) in r.trace.radii.iter().zip(&r.trace.errors) {
        t.push(row![*x, *e]);
    }
    t
}

fn boundary_table(r: &DirichletReport) -> Table {
    let mut t = Table::new(&PIPELINE_BOUNDARY);
    for (k, ((s, w), a)) in r.ray_params.iter().zip(&r.image_boundary).zip(&r.ray_angles).enumerate() {
        t.push(row![k, *s, w.re, w.im, *a]);
    }
    t
}

fn field_table(r: &DirichletReport) -> Table {
    let mut t = Table::new(&PIPELINE_FIELD);
    let g = r.f.grid;
    for k in (0..g.len()).filter(|&k| r.f.mask[k]) {
        let (i, j) = g.coords(k);
        let z = g.point(i, j);
        let (f, w) = (r.f.values[k], r.g.values[k]);
        t.push(row![i, j, z.re, z.im, f.re, f.im, w.re, w.im]);
    }
    t
}

static OSC_PROFILE: TableSpec = TableSpec {
    name: "profile",
    description: "diameter of f(D ∩ B(z0, ε)) from seeded samples",
    columns: &[
        col("map", "label", "identity, stretch (z|z|) or singular (exp((z+1)/(z-1)))"),
        col("eps", "length", "ball radius ε"),
        col("diameter", "length", "diameter of the sampled image"),
    ],
    plot: Some(Plot::Lines {
        x: "eps",
        y: &["diameter"],
        group: Some("map"),
        log_x: true,
        log_y: true,
    }),
};

static OSC_SUMMARY: TableSpec = TableSpec {
    name: "summary",
    description: "oscillation at the smallest and largest surviving radius",
    columns: &[
        col("map", "label", "test map"),
        col("smallest", "length", "diameter at the smallest radius"),
        col("largest", "length", "diameter at the largest radius"),
        col("ratio", "1", "smallest / largest"),
        col("truncated", "flag", "some level had no sample and was dropped"),
        col("samples", "count", "samples per level"),
    ],
    plot: None,
};

static OSCILLATION: Entry = Entry {
    name: "boundary-oscillation",
    description: "boundary oscillation of continuous and singular maps at a boundary point",
    tags: &["dirichlet", "boundary"],
    keys: &[
        ("functions", "maps among identity, stretch, singular (all three)"),
        ("domain", "domain (disk)"),
        ("center", "boundary point z0 ([1, 0])"),
        ("ladder", "radii, decreasing ([0.5, 0.25, 0.125, 0.0625, 0.03125])"),
        ("samples", "samples per level (10000)"),
    ],
    tables: &[&OSC_PROFILE, &OSC_SUMMARY],
    build: oscillation_job,
};

fn oscillation_job(cfg: &ScenarioConfig, seed: u64) -> CliResult<Job> {
    let maps = cfg.functions_or(&["identity", "stretch", "singular"], &["identity", "stretch", "singular"])?;
    let domain = cfg.domain_or(DomainConfig::Disk)?;
    let z0 = cfg.center_or(C64::new(1.0, 0.0));
    let ladder = cfg.ladder_or(&[0.5, 0.25, 0.125, 0.0625, 0.03125], 1)?;
    let samples = cfg.count_or(cfg.samples, "samples", 10_000, 2)?;
    Ok(Box::new(move || {
        let mut profile = Table::new(&OSC_PROFILE);
        let mut summary = Table::new(&OSC_SUMMARY);
        for name in &maps {
            let p = match name.as_str() {
                "identity" => boundary_oscillation(&AnalyticMap(|z| z), &domain, z0, &ladder, samples, seed)?,
                "stretch" => boundary_oscillation(&AnalyticMap(|z: C64| z * z.norm()), &domain, z0, &ladder, samples, seed)?,
                _ => boundary_oscillation(
                    &AnalyticMap(|z: C64| ((z + 1.0) / (z - 1.0)).exp()),
                    &domain,
                    z0,
                    &ladder,
                    samples,
                    seed,
                )?,
            };
            // profile radii increase; report them in ladder order
            for (e, d) in p.profile.radii.iter().zip(&p.profile.values).rev() {
                profile.push(row![name.as_str(), *e, *d]);
            }
            let largest = p.profile.values.last().copied().unwrap_or(f64::NAN);
            summary.push(row![name.as_str(), p.smallest(), largest, p.smallest() / largest, p.truncated, p.samples_per_level]);
        }
        Ok(vec![profile, summary])
    }))
}

static STOILOW_TABLE: TableSpec = TableSpec {
    name: "factors",
    description: "∂̄ of f ∘ g⁻¹ on an image grid for a homeomorphic solution g",
    columns: &[
        col("factor", "label", "f: identity (f = g), square (g²), conjugate (conj g) or dirichlet (pipeline solution)"),
        col("relative", "1", "‖∂̄h‖ / (‖∂h‖² + ‖∂̄h‖²)^1/2 for h = f ∘ g⁻¹"),
        col("dbar_norm", "1", "‖∂̄h‖₂"),
        col("d_norm", "1", "‖∂h‖₂"),
        col("covered_nodes", "count", "image nodes covered by g"),
        col("gap_nodes", "count", "uncovered image nodes enclosed by covered ones"),
        col("verdict", "label", "holds when relative < 1e-3 and gaps ≤ 5%"),
    ],
    plot: None,
};

static STOILOW: Entry = Entry {
    name: "stoilow-check",
    description: "Stoilow factorization test: analyticity of f ∘ g⁻¹",
    tags: &["dirichlet"],
    keys: &[
        ("mu", "coefficient on the unit disk (constant 0.3)"),
        ("resolution", "solver grid nodes per side (512)"),
        ("nodes", "image grid nodes per side (128)"),
        ("functions", "factors among identity, square, conjugate, dirichlet (all four)"),
        ("truncation", "dilatation cap of the dirichlet factor (4)"),
    ],
    tables: &[&STOILOW_TABLE],
    build: stoilow_job,
};

fn stoilow_job(cfg: &ScenarioConfig, seed: u64) -> CliResult<Job> {
    let known = ["identity", "square", "conjugate", "dirichlet"];
    let factors = cfg.functions_or(&known, &known)?;
    let gen = cfg.mu.clone().unwrap_or(MuConfig::Constant { re: 0.3, im: 0.0 }).generator()?;
    if matches!(gen, MuGenerator::LogarithmicBlowup { .. }) {
        return Err(CliError::config("the solver needs a bounded coefficient"));
    }
    let n = cfg.resolution_or(512)?;
    let image = cfg.count_or(cfg.nodes, "nodes", 128, 8)?;
    let cap = cfg.truncation_or(4.0)?;
    Ok(Box::new(move || {
        let grid = make_grid(BBox::square(C64::new(0.0, 0.0), WINDOW), n)?;
        let mu = gen.sample(grid, &DomainSpec::UnitDisk)?;
        let g = mrm_solve(&mu, &SolverOptions::default())?;
        let mut t = Table::new(&STOILOW_TABLE);
        for name in &factors {
            let rep = match name.as_str() {
                "identity" => stoilow_factor_check(&g, &g, image)?,
                "square" => {
                    let sq = sample_map(&g, grid, g.f.mask.clone()).map(|w| w * w);
                    stoilow_factor_check(&sq, &g, image)?
                }
                "conjugate" => stoilow_factor_check(&g.f.map(|w| w.conj()), &g, image)?,
                _ => {
                    let data = BoundaryData::named(
                        &DomainSpec::UnitDisk,
                        2048,
                        &BoundaryFunction::RandomTrig { seed, degree: 8 },
                    )?;
                    let r = solve_dirichlet(&mu, &DomainSpec::UnitDisk, &data, cap, &DirichletOptions::default())?;
                    stoilow_factor_check(&r, &r.g0, image)?
                }
            };
            t.push(row![
                name.as_str(),
                rep.relative,
                rep.dbar_norm,
                rep.d_norm,
                rep.covered_nodes,
                rep.gap_nodes,
                rep.verdict.as_str(),
            ]);
        }
        Ok(vec![t])
    }))
}
