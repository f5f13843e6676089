//! The constructive Dirichlet solution `f = h ∘ g`: a homeomorphic solution
//! `g₀` of the Beltrami equation, the Riemann map `R` of its image onto the
//! disk, and the Schwarz integral `h` of the transported boundary data.

mod boundary;
mod probes;
mod schwarz;
mod theodorsen;

pub use boundary::{BoundaryData, BoundaryFunction};
pub use probes::{
    boundary_oscillation, sample_map, stoilow_factor_check, OscillationProfile, StoilowReport, MAX_GAP_FRACTION,
    OSCILLATION_SAMPLES, STOILOW_TOLERANCE,
};
pub use schwarz::{
    resolution_guard, schwarz_integral, trace_check, SchwarzEvaluator, TraceProfile, MIN_NODES, TRACE_ANGLES,
};
pub use theodorsen::{theodorsen_riemann, RadialFunction, RiemannMap, THEODORSEN_NODES};

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::field::{truncate_mu, ComplexField};
use crate::geometry::{BBox, DomainSpec, Grid, PlaneMap, C64};
use crate::solver::{mrm_solve, SolutionBundle, SolverOptions};

/// Radii `1 - 2⁻⁷` and `1 - 2⁻⁸` at which `g₀` is read along the boundary
/// rays.
pub const RAY_RADII: (f64, f64) = (1.0 - 1.0 / 128.0, 1.0 - 1.0 / 256.0);

/// Settings of [`solve_dirichlet`].
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletOptions {
    pub solver: SolverOptions,
    /// Boundary rays used to extract the image boundary of `g₀`.
    pub boundary_rays: usize,
    /// Nodes of the Schwarz integral of the transported data.
    pub schwarz_nodes: usize,
    pub theodorsen_tol: f64,
    pub theodorsen_max_iter: usize,
    /// The evaluation grid keeps every `stride`-th solver node; `None`
    /// picks the smallest stride giving at most 129 nodes per side.
    pub eval_stride: Option<usize>,
    /// `Im f(centre)`.
    pub gauge: f64,
    /// Relative radii `r` of the trace test points `c + r (p - c)`.
    pub trace_radii: Vec<f64>,
}

impl Default for DirichletOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            boundary_rays: THEODORSEN_NODES,
            schwarz_nodes: THEODORSEN_NODES,
            theodorsen_tol: 1e-12,
            theodorsen_max_iter: 2000,
            eval_stride: None,
            gauge: 0.0,
            trace_radii: vec![0.5, 0.75, 0.9, 0.95, 0.98, 0.99],
        }
    }
}

/// Output of [`solve_dirichlet`]. `f` and `g` live on the evaluation grid,
/// `g0` on the solver grid.
#[derive(Debug, Clone)]
pub struct DirichletReport {
    pub truncation: f64,
    /// Centre about which `D` is star-shaped and its image `g₀(c)`.
    pub center: C64,
    pub center_image: C64,
    pub g0: SolutionBundle,
    pub riemann: Option<RiemannMap>,
    pub h: SchwarzEvaluator,
    /// `φ ∘ g_*⁻¹` on the unit circle.
    pub transported: BoundaryData,
    /// Data parameters of the boundary rays, the image boundary points
    /// `g₀(p) - g₀(c)` and their straightened angles `arg R(g₀(p) - g₀(c))`.
    pub ray_params: Vec<f64>,
    pub image_boundary: Vec<C64>,
    pub ray_angles: Vec<f64>,
    pub data: BoundaryData,
    pub f: ComplexField,
    pub g: ComplexField,
    /// `‖f_z̄ - μ_n f_z‖₂` on the evaluation grid by the chain rule.
    pub residual: f64,
    pub trace: TraceProfile,
    /// Fraction of masked solver nodes where `J_{g₀} > 0`.
    pub jacobian_positive: f64,
    /// `f ≡ c` because `φ ≡ c`.
    pub constant: bool,
    pub stride: usize,
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_stage(name))
}

fn star_center(domain: &DomainSpec) -> Result<C64> {
    match domain {
        DomainSpec::UnitDisk => Ok(C64::new(0.0, 0.0)),
        DomainSpec::Polygon(v) => {
            let c = domain.bbox().center();
            if !domain.contains(c) || v.iter().any(|&p| !domain.segment_inside(c, c + (p - c) * (1.0 - 1e-9))) {
                return Err(Error::domain("polygon is not star-shaped about the centre of its box"));
            }
            Ok(c)
        }
        DomainSpec::Annulus { .. } => Err(Error::domain("the Dirichlet pipeline needs a simply connected domain")),
    }
}

/// Evaluation grid of every `stride`-th node of `grid`.
fn eval_grid(grid: Grid, stride: usize) -> Result<(Grid, Vec<usize>)> {
    let mx = (grid.nx() - 1) / stride + 1;
    let my = (grid.ny() - 1) / stride + 1;
    let b = grid.bbox();
    let bbox = BBox::new(
        b.re_min,
        b.re_min + ((mx - 1) * stride) as f64 * grid.dx(),
        b.im_min,
        b.im_min + ((my - 1) * stride) as f64 * grid.dy(),
    );
    let eg = Grid::new(bbox, mx, my)?;
    let nodes = (0..eg.len())
        .map(|k| {
            let (i, j) = eg.coords(k);
            grid.index(i * stride, j * stride)
        })
        .collect();
    Ok((eg, nodes))
}

impl DirichletReport {
    /// `f = h(R(g₀(z) - g₀(c)))` with `g₀` interpolated bilinearly.
    pub fn eval(&self, z: C64) -> Option<C64> {
        if self.constant {
            return Some(self.h.eval(C64::new(0.0, 0.0)));
        }
        let w = self.straighten(self.g0.f.sample(z)? - self.center_image)?;
        Some(self.h.eval(w))
    }

    fn straighten(&self, zeta: C64) -> Option<C64> {
        match &self.riemann {
            Some(r) => r.inverse(zeta),
            None => Some(zeta),
        }
    }

    fn straighten_derivative(&self, zeta: C64) -> Option<C64> {
        match &self.riemann {
            Some(r) => r.inverse_derivative(zeta),
            None => Some(C64::new(1.0, 0.0)),
        }
    }

    /// Chain-rule residual `‖h'(g) R'(g₀ - g₀(c)) (∂̄g₀ - μ_n ∂g₀)‖₂` over the
    /// masked evaluation nodes, from the stored fields.
    pub fn recompute_residual(&self) -> Result<f64> {
        if self.constant {
            return Ok(0.0);
        }
        let (_, nodes) = eval_grid(self.g0.f.grid, self.stride)?;
        let mut sum = 0.0;
        for (e, &k) in nodes.iter().enumerate() {
            if !self.f.mask[e] {
                continue;
            }
            let zeta = self.g0.f.values[k] - self.center_image;
            let dr = self
                .straighten_derivative(zeta)
                .ok_or_else(|| Error::invalid(format!("Riemann map inverse failed at {zeta}")))?;
            let defect = self.g0.f_zbar.values[k] - self.g0.mu.values[k] * self.g0.f_z.values[k];
            sum += (self.h.derivative(self.g.values[e]) * dr * defect).norm_sqr();
        }
        Ok((sum * self.f.grid.cell_area()).sqrt())
    }

    /// Fraction of masked solver nodes with positive Jacobian.
    pub fn recompute_jacobian_positive(&self) -> f64 {
        let j = self.g0.recompute_jacobian();
        let (mut pos, mut all) = (0usize, 0usize);
        for (v, &m) in j.values.iter().zip(&j.mask) {
            if m {
                all += 1;
                pos += usize::from(*v > 0.0);
            }
        }
        if all == 0 {
            0.0
        } else {
            pos as f64 / all as f64
        }
    }

    /// Trace errors `sup |Re f(c + r(p - c)) - φ(p)|` over the boundary data
    /// nodes (at most [`TRACE_ANGLES`] of them) per radius.
    pub fn recompute_trace(&self, radii: &[f64]) -> Result<TraceProfile> {
        if radii.is_empty() || radii.windows(2).any(|w| !(w[1] > w[0])) || radii.iter().any(|&r| !(r > 0.0 && r <= 1.0))
        {
            return Err(Error::invalid("radii must increase inside (0, 1]"));
        }
        let mut errors = Vec::with_capacity(radii.len());
        for &r in radii {
            let mut worst = 0.0f64;
            for k in schwarz::trace_nodes(&self.data) {
                let p = self.data.points()[k];
                let z = self.center + (p - self.center) * r;
                let v = self
                    .eval(z)
                    .ok_or_else(|| Error::invalid(format!("solution undefined at trace point {z}")))?;
                worst = worst.max((v.re - self.data.values()[k]).abs());
            }
            errors.push(worst);
        }
        Ok(TraceProfile {
            radii: radii.to_vec(),
            errors,
        })
    }

    /// `Im f(c)`.
    pub fn gauge(&self) -> f64 {
        self.h.gauge()
    }

    /// `i,j,x,y,re_f,im_f,re_g,im_g` rows for the masked evaluation nodes.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let grid = self.f.grid;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "x", "y", "re_f", "im_f", "re_g", "im_g"])?;
        for k in (0..grid.len()).filter(|&k| self.f.mask[k]) {
            let (i, j) = grid.coords(k);
            let z = grid.point(i, j);
            let (f, g) = (self.f.values[k], self.g.values[k]);
            w.write_record([
                i.to_string(),
                j.to_string(),
                z.re.to_string(),
                z.im.to_string(),
                f.re.to_string(),
                f.im.to_string(),
                g.re.to_string(),
                g.im.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl PlaneMap for DirichletReport {
    fn apply(&self, z: C64) -> Option<C64> {
        self.eval(z)
    }
}

/// Image boundary of `g₀` about `g₀(c)` along `rays` rays `c + r(p - c)`,
/// read off by linear extrapolation `2 g₀(r₂ p) - g₀(r₁ p)` from
/// [`RAY_RADII`], and the data parameters of the rays.
fn image_boundary(g0: &SolutionBundle, data: &BoundaryData, center: C64, rays: usize) -> Result<(C64, Vec<f64>, Vec<C64>)> {
    let sample = |z: C64| {
        g0.f.sample(z)
            .ok_or_else(|| Error::domain(format!("boundary ray point {z} outside the solver grid")))
    };
    let wc = sample(center)?;
    let (r1, r2) = RAY_RADII;
    let mut params = Vec::with_capacity(rays);
    let mut image = Vec::with_capacity(rays);
    for k in 0..rays {
        let s = data.period() * k as f64 / rays as f64;
        let p = data.point_at(s) - center;
        let w = sample(center + p * r2)? * 2.0 - sample(center + p * r1)?;
        params.push(s);
        image.push(w - wc);
    }
    Ok((wc, params, image))
}

/// `ψ(τ) = φ(s(τ))` at `n` uniform angles, where `τ(s)` is the angle of the
/// straightened image of the boundary ray at data parameter `s`.
fn transport(data: &BoundaryData, params: &[f64], angles: &[f64], n: usize) -> Result<BoundaryData> {
    let m = angles.len();
    let mut tau = Vec::with_capacity(m + 1);
    tau.push(angles[0]);
    for k in 1..m {
        let step = (angles[k] - tau[k - 1]).rem_euclid(TAU);
        if !(step > 0.0 && step < std::f64::consts::PI) {
            return Err(Error::domain("transported boundary correspondence is not monotone"));
        }
        tau.push(tau[k - 1] + step);
    }
    let close = tau[0] + TAU;
    if !(close > tau[m - 1]) {
        return Err(Error::domain("transported boundary correspondence winds more than once"));
    }
    tau.push(close);
    let mut s: Vec<f64> = params.to_vec();
    s.push(data.period());
    let base = tau[0];
    BoundaryData::on_circle(n, |t| {
        let x = base + (t - base).rem_euclid(TAU);
        let k = tau.partition_point(|&v| v <= x).clamp(1, m);
        let w = (x - tau[k - 1]) / (tau[k] - tau[k - 1]);
        data.value_at(s[k - 1] + w * (s[k] - s[k - 1]))
    })
}

/// Solves `f_z̄ = μ_n f_z` in `D` with `Re f = φ` on `∂D`, where `μ_n` is `μ`
/// truncated to dilatation `n`. Stage errors carry the stage name.
pub fn solve_dirichlet(
    mu: &ComplexField,
    domain: &DomainSpec,
    data: &BoundaryData,
    n: f64,
    opts: &DirichletOptions,
) -> Result<DirichletReport> {
    stage("domain", domain.validate())?;
    let center = stage("domain", star_center(domain))?;
    let mu_n = stage("truncate", truncate_mu(mu, n))?;
    let mut g0 = stage("solve", mrm_solve(&mu_n, &opts.solver))?;
    g0.provenance.truncation = Some(n);

    let grid = g0.f.grid;
    let stride = match opts.eval_stride {
        Some(0) => return Err(Error::invalid("evaluation stride must be positive").in_stage("evaluate")),
        Some(s) => s,
        None => (grid.nx().max(grid.ny()) - 1).div_ceil(128).max(1),
    };
    let (egrid, nodes) = stage("evaluate", eval_grid(grid, stride))?;
    let emask: Vec<bool> = nodes.iter().map(|&k| g0.f.mask[k] && domain.contains(grid.point_at(k))).collect();

    let level = data.values()[0];
    let constant = data.spread() <= 1e-14 * (1.0 + level.abs());
    let mut report = DirichletReport {
        truncation: n,
        center,
        center_image: C64::new(0.0, 0.0),
        riemann: None,
        h: SchwarzEvaluator::from_samples(&vec![level; MIN_NODES], opts.gauge),
        transported: stage("transport", BoundaryData::on_circle(MIN_NODES, |_| level))?,
        data: data.clone(),
        ray_params: Vec::new(),
        image_boundary: Vec::new(),
        ray_angles: Vec::new(),
        f: ComplexField::zeros(egrid, emask.clone()),
        g: ComplexField::zeros(egrid, emask),
        residual: 0.0,
        trace: TraceProfile {
            radii: Vec::new(),
            errors: Vec::new(),
        },
        jacobian_positive: 0.0,
        constant,
        stride,
        g0,
    };
    report.jacobian_positive = report.recompute_jacobian_positive();

    if constant {
        let c = C64::new(level, opts.gauge);
        for (k, v) in report.f.values.iter_mut().enumerate() {
            if report.f.mask[k] {
                *v = c;
            }
        }
        report.trace = stage("trace", report.recompute_trace(&opts.trace_radii))?;
        return Ok(report);
    }

    let (wc, params, image) = stage("boundary", image_boundary(&report.g0, data, center, opts.boundary_rays))?;
    report.center_image = wc;
    let rho = stage("riemann", RadialFunction::from_curve(&image, C64::new(0.0, 0.0)))?;
    let riemann = stage("riemann", theodorsen_riemann(&rho, opts.theodorsen_tol, opts.theodorsen_max_iter))?;
    let angles: Vec<f64> = image.iter().map(|q| riemann.inverse_boundary_angle(q.arg())).collect();
    report.transported = stage("transport", transport(data, &params, &angles, opts.schwarz_nodes))?;
    report.h = stage("schwarz", SchwarzEvaluator::new(&report.transported, opts.schwarz_nodes, opts.gauge))?;
    report.riemann = Some(riemann);
    report.ray_params = params;
    report.image_boundary = image;
    report.ray_angles = angles;

    for (e, &k) in nodes.iter().enumerate() {
        if !report.g.mask[e] {
            continue;
        }
        let zeta = report.g0.f.values[k] - wc;
        let w = report
            .straighten(zeta)
            .ok_or_else(|| Error::NoConvergence { iterations: 60, residual: f64::NAN }.in_stage("compose"))?;
        report.g.values[e] = w;
        report.f.values[e] = report.h.eval(w);
    }
    report.residual = stage("compose", report.recompute_residual())?;
    report.trace = stage("trace", report.recompute_trace(&opts.trace_radii))?;
    Ok(report)
}
