//! Discrete conformal modulus of curve families and dashed-line families,
//! together with the closed-form lower bounds they are checked against.
//!
//! A density `ρ` lives on the nodes of a [`Grid`]. Each curve is deposited
//! onto the grid as a sparse vector `w_γ` (trapezoid rule along arc length,
//! bilinear spreading), so that `∫_γ ρ ds = w_γ · ρ`. The modulus is the
//! value of the convex program
//!
//! ```text
//! minimize Σ c_k ρ_k² A   subject to   w_γ · ρ ≥ 1 for every γ,
//! ```
//!
//! solved by cyclic coordinate ascent on the curve multipliers `λ_γ`, with
//! the density recovered as `ρ = Σ λ_γ w_γ / (2 A c)`.

mod bounds;
mod flatness;
mod inequality;

use std::f64::consts::{PI, TAU};
use std::io::Write;

pub use bounds::{
    dashed_line_bound, grotzsch_bound, ring_bound, ring_bound_in, weighted_min_closed_form,
    RingBound, WeightedMin, RADIAL_NODES,
};
pub use flatness::{weak_flatness_probe, FlatnessOptions, FlatnessProfile};
pub use inequality::{modulus_inequality_check, InequalityOptions, InequalityReport};

use crate::error::{Error, Result};
use crate::field::PlaneFunction;
use crate::geometry::{DomainSpec, Grid, C64};

/// Longest polyline segment, in grid spacings, used when depositing curves.
const SEGMENT_FRACTION: f64 = 0.5;

/// A curve made of one or more polyline pieces. A dashed line has one piece
/// per arc; `∫_γ ρ ds` sums over all pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pieces: Vec<Vec<C64>>,
}

impl Curve {
    pub fn polyline(points: Vec<C64>) -> Self {
        Self {
            pieces: vec![points],
        }
    }

    pub fn from_pieces(pieces: Vec<Vec<C64>>) -> Self {
        Self { pieces }
    }

    pub fn pieces(&self) -> &[Vec<C64>] {
        &self.pieces
    }

    pub fn length(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.windows(2).map(|s| (s[1] - s[0]).norm()).sum::<f64>())
            .sum()
    }

    pub fn points(&self) -> impl Iterator<Item = C64> + '_ {
        self.pieces.iter().flatten().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Paths,
    DashedLines,
}

/// A finite family of curves sampled inside a grid box.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFamily {
    grid: Grid,
    kind: FamilyKind,
    curves: Vec<Curve>,
}

impl CurveFamily {
    pub fn new(grid: Grid, kind: FamilyKind, curves: Vec<Curve>) -> Result<Self> {
        let bbox = grid.bbox();
        for (n, c) in curves.iter().enumerate() {
            if c.pieces.is_empty() {
                return Err(Error::invalid(format!("curve {n} has no pieces")));
            }
            for p in &c.pieces {
                if p.len() < 2 {
                    return Err(Error::invalid(format!("curve {n} has a piece with fewer than 2 samples")));
                }
                if p.windows(2).any(|s| !((s[1] - s[0]).norm() > 0.0)) {
                    return Err(Error::invalid(format!("curve {n} has a zero-length segment")));
                }
                if let Some(z) = p.iter().find(|&&z| grid.locate(z).is_none()) {
                    return Err(Error::invalid(format!(
                        "curve {n} leaves the grid box {bbox:?} at {z}"
                    )));
                }
            }
        }
        Ok(Self { grid, kind, curves })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// The curves whose index satisfies `keep`.
    pub fn subfamily(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self {
            grid: self.grid,
            kind: self.kind,
            curves: self
                .curves
                .iter()
                .enumerate()
                .filter(|(k, _)| keep(*k))
                .map(|(_, c)| c.clone())
                .collect(),
        }
    }

    /// Concentric full circles about `center` with radii filling `(r1, r2)`
    /// at spacing at most half the grid spacing.
    pub fn circles(grid: Grid, center: C64, r1: f64, r2: f64) -> Result<Self> {
        check_radii(r1, r2)?;
        let h = grid.spacing() * SEGMENT_FRACTION;
        let curves = midpoints(r1, r2, h)
            .map(|r| Curve::polyline(arc_points(center, r, 0.0, TAU, h)))
            .collect();
        Self::new(grid, FamilyKind::Paths, curves)
    }

    /// Radial segments joining `|z - center| = r1` to `|z - center| = r2`,
    /// spaced at most half a grid spacing apart on the outer circle.
    pub fn radial_segments(grid: Grid, center: C64, r1: f64, r2: f64) -> Result<Self> {
        check_radii(r1, r2)?;
        let h = grid.spacing() * SEGMENT_FRACTION;
        let n = (TAU * r2 / h).ceil() as usize;
        let m = ((r2 - r1) / h).ceil() as usize;
        let curves = (0..n)
            .map(|j| {
                let e = C64::from_polar(1.0, (j as f64 + 0.5) * TAU / n as f64);
                Curve::polyline(
                    (0..=m)
                        .map(|s| center + e * (r1 + (r2 - r1) * s as f64 / m as f64))
                        .collect(),
                )
            })
            .collect();
        Self::new(grid, FamilyKind::Paths, curves)
    }

    /// The dashed lines `D ∩ S(z0, r)` for `r` filling `(eps, eps0)`.
    /// Radii whose circle misses the domain are skipped.
    pub fn dashed_lines(grid: Grid, domain: &DomainSpec, z0: C64, eps: f64, eps0: f64) -> Result<Self> {
        check_radii(eps, eps0)?;
        let h = grid.spacing() * SEGMENT_FRACTION;
        let curves = midpoints(eps, eps0, h)
            .filter_map(|r| dashed_line_curve(domain, z0, r, h))
            .collect();
        Self::new(grid, FamilyKind::DashedLines, curves)
    }

    /// Curves joining `E = z0 + [r, R]` to `F = z0 - [r, R]`: upper and lower
    /// half circles, logarithmic spirals between different radii, and
    /// straight segments through `z0`.
    pub fn crossing_family(grid: Grid, center: C64, r: f64, big_r: f64) -> Result<Self> {
        check_radii(r, big_r)?;
        let h = grid.spacing() * SEGMENT_FRACTION;
        let radii: Vec<f64> = midpoints(r, big_r, h).collect();
        let mut curves = Vec::new();
        for &rho in &radii {
            curves.push(Curve::polyline(arc_points(center, rho, 0.0, PI, h)));
            curves.push(Curve::polyline(arc_points(center, rho, PI, TAU, h)));
        }
        let coarse: Vec<f64> = radii.iter().step_by(8).copied().collect();
        for &a in &coarse {
            for &b in &coarse {
                if a == b {
                    continue;
                }
                for sign in [1.0, -1.0] {
                    let n = ((PI * a.max(b) + (a - b).abs()) / h).ceil() as usize + 1;
                    let pts = (0..=n)
                        .map(|s| {
                            let t = s as f64 / n as f64;
                            center + C64::from_polar(a.powf(1.0 - t) * b.powf(t), sign * PI * t)
                        })
                        .collect();
                    curves.push(Curve::polyline(pts));
                }
            }
            curves.push(Curve::polyline(vec![center + a, center - a]));
        }
        Self::new(grid, FamilyKind::Paths, curves)
    }
}

fn check_radii(r1: f64, r2: f64) -> Result<()> {
    if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
        return Err(Error::invalid(format!("need 0 < r1 < r2, got {r1}, {r2}")));
    }
    Ok(())
}

/// Midpoints of a uniform partition of `(a, b)` with cells at most `h` wide.
pub(crate) fn midpoints(a: f64, b: f64, h: f64) -> impl Iterator<Item = f64> {
    let n = ((b - a) / h).ceil().max(1.0) as usize;
    let d = (b - a) / n as f64;
    (0..n).map(move |k| a + (k as f64 + 0.5) * d)
}

/// Points of the arc `center + r e^{it}`, `t ∈ [t0, t1]`, endpoints included,
/// at most `h` apart.
pub(crate) fn arc_points(center: C64, r: f64, t0: f64, t1: f64, h: f64) -> Vec<C64> {
    let n = ((r * (t1 - t0) / h).ceil() as usize).max(2);
    (0..=n)
        .map(|s| center + C64::from_polar(r, t0 + (t1 - t0) * s as f64 / n as f64))
        .collect()
}

/// `D ∩ S(z0, r)` as a multi-piece curve, `None` when empty.
pub(crate) fn dashed_line_curve(domain: &DomainSpec, z0: C64, r: f64, h: f64) -> Option<Curve> {
    let arcs = domain.circle_arcs(z0, r);
    if arcs.is_empty() {
        return None;
    }
    let pieces = arcs
        .intervals()
        .iter()
        .filter(|(a, b)| b > a)
        .map(|&(a, b)| arc_points(z0, r, a, b, h))
        .collect::<Vec<_>>();
    if pieces.is_empty() {
        None
    } else {
        Some(Curve::from_pieces(pieces))
    }
}

/// Nonnegative density sampled on grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl DensityField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid("density length does not match the grid"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("density must be finite and nonnegative"));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.len()])
    }

    pub fn from_fn(grid: Grid, f: impl Fn(C64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    /// `Σ ρ² A` over all nodes.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_area()
    }

    /// Writes `i,j,x,y,rho` for every node.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "x", "y", "rho"])?;
        for (k, v) in self.values.iter().enumerate() {
            let (i, j) = self.grid.coords(k);
            let z = self.grid.point_at(k);
            w.write_record([
                i.to_string(),
                j.to_string(),
                z.re.to_string(),
                z.im.to_string(),
                v.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl PlaneFunction for DensityField {
    fn value(&self, z: C64) -> f64 {
        self.grid
            .bilinear_weights(z)
            .map(|w| w.iter().map(|&(k, t)| t * self.values[k]).sum())
            .unwrap_or(0.0)
    }

    fn spacing(&self) -> Option<f64> {
        Some(self.grid.spacing())
    }
}

/// Appends the deposition weights of `curve` to `out` (unsorted, with
/// repeats). Samples outside the grid box contribute nothing.
fn deposit_raw(grid: &Grid, curve: &Curve, out: &mut Vec<(u32, f64)>) {
    let h = grid.spacing() * SEGMENT_FRACTION;
    for piece in &curve.pieces {
        for seg in piece.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let len = (b - a).norm();
            let m = ((len / h).ceil() as usize).max(1);
            let l = len / m as f64;
            for s in 0..=m {
                let w = if s == 0 || s == m { 0.5 * l } else { l };
                let z = a + (b - a) * (s as f64 / m as f64);
                if let Some(st) = grid.bilinear_weights(z) {
                    for (k, t) in st {
                        if t > 0.0 {
                            out.push((k as u32, w * t));
                        }
                    }
                }
            }
        }
    }
}

/// Sorted, merged deposition weights `w_γ` of one curve.
fn deposit_curve(grid: &Grid, curve: &Curve, scratch: &mut Vec<(u32, f64)>) -> Vec<(u32, f64)> {
    scratch.clear();
    deposit_raw(grid, curve, scratch);
    scratch.sort_unstable_by_key(|e| e.0);
    let mut merged: Vec<(u32, f64)> = Vec::with_capacity(scratch.len() / 2);
    for &(k, w) in scratch.iter() {
        match merged.last_mut() {
            Some(last) if last.0 == k => last.1 += w,
            _ => merged.push((k, w)),
        }
    }
    merged
}

/// Curve weights in compressed-row form.
struct Deposit {
    offsets: Vec<usize>,
    idx: Vec<u32>,
    val: Vec<f64>,
}

impl Deposit {
    fn build(family: &CurveFamily) -> Self {
        let mut offsets = vec![0];
        let mut idx = Vec::new();
        let mut val = Vec::new();
        let mut scratch = Vec::new();
        for c in &family.curves {
            for (k, w) in deposit_curve(&family.grid, c, &mut scratch) {
                idx.push(k);
                val.push(w);
            }
            offsets.push(idx.len());
        }
        Self { offsets, idx, val }
    }

    fn rows(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    fn dot(&self, g: usize, rho: &[f64]) -> f64 {
        let (a, b) = (self.offsets[g], self.offsets[g + 1]);
        self.idx[a..b]
            .iter()
            .zip(&self.val[a..b])
            .map(|(&k, &w)| w * rho[k as usize])
            .sum()
    }

    #[inline]
    fn axpy(&self, g: usize, alpha: f64, scale: &[f64], rho: &mut [f64]) {
        let (a, b) = (self.offsets[g], self.offsets[g + 1]);
        for (&k, &w) in self.idx[a..b].iter().zip(&self.val[a..b]) {
            rho[k as usize] += alpha * w * scale[k as usize];
        }
    }
}

/// `∫_γ ρ ds` by the trapezoid rule on the bilinear interpolant of `ρ`,
/// with segments subdivided to at most half a grid spacing.
pub fn line_integral(rho: &DensityField, curve: &Curve) -> f64 {
    let mut raw = Vec::new();
    deposit_raw(&rho.grid, curve, &mut raw);
    raw.iter().map(|&(k, w)| w * rho.values[k as usize]).sum()
}

/// Solver settings for [`discrete_modulus_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusOptions {
    /// Stop once the KKT residual is at most this.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Over-relaxation factor of the multiplier updates, in `(0, 2)`.
    pub relaxation: f64,
    /// Optional positive node weights `c`: the objective becomes `Σ c ρ² A`.
    pub node_weights: Option<Vec<f64>>,
}

impl Default for ModulusOptions {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            max_sweeps: 20_000,
            relaxation: 1.5,
            node_weights: None,
        }
    }
}

/// Outcome of a discrete modulus computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusResult {
    /// `Σ c ρ² A` of the returned density.
    pub value: f64,
    /// Optimal density, rescaled so that every curve has `∫_γ ρ ds ≥ 1`.
    pub density: DensityField,
    /// Largest KKT violation of the multipliers before the final rescaling.
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Smallest `∫_γ ρ ds` of the returned density.
    pub min_line_integral: f64,
    pub curves: usize,
}

impl ModulusResult {
    /// `Err(NoConvergence)` when the sweep cap was hit.
    pub fn check(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                iterations: self.iterations,
                residual: self.kkt_residual,
            })
        }
    }

    /// Writes `value,kkt_residual,iterations,converged,curves`.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["value", "kkt_residual", "iterations", "converged", "curves"])?;
        w.write_record([
            self.value.to_string(),
            self.kkt_residual.to_string(),
            self.iterations.to_string(),
            self.converged.to_string(),
            self.curves.to_string(),
        ])?;
        w.flush()?;
        Ok(())
    }
}

/// Discrete modulus with default settings and the given KKT tolerance.
pub fn discrete_modulus(family: &CurveFamily, tol: f64) -> Result<ModulusResult> {
    discrete_modulus_with(
        family,
        &ModulusOptions {
            tol,
            ..ModulusOptions::default()
        },
    )
}

/// Minimizes `Σ c ρ² A` subject to `∫_γ ρ ds ≥ 1` for every curve.
///
/// When the sweep cap is reached the final iterate is returned with
/// `converged = false`; [`ModulusResult::check`] turns that into an error.
pub fn discrete_modulus_with(family: &CurveFamily, opts: &ModulusOptions) -> Result<ModulusResult> {
    if family.is_empty() {
        return Err(Error::invalid("empty curve family"));
    }
    if !(opts.tol > 0.0 && opts.tol <= 1e-2) {
        return Err(Error::invalid(format!("tolerance must lie in (0, 1e-2], got {}", opts.tol)));
    }
    if !(opts.relaxation > 0.0 && opts.relaxation < 2.0) {
        return Err(Error::invalid("relaxation must lie in (0, 2)"));
    }
    let grid = family.grid;
    let area = grid.cell_area();
    let c: Vec<f64> = match &opts.node_weights {
        Some(w) => {
            if w.len() != grid.len() || w.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(Error::invalid("node weights must be positive, one per node"));
            }
            w.clone()
        }
        None => vec![1.0; grid.len()],
    };
    // ρ = Σ λ_γ w_γ · scale
    let scale: Vec<f64> = c.iter().map(|ck| 1.0 / (2.0 * area * ck)).collect();

    let dep = Deposit::build(family);
    let n = dep.rows();
    let mut q = vec![0.0; n];
    let mut len = vec![0.0; n];
    for g in 0..n {
        let (a, b) = (dep.offsets[g], dep.offsets[g + 1]);
        for (&k, &w) in dep.idx[a..b].iter().zip(&dep.val[a..b]) {
            q[g] += w * w * scale[k as usize];
            len[g] += w;
        }
        if !(q[g] > 0.0) {
            return Err(Error::invalid(format!("curve {g} deposits no weight on the grid")));
        }
    }

    // Warm start: λ_γ ∝ 1/length, scaled so that the mean line integral is 1.
    let mut lambda: Vec<f64> = len.iter().map(|l| 1.0 / l).collect();
    let mut rho = vec![0.0; grid.len()];
    for (g, &l) in lambda.iter().enumerate() {
        dep.axpy(g, l, &scale, &mut rho);
    }
    let mean = (0..n).map(|g| dep.dot(g, &rho)).sum::<f64>() / n as f64;
    if mean > 0.0 {
        lambda.iter_mut().for_each(|l| *l /= mean);
        rho.iter_mut().for_each(|r| *r /= mean);
    }

    let kkt = |lam: f64, l: f64| if lam > 0.0 { (1.0 - l).abs() } else { (1.0 - l).max(0.0) };
    let omega = opts.relaxation;
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    while iterations < opts.max_sweeps {
        iterations += 1;
        let mut sweep_res: f64 = 0.0;
        for g in 0..n {
            let l = dep.dot(g, &rho);
            sweep_res = sweep_res.max(kkt(lambda[g], l));
            let next = (lambda[g] + omega * (1.0 - l) / q[g]).max(0.0);
            let d = next - lambda[g];
            if d != 0.0 {
                dep.axpy(g, d, &scale, &mut rho);
                lambda[g] = next;
            }
        }
        if sweep_res <= opts.tol {
            residual = (0..n)
                .map(|g| kkt(lambda[g], dep.dot(g, &rho)))
                .fold(0.0, f64::max);
            if residual <= opts.tol {
                converged = true;
                break;
            }
        } else {
            residual = sweep_res;
        }
    }
    if !converged {
        residual = (0..n)
            .map(|g| kkt(lambda[g], dep.dot(g, &rho)))
            .fold(0.0, f64::max);
    }

    let min_l = (0..n).map(|g| dep.dot(g, &rho)).fold(f64::INFINITY, f64::min);
    if min_l > 0.0 && min_l < 1.0 {
        rho.iter_mut().for_each(|r| *r /= min_l);
    }
    let min_line_integral = if min_l > 0.0 && min_l < 1.0 { 1.0 } else { min_l };
    let value = rho.iter().zip(&c).map(|(r, ck)| ck * r * r).sum::<f64>() * area;
    Ok(ModulusResult {
        value,
        density: DensityField { grid, values: rho },
        kkt_residual: residual,
        iterations,
        converged,
        min_line_integral,
        curves: n,
    })
}

/// Evaluates `ρ`-weighted line integrals of every curve in the family.
pub fn line_integrals(rho: &DensityField, family: &CurveFamily) -> Vec<f64> {
    family.curves.iter().map(|c| line_integral(rho, c)).collect()
}

#[cfg(test)]
mod tests;
