//! Checks the lower bounds for the modulus of the image of a dashed-line
//! family under a solution.

use super::{dashed_line_bound, discrete_modulus_with, midpoints, Curve, CurveFamily, FamilyKind, ModulusOptions};
use crate::criteria::Verdict;
use crate::error::{Error, Result};
use crate::field::PlaneFunction;
use crate::geometry::{BBox, DomainSpec, Grid, PlaneMap, C64};

/// Settings of [`modulus_inequality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityOptions {
    /// Nodes per side of the source and image grids.
    pub resolution: usize,
    pub tol: f64,
    /// Relative shortfall still reported as `Holds` (discretization slack).
    pub slack: f64,
}

impl Default for InequalityOptions {
    fn default() -> Self {
        Self {
            resolution: 256,
            tol: 2e-3,
            slack: 0.03,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    /// Discrete modulus of the image family `fΣ_ε`.
    pub image_modulus: f64,
    /// Discrete `inf ∫ ρ²/K dm` over densities admissible for `Σ_ε`.
    /// Admissibility is enforced on every dashed line, which can only raise
    /// this value compared with admissibility for almost every line.
    pub weighted_bound: f64,
    /// `∫_ε^{ε₀} dr / ‖K‖₁(z0, r)`.
    pub dashed_bound: f64,
    /// `(image_modulus - weighted_bound) / weighted_bound`.
    pub weighted_margin: f64,
    /// `(image_modulus - dashed_bound) / dashed_bound`.
    pub dashed_margin: f64,
    pub weighted_verdict: Verdict,
    pub dashed_verdict: Verdict,
    /// Some sample of a dashed line fell outside the domain of the map.
    pub clipped: bool,
    pub converged: bool,
    pub dashed_lines: usize,
}

fn verdict(margin: f64, slack: f64, trusted: bool) -> Verdict {
    if !trusted || !margin.is_finite() {
        Verdict::Inconclusive
    } else if margin >= -slack {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

/// Cap on the number of dashed lines pushed through the map.
const MAX_IMAGE_RADII: usize = 2000;

/// Maximum image-segment refinement depth.
const MAX_DEPTH: u32 = 24;

/// Pushes `Σ_ε = {D ∩ S(z0, r) : ε < r < ε₀}` through `f`, computes the
/// discrete modulus of the image family and compares it with both lower
/// bounds: the `1/K`-weighted modulus of `Σ_ε` and the radial integral of
/// `1/‖K‖₁`.
pub fn modulus_inequality_check(
    f: &impl PlaneMap,
    k: &impl PlaneFunction,
    domain: &DomainSpec,
    z0: C64,
    eps: f64,
    eps0: f64,
    opts: &InequalityOptions,
) -> Result<InequalityReport> {
    domain.validate()?;
    if !(eps > 0.0 && eps < eps0 && eps0.is_finite()) {
        return Err(Error::invalid(format!("need 0 < eps < eps0, got {eps}, {eps0}")));
    }
    let mo = ModulusOptions {
        tol: opts.tol,
        ..ModulusOptions::default()
    };

    // Source plane: weighted modulus of Σ_ε.
    let dom = domain.bbox();
    let ring = BBox::square(z0, eps0);
    let pad = 0.01 * eps0;
    let src_box = BBox::new(
        ring.re_min.max(dom.re_min) - pad,
        ring.re_max.min(dom.re_max) + pad,
        ring.im_min.max(dom.im_min) - pad,
        ring.im_max.min(dom.im_max) + pad,
    );
    let src = Grid::new(src_box, opts.resolution, opts.resolution)?;
    let sigma = CurveFamily::dashed_lines(src, domain, z0, eps, eps0)?;
    if sigma.is_empty() {
        return Err(Error::invalid("the ring does not meet the domain"));
    }
    let weights: Vec<f64> = src.points().map(|z| 1.0 / k.value(z).max(1.0)).collect();
    let weighted = discrete_modulus_with(
        &sigma,
        &ModulusOptions {
            node_weights: Some(weights),
            ..mo.clone()
        },
    )?;

    // Image plane: map every dashed line, refining until image segments are
    // at most half an image-grid spacing.
    let mut clipped = false;
    let mut all = Vec::new();
    for z in sigma.curves().iter().flat_map(|c| c.points()) {
        match f.apply(z) {
            Some(w) => all.push(w),
            None => clipped = true,
        }
    }
    let img_box = BBox::around(all.iter().copied(), 0.0).ok_or_else(|| Error::invalid("empty image family"))?;
    let side = img_box.width().max(img_box.height());
    let img_box = BBox::around(all.iter().copied(), 0.02 * side).unwrap();
    let img = Grid::new(img_box, opts.resolution, opts.resolution)?;
    let h_img = 0.5 * img.spacing();

    // Radial spacing of the image family: fine enough that neighbouring
    // image curves are at most half a spacing apart.
    let lip = radial_lipschitz(f, domain, z0, eps, eps0);
    let h_src = 0.5 * src.spacing();
    let dr = (h_img / lip.max(1e-12)).min(h_src).max((eps0 - eps) / MAX_IMAGE_RADII as f64);
    let mut curves = Vec::new();
    for r in midpoints(eps, eps0, dr) {
        let arcs = domain.circle_arcs(z0, r);
        let mut pieces = Vec::new();
        for &(a, b) in arcs.intervals() {
            match map_arc(f, z0, r, a, b, h_img) {
                Some(p) if p.len() >= 2 => pieces.push(p),
                Some(_) => {}
                None => clipped = true,
            }
        }
        if !pieces.is_empty() {
            curves.push(Curve::from_pieces(pieces));
        }
    }
    let grid_ok = curves.iter().all(|c| c.points().all(|z| img.locate(z).is_some()));
    if !grid_ok {
        clipped = true;
        curves.retain(|c| c.points().all(|z| img.locate(z).is_some()));
    }
    let dashed_lines = curves.len();
    let fam = CurveFamily::new(img, FamilyKind::DashedLines, curves)?;
    let image = discrete_modulus_with(&fam, &mo)?;

    let dashed = dashed_line_bound(k, domain, z0, eps, eps0)?;
    let weighted_margin = (image.value - weighted.value) / weighted.value;
    let dashed_margin = (image.value - dashed) / dashed;
    let converged = image.converged && weighted.converged;
    let trusted = !clipped && converged;
    Ok(InequalityReport {
        image_modulus: image.value,
        weighted_bound: weighted.value,
        dashed_bound: dashed,
        weighted_margin,
        dashed_margin,
        weighted_verdict: verdict(weighted_margin, opts.slack, trusted),
        dashed_verdict: verdict(dashed_margin, opts.slack, trusted),
        clipped,
        converged,
        dashed_lines,
    })
}

/// Largest `|f(z0 + r₂e^{iθ}) - f(z0 + r₁e^{iθ})| / (r₂ - r₁)` on a coarse
/// polar lattice of the ring inside the domain.
fn radial_lipschitz(f: &impl PlaneMap, domain: &DomainSpec, z0: C64, eps: f64, eps0: f64) -> f64 {
    let (nr, nt) = (64, 128);
    let dr = (eps0 - eps) / nr as f64;
    let mut best: f64 = 0.0;
    for t in 0..nt {
        let e = C64::from_polar(1.0, t as f64 * std::f64::consts::TAU / nt as f64);
        let mut prev: Option<C64> = None;
        for s in 0..=nr {
            let z = z0 + e * (eps + s as f64 * dr);
            let w = if domain.contains(z) { f.apply(z) } else { None };
            if let (Some(a), Some(b)) = (prev, w) {
                best = best.max((b - a).norm() / dr);
            }
            prev = w;
        }
    }
    best
}

/// Image of the arc `z0 + r e^{it}`, `t ∈ [a, b]`, with consecutive image
/// points at most `h` apart. `None` if the map is undefined somewhere.
fn map_arc(f: &impl PlaneMap, z0: C64, r: f64, a: f64, b: f64, h: f64) -> Option<Vec<C64>> {
    let at = |t: f64| f.apply(z0 + C64::from_polar(r, t));
    let n = ((r * (b - a) / h).ceil() as usize).max(2);
    let mut out = vec![at(a)?];
    let mut t_prev = a;
    for s in 1..=n {
        let t = a + (b - a) * s as f64 / n as f64;
        let w = at(t)?;
        refine(&at, t_prev, *out.last().unwrap(), t, w, h, 0, &mut out)?;
        t_prev = t;
    }
    out.dedup_by(|x, y| (*x - *y).norm() < 1e-14);
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    at: &impl Fn(f64) -> Option<C64>,
    ta: f64,
    wa: C64,
    tb: f64,
    wb: C64,
    h: f64,
    depth: u32,
    out: &mut Vec<C64>,
) -> Option<()> {
    if (wb - wa).norm() <= h || depth >= MAX_DEPTH {
        out.push(wb);
        return Some(());
    }
    let tm = 0.5 * (ta + tb);
    let wm = at(tm)?;
    refine(at, ta, wa, tm, wm, h, depth + 1, out)?;
    refine(at, tm, wm, tb, wb, h, depth + 1, out)
}
