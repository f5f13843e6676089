//! Moduli of families joining boundary-hugging continua near a boundary
//! point, over a ladder of shrinking neighbourhoods.

use std::f64::consts::TAU;

use super::{arc_points, discrete_modulus_with, Curve, CurveFamily, FamilyKind, ModulusOptions};
use crate::error::{Error, Result};
use crate::field::RadialProfile;
use crate::geometry::{wrap_angle, BBox, DomainSpec, Grid, C64};

/// Settings of [`weak_flatness_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessOptions {
    /// Direction (from `z0`) separating the two continua. By default the
    /// middle of the widest gap of `S(z0, R/4)` outside the domain.
    pub cut_angle: Option<f64>,
    /// Grid nodes per side of the probing window.
    pub resolution: usize,
    pub tol: f64,
    /// Waypoints for detours form a `lattice x lattice` array over the window.
    pub lattice: usize,
    /// Every `stride`-th continuum point starts a family of detours.
    pub stride: usize,
}

impl Default for FlatnessOptions {
    fn default() -> Self {
        Self {
            cut_angle: None,
            resolution: 384,
            tol: 2e-3,
            lattice: 16,
            stride: 8,
        }
    }
}

/// Discrete moduli of `Δ(E_k, F_k; D)` along a ladder of inner radii.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessProfile {
    pub center: C64,
    pub outer_radius: f64,
    pub cut_angle: f64,
    /// Inner radii in the order given.
    pub inner_radii: Vec<f64>,
    pub moduli: Vec<f64>,
    pub curves: Vec<usize>,
    pub converged: Vec<bool>,
}

impl FlatnessProfile {
    /// Modulus at the last rung divided by the modulus at the first.
    pub fn growth(&self) -> f64 {
        self.moduli[self.moduli.len() - 1] / self.moduli[0]
    }

    pub fn to_radial_profile(&self) -> Result<RadialProfile> {
        RadialProfile::from_pairs(
            self.center,
            self.inner_radii.iter().copied().zip(self.moduli.iter().copied()).collect(),
        )
    }
}

/// Probes the modulus blow-up that characterizes weakly flat boundary
/// points.
///
/// For each inner radius `r` the continua are `E = {E(ρ)}` and
/// `F = {F(ρ)}`, `r ≤ ρ ≤ R`, where `E(ρ)` is the first point of
/// `D ∩ S(z0, ρ)` met turning counter-clockwise from the cut direction and
/// `F(ρ)` the first met turning clockwise; both hug the boundary and cross
/// the ring `r < |z - z0| < R`. The curve family joining them consists of
/// the arcs of `D ∩ S(z0, ρ)` running from `E(ρ)` to `F(ρ)` and of one- or
/// two-waypoint detours `E(ρ) → w → F(ρ)`, `E(ρ) → w → w* → F(ρ)` through
/// waypoints outside `B(z0, 2R)` (`w*` is the mirror image of `w` in the
/// cut line). All rungs share the same radii, so families are nested.
pub fn weak_flatness_probe(
    spec: &DomainSpec,
    z0: C64,
    outer_radius: f64,
    inner_radii: &[f64],
    opts: &FlatnessOptions,
) -> Result<FlatnessProfile> {
    spec.validate()?;
    let big_r = outer_radius;
    if !(big_r > 0.0 && big_r.is_finite()) {
        return Err(Error::invalid("outer radius must be positive"));
    }
    if inner_radii.is_empty() || inner_radii.iter().any(|&r| !(r > 0.0 && r < big_r)) {
        return Err(Error::invalid("inner radii must lie in (0, R)"));
    }
    if opts.lattice < 2 || opts.stride == 0 {
        return Err(Error::invalid("lattice must be at least 2 and stride positive"));
    }

    let dom = spec.bbox();
    let window = BBox::square(z0, 3.0 * big_r);
    let pad = 0.02 * (dom.width().max(dom.height()));
    let bbox = BBox::new(
        window.re_min.max(dom.re_min - pad),
        window.re_max.min(dom.re_max + pad),
        window.im_min.max(dom.im_min - pad),
        window.im_max.min(dom.im_max + pad),
    );
    let grid = Grid::new(bbox, opts.resolution, opts.resolution)?;
    let h = grid.spacing();
    if spec.boundary_distance(z0) > h {
        return Err(Error::invalid(format!(
            "z0 = {z0} is farther than one grid spacing ({h:e}) from the boundary"
        )));
    }

    let cut = match opts.cut_angle {
        Some(t) => wrap_angle(t),
        None => default_cut(spec, z0, 0.25 * big_r)?,
    };
    let mirror = |w: C64| {
        let e = C64::from_polar(1.0, cut);
        z0 + e * ((w - z0) / e).conj()
    };

    let r_min = inner_radii.iter().copied().fold(f64::INFINITY, f64::min);
    let step = 0.5 * h;
    let n_rho = ((big_r - r_min) / step).ceil() as usize;
    let mut ends: Vec<Option<Ends>> = Vec::with_capacity(n_rho);
    for j in 0..n_rho {
        let rho = big_r - (j as f64 + 0.5) * step;
        ends.push(continuum_points(spec, z0, rho, cut, h));
    }

    let waypoints: Vec<C64> = {
        let l = opts.lattice;
        let mut w = Vec::new();
        for b in 0..l {
            for a in 0..l {
                let z = C64::new(
                    bbox.re_min + (a as f64 + 0.5) * bbox.width() / l as f64,
                    bbox.im_min + (b as f64 + 0.5) * bbox.height() / l as f64,
                );
                if spec.contains(z) && spec.boundary_distance(z) > 2.0 * h && (z - z0).norm() > 2.0 * big_r {
                    w.push(z);
                }
            }
        }
        w
    };

    // Curves for every radius index, tagged with the index.
    let mut tagged: Vec<(usize, Curve)> = Vec::new();
    for (j, e) in ends.iter().enumerate() {
        let Some(e) = e else { continue };
        if let Some(arc) = &e.arc {
            tagged.push((j, Curve::polyline(arc_points(z0, e.rho, arc.0, arc.1, step))));
        }
        if j % opts.stride != 0 {
            continue;
        }
        for &w in &waypoints {
            let wm = mirror(w);
            let routes: [&[C64]; 2] = [&[e.e, w, e.f], &[e.e, w, wm, e.f]];
            for route in routes {
                if route.windows(2).all(|s| s[0] != s[1] && spec.segment_inside(s[0], s[1]))
                    && route.iter().all(|&z| grid.locate(z).is_some())
                {
                    tagged.push((j, Curve::polyline(route.to_vec())));
                }
                if (wm - w).norm() < h {
                    break;
                }
            }
        }
    }

    let mut moduli = Vec::with_capacity(inner_radii.len());
    let mut curves = Vec::with_capacity(inner_radii.len());
    let mut converged = Vec::with_capacity(inner_radii.len());
    let mo = ModulusOptions {
        tol: opts.tol,
        ..ModulusOptions::default()
    };
    for &r in inner_radii {
        let keep: Vec<Curve> = tagged
            .iter()
            .filter(|(j, _)| big_r - (*j as f64 + 0.5) * step > r)
            .map(|(_, c)| c.clone())
            .collect();
        if keep.is_empty() {
            moduli.push(0.0);
            curves.push(0);
            converged.push(true);
            continue;
        }
        let fam = CurveFamily::new(grid, FamilyKind::Paths, keep)?;
        let res = discrete_modulus_with(&fam, &mo)?;
        moduli.push(res.value);
        curves.push(res.curves);
        converged.push(res.converged);
    }
    Ok(FlatnessProfile {
        center: z0,
        outer_radius: big_r,
        cut_angle: cut,
        inner_radii: inner_radii.to_vec(),
        moduli,
        curves,
        converged,
    })
}

struct Ends {
    rho: f64,
    e: C64,
    f: C64,
    /// Angular span from `E(ρ)` counter-clockwise to `F(ρ)` when one arc
    /// of the dashed line joins them.
    arc: Option<(f64, f64)>,
}

/// `E(ρ)` and `F(ρ)` nudged slightly into the domain. The cut is snapped
/// to the gap of `S(z0, ρ)` outside the domain whose middle is closest to it.
fn continuum_points(spec: &DomainSpec, z0: C64, rho: f64, cut: f64, h: f64) -> Option<Ends> {
    let arcs = spec.circle_arcs(z0, rho);
    if arcs.is_empty() || arcs.is_full() {
        return None;
    }
    let ivs = arcs.intervals();
    let n = ivs.len();
    let dist = |t: f64| {
        let d = (t - cut).rem_euclid(TAU);
        d.min(TAU - d)
    };
    // gap k runs from the end of arc k to the start of arc k + 1
    let gap_mid = |k: usize| {
        let end = ivs[k].1;
        end + 0.5 * (ivs[(k + 1) % n].0 - end).rem_euclid(TAU)
    };
    let k = (0..n).min_by(|&a, &b| dist(gap_mid(a)).total_cmp(&dist(gap_mid(b))))?;
    let (before, after) = (k, (k + 1) % n);
    let nudge = |len: f64| (0.25 * h / rho).min(0.1 * len);
    let ta = ivs[after].0 + nudge(ivs[after].1 - ivs[after].0);
    let tb = ivs[before].1 - nudge(ivs[before].1 - ivs[before].0);
    let e = z0 + C64::from_polar(rho, ta);
    let f = z0 + C64::from_polar(rho, tb);
    if !(spec.contains(e) && spec.contains(f)) {
        return None;
    }
    let arc = (n == 1).then_some((ta, tb));
    Some(Ends { rho, e, f, arc })
}

/// Middle of the widest angular gap of `S(z0, r)` outside the domain.
fn default_cut(spec: &DomainSpec, z0: C64, r: f64) -> Result<f64> {
    let arcs = spec.circle_arcs(z0, r);
    if arcs.is_empty() || arcs.is_full() {
        return Err(Error::invalid(format!("no boundary crossing near z0 = {z0}")));
    }
    let ivs = arcs.intervals();
    let mut best = (0.0, 0.0);
    for k in 0..ivs.len() {
        let end = ivs[k].1;
        let next = ivs[(k + 1) % ivs.len()].0;
        let gap = (next - end).rem_euclid(TAU);
        if gap > best.0 {
            best = (gap, end + 0.5 * gap);
        }
    }
    Ok(wrap_angle(best.1))
}

