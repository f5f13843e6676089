//! Boundary-behaviour probes: image diameters of shrinking boundary
//! neighbourhoods and the Stoilow factorization check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::Verdict;
use crate::error::{Error, Result};
use crate::field::{ComplexField, RadialProfile};
use crate::geometry::{BBox, DomainSpec, Grid, PlaneMap, C64};
use crate::solver::SolutionBundle;

/// Samples per ladder level in [`boundary_oscillation`].
pub const OSCILLATION_SAMPLES: usize = 10_000;

/// Diameters of `f(D ∩ B(z0, ε))` along a ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillationProfile {
    /// Radii increasing, diameters as values.
    pub profile: RadialProfile,
    /// Levels dropped because no sample of `D ∩ B(z0, ε)` could be found.
    pub truncated: bool,
    pub samples_per_level: usize,
}

impl OscillationProfile {
    /// Diameter at the smallest surviving radius.
    pub fn smallest(&self) -> f64 {
        self.profile.values.first().copied().unwrap_or(f64::NAN)
    }
}

/// Convex hull by the monotone chain; returns the hull vertices.
fn hull(mut pts: Vec<C64>) -> Vec<C64> {
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: C64, a: C64, b: C64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut lower: Vec<C64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<C64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn diameter(points: &[C64]) -> f64 {
    let h = hull(points.to_vec());
    let mut d = 0.0f64;
    for (i, a) in h.iter().enumerate() {
        for b in &h[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Diameter proxy of the cluster set of `f` at `z0 ∈ ∂D`: for each `ε` of a
/// decreasing ladder, the diameter of the images of `n_samples` seeded
/// uniform samples of `D ∩ B(z0, ε)` where `f` is defined. Samples of the
/// smaller balls are reused for the larger ones, so the profile is
/// monotone. Levels without any sample are dropped and flagged.
pub fn boundary_oscillation(
    f: &impl PlaneMap,
    domain: &DomainSpec,
    z0: C64,
    ladder: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<OscillationProfile> {
    domain.validate()?;
    if ladder.is_empty() || ladder.iter().any(|e| !(*e > 0.0)) || ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("ladder must be positive and strictly decreasing"));
    }
    if n_samples == 0 {
        return Err(Error::invalid("need at least one sample per level"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images: Vec<C64> = Vec::new();
    let mut radii = Vec::new();
    let mut diams = Vec::new();
    let mut truncated = false;
    for &eps in ladder.iter().rev() {
        let mut found = 0;
        let mut attempts = 0;
        while found < n_samples && attempts < 50 * n_samples {
            attempts += 1;
            let r = eps * rng.gen::<f64>().sqrt();
            let z = z0 + C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
            if !domain.contains(z) {
                continue;
            }
            if let Some(w) = f.apply(z) {
                if w.re.is_finite() && w.im.is_finite() {
                    images.push(w);
                    found += 1;
                }
            }
        }
        if images.is_empty() {
            truncated = true;
            continue;
        }
        radii.push(eps);
        diams.push(diameter(&images));
    }
    if radii.is_empty() {
        return Err(Error::invalid(format!("no sample of D near {z0} maps to a finite value")));
    }
    Ok(OscillationProfile {
        profile: RadialProfile::new(z0, radii, diams)?,
        truncated,
        samples_per_level: n_samples,
    })
}

/// Outcome of [`stoilow_factor_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct StoilowReport {
    /// `‖∂̄h̃‖₂` over the image nodes with a full stencil.
    pub dbar_norm: f64,
    /// `‖∂h̃‖₂` over the same nodes.
    pub d_norm: f64,
    /// `‖∂̄h̃‖ / (‖∂h̃‖² + ‖∂̄h̃‖²)^{1/2}`: 0 for analytic, 1 for
    /// anti-analytic `h̃`.
    pub relative: f64,
    pub covered_nodes: usize,
    /// Uncovered image nodes enclosed by covered ones in both directions.
    pub gap_nodes: usize,
    pub verdict: Verdict,
}

/// Relative `∂̄` size below which the factorization is certified.
pub const STOILOW_TOLERANCE: f64 = 1e-3;
/// Gap fraction above which the check is inconclusive.
pub const MAX_GAP_FRACTION: f64 = 0.05;

/// Reconstructs `h̃ = f ∘ g⁻¹` on an `resolution²` image grid by linear
/// interpolation over the images of the source triangles and returns the
/// size of `∂̄h̃` (centred differences) relative to the full gradient.
pub fn stoilow_factor_check(f: &impl PlaneMap, g: &SolutionBundle, resolution: usize) -> Result<StoilowReport> {
    let src = g.f.grid;
    let mask = &g.f.mask;
    let fv: Vec<Option<C64>> = (0..src.len())
        .map(|k| if mask[k] { f.apply(src.point_at(k)) } else { None })
        .collect();
    let w = &g.f.values;
    let usable: Vec<C64> = (0..src.len()).filter(|&k| fv[k].is_some()).map(|k| w[k]).collect();
    let bbox = BBox::around(usable.iter().copied(), 0.0).ok_or_else(|| Error::invalid("no masked node to invert"))?;
    let img = Grid::new(bbox, resolution, resolution)?;
    let mut values: Vec<Option<C64>> = vec![None; img.len()];

    let to_index = |z: C64| ((z.re - bbox.re_min) / img.dx(), (z.im - bbox.im_min) / img.dy());
    for j in 0..src.ny() - 1 {
        for i in 0..src.nx() - 1 {
            let k = [src.index(i, j), src.index(i + 1, j), src.index(i + 1, j + 1), src.index(i, j + 1)];
            if k.iter().any(|&q| fv[q].is_none()) {
                continue;
            }
            for tri in [[k[0], k[1], k[2]], [k[0], k[2], k[3]]] {
                let p = tri.map(|q| w[q]);
                let det = (p[1] - p[0]).re * (p[2] - p[0]).im - (p[1] - p[0]).im * (p[2] - p[0]).re;
                if det.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let (xs, ys): (Vec<f64>, Vec<f64>) = p.iter().map(|&z| to_index(z)).unzip();
                let lo_i = xs.iter().copied().fold(f64::INFINITY, f64::min).floor().max(0.0) as usize;
                let hi_i = (xs.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil() as usize).min(img.nx() - 1);
                let lo_j = ys.iter().copied().fold(f64::INFINITY, f64::min).floor().max(0.0) as usize;
                let hi_j = (ys.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil() as usize).min(img.ny() - 1);
                for jj in lo_j..=hi_j {
                    for ii in lo_i..=hi_i {
                        let node = img.index(ii, jj);
                        if values[node].is_some() {
                            continue;
                        }
                        let z = img.point(ii, jj) - p[0];
                        let (a, b) = (p[1] - p[0], p[2] - p[0]);
                        let l1 = (z.re * b.im - z.im * b.re) / det;
                        let l2 = (a.re * z.im - a.im * z.re) / det;
                        let l0 = 1.0 - l1 - l2;
                        let tol = -1e-12;
                        if l0 >= tol && l1 >= tol && l2 >= tol {
                            let fv3 = tri.map(|q| fv[q].expect("checked above"));
                            values[node] = Some(fv3[0] * l0 + fv3[1] * l1 + fv3[2] * l2);
                        }
                    }
                }
            }
        }
    }

    let (nx, ny) = (img.nx(), img.ny());
    let covered = values.iter().filter(|v| v.is_some()).count();
    let mut gaps = 0;
    for jj in 0..ny {
        for ii in 0..nx {
            if values[img.index(ii, jj)].is_some() {
                continue;
            }
            let row = |r: std::ops::Range<usize>| r.into_iter().any(|x| values[img.index(x, jj)].is_some());
            let col = |r: std::ops::Range<usize>| r.into_iter().any(|y| values[img.index(ii, y)].is_some());
            if row(0..ii) && row(ii + 1..nx) && col(0..jj) && col(jj + 1..ny) {
                gaps += 1;
            }
        }
    }

    let (mut dbar, mut d) = (0.0, 0.0);
    for jj in 1..ny - 1 {
        for ii in 1..nx - 1 {
            let at = |x: usize, y: usize| values[img.index(x, y)];
            let (Some(l), Some(r), Some(b), Some(t), Some(_)) =
                (at(ii - 1, jj), at(ii + 1, jj), at(ii, jj - 1), at(ii, jj + 1), at(ii, jj))
            else {
                continue;
            };
            let hx = (r - l) / (2.0 * img.dx());
            let hy = (t - b) / (2.0 * img.dy());
            let ihy = C64::new(-hy.im, hy.re);
            dbar += ((hx + ihy) * 0.5).norm_sqr();
            d += ((hx - ihy) * 0.5).norm_sqr();
        }
    }
    let area = img.cell_area();
    let (dbar, d) = ((dbar * area).sqrt(), (d * area).sqrt());
    let total = dbar.hypot(d);
    let relative = if total > 0.0 { dbar / total } else { 0.0 };
    let verdict = if covered == 0 || gaps as f64 > MAX_GAP_FRACTION * (covered + gaps) as f64 {
        Verdict::Inconclusive
    } else if relative < STOILOW_TOLERANCE {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(StoilowReport {
        dbar_norm: dbar,
        d_norm: d,
        relative,
        covered_nodes: covered,
        gap_nodes: gaps,
        verdict,
    })
}

/// Samples of a map on the masked nodes of a grid (zero elsewhere or where
/// the map is undefined).
pub fn sample_map(f: &impl PlaneMap, grid: Grid, mask: Vec<bool>) -> ComplexField {
    let values = grid
        .points()
        .zip(&mask)
        .map(|(z, &m)| if m { f.apply(z).unwrap_or_default() } else { C64::new(0.0, 0.0) })
        .collect();
    ComplexField { grid, values, mask }
}
