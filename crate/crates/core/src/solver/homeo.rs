//! Sampled checks that a map is a sense-preserving homeomorphism: Jacobian
//! signs and overlaps of grid-cell images.

use std::collections::{HashMap, HashSet};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SolutionBundle;
use crate::geometry::C64;

/// Number of grid cells sampled by the injectivity test.
pub const INJECTIVITY_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct HomeoReport {
    /// Fraction of masked nodes with `J_f > 0`.
    pub positive_fraction: f64,
    pub min_jacobian: f64,
    pub sampled_cells: usize,
    /// Sampled cells whose image has nonpositive signed area.
    pub reversed_cells: usize,
    /// Pairs of non-adjacent sampled cells with overlapping images.
    pub overlapping_pairs: usize,
    /// Every Jacobian positive, no reversed cell and no overlap.
    pub consistent: bool,
}

fn signed_area(q: &[C64; 4]) -> f64 {
    0.5 * (0..4).map(|k| q[k].re * q[(k + 1) % 4].im - q[(k + 1) % 4].re * q[k].im).sum::<f64>()
}

/// Separating-axis test on the edge normals of both quads; touching
/// counts as disjoint.
fn quads_overlap(a: &[C64; 4], b: &[C64; 4], tol: f64) -> bool {
    for q in [a, b] {
        for k in 0..4 {
            let e = q[(k + 1) % 4] - q[k];
            let n = C64::new(-e.im, e.re);
            if n.norm_sqr() == 0.0 {
                continue;
            }
            let proj = |p: &[C64; 4]| {
                p.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    let t = (v.re * n.re + v.im * n.im) / n.norm();
                    (lo.min(t), hi.max(t))
                })
            };
            let (alo, ahi) = proj(a);
            let (blo, bhi) = proj(b);
            if ahi <= blo + tol || bhi <= alo + tol {
                return false;
            }
        }
    }
    true
}

/// Jacobian signs over the mask plus an injectivity sample of up to
/// [`INJECTIVITY_SAMPLES`] grid cells (all four corners masked) drawn with
/// `seed`: each image cell must be positively oriented and no two
/// non-adjacent image cells may overlap.
pub fn homeo_check(bundle: &SolutionBundle, seed: u64) -> HomeoReport {
    let g = bundle.f.grid;
    let mask = &bundle.f.mask;
    let jac: Vec<f64> = bundle.jacobian.masked_values().collect();
    let positive = jac.iter().filter(|&&v| v > 0.0).count();
    let positive_fraction = if jac.is_empty() { 0.0 } else { positive as f64 / jac.len() as f64 };
    let min_jacobian = jac.iter().copied().fold(f64::INFINITY, f64::min);

    let mut cells = Vec::new();
    for j in 0..g.ny() - 1 {
        for i in 0..g.nx() - 1 {
            if [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
                .iter()
                .all(|&(a, b)| mask[g.index(a, b)])
            {
                cells.push((i, j));
            }
        }
    }
    if cells.len() > INJECTIVITY_SAMPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked: Vec<usize> = sample(&mut rng, cells.len(), INJECTIVITY_SAMPLES).into_vec();
        picked.sort_unstable();
        cells = picked.into_iter().map(|k| cells[k]).collect();
    }
    let f = &bundle.f.values;
    let quads: Vec<[C64; 4]> = cells
        .iter()
        .map(|&(i, j)| {
            [
                f[g.index(i, j)],
                f[g.index(i + 1, j)],
                f[g.index(i + 1, j + 1)],
                f[g.index(i, j + 1)],
            ]
        })
        .collect();
    let reversed_cells = quads.iter().filter(|q| !(signed_area(q) > 0.0)).count();

    let overlapping_pairs = count_overlaps(&cells, &quads);
    HomeoReport {
        positive_fraction,
        min_jacobian,
        sampled_cells: cells.len(),
        reversed_cells,
        overlapping_pairs,
        consistent: !jac.is_empty() && positive == jac.len() && reversed_cells == 0 && overlapping_pairs == 0,
    }
}

/// Overlapping image pairs, found through a spatial hash with buckets the
/// size of the median image cell.
fn count_overlaps(cells: &[(usize, usize)], quads: &[[C64; 4]]) -> usize {
    if quads.is_empty() {
        return 0;
    }
    let bounds: Vec<(C64, C64)> = quads
        .iter()
        .map(|q| {
            let lo = q.iter().fold(C64::new(f64::INFINITY, f64::INFINITY), |m, v| C64::new(m.re.min(v.re), m.im.min(v.im)));
            let hi = q.iter().fold(C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |m, v| C64::new(m.re.max(v.re), m.im.max(v.im)));
            (lo, hi)
        })
        .collect();
    if bounds.iter().any(|(lo, hi)| !(lo.re.is_finite() && lo.im.is_finite() && hi.re.is_finite() && hi.im.is_finite())) {
        return 0;
    }
    let mut diam: Vec<f64> = bounds.iter().map(|(lo, hi)| (hi - lo).norm()).collect();
    diam.sort_by(f64::total_cmp);
    let extent = bounds.iter().fold(0.0f64, |m, (lo, hi)| m.max(hi.re.abs()).max(hi.im.abs()).max(lo.re.abs()).max(lo.im.abs()));
    let size = diam[diam.len() / 2].max(extent / 4096.0).max(f64::MIN_POSITIVE);
    let key = |v: f64| (v / size).floor() as i64;

    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, (lo, hi)) in bounds.iter().enumerate() {
        let (x0, x1, y0, y1) = (key(lo.re), key(hi.re), key(lo.im), key(hi.im));
        // a huge cell image is registered in a capped block of buckets
        let (x1, y1) = (x1.min(x0 + 31), y1.min(y0 + 31));
        for bx in x0..=x1 {
            for by in y0..=y1 {
                buckets.entry((bx, by)).or_default().push(k);
            }
        }
    }
    let mut pairs = HashSet::new();
    let tol = 1e-9 * size;
    for members in buckets.values() {
        for (s, &a) in members.iter().enumerate() {
            for &b in &members[s + 1..] {
                let ((ia, ja), (ib, jb)) = (cells[a], cells[b]);
                if ia.abs_diff(ib) <= 1 && ja.abs_diff(jb) <= 1 {
                    continue;
                }
                let (la, ha) = bounds[a];
                let (lb, hb) = bounds[b];
                if ha.re <= lb.re || hb.re <= la.re || ha.im <= lb.im || hb.im <= la.im {
                    continue;
                }
                let pair = (a.min(b), a.max(b));
                if !pairs.contains(&pair) && quads_overlap(&quads[a], &quads[b], tol) {
                    pairs.insert(pair);
                }
            }
        }
    }
    pairs.len()
}
