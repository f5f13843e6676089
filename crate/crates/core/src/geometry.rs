//! Grids, domains, circles and dashed lines.
//!
//! Every other module samples its fields on a [`Grid`] and restricts circle
//! integrals to the [`DashedLine`] `D ∩ S(z0, r)` produced by
//! [`circle_trace`].

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl BBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    /// Square `[c - h, c + h] x [c - h, c + h]` around `center`.
    pub fn square(center: C64, half_width: f64) -> Self {
        Self::new(
            center.re - half_width,
            center.re + half_width,
            center.im - half_width,
            center.im + half_width,
        )
    }

    /// Smallest box containing all `points`, grown by `pad` on every side.
    pub fn around(points: impl IntoIterator<Item = C64>, pad: f64) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut b = Self::new(first.re, first.re, first.im, first.im);
        for z in it {
            b.re_min = b.re_min.min(z.re);
            b.re_max = b.re_max.max(z.re);
            b.im_min = b.im_min.min(z.im);
            b.im_max = b.im_max.max(z.im);
        }
        Some(Self::new(
            b.re_min - pad,
            b.re_max + pad,
            b.im_min - pad,
            b.im_max + pad,
        ))
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn center(&self) -> C64 {
        C64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    pub fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.re_min, self.im_min),
            C64::new(self.re_max, self.im_min),
            C64::new(self.re_max, self.im_max),
            C64::new(self.re_min, self.im_max),
        ]
    }
}

pub const MIN_RESOLUTION: usize = 8;
pub const MAX_RESOLUTION: usize = 4096;

/// Uniform Cartesian grid. Node `(i, j)` sits at
/// `re_min + i*dx + i(im_min + j*dy)`; storage is row-major in `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    bbox: BBox,
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
}

impl Grid {
    /// Tiles `bbox` with `nx * ny` nodes, corners included.
    pub fn new(bbox: BBox, nx: usize, ny: usize) -> Result<Self> {
        let finite = [bbox.re_min, bbox.re_max, bbox.im_min, bbox.im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("bounding box must be finite"));
        }
        if !(bbox.width() > 0.0 && bbox.height() > 0.0) {
            return Err(Error::invalid(format!(
                "bounding box has no extent: {bbox:?}"
            )));
        }
        for n in [nx, ny] {
            if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&n) {
                return Err(Error::invalid(format!(
                    "resolution {n} outside [{MIN_RESOLUTION}, {MAX_RESOLUTION}]"
                )));
            }
        }
        Ok(Self {
            bbox,
            nx,
            ny,
            dx: bbox.width() / (nx - 1) as f64,
            dy: bbox.height() / (ny - 1) as f64,
        })
    }

    pub fn square(center: C64, half_width: f64, n: usize) -> Result<Self> {
        Self::new(BBox::square(center, half_width), n, n)
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    /// The coarser of the two axis spacings.
    pub fn spacing(&self) -> f64 {
        self.dx.max(self.dy)
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> C64 {
        C64::new(
            self.bbox.re_min + i as f64 * self.dx,
            self.bbox.im_min + j as f64 * self.dy,
        )
    }

    #[inline]
    pub fn point_at(&self, k: usize) -> C64 {
        let (i, j) = self.coords(k);
        self.point(i, j)
    }

    pub fn points(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.len()).map(move |k| self.point_at(k))
    }

    /// Bilinear stencil of `z`: the lower-left node and the fractional
    /// offsets inside its cell. `None` outside the box.
    #[inline]
    pub fn locate(&self, z: C64) -> Option<(usize, usize, f64, f64)> {
        let u = (z.re - self.bbox.re_min) / self.dx;
        let v = (z.im - self.bbox.im_min) / self.dy;
        let eps = 1e-9;
        if !(u >= -eps && v >= -eps && u <= (self.nx - 1) as f64 + eps && v <= (self.ny - 1) as f64 + eps)
        {
            return None;
        }
        let i = (u.floor().max(0.0) as usize).min(self.nx - 2);
        let j = (v.floor().max(0.0) as usize).min(self.ny - 2);
        let tx = (u - i as f64).clamp(0.0, 1.0);
        let ty = (v - j as f64).clamp(0.0, 1.0);
        Some((i, j, tx, ty))
    }

    /// The four `(node index, weight)` pairs of the bilinear interpolant at `z`.
    #[inline]
    pub fn bilinear_weights(&self, z: C64) -> Option<[(usize, f64); 4]> {
        let (i, j, tx, ty) = self.locate(z)?;
        let k = self.index(i, j);
        Some([
            (k, (1.0 - tx) * (1.0 - ty)),
            (k + 1, tx * (1.0 - ty)),
            (k + self.nx, (1.0 - tx) * ty),
            (k + self.nx + 1, tx * ty),
        ])
    }
}

/// Sugar for the config-level `make_grid(bbox, resolution)`.
pub fn make_grid(bbox: BBox, resolution: usize) -> Result<Grid> {
    Grid::new(bbox, resolution, resolution)
}

/// A Jordan domain (or ring) on which experiments run.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    UnitDisk,
    /// Vertices of a simple closed polygon; the closing edge is implicit.
    Polygon(Vec<C64>),
    Annulus { center: C64, inner: f64, outer: f64 },
}

impl DomainSpec {
    pub fn polygon(vertices: Vec<C64>) -> Result<Self> {
        let d = DomainSpec::Polygon(vertices);
        d.validate()?;
        Ok(d)
    }

    pub fn annulus(center: C64, inner: f64, outer: f64) -> Result<Self> {
        let d = DomainSpec::Annulus {
            center,
            inner,
            outer,
        };
        d.validate()?;
        Ok(d)
    }

    /// The square `[-h, h]^2`.
    pub fn square(h: f64) -> Self {
        DomainSpec::Polygon(vec![
            C64::new(-h, -h),
            C64::new(h, -h),
            C64::new(h, h),
            C64::new(-h, h),
        ])
    }

    /// `[-1, 1]^2` with a thin notch cut in from the right edge along the
    /// positive real axis; its tip is at the origin. The notch opens to
    /// `2 * half_opening` at the edge, so the boundary stays a simple
    /// polygon while behaving like the slit `[0, 1]` at grid scale.
    pub fn slit_square(half_opening: f64) -> Self {
        DomainSpec::Polygon(vec![
            C64::new(-1.0, -1.0),
            C64::new(1.0, -1.0),
            C64::new(1.0, -half_opening),
            C64::new(0.0, 0.0),
            C64::new(1.0, half_opening),
            C64::new(1.0, 1.0),
            C64::new(-1.0, 1.0),
        ])
    }

    /// Counter-clockwise orientation flag (always true for disk and annulus).
    pub fn is_counter_clockwise(&self) -> bool {
        match self {
            DomainSpec::Polygon(v) => signed_area(v) > 0.0,
            _ => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::UnitDisk => Ok(()),
            DomainSpec::Annulus {
                center,
                inner,
                outer,
            } => {
                if !(center.re.is_finite() && center.im.is_finite()) {
                    return Err(Error::domain("annulus center must be finite"));
                }
                if !(*inner > 0.0 && inner < outer && outer.is_finite()) {
                    return Err(Error::domain(format!(
                        "annulus needs 0 < r1 < r2, got r1={inner}, r2={outer}"
                    )));
                }
                Ok(())
            }
            DomainSpec::Polygon(v) => validate_polygon(v),
        }
    }

    /// Strict interior test (points on the boundary are outside).
    pub fn contains(&self, z: C64) -> bool {
        match self {
            DomainSpec::UnitDisk => z.norm_sqr() < 1.0,
            DomainSpec::Annulus {
                center,
                inner,
                outer,
            } => {
                let d = (z - center).norm();
                d > *inner && d < *outer
            }
            DomainSpec::Polygon(v) => polygon_contains(v, z),
        }
    }

    /// Euclidean distance from `z` to the boundary.
    pub fn boundary_distance(&self, z: C64) -> f64 {
        match self {
            DomainSpec::UnitDisk => (1.0 - z.norm()).abs(),
            DomainSpec::Annulus {
                center,
                inner,
                outer,
            } => {
                let d = (z - center).norm();
                (d - inner).abs().min((outer - d).abs())
            }
            DomainSpec::Polygon(v) => edges(v)
                .map(|(a, b)| segment_distance(z, a, b))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn bbox(&self) -> BBox {
        match self {
            DomainSpec::UnitDisk => BBox::square(C64::new(0.0, 0.0), 1.0),
            DomainSpec::Annulus { center, outer, .. } => BBox::square(*center, *outer),
            DomainSpec::Polygon(v) => BBox::around(v.iter().copied(), 0.0).expect("nonempty"),
        }
    }

    /// Radius of the largest disc inside the domain; exact for disk and
    /// annulus, a 128x128 scan for polygons.
    pub fn inradius(&self) -> f64 {
        match self {
            DomainSpec::UnitDisk => 1.0,
            DomainSpec::Annulus { inner, outer, .. } => 0.5 * (outer - inner),
            DomainSpec::Polygon(_) => {
                let b = self.bbox();
                let n = 128;
                let mut best: f64 = 0.0;
                for j in 0..n {
                    for i in 0..n {
                        let z = C64::new(
                            b.re_min + (i as f64 + 0.5) * b.width() / n as f64,
                            b.im_min + (j as f64 + 0.5) * b.height() / n as f64,
                        );
                        if self.contains(z) {
                            best = best.max(self.boundary_distance(z));
                        }
                    }
                }
                best
            }
        }
    }

    /// Whether the closed segment `[a, b]` lies in the domain.
    pub fn segment_inside(&self, a: C64, b: C64) -> bool {
        if !(self.contains(a) && self.contains(b)) {
            return false;
        }
        match self {
            DomainSpec::UnitDisk => true,
            DomainSpec::Annulus { center, inner, .. } => segment_distance(*center, a, b) > *inner,
            DomainSpec::Polygon(v) => !edges(v).any(|(p, q)| segments_intersect(a, b, p, q)),
        }
    }

    /// Angular intervals of `S(z0, r)` lying inside the domain.
    pub fn circle_arcs(&self, z0: C64, r: f64) -> ArcSet {
        match self {
            DomainSpec::UnitDisk => disk_arcs(z0, r, C64::new(0.0, 0.0), 1.0, true),
            DomainSpec::Annulus {
                center,
                inner,
                outer,
            } => disk_arcs(z0, r, *center, *outer, true).intersect(&disk_arcs(
                z0, r, *center, *inner, false,
            )),
            DomainSpec::Polygon(_) => scan_arcs(self, z0, r),
        }
    }
}

fn signed_area(v: &[C64]) -> f64 {
    0.5 * edges(v).map(|(a, b)| a.re * b.im - b.re * a.im).sum::<f64>()
}

fn edges(v: &[C64]) -> impl Iterator<Item = (C64, C64)> + '_ {
    (0..v.len()).map(move |k| (v[k], v[(k + 1) % v.len()]))
}

fn validate_polygon(v: &[C64]) -> Result<()> {
    if v.len() < 3 {
        return Err(Error::domain("polygon needs at least 3 vertices"));
    }
    if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::domain("polygon vertices must be finite"));
    }
    let n = v.len();
    for a in 0..n {
        if (v[a] - v[(a + 1) % n]).norm() == 0.0 {
            return Err(Error::domain(format!("repeated vertex at index {a}")));
        }
        for b in a + 1..n {
            let adjacent = b == a + 1 || (a == 0 && b == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(v[a], v[(a + 1) % n], v[b], v[(b + 1) % n]) {
                return Err(Error::domain(format!(
                    "polygon edges {a} and {b} intersect"
                )));
            }
        }
    }
    if signed_area(v).abs() == 0.0 {
        return Err(Error::domain("polygon has zero area"));
    }
    Ok(())
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Closed-segment intersection test (touching counts).
pub(crate) fn segments_intersect(p1: C64, p2: C64, q1: C64, q2: C64) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: C64, b: C64, p: C64, d: f64| {
        d == 0.0
            && p.re >= a.re.min(b.re)
            && p.re <= a.re.max(b.re)
            && p.im >= a.im.min(b.im)
            && p.im <= a.im.max(b.im)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn segment_distance(z: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / ab.norm_sqr();
    let t = t.clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

fn polygon_contains(v: &[C64], z: C64) -> bool {
    // points on an edge are boundary points, never interior
    let scale = v.iter().map(|p| p.norm()).fold(1.0, f64::max);
    if edges(v).any(|(a, b)| segment_distance(z, a, b) <= 1e-12 * scale) {
        return false;
    }
    // even-odd ray casting towards +re with the half-open vertex rule
    let mut inside = false;
    for (a, b) in edges(v) {
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if z.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Boolean mask of nodes strictly inside the domain.
pub fn domain_mask(spec: &DomainSpec, grid: &Grid) -> Result<Vec<bool>> {
    spec.validate()?;
    Ok(grid.points().map(|z| spec.contains(z)).collect())
}

/// A finite union of disjoint angular intervals `(start, end)` with
/// `start < end <= start + 2π`. A full circle is the single interval
/// `(0, 2π)`. Intervals never wrap through the same angle twice.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcSet {
    intervals: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self {
            intervals: vec![(0.0, TAU)],
        }
    }

    /// Builds a set from intervals given modulo 2π; overlapping pieces are merged.
    pub fn from_intervals(raw: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut pieces: Vec<(f64, f64)> = Vec::new();
        for (a, b) in raw {
            let len = b - a;
            if !(len > 0.0) {
                continue;
            }
            if len >= TAU {
                return Self::full();
            }
            let a0 = a.rem_euclid(TAU);
            let b0 = a0 + len;
            if b0 <= TAU {
                pieces.push((a0, b0));
            } else {
                pieces.push((a0, TAU));
                pieces.push((0.0, b0 - TAU));
            }
        }
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in pieces {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        if merged.len() == 1 && merged[0].0 <= 0.0 && merged[0].1 >= TAU {
            return Self::full();
        }
        // glue the piece ending at 2π to the one starting at 0
        if merged.len() >= 2 && merged[0].0 <= 0.0 && merged.last().unwrap().1 >= TAU {
            let first = merged.remove(0);
            let last = merged.last_mut().unwrap();
            last.1 = TAU + first.1;
        }
        Self { intervals: merged }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0].1 - self.intervals[0].0 >= TAU
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| {
            let t = a + (theta - a).rem_euclid(TAU);
            t > a && t < b
        })
    }

    pub fn intersect(&self, other: &ArcSet) -> ArcSet {
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() {
            return self.clone();
        }
        let unwrap = |s: &ArcSet| {
            let mut out = Vec::new();
            for &(a, b) in &s.intervals {
                if b > TAU {
                    out.push((a, TAU));
                    out.push((0.0, b - TAU));
                } else {
                    out.push((a, b));
                }
            }
            out
        };
        let (xs, ys) = (unwrap(self), unwrap(other));
        let mut out = Vec::new();
        for &(a, b) in &xs {
            for &(c, d) in &ys {
                let (lo, hi) = (a.max(c), b.min(d));
                if hi > lo {
                    out.push((lo, hi));
                }
            }
        }
        ArcSet::from_intervals(out)
    }
}

/// Arcs of `S(z0, r)` inside (or, with `inside = false`, outside) the
/// disc `|z - c| < rho`.
fn disk_arcs(z0: C64, r: f64, c: C64, rho: f64, inside: bool) -> ArcSet {
    let d = (z0 - c).norm();
    // |z0 + r e^{iθ} - c|^2 = d^2 + r^2 + 2 r d cos(θ - α)
    if d == 0.0 {
        let in_disc = r < rho;
        return if in_disc == inside {
            ArcSet::full()
        } else {
            ArcSet::empty()
        };
    }
    let alpha = (z0 - c).arg();
    let k = (rho * rho - d * d - r * r) / (2.0 * r * d);
    // inside the disc  <=>  cos(θ - α) < k
    if k >= 1.0 {
        return if inside { ArcSet::full() } else { ArcSet::empty() };
    }
    if k <= -1.0 {
        return if inside { ArcSet::empty() } else { ArcSet::full() };
    }
    let beta = k.acos();
    if inside {
        ArcSet::from_intervals([(alpha + beta, alpha + TAU - beta)])
    } else {
        ArcSet::from_intervals([(alpha - beta, alpha + beta)])
    }
}

pub const SCAN_RAYS: usize = 4096;
pub const SCAN_TOL: f64 = 1e-10;

/// Angular scan of `S(z0, r)` against a polygon: `SCAN_RAYS` probes with
/// each in/out transition refined by bisection to `SCAN_TOL` radians.
fn scan_arcs(spec: &DomainSpec, z0: C64, r: f64) -> ArcSet {
    let probe = |t: f64| spec.contains(z0 + C64::from_polar(r, t));
    let step = TAU / SCAN_RAYS as f64;
    let states: Vec<bool> = (0..SCAN_RAYS).map(|k| probe(k as f64 * step)).collect();
    if states.iter().all(|&s| s) {
        return ArcSet::full();
    }
    if states.iter().all(|&s| !s) {
        return ArcSet::empty();
    }
    let refine = |mut lo: f64, mut hi: f64, lo_state: bool| {
        while hi - lo > SCAN_TOL {
            let mid = 0.5 * (lo + hi);
            if probe(mid) == lo_state {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut enters = Vec::new();
    let mut exits = Vec::new();
    for k in 0..SCAN_RAYS {
        let (s0, s1) = (states[k], states[(k + 1) % SCAN_RAYS]);
        if s0 != s1 {
            let t = refine(k as f64 * step, (k + 1) as f64 * step, s0);
            if s1 {
                enters.push(t);
            } else {
                exits.push(t);
            }
        }
    }
    // pair each entry with the next exit going counter-clockwise
    let mut raw = Vec::with_capacity(enters.len());
    for &a in &enters {
        let b = exits
            .iter()
            .map(|&e| if e > a { e } else { e + TAU })
            .fold(f64::INFINITY, f64::min);
        raw.push((a, b));
    }
    ArcSet::from_intervals(raw)
}

/// `D ∩ S(z0, r)` as a list of arcs with midpoint samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DashedLine {
    pub center: C64,
    pub radius: f64,
    pub arcs: Vec<(f64, f64)>,
    /// Midpoint samples of each arc, uniform in angle.
    pub samples: Vec<Vec<C64>>,
}

impl DashedLine {
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn angular_measure(&self) -> f64 {
        self.arcs.iter().map(|(a, b)| b - a).sum()
    }

    pub fn length(&self) -> f64 {
        self.radius * self.angular_measure()
    }

    pub fn is_full_circle(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].1 - self.arcs[0].0 >= TAU
    }

    /// Arc-length weight of each sample of arc `k` (uniform within the arc).
    pub fn sample_weight(&self, k: usize) -> f64 {
        let (a, b) = self.arcs[k];
        self.radius * (b - a) / self.samples[k].len() as f64
    }

    /// Angle parameters of the samples of arc `k`.
    pub fn sample_angles(&self, k: usize) -> Vec<f64> {
        let (a, b) = self.arcs[k];
        let n = self.samples[k].len();
        (0..n)
            .map(|s| a + (s as f64 + 0.5) * (b - a) / n as f64)
            .collect()
    }
}

/// Samples `D ∩ S(z0, r)`: `n_samples` points over a full turn, split
/// among the arcs in proportion to their angular measure.
pub fn circle_trace(spec: &DomainSpec, z0: C64, r: f64, n_samples: usize) -> Result<DashedLine> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    if n_samples < 16 {
        return Err(Error::invalid(format!(
            "need at least 16 samples, got {n_samples}"
        )));
    }
    spec.validate()?;
    let arcs = spec.circle_arcs(z0, r);
    let mut out_arcs = Vec::new();
    let mut samples = Vec::new();
    for &(a, b) in arcs.intervals() {
        let n = ((n_samples as f64 * (b - a) / TAU).ceil() as usize).max(2);
        let pts: Vec<C64> = (0..n)
            .map(|s| z0 + C64::from_polar(r, a + (s as f64 + 0.5) * (b - a) / n as f64))
            .collect();
        out_arcs.push((a, b));
        samples.push(pts);
    }
    Ok(DashedLine {
        center: z0,
        radius: r,
        arcs: out_arcs,
        samples,
    })
}

/// Samples per full turn used by circle quadratures on a grid of the given
/// spacing: `8 * max(16, ceil(2πr / spacing))`.
pub fn quadrature_samples(r: f64, spacing: f64) -> usize {
    8 * 16usize.max((TAU * r / spacing).ceil() as usize)
}

/// Angle in `[0, 2π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// A map of the plane that may be undefined at some points.
pub trait PlaneMap {
    fn apply(&self, z: C64) -> Option<C64>;
}

/// Closed-form map defined everywhere.
#[derive(Clone, Copy)]
pub struct AnalyticMap<F>(pub F);

impl<F: Fn(C64) -> C64> PlaneMap for AnalyticMap<F> {
    fn apply(&self, z: C64) -> Option<C64> {
        Some((self.0)(z))
    }
}

impl<T: PlaneMap + ?Sized> PlaneMap for &T {
    fn apply(&self, z: C64) -> Option<C64> {
        (**self).apply(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn grid_spacing_matches_affine_tiling() {
        let g = make_grid(BBox::square(c(0.0, 0.0), 2.0), 512).unwrap();
        assert!((g.dx() - 4.0 / 511.0).abs() < 1e-15);
        assert_eq!(g.len(), 512 * 512);
        let g8 = make_grid(BBox::square(c(0.0, 0.0), 1.0), 8).unwrap();
        assert_eq!(g8.len(), 64);
        assert!((g8.spacing() - 2.0 / 7.0).abs() < 1e-15);
        assert_eq!(g8.point(7, 7), c(1.0, 1.0));
        assert_eq!(g8.point(0, 0), c(-1.0, -1.0));
    }

    #[test]
    fn grid_rejects_degenerate_input() {
        let flat = BBox::new(0.0, 0.0, -1.0, 1.0);
        assert!(matches!(make_grid(flat, 16), Err(Error::InvalidArgument(_))));
        // below the minimum resolution
        assert!(make_grid(BBox::square(c(0.0, 0.0), 1.0), 4).is_err());
        assert!(make_grid(BBox::square(c(0.0, 0.0), 1.0), 4097).is_err());
    }

    #[test]
    fn node_index_round_trips() {
        let g = Grid::new(BBox::new(-1.0, 2.0, 0.0, 1.0), 13, 9).unwrap();
        for k in 0..g.len() {
            let (i, j) = g.coords(k);
            assert_eq!(g.index(i, j), k);
            let z = g.point(i, j);
            let (li, lj, tx, ty) = g.locate(z).unwrap();
            let back = g.point(li, lj) + c(tx * g.dx(), ty * g.dy());
            assert!((back - z).norm() < 1e-12);
        }
    }

    #[test]
    fn disk_and_square_membership() {
        let d = DomainSpec::UnitDisk;
        assert!(d.contains(c(0.0, 0.0)));
        assert!(!d.contains(c(2.0, 0.0)));
        assert!(!d.contains(c(1.0, 0.0)));
        let sq = DomainSpec::square(1.0);
        assert!(sq.contains(c(0.999, 0.999)));
        assert!(!sq.contains(c(1.0, 0.5)));
        assert!(!sq.contains(c(1.2, 0.0)));
    }

    #[test]
    fn disk_mask_agrees_with_modulus_test() {
        let g = make_grid(BBox::square(c(0.0, 0.0), 1.3), 97).unwrap();
        let m = domain_mask(&DomainSpec::UnitDisk, &g).unwrap();
        for (k, z) in g.points().enumerate() {
            assert_eq!(m[k], z.norm() < 1.0);
        }
    }

    #[test]
    fn self_intersecting_polygon_is_rejected() {
        let bow = vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(matches!(
            DomainSpec::polygon(bow.clone()),
            Err(Error::InvalidDomain(_))
        ));
        let g = make_grid(BBox::square(c(0.5, 0.5), 1.0), 8).unwrap();
        assert!(domain_mask(&DomainSpec::Polygon(bow), &g).is_err());
        assert!(DomainSpec::slit_square(1e-3).validate().is_ok());
    }

    #[test]
    fn annulus_radii_are_checked() {
        assert!(DomainSpec::annulus(c(0.0, 0.0), 0.5, 0.4).is_err());
        assert!(DomainSpec::annulus(c(0.0, 0.0), 0.0, 0.4).is_err());
        let a = DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap();
        assert!(a.contains(c(0.5, 0.0)));
        assert!(!a.contains(c(0.1, 0.0)));
    }

    #[test]
    fn full_circle_inside_disk() {
        let t = circle_trace(&DomainSpec::UnitDisk, c(0.0, 0.0), 0.5, 64).unwrap();
        assert_eq!(t.arcs.len(), 1);
        assert!(t.is_full_circle());
        assert!((t.angular_measure() - TAU).abs() < 1e-15);
    }

    #[test]
    fn circle_outside_disk_is_empty() {
        let t = circle_trace(&DomainSpec::UnitDisk, c(0.0, 0.0), 2.0, 64).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn boundary_centered_circle_matches_rejection_sampling() {
        let r = 0.5;
        let t = circle_trace(&DomainSpec::UnitDisk, c(1.0, 0.0), r, 64).unwrap();
        assert_eq!(t.arcs.len(), 1);
        let expected = 2.0 * (r / 2.0).acos();
        assert!((t.angular_measure() - expected).abs() < 1e-12);
        assert!((expected - 2.636).abs() < 1e-3);
        // dense rejection sampling of the angle
        let n = 200_000;
        let hits = (0..n)
            .filter(|k| {
                let th = (*k as f64 + 0.5) * TAU / n as f64;
                (c(1.0, 0.0) + C64::from_polar(r, th)).norm() < 1.0
            })
            .count();
        assert!((hits as f64 * TAU / n as f64 - expected).abs() < 1e-4);
        for arc in &t.samples {
            assert!(arc.iter().all(|z| z.norm() < 1.0));
        }
    }

    #[test]
    fn polygon_scan_matches_disk_like_geometry() {
        // circle centred on the midpoint of the right edge of [-1,1]^2
        let sq = DomainSpec::square(1.0);
        let t = circle_trace(&sq, c(1.0, 0.0), 0.5, 64).unwrap();
        assert_eq!(t.arcs.len(), 1);
        assert!((t.angular_measure() - PI).abs() < 1e-9);
        // the left half circle inside [-1,1]^2, straddling the angle π
        let (a, b) = t.arcs[0];
        assert!(a < PI && b > PI);
    }

    #[test]
    fn annulus_circle_arcs() {
        let a = DomainSpec::annulus(c(0.0, 0.0), 0.25, 1.0).unwrap();
        let t = circle_trace(&a, c(0.0, 0.0), 0.5, 64).unwrap();
        assert!(t.is_full_circle());
        // cut by both boundary circles: two arcs
        let t = circle_trace(&a, c(0.6, 0.0), 0.55, 64).unwrap();
        assert_eq!(t.arcs.len(), 2, "{:?}", t.arcs);
        for arc in &t.samples {
            assert!(arc.iter().all(|&z| a.contains(z)));
        }
    }

    #[test]
    fn slit_splits_circles_around_slit_points() {
        let d = DomainSpec::slit_square(1e-4);
        let t = circle_trace(&d, c(0.5, 0.0), 0.2, 256).unwrap();
        assert_eq!(t.arcs.len(), 2);
        // around the tip the circle is cut only once
        let t = circle_trace(&d, c(0.0, 0.0), 0.2, 256).unwrap();
        assert_eq!(t.arcs.len(), 1);
        assert!(t.angular_measure() > TAU - 1e-3);
    }

    #[test]
    fn arcset_wraps_through_zero() {
        let s = ArcSet::from_intervals([(-0.5, 0.5)]);
        assert_eq!(s.intervals().len(), 1);
        assert!((s.measure() - 1.0).abs() < 1e-15);
        assert!(s.contains(0.0));
        assert!(s.contains(TAU - 0.1));
        assert!(!s.contains(PI));
        let t = ArcSet::from_intervals([(0.25, 3.0)]);
        assert!((s.intersect(&t).measure() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn boundary_distance_polygon() {
        let sq = DomainSpec::square(1.0);
        assert!((sq.boundary_distance(c(0.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((sq.boundary_distance(c(0.5, 0.9)) - 0.1).abs() < 1e-12);
        assert!((sq.inradius() - 1.0).abs() < 0.02);
    }
}
