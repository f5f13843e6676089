//! Boundary data `φ: ∂D → ℝ` sampled along a closed parameterization.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, C64};

/// Named boundary functions, evaluated through the angle of the boundary
/// point about the centre of the domain.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryFunction {
    Constant(f64),
    /// `cos kθ`.
    Cos { k: u32 },
    /// `Σ_{m=1}^{degree} a_m cos mθ + b_m sin mθ` with seeded standard
    /// normal coefficients scaled by `1/m²`.
    RandomTrig { seed: u64, degree: u32 },
    /// `tanh(sharpness · sin θ)`: a smoothed step across the real axis.
    StepSmoothed { sharpness: f64 },
}

impl BoundaryFunction {
    /// Fourier coefficients `(a_m, b_m)` of [`BoundaryFunction::RandomTrig`].
    pub fn trig_coefficients(seed: u64, degree: u32) -> Vec<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (1..=degree)
            .map(|m| {
                let s = 1.0 / (m as f64 * m as f64);
                (s * normal(&mut rng), s * normal(&mut rng))
            })
            .collect()
    }

    /// Value at angle `θ`.
    pub fn at_angle(&self, theta: f64) -> f64 {
        match *self {
            BoundaryFunction::Constant(c) => c,
            BoundaryFunction::Cos { k } => (k as f64 * theta).cos(),
            BoundaryFunction::RandomTrig { seed, degree } => Self::trig_coefficients(seed, degree)
                .iter()
                .enumerate()
                .map(|(m, (a, b))| {
                    let t = (m + 1) as f64 * theta;
                    a * t.cos() + b * t.sin()
                })
                .sum(),
            BoundaryFunction::StepSmoothed { sharpness } => (sharpness * theta.sin()).tanh(),
        }
    }
}

/// Box–Muller standard normal.
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (TAU * v).cos()
}

/// `φ` sampled at the nodes of a closed boundary parameterization
/// `s ∈ [0, period]`; the last node repeats the first. Values between
/// nodes are linear in `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    points: Vec<C64>,
    params: Vec<f64>,
    values: Vec<f64>,
}

impl BoundaryData {
    pub fn new(points: Vec<C64>, params: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = points.len();
        if n < 4 || params.len() != n || values.len() != n {
            return Err(Error::invalid("boundary data needs at least 4 matching nodes"));
        }
        if (points[0] - points[n - 1]).norm() > 1e-12 * (1.0 + points[0].norm()) || values[0] != values[n - 1] {
            return Err(Error::invalid("boundary data must be closed (first node = last node)"));
        }
        if params[0] != 0.0 || params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("boundary parameters must increase from 0"));
        }
        if values.iter().chain(params.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("boundary samples must be finite"));
        }
        Ok(Self { points, params, values })
    }

    /// `n` uniform nodes on the unit circle, parameter `θ`.
    pub fn on_circle(n: usize, phi: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("need at least 3 boundary nodes"));
        }
        let mut params: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
        params.push(TAU);
        let mut points: Vec<C64> = params[..n].iter().map(|&t| C64::from_polar(1.0, t)).collect();
        points.push(points[0]);
        let mut values: Vec<f64> = params[..n].iter().map(|&t| phi(t)).collect();
        values.push(values[0]);
        Self::new(points, params, values)
    }

    /// `n` nodes along `∂D`, uniform in angle for the disk and in arc
    /// length for polygons. `phi` sees the boundary point.
    pub fn on_domain(domain: &DomainSpec, n: usize, phi: impl Fn(C64) -> f64) -> Result<Self> {
        match domain {
            DomainSpec::UnitDisk => Self::on_circle(n, |t| phi(C64::from_polar(1.0, t))),
            DomainSpec::Polygon(v) => {
                domain.validate()?;
                let mut v = v.clone();
                if !domain.is_counter_clockwise() {
                    v.reverse();
                }
                let m = v.len();
                let mut cum = vec![0.0];
                for k in 0..m {
                    let len = (v[(k + 1) % m] - v[k]).norm();
                    cum.push(cum[k] + len);
                }
                let total = cum[m];
                let mut points = Vec::with_capacity(n + 1);
                let mut params = Vec::with_capacity(n + 1);
                let mut e = 0;
                for k in 0..n {
                    let s = total * k as f64 / n as f64;
                    while cum[e + 1] < s {
                        e += 1;
                    }
                    let w = (s - cum[e]) / (cum[e + 1] - cum[e]);
                    points.push(v[e] + (v[(e + 1) % m] - v[e]) * w);
                    params.push(TAU * k as f64 / n as f64);
                }
                points.push(points[0]);
                params.push(TAU);
                let mut values: Vec<f64> = points[..n].iter().map(|&p| phi(p)).collect();
                values.push(values[0]);
                Self::new(points, params, values)
            }
            DomainSpec::Annulus { .. } => Err(Error::domain("boundary data needs a simply connected domain")),
        }
    }

    /// Named function on `∂D` about the centre of the domain's box.
    pub fn named(domain: &DomainSpec, n: usize, phi: &BoundaryFunction) -> Result<Self> {
        let c = domain.bbox().center();
        Self::on_domain(domain, n, |p| phi.at_angle((p - c).arg()))
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn period(&self) -> f64 {
        self.params[self.params.len() - 1]
    }

    /// Number of distinct nodes.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let s = s.rem_euclid(self.period());
        let k = self.params.partition_point(|&p| p <= s).clamp(1, self.params.len() - 1);
        let w = (s - self.params[k - 1]) / (self.params[k] - self.params[k - 1]);
        (k - 1, w)
    }

    /// `φ` at parameter `s` (periodic, linear between nodes).
    pub fn value_at(&self, s: f64) -> f64 {
        let (k, w) = self.locate(s);
        self.values[k] + w * (self.values[k + 1] - self.values[k])
    }

    /// Boundary point at parameter `s`.
    pub fn point_at(&self, s: f64) -> C64 {
        let (k, w) = self.locate(s);
        self.points[k] + (self.points[k + 1] - self.points[k]) * w
    }

    /// `max φ - min φ`.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        hi - lo
    }
}
