//! The Schwarz integral on the unit disk and the boundary trace check.

use std::f64::consts::TAU;

use rustfft::FftPlanner;

use super::boundary::BoundaryData;
use crate::error::{Error, Result};
use crate::geometry::C64;

/// Smallest quadrature size accepted by [`schwarz_integral`].
pub const MIN_NODES: usize = 256;

/// Distance to the circle below which `N` trapezoid nodes no longer
/// resolve the kernel.
pub fn resolution_guard(n: usize) -> f64 {
    1.0 - TAU / n as f64
}

fn circle_samples(phi: &BoundaryData, n: usize) -> Vec<f64> {
    (0..n).map(|k| phi.value_at(phi.period() * k as f64 / n as f64)).collect()
}

/// `h(z) = (1/2π) ∫ φ(e^{iθ}) (e^{iθ} + z)/(e^{iθ} - z) dθ + i·gauge` by the
/// trapezoid rule on `n` nodes; `φ` is read as a function of
/// `θ = 2π s / period`. `Re h` is the harmonic extension of `φ` and
/// `Im h(0) = gauge`.
pub fn schwarz_integral(phi: &BoundaryData, z: C64, n: usize, gauge: f64) -> Result<C64> {
    if n < MIN_NODES {
        return Err(Error::invalid(format!("need at least {MIN_NODES} nodes, got {n}")));
    }
    let guard = resolution_guard(n);
    if !(z.norm() <= guard) {
        return Err(Error::ResolutionGuard {
            point: z.to_string(),
            guard: 1.0 - guard,
        });
    }
    let samples = circle_samples(phi, n);
    let mut sum = C64::new(0.0, 0.0);
    for (k, v) in samples.iter().enumerate() {
        let zeta = C64::from_polar(1.0, TAU * k as f64 / n as f64);
        sum += *v * (zeta + z) / (zeta - z);
    }
    Ok(sum / n as f64 + C64::new(0.0, gauge))
}

/// Power-series form `h(z) = c₀ + 2 Σ_{m=1}^{M} c_m z^m + i·gauge` of the
/// Schwarz integral, `c_m` the discrete Fourier coefficients of `φ` on `N`
/// nodes, truncated where they fall below `1e-17` of the largest. Valid on
/// the closed disk.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzEvaluator {
    coeffs: Vec<C64>,
    gauge: f64,
    nodes: usize,
}

impl SchwarzEvaluator {
    pub fn new(phi: &BoundaryData, n: usize, gauge: f64) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::invalid(format!("need at least {MIN_NODES} nodes, got {n}")));
        }
        Ok(Self::from_samples(&circle_samples(phi, n), gauge))
    }

    /// From `φ` at `N` uniform angles `2πk/N`.
    pub fn from_samples(samples: &[f64], gauge: f64) -> Self {
        let n = samples.len();
        let mut data: Vec<C64> = samples.iter().map(|&v| C64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut data);
        let scale = data.iter().take(n / 2 + 1).fold(0.0f64, |m, c| m.max(c.norm()));
        let mut keep = 1;
        for (m, c) in data.iter().enumerate().take(n / 2 + 1).skip(1) {
            if c.norm() > 1e-17 * scale {
                keep = m + 1;
            }
        }
        let mut coeffs: Vec<C64> = data[..keep].iter().map(|c| c / n as f64).collect();
        for c in coeffs.iter_mut().skip(1) {
            *c *= 2.0;
        }
        coeffs[0] = C64::new(coeffs[0].re, 0.0);
        Self {
            coeffs,
            gauge,
            nodes: n,
        }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn gauge(&self) -> f64 {
        self.gauge
    }

    /// Series coefficients `c₀, 2c₁, 2c₂, ...`.
    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc + C64::new(0.0, self.gauge)
    }

    /// `h'(z)`.
    pub fn derivative(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (m, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * m as f64;
        }
        acc
    }
}

/// Trace errors `sup_θ |Re h(r e^{iθ}) - φ(e^{iθ})|` along a radius ladder.
/// A ladder may end at `r = 1`, where the error is that of the boundary
/// values themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceProfile {
    pub radii: Vec<f64>,
    pub errors: Vec<f64>,
}

impl TraceProfile {
    /// Errors strictly decrease (or stay at rounding level) as `r ↑ 1`.
    pub fn is_decreasing(&self) -> bool {
        let floor = 1e-13;
        self.errors.windows(2).all(|w| w[1] < w[0] || w[1] <= floor)
    }

    pub fn last(&self) -> f64 {
        self.errors.last().copied().unwrap_or(f64::NAN)
    }
}

/// Largest number of boundary nodes sampled by the trace checks.
pub const TRACE_ANGLES: usize = 720;

/// Data nodes used as trace test points: every node, or an even stride of
/// them when there are more than [`TRACE_ANGLES`].
pub(crate) fn trace_nodes(phi: &BoundaryData) -> impl Iterator<Item = usize> {
    let n = phi.len();
    let step = n.div_ceil(TRACE_ANGLES).max(1);
    (0..n).step_by(step)
}

/// Trace errors of `h` against `φ` at the data nodes (see [`trace_nodes`]),
/// where `φ` is known exactly.
pub fn trace_check(h: &SchwarzEvaluator, phi: &BoundaryData, radii: &[f64]) -> Result<TraceProfile> {
    if radii.is_empty() || radii.windows(2).any(|w| !(w[1] > w[0])) || radii.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
        return Err(Error::invalid("radii must increase inside (0, 1]"));
    }
    let errors = radii
        .iter()
        .map(|&r| {
            trace_nodes(phi)
                .map(|k| {
                    let t = TAU * phi.params()[k] / phi.period();
                    (h.eval(C64::from_polar(r, t)).re - phi.values()[k]).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(TraceProfile {
        radii: radii.to_vec(),
        errors,
    })
}
