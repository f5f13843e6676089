//! Conformal maps of the disk onto star-shaped domains by Theodorsen's
//! iteration for the boundary correspondence.

use std::f64::consts::TAU;
use std::sync::Arc;

use rustfft::FftPlanner;

use super::schwarz::SchwarzEvaluator;
use crate::error::{Error, Result};
use crate::geometry::C64;

/// Nodes of the boundary correspondence.
pub const THEODORSEN_NODES: usize = 2048;

/// A positive `2π`-periodic radius function `ρ(θ)` describing the boundary
/// `ρ(θ) e^{iθ}` of a domain star-shaped about 0.
#[derive(Clone)]
pub struct RadialFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("RadialFunction")
    }
}

impl RadialFunction {
    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f) }
    }

    /// From a closed curve traversed once counter-clockwise about `center`;
    /// `ρ` is linear in `θ` between the points. Fails with invalid-domain
    /// when the polar angle does not increase monotonically through one
    /// turn.
    pub fn from_curve(points: &[C64], center: C64) -> Result<Self> {
        let mut pts: Vec<C64> = points.iter().map(|p| p - center).collect();
        if pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() <= 1e-14 * (1.0 + pts[0].norm()) {
            pts.pop();
        }
        if pts.len() < 8 || pts.iter().any(|p| !(p.norm() > 0.0 && p.re.is_finite() && p.im.is_finite())) {
            return Err(Error::domain("curve must have at least 8 finite points away from the centre"));
        }
        let mut theta = vec![pts[0].arg()];
        for k in 1..=pts.len() {
            let step = (pts[k % pts.len()] / pts[k - 1]).arg();
            if !(step > 0.0) {
                return Err(Error::domain(
                    "image boundary is not star-shaped about its centre; lower the truncation level or shrink μ",
                ));
            }
            theta.push(theta[k - 1] + step);
        }
        let turn = theta[pts.len()] - theta[0];
        if (turn - TAU).abs() > 1e-6 {
            return Err(Error::domain("curve winds more than once about its centre"));
        }
        let radii: Vec<f64> = (0..=pts.len()).map(|k| pts[k % pts.len()].norm()).collect();
        let t0 = theta[0];
        Ok(Self::from_fn(move |t: f64| {
            let s = t0 + (t - t0).rem_euclid(TAU);
            let k = theta.partition_point(|&v| v <= s).clamp(1, theta.len() - 1);
            let w = (s - theta[k - 1]) / (theta[k] - theta[k - 1]);
            radii[k - 1] + w * (radii[k] - radii[k - 1])
        }))
    }

    pub fn eval(&self, theta: f64) -> f64 {
        (self.eval)(theta)
    }
}

/// Conjugate function of `2π`-periodic samples with zero mean: `cos mt ↦ sin mt`.
fn conjugate(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut planner = FftPlanner::new();
    let mut data: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut data);
    for (m, c) in data.iter_mut().enumerate() {
        let freq = if m <= n / 2 { m as i64 } else { m as i64 - n as i64 };
        *c *= match freq.signum() {
            1 if 2 * m != n => C64::new(0.0, -1.0),
            -1 => C64::new(0.0, 1.0),
            _ => C64::new(0.0, 0.0),
        };
    }
    planner.plan_fft_inverse(n).process(&mut data);
    data.iter().map(|c| c.re / n as f64).collect()
}

/// `F: 𝔻 → Ω` with `F(0) = 0`, `F'(0) > 0`, written `F(w) = w e^{G(w)}`, and
/// its inverse `R = F⁻¹`.
#[derive(Debug, Clone)]
pub struct RiemannMap {
    rho: RadialFunction,
    /// `θ(t_k)`: polar angle of `F(e^{i t_k})`, `t_k = 2πk/N`.
    correspondence: Vec<f64>,
    g: SchwarzEvaluator,
    pub iterations: usize,
    /// Last change of the correspondence.
    pub update: f64,
    /// Largest `|d log ρ / dθ|` on the nodes.
    pub epsilon: f64,
}

/// Theodorsen iteration `θ_{n+1} = t + K[log ρ(θ_n)]` on
/// [`THEODORSEN_NODES`] nodes until the update is below `tol`. Requires the
/// `ε`-condition `|ρ'/ρ| < 1`.
pub fn theodorsen_riemann(rho: &RadialFunction, tol: f64, max_iter: usize) -> Result<RiemannMap> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = THEODORSEN_NODES;
    let t: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let mut epsilon = 0.0f64;
    for k in 0..n {
        let (a, b) = (rho.eval(t[k]), rho.eval(t[(k + 1) % n] + if k + 1 == n { TAU } else { 0.0 }));
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::domain("radius function must be positive and finite"));
        }
        epsilon = epsilon.max((b.ln() - a.ln()).abs() / (TAU / n as f64));
    }
    if epsilon >= 1.0 {
        return Err(Error::domain(format!(
            "boundary too far from a circle for Theodorsen's iteration (|ρ'/ρ| up to {epsilon:.3})"
        )));
    }
    let mut theta = t.clone();
    let mut update = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        let u: Vec<f64> = theta.iter().map(|&th| rho.eval(th).ln()).collect();
        let v = conjugate(&u);
        let next: Vec<f64> = t.iter().zip(&v).map(|(a, b)| a + b).collect();
        update = next.iter().zip(&theta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        theta = next;
        iterations += 1;
        if update < tol {
            break;
        }
    }
    if !(update < tol) {
        return Err(Error::NoConvergence {
            iterations,
            residual: update,
        });
    }
    if theta.windows(2).any(|w| !(w[1] > w[0])) || theta[n - 1] - theta[0] >= TAU {
        return Err(Error::domain("boundary correspondence is not monotone"));
    }
    let u: Vec<f64> = theta.iter().map(|&th| rho.eval(th).ln()).collect();
    Ok(RiemannMap {
        rho: rho.clone(),
        correspondence: theta,
        g: SchwarzEvaluator::from_samples(&u, 0.0),
        iterations,
        update,
        epsilon,
    })
}

impl RiemannMap {
    /// `θ(t_k)` on the nodes `t_k = 2πk/N`.
    pub fn correspondence(&self) -> &[f64] {
        &self.correspondence
    }

    /// `θ(t)` by periodic linear interpolation.
    pub fn boundary_angle(&self, t: f64) -> f64 {
        let n = self.correspondence.len();
        let h = TAU / n as f64;
        let s = t.rem_euclid(TAU) / h;
        let k = (s.floor() as usize).min(n - 1);
        let w = s - k as f64;
        let a = self.correspondence[k];
        let b = if k + 1 == n { self.correspondence[0] + TAU } else { self.correspondence[k + 1] };
        a + w * (b - a) + (t - t.rem_euclid(TAU))
    }

    /// `t(θ)`: inverse of the correspondence.
    pub fn inverse_boundary_angle(&self, theta: f64) -> f64 {
        let c = &self.correspondence;
        let n = c.len();
        let base = c[0];
        let s = base + (theta - base).rem_euclid(TAU);
        let k = c.partition_point(|&v| v <= s);
        let (a, b, ka) = if k == n {
            (c[n - 1], c[0] + TAU, n - 1)
        } else {
            (c[k - 1], c[k], k - 1)
        };
        let h = TAU / n as f64;
        let t = (ka as f64 + (s - a) / (b - a)) * h;
        t + (theta - s)
    }

    /// `F(w) = w e^{G(w)}`.
    pub fn forward(&self, w: C64) -> C64 {
        w * self.g.eval(w).exp()
    }

    /// `F'(w) = e^{G(w)} (1 + w G'(w))`.
    pub fn forward_derivative(&self, w: C64) -> C64 {
        self.g.eval(w).exp() * (1.0 + w * self.g.derivative(w))
    }

    /// `F'(0) > 0`.
    pub fn conformal_radius(&self) -> f64 {
        self.g.eval(C64::new(0.0, 0.0)).re.exp()
    }

    /// `R(ζ) = F⁻¹(ζ)` by Newton's method from the radial guess
    /// `(|ζ|/ρ(arg ζ)) e^{i t(arg ζ)}`. `None` when Newton fails.
    pub fn inverse(&self, zeta: C64) -> Option<C64> {
        if zeta.norm() == 0.0 {
            return Some(C64::new(0.0, 0.0));
        }
        let arg = zeta.arg();
        let mut w = C64::from_polar((zeta.norm() / self.rho.eval(arg)).min(1.0), self.inverse_boundary_angle(arg));
        for _ in 0..60 {
            let step = (self.forward(w) - zeta) / self.forward_derivative(w);
            if !(step.re.is_finite() && step.im.is_finite()) {
                return None;
            }
            w -= step;
            if step.norm() <= 1e-15 * (1.0 + w.norm()) {
                return Some(w);
            }
        }
        let r = (self.forward(w) - zeta).norm();
        (r <= 1e-10 * (1.0 + zeta.norm())).then_some(w)
    }

    /// `R'(ζ) = 1 / F'(R(ζ))`.
    pub fn inverse_derivative(&self, zeta: C64) -> Option<C64> {
        self.inverse(zeta).map(|w| 1.0 / self.forward_derivative(w))
    }
}
