//! Closed-form lower bounds for moduli.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::{circle_norm, full_circle_norm, PlaneFunction};
use crate::geometry::{DomainSpec, C64};

/// Radii used by the radial midpoint quadratures.
pub const RADIAL_NODES: usize = 512;

/// Minimizer of `∫ φ α^p dμ` over `α ≥ 0` with `∫ α dμ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMin {
    /// `[∫ φ^{-λ} dμ]^{-1/λ}` with `λ = 1/(p - 1)`.
    pub value: f64,
    /// `α₀ = φ^{-λ} / ∫ φ^{-λ} dμ`.
    pub alpha: Vec<f64>,
}

/// Closed-form minimum of `∫ φ α^p dμ` over normalized densities `α` on a
/// finite measure space given by atoms `phi[k]` with masses `measure[k]`.
pub fn weighted_min_closed_form(phi: &[f64], measure: &[f64], p: f64) -> Result<WeightedMin> {
    if phi.len() != measure.len() || phi.is_empty() {
        return Err(Error::invalid("phi and measure must be nonempty and of equal length"));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("exponent must exceed 1, got {p}")));
    }
    if let Some(k) = phi.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::invalid(format!("phi must be positive, phi[{k}] = {}", phi[k])));
    }
    if measure.iter().any(|m| !(*m >= 0.0 && m.is_finite())) || measure.iter().sum::<f64>() <= 0.0 {
        return Err(Error::invalid("measure must be nonnegative, finite and not identically zero"));
    }
    let lambda = 1.0 / (p - 1.0);
    let weights: Vec<f64> = phi.iter().map(|f| f.powf(-lambda)).collect();
    let s: f64 = weights.iter().zip(measure).map(|(w, m)| w * m).sum();
    Ok(WeightedMin {
        value: s.powf(-1.0 / lambda),
        alpha: weights.iter().map(|w| w / s).collect(),
    })
}

/// Radial quantities of a ring `r1 < |z - z0| < r2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RingBound {
    /// `I = ∫ dr / ‖Q‖₁(z0, r)`, `+∞` if some norm vanishes.
    pub integral: f64,
    /// Midpoint radii.
    pub radii: Vec<f64>,
    /// `‖Q‖₁(z0, r)` at each radius.
    pub norms: Vec<f64>,
    /// Extremal profile `η₀ = 1 / (I ‖Q‖₁)`, normalized to `∫ η₀ dr = 1`.
    pub eta: Vec<f64>,
    /// `I⁻¹`, the minimum of `∫∫ Q η²(|z - z0|) dm` over admissible `η`.
    pub bound: f64,
    /// Radii whose norm vanished; each contributes `+∞` to `I`.
    pub zero_norm_radii: usize,
    pub dr: f64,
}

impl RingBound {
    /// `∫∫ Q η²(|z - z0|) dm` in polar form, `Σ η² ‖Q‖₁ Δr`, for a profile
    /// sampled at [`RingBound::radii`].
    pub fn energy(&self, eta: &[f64]) -> f64 {
        eta.iter()
            .zip(&self.norms)
            .map(|(e, n)| e * e * n)
            .sum::<f64>()
            * self.dr
    }

    /// `∫ η dr` for a profile sampled at the radii.
    pub fn mass(&self, eta: &[f64]) -> f64 {
        eta.iter().sum::<f64>() * self.dr
    }
}

fn ring_from_norms(radii: Vec<f64>, norms: Vec<f64>, dr: f64) -> RingBound {
    let zero = norms.iter().filter(|&&n| n <= 0.0).count();
    if zero > 0 {
        // a/0 = ∞: all admissible mass goes where the norm vanishes.
        let eta = norms
            .iter()
            .map(|&n| if n <= 0.0 { 1.0 / (zero as f64 * dr) } else { 0.0 })
            .collect();
        return RingBound {
            integral: f64::INFINITY,
            radii,
            norms,
            eta,
            bound: 0.0,
            zero_norm_radii: zero,
            dr,
        };
    }
    let integral: f64 = norms.iter().map(|n| dr / n).sum();
    let eta = norms.iter().map(|n| 1.0 / (integral * n)).collect();
    RingBound {
        integral,
        radii,
        norms,
        eta,
        bound: 1.0 / integral,
        zero_norm_radii: 0,
        dr,
    }
}

fn ring_radii(r1: f64, r2: f64) -> Result<(Vec<f64>, f64)> {
    if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
        return Err(Error::invalid(format!("need 0 < r1 < r2, got {r1}, {r2}")));
    }
    let dr = (r2 - r1) / RADIAL_NODES as f64;
    Ok(((0..RADIAL_NODES).map(|k| r1 + (k as f64 + 0.5) * dr).collect(), dr))
}

/// Ring quantities with `‖Q‖₁` taken over full circles.
pub fn ring_bound(q: &impl PlaneFunction, z0: C64, r1: f64, r2: f64) -> Result<RingBound> {
    let (radii, dr) = ring_radii(r1, r2)?;
    let norms = radii.iter().map(|&r| full_circle_norm(q, z0, r)).collect();
    Ok(ring_from_norms(radii, norms, dr))
}

/// Ring quantities with `‖Q‖₁` taken over the dashed lines `D ∩ S(z0, r)`.
pub fn ring_bound_in(q: &impl PlaneFunction, domain: &DomainSpec, z0: C64, r1: f64, r2: f64) -> Result<RingBound> {
    let (radii, dr) = ring_radii(r1, r2)?;
    let norms = radii
        .iter()
        .map(|&r| circle_norm(q, domain, z0, r).map(|c| c.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(ring_from_norms(radii, norms, dr))
}

/// `∫_ε^{ε₀} dr / ‖K‖₁(z0, r)` over dashed lines of `domain`; a lower bound
/// for the modulus of the image of the dashed-line family under any
/// solution with dilatation `K`.
pub fn dashed_line_bound(k: &impl PlaneFunction, domain: &DomainSpec, z0: C64, eps: f64, eps0: f64) -> Result<f64> {
    Ok(ring_bound_in(k, domain, z0, eps, eps0)?.integral)
}

/// `(2/π) log(R/r)`: lower bound for the modulus of curves joining two
/// continua that both cross every circle `S(z0, ρ)`, `r < ρ < R`.
pub fn grotzsch_bound(r: f64, big_r: f64) -> Result<f64> {
    if !(r > 0.0 && r < big_r && big_r.is_finite()) {
        return Err(Error::invalid(format!("need 0 < r < R, got r = {r}, R = {big_r}")));
    }
    Ok(2.0 / PI * (big_r / r).ln())
}
