//! Radial divergence of `∫ dr / ‖K‖₁(z0, r)` and the aggregated check of
//! the hypotheses of the existence theorems.

use super::oscillation::fmo_probe;
use super::phi::{phi_divergence, PhiFunction};
use super::report::{fit_growth, CriterionReport, Evidence, GrowthFit, GrowthModel, Verdict, MIN_LADDER, MIN_R2};
use crate::error::{Error, Result};
use crate::field::{circle_norm, dilatation, ComplexField, PlaneFunction};
use crate::geometry::{DomainSpec, C64};

/// Octaves of the radial ladder `δ 2^{-k}`.
pub const RADIAL_OCTAVES: usize = 12;
/// Log-midpoint nodes per octave.
const OCTAVE_NODES: usize = 16;
/// Octave increments shrinking at least this fast count as summable.
pub const BOUNDED_RATIO: f64 = 0.75;

/// Largest distance from `z0` to the domain, from its bounding box.
fn outer_distance(domain: &DomainSpec, z0: C64) -> f64 {
    domain
        .bbox()
        .corners()
        .iter()
        .map(|c| (c - z0).norm())
        .fold(0.0, f64::max)
}

/// Classifies the growth of `F(ε) = ∫_ε^δ dr / ‖K‖₁(z0, r)` on the ladder
/// `ε_k = δ 2^{-k}`, `k = 1..12`, stopping at twice the grid spacing of
/// `K`. Empty dashed lines are skipped. Octave increments decaying with
/// ratio at most 0.75 give the `convergent` label (verdict fails);
/// otherwise the best of the log, log-log and power models against
/// `log(1/ε)` gives `divergent` (verdict holds) when its `R² ≥ 0.99`.
pub fn radial_divergence(k: &impl PlaneFunction, domain: &DomainSpec, z0: C64, delta: f64) -> Result<CriterionReport> {
    domain.validate()?;
    if !(domain.contains(z0) || domain.boundary_distance(z0) <= 1e-9) {
        return Err(Error::invalid(format!("z0 = {z0} is not in the closure of the domain")));
    }
    let d0 = outer_distance(domain, z0);
    if !(delta > 0.0 && delta < d0) {
        return Err(Error::invalid(format!("δ must lie in (0, {d0}), got {delta}")));
    }
    let floor = k.spacing().map(|h| 2.0 * h).unwrap_or(0.0);
    let mut report = CriterionReport::new("radial-divergence", Some(z0)).param("delta", delta);
    report.evidence = Evidence::new(&["eps", "increment", "partial_integral", "empty_fraction"]);

    let mut total = 0.0;
    let mut any_line = false;
    let mut x = Vec::new();
    let mut partial = Vec::new();
    let mut increments = Vec::new();
    let ds = std::f64::consts::LN_2 / OCTAVE_NODES as f64;
    for octave in 1..=RADIAL_OCTAVES {
        let eps = delta * 0.5f64.powi(octave as i32);
        if eps < floor {
            break;
        }
        // Midpoint rule in s = log r: dr / ‖K‖₁ = r ds / ‖K‖₁.
        let mut inc = 0.0;
        let mut empty = 0;
        for node in 0..OCTAVE_NODES {
            let r = (eps.ln() + (node as f64 + 0.5) * ds).exp();
            let norm = circle_norm(k, domain, z0, r)?;
            if norm.empty {
                empty += 1;
                continue;
            }
            any_line = true;
            inc += r * ds / norm.value;
        }
        total += inc;
        report
            .evidence
            .push(vec![eps, inc, total, empty as f64 / OCTAVE_NODES as f64]);
        x.push((1.0 / eps).ln());
        partial.push(total);
        increments.push(inc);
    }
    if !any_line && !increments.is_empty() {
        return Err(Error::invalid(format!("every dashed line about {z0} is empty")));
    }
    report = report.param("levels", partial.len());
    if partial.len() < MIN_LADDER {
        report.label = "ladder too short".into();
        return Ok(report);
    }
    let n = increments.len();
    let ratio = increments[n - 3..]
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::INFINITY })
        .fold(0.0f64, f64::max);
    report = report.param("increment_ratio", ratio);
    if ratio <= BOUNDED_RATIO {
        let (slope, intercept, r2) = super::report::linear_fit(&x[n - 3..], &increments[n - 3..].iter().map(|v| v.max(1e-300).ln()).collect::<Vec<_>>());
        report.fit = Some(GrowthFit {
            model: GrowthModel::Bounded,
            slope,
            intercept,
            r2,
        });
        report.verdict = Verdict::Fails;
        report.label = "convergent".into();
        return Ok(report);
    }
    let fit = fit_growth(&x, &partial);
    report.fit = Some(fit);
    if fit.r2 >= MIN_R2 {
        report.verdict = Verdict::Holds;
        report.label = "divergent".into();
    } else {
        report.label = "unclassified".into();
    }
    Ok(report)
}

/// Settings of [`theorem_applicability`].
#[derive(Debug, Clone)]
pub struct ApplicabilityOptions {
    /// Outer radius of the FMO and radial ladders.
    pub delta: f64,
    /// Levels of the FMO ladder `δ 2^{-k}`, `k = 0..levels`.
    pub fmo_levels: usize,
    /// `Φ`; `None` selects `e^{αt}` with the `alpha` below.
    pub phi: Option<PhiFunction>,
    pub alpha: f64,
}

impl Default for ApplicabilityOptions {
    fn default() -> Self {
        Self {
            delta: 0.25,
            fmo_levels: 10,
            phi: None,
            alpha: 1.0,
        }
    }
}

/// Per-hypothesis outcomes of [`theorem_applicability`].
#[derive(Debug, Clone)]
pub struct Applicability {
    pub fmo: Vec<CriterionReport>,
    pub radial: Vec<CriterionReport>,
    pub phi: CriterionReport,
    /// `∫_D Φ(K_μ) dm` by the node rule.
    pub phi_integral: f64,
    /// Points where the radial hypothesis is not numerically confirmed.
    pub unverified: Vec<C64>,
    pub report: CriterionReport,
}

/// Runs [`fmo_probe`] and [`radial_divergence`] on `K_μ` at every sample
/// point and [`phi_divergence`] on `Φ` together with `∫_D Φ(K_μ) dm`.
pub fn theorem_applicability(
    mu: &ComplexField,
    domain: &DomainSpec,
    points: &[C64],
    opts: &ApplicabilityOptions,
) -> Result<Applicability> {
    if points.is_empty() {
        return Err(Error::invalid("at least one sample point is required"));
    }
    if opts.fmo_levels < 6 {
        return Err(Error::invalid("the FMO ladder needs at least 6 levels"));
    }
    let mut k = dilatation(mu)?;
    // Nodes outside D only enter through interpolation next to the boundary.
    for (v, &inside) in k.values.iter_mut().zip(&k.mask) {
        if !inside && !v.is_finite() {
            *v = 1.0;
        }
    }
    let ladder: Vec<f64> = (0..opts.fmo_levels).map(|i| opts.delta * 0.5f64.powi(i as i32)).collect();
    let mut fmo = Vec::with_capacity(points.len());
    let mut radial = Vec::with_capacity(points.len());
    let mut unverified = Vec::new();
    for &z0 in points {
        fmo.push(fmo_probe(&k, domain, z0, &ladder)?);
        let r = radial_divergence(&k, domain, z0, opts.delta)?;
        if r.verdict != Verdict::Holds {
            unverified.push(z0);
        }
        radial.push(r);
    }
    let phi = match &opts.phi {
        Some(p) => p.clone(),
        None => PhiFunction::exponential(opts.alpha)?,
    };
    let phi0 = phi.value(0.0)?;
    let phi_report = phi_divergence(&phi, 2.0 * phi0.max(1.0))?;
    let mut phi_integral = 0.0;
    for v in k.masked_values() {
        phi_integral += phi.value(v).unwrap_or(f64::INFINITY);
    }
    phi_integral *= k.grid.cell_area();
    let phi_verdict = if phi_integral.is_finite() { phi_report.verdict } else { Verdict::Fails };

    let fmo_verdict = Verdict::all(fmo.iter().map(|r| r.verdict));
    let radial_verdict = Verdict::all(radial.iter().map(|r| r.verdict));
    let mut report = CriterionReport::new("theorem-applicability", None)
        .param("points", points.len())
        .param("fmo", fmo_verdict.as_str())
        .param("radial", radial_verdict.as_str())
        .param("phi", phi_verdict.as_str())
        .param("phi_label", phi.label())
        .param("phi_integral", phi_integral);
    report.evidence = Evidence::new(&["point_re", "point_im", "fmo", "radial"]);
    let code = |v: Verdict| match v {
        Verdict::Holds => 1.0,
        Verdict::Fails => -1.0,
        Verdict::Inconclusive => 0.0,
    };
    for ((z, f), r) in points.iter().zip(&fmo).zip(&radial) {
        report.evidence.push(vec![z.re, z.im, code(f.verdict), code(r.verdict)]);
    }
    // Each theorem needs one of the three hypotheses.
    report.verdict = [fmo_verdict, radial_verdict, phi_verdict]
        .into_iter()
        .max_by_key(|v| match v {
            Verdict::Holds => 2,
            Verdict::Inconclusive => 1,
            Verdict::Fails => 0,
        })
        .unwrap_or(Verdict::Inconclusive);
    report.label = if unverified.is_empty() {
        "radial hypothesis verified".into()
    } else {
        format!("radial hypothesis unverified at {} point(s)", unverified.len())
    };
    Ok(Applicability {
        fmo,
        radial,
        phi: phi_report,
        phi_integral,
        unverified,
        report,
    })
}
