//! Mean-oscillation probes: BMO estimates, finite mean oscillation at a
//! point and the log-log ring estimate.

use std::f64::consts::{E, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{fit_growth, CriterionReport, Evidence, Verdict, MIN_LADDER, MIN_R2};
use crate::error::{Error, Result};
use crate::field::{circle_norm, PlaneFunction};
use crate::geometry::{DomainSpec, C64};

/// Polar midpoint nodes of the disc quadrature.
const DISC_RADII: usize = 64;
const DISC_ANGLES: usize = 128;

/// Mean and mean absolute deviation of `u` over `D ∩ B(z0, r)` by polar
/// midpoint quadrature. `None` when no node falls in `D`.
pub fn disc_oscillation(u: &impl PlaneFunction, domain: &DomainSpec, z0: C64, r: f64) -> Option<(f64, f64)> {
    let dr = r / DISC_RADII as f64;
    let dt = TAU / DISC_ANGLES as f64;
    let mut nodes = Vec::with_capacity(DISC_RADII * DISC_ANGLES);
    for i in 0..DISC_RADII {
        let rho = (i as f64 + 0.5) * dr;
        for j in 0..DISC_ANGLES {
            let z = z0 + C64::from_polar(rho, (j as f64 + 0.5) * dt);
            if domain.contains(z) {
                nodes.push((u.value(z), rho));
            }
        }
    }
    let area: f64 = nodes.iter().map(|n| n.1).sum();
    if !(area > 0.0) {
        return None;
    }
    let mean = nodes.iter().map(|(v, w)| v * w).sum::<f64>() / area;
    let dev = nodes.iter().map(|(v, w)| (v - mean).abs() * w).sum::<f64>() / area;
    Some((mean, dev))
}

/// Result of [`bmo_norm`].
#[derive(Debug, Clone, PartialEq)]
pub struct BmoEstimate {
    /// Largest mean deviation found; a lower estimate of the BMO norm.
    pub value: f64,
    pub discs: usize,
    pub seed: u64,
    /// Centre and radius of the disc attaining the estimate.
    pub argmax: (C64, f64),
}

/// Supremum of disc mean deviations over `n_discs` random discs inside the
/// domain, radii log-uniform between twice the grid spacing (or a
/// thousandth of the inradius for closed-form `u`) and the inradius.
pub fn bmo_norm(u: &impl PlaneFunction, domain: &DomainSpec, n_discs: usize, seed: u64) -> Result<BmoEstimate> {
    domain.validate()?;
    if n_discs < 100 {
        return Err(Error::invalid(format!("need at least 100 discs, got {n_discs}")));
    }
    let inr = domain.inradius();
    let r_min = u.spacing().map(|h| 2.0 * h).unwrap_or(1e-3 * inr);
    if !(r_min < inr) {
        return Err(Error::invalid("grid too coarse for any disc inside the domain"));
    }
    let bbox = domain.bbox();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = BmoEstimate {
        value: 0.0,
        discs: 0,
        seed,
        argmax: (bbox.center(), 0.0),
    };
    while best.discs < n_discs {
        let r = (r_min.ln() + rng.gen::<f64>() * (inr / r_min).ln()).exp();
        let mut center = None;
        for _ in 0..1000 {
            let z = C64::new(
                rng.gen_range(bbox.re_min..bbox.re_max),
                rng.gen_range(bbox.im_min..bbox.im_max),
            );
            if domain.contains(z) && domain.boundary_distance(z) >= r {
                center = Some(z);
                break;
            }
        }
        let Some(z) = center else { continue };
        best.discs += 1;
        if let Some((_, dev)) = disc_oscillation(u, domain, z, r) {
            if dev > best.value {
                best.value = dev;
                best.argmax = (z, r);
            }
        }
    }
    Ok(best)
}

fn check_ladder(ladder: &[f64], min_len: usize) -> Result<()> {
    if ladder.len() < min_len {
        return Err(Error::invalid(format!(
            "ladder needs at least {min_len} levels, got {}",
            ladder.len()
        )));
    }
    if ladder.iter().any(|e| !(*e > 0.0 && e.is_finite())) || ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("ladder must be positive and strictly decreasing"));
    }
    Ok(())
}

/// Drops levels below twice the grid spacing of `f`.
fn truncate_ladder(f: &impl PlaneFunction, ladder: &[f64]) -> Vec<f64> {
    let floor = f.spacing().map(|h| 2.0 * h).unwrap_or(0.0);
    ladder.iter().copied().filter(|&e| e >= floor).collect()
}

fn in_closure(domain: &DomainSpec, z0: C64) -> bool {
    domain.contains(z0) || domain.boundary_distance(z0) <= 1e-9
}

/// Bounded along the ladder: the last three values never exceed twice the
/// first of them (decay is allowed).
pub(crate) fn bounded_tail(values: &[f64]) -> bool {
    let n = values.len();
    let tail = &values[n - 3..];
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max.is_finite() && (max < 2.0 * tail[0] || max <= 1e-12 * (1.0 + scale))
}

/// Classifies a ladder of values: holds when bounded, fails when strictly
/// increasing with a trusted growth fit, inconclusive otherwise.
fn classify(report: &mut CriterionReport, x: &[f64], values: &[f64]) {
    if values.len() < MIN_LADDER {
        report.verdict = Verdict::Inconclusive;
        report.label = "ladder too short".into();
        return;
    }
    let fit = fit_growth(x, values);
    report.fit = Some(fit);
    if bounded_tail(values) {
        report.verdict = Verdict::Holds;
        report.label = "bounded".into();
    } else if values.windows(2).all(|w| w[1] > w[0]) && fit.r2 >= MIN_R2 {
        report.verdict = Verdict::Fails;
        report.label = format!("{} growth", fit.model.as_str());
    } else {
        report.verdict = Verdict::Inconclusive;
        report.label = "unclassified".into();
    }
}

/// Finite mean oscillation of `phi` at `z0`: the mean deviation
/// `d(ε) = ⨍_{B(z0,ε)} |φ - φ̃_ε|` along a decreasing ladder of radii.
/// Levels below twice the grid spacing of `phi` are dropped.
pub fn fmo_probe(phi: &impl PlaneFunction, domain: &DomainSpec, z0: C64, ladder: &[f64]) -> Result<CriterionReport> {
    domain.validate()?;
    check_ladder(ladder, 6)?;
    if !in_closure(domain, z0) {
        return Err(Error::invalid(format!("z0 = {z0} is not in the closure of the domain")));
    }
    let used = truncate_ladder(phi, ladder);
    let mut report = CriterionReport::new("fmo", Some(z0))
        .param("levels", used.len())
        .param("eps_max", ladder[0])
        .param("eps_min", ladder[ladder.len() - 1]);
    report.evidence = Evidence::new(&["eps", "mean", "deviation"]);
    let mut x = Vec::new();
    let mut devs = Vec::new();
    for &eps in &used {
        let (mean, dev) = disc_oscillation(phi, domain, z0, eps)
            .ok_or_else(|| Error::invalid(format!("B(z0, {eps}) misses the domain")))?;
        report.evidence.push(vec![eps, mean, dev]);
        x.push((1.0 / eps).ln());
        devs.push(dev);
    }
    classify(&mut report, &x, &devs);
    Ok(report)
}

/// Largest admissible outer radius of the log-log ring estimate.
pub const LOGLOG_RADIUS: f64 = 0.065_988_035_845_312_54; // e^{-e}

/// Ring integral `∫_{ε<|z-z0|<ε0} φ / (|z - z0| log(1/|z - z0|))² dm` over
/// the domain and its ratio to `log log(1/ε)`, along a decreasing ladder.
pub fn fmo_loglog_check(
    phi: &impl PlaneFunction,
    domain: &DomainSpec,
    z0: C64,
    eps0: f64,
    ladder: &[f64],
) -> Result<CriterionReport> {
    domain.validate()?;
    if !(eps0 > 0.0 && eps0 < (-E).exp()) {
        return Err(Error::invalid(format!(
            "outer radius must lie in (0, e^-e) = (0, {LOGLOG_RADIUS}), got {eps0}"
        )));
    }
    check_ladder(ladder, 4)?;
    if ladder[0] >= eps0 {
        return Err(Error::invalid("ladder must start below the outer radius"));
    }
    if !in_closure(domain, z0) {
        return Err(Error::invalid(format!("z0 = {z0} is not in the closure of the domain")));
    }
    let used = truncate_ladder(phi, ladder);
    let mut report = CriterionReport::new("fmo-loglog", Some(z0))
        .param("eps0", eps0)
        .param("levels", used.len());
    report.evidence = Evidence::new(&["eps", "ring_integral", "ratio"]);

    // In s = log(1/r): dm / (r log(1/r))² = dθ ds / s², so the integrand is
    // the angular integral of φ divided by s².
    let integrand = |s: f64| -> Result<f64> {
        let r = (-s).exp();
        Ok(circle_norm(phi, domain, z0, r)?.value / r / (s * s))
    };
    let mut total = 0.0;
    let mut s_prev = (1.0 / eps0).ln();
    let mut x = Vec::new();
    let mut ratios = Vec::new();
    for &eps in &used {
        let s = (1.0 / eps).ln();
        let n = (64.0 * (s - s_prev)).ceil().max(16.0) as usize;
        let ds = (s - s_prev) / n as f64;
        for k in 0..n {
            total += integrand(s_prev + (k as f64 + 0.5) * ds)? * ds;
        }
        s_prev = s;
        let ratio = total / s.ln();
        report.evidence.push(vec![eps, total, ratio]);
        x.push(s);
        ratios.push(ratio);
    }
    classify(&mut report, &x, &ratios);
    Ok(report)
}
