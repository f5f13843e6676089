//! Φ-integral conditions: the divergence of `∫ dτ / (τ Φ⁻¹(τ))` and the
//! five equivalent integrals in `H = log Φ`.

use std::cell::RefCell;
use std::fmt;
use std::io::Read;
use std::sync::Arc;

use super::report::{linear_fit, CriterionReport, Evidence, Verdict, MIN_R2};
use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson, log_simpson, midpoint};

type LogEval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A nonnegative, nondecreasing convex `Φ` on `[0, t_end]`, stored through
/// `H = log Φ` so that fast-growing members stay representable.
#[derive(Clone)]
pub struct PhiFunction {
    label: String,
    log_phi: LogEval,
    /// End of the domain of definition; `None` for `[0, ∞)`.
    t_end: Option<f64>,
}

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiFunction")
            .field("label", &self.label)
            .field("t_end", &self.t_end)
            .finish()
    }
}

/// Names of the built-in catalog.
pub const PHI_CATALOG: [&str; 6] = ["t", "t2", "exp", "exp-sqrt", "t-log", "exp-over-t"];

/// Points of the log grid used for the convexity check.
const CONVEXITY_POINTS: usize = 256;

impl PhiFunction {
    /// Builds `Φ` from `H = log Φ` (`-∞` where `Φ = 0`) and checks
    /// monotonicity and convexity numerically.
    pub fn from_log(label: &str, log_phi: impl Fn(f64) -> f64 + Send + Sync + 'static, t_end: Option<f64>) -> Result<Self> {
        if let Some(t) = t_end {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::invalid(format!("domain end must be positive, got {t}")));
            }
        }
        let phi = Self {
            label: label.to_string(),
            log_phi: Arc::new(log_phi),
            t_end,
        };
        phi.check_shape()?;
        Ok(phi)
    }

    /// Catalog member by name: `t`, `t2`, `exp`, `exp-sqrt`, `t-log`,
    /// `exp-over-t`. `exp-sqrt` is replaced by its tangent line
    /// `(e/2)(1 + t)` on `[0, 1]` and `exp-over-t` by the constant `e` on
    /// `[0, 1]`, which keeps both convex and nondecreasing.
    pub fn catalog(name: &str) -> Result<Self> {
        let f: fn(f64) -> f64 = match name {
            "t" => |t| t.ln(),
            "t2" => |t| 2.0 * t.ln(),
            "exp" => |t| t,
            "exp-sqrt" => |t| if t < 1.0 { (0.5 * (1.0 + t)).ln() + 1.0 } else { t.sqrt() },
            "t-log" => |t| t.ln() + t.ln_1p().ln(),
            "exp-over-t" => |t| if t < 1.0 { 1.0 } else { t - t.ln() },
            _ => {
                return Err(Error::invalid(format!(
                    "unknown Φ `{name}`; known: {}",
                    PHI_CATALOG.join(", ")
                )))
            }
        };
        Self::from_log(name, f, None)
    }

    /// `Φ(t) = e^{αt}`.
    pub fn exponential(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("α must be positive, got {alpha}")));
        }
        Self::from_log(&format!("exp({alpha}t)"), move |t| alpha * t, None)
    }

    /// Piecewise-linear `Φ` through `(t, Φ(t))` samples with strictly
    /// increasing `t` starting at 0.
    pub fn tabulated(label: &str, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("a tabulated Φ needs at least two points"));
        }
        if points[0].0 != 0.0 {
            return Err(Error::invalid("a tabulated Φ must start at t = 0"));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::invalid("tabulated t values must be strictly increasing"));
        }
        if points.iter().any(|p| !(p.1 >= 0.0 && p.1.is_finite() && p.0.is_finite())) {
            return Err(Error::invalid("tabulated Φ values must be finite and nonnegative"));
        }
        let t_end = points[points.len() - 1].0;
        let pts = points;
        Self::from_log(
            label,
            move |t| {
                let k = pts.partition_point(|p| p.0 <= t).clamp(1, pts.len() - 1);
                let (a, b) = (pts[k - 1], pts[k]);
                let w = ((t - a.0) / (b.0 - a.0)).clamp(0.0, 1.0);
                (a.1 + w * (b.1 - a.1)).ln()
            },
            Some(t_end),
        )
    }

    /// Reads a `t,phi` CSV with a header row.
    pub fn from_csv<R: Read>(label: &str, input: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let field = |k: usize| -> Result<f64> {
                rec.get(k)
                    .ok_or_else(|| Error::Parse("expected two columns `t,phi`".into()))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(e.to_string()))
            };
            points.push((field(0)?, field(1)?));
        }
        Self::tabulated(label, points)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn t_end(&self) -> Option<f64> {
        self.t_end
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) || self.t_end.is_some_and(|e| t > e * (1.0 + 1e-12)) {
            return Err(Error::invalid(format!("Φ `{}` is not defined at t = {t}", self.label)));
        }
        Ok(())
    }

    /// `H(t) = log Φ(t)`.
    pub fn log_value(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok((self.log_phi)(t))
    }

    /// `Φ(t)`.
    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.log_value(t)?.exp())
    }

    /// Generalized inverse of `H`: the least `t ≥ 0` with `H(t) ≥ η`.
    /// `+∞` when `Φ` is defined on `[0, ∞)` but `H` only reaches `η`
    /// beyond the floating-point range.
    pub fn inverse_log(&self, eta: f64) -> Result<f64> {
        if eta.is_nan() {
            return Err(Error::invalid("Φ⁻¹ of NaN"));
        }
        let h = &self.log_phi;
        if h(0.0) >= eta {
            return Ok(0.0);
        }
        let mut hi = match self.t_end {
            Some(e) => {
                if h(e) < eta {
                    return Err(Error::invalid(format!(
                        "Φ `{}` does not reach e^{eta} on its table",
                        self.label
                    )));
                }
                e
            }
            None => {
                let mut hi = 1.0f64;
                while h(hi) < eta {
                    hi *= 2.0;
                    if !hi.is_finite() {
                        return Ok(f64::INFINITY);
                    }
                }
                hi
            }
        };
        let mut lo = 0.0;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if h(mid) >= eta {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Generalized inverse `Φ⁻¹(τ) = inf{t : Φ(t) ≥ τ}` for `τ > 0`.
    pub fn inverse(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0) {
            return Err(Error::invalid(format!("Φ⁻¹ needs τ > 0, got {tau}")));
        }
        self.inverse_log(tau.ln())
    }

    /// Nondecreasing and convex on a log grid over `[10⁻³, t_hi]`, `t_hi`
    /// the table end or the point where `Φ` reaches `e^{600}` (at most
    /// `10⁶`), plus `t = 0`. Secant slopes may drop by at most `1e-9`
    /// relative.
    fn check_shape(&self) -> Result<()> {
        let h = &self.log_phi;
        let t_hi = match self.t_end {
            Some(e) => e,
            None => {
                let mut t = 1.0f64;
                while t < 1e6 && h(2.0 * t) < 600.0 {
                    t *= 2.0;
                }
                t
            }
        };
        let t_lo = (1e-3f64).min(t_hi / 1e3);
        let n = CONVEXITY_POINTS - 1;
        let mut ts: Vec<f64> = (0..n)
            .map(|k| t_lo * (t_hi / t_lo).powf(k as f64 / (n - 1) as f64))
            .collect();
        ts.insert(0, 0.0);
        let vals: Vec<f64> = ts.iter().map(|&t| h(t).exp()).collect();
        if vals.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid(format!("Φ `{}` is not finite and nonnegative", self.label)));
        }
        let tol = |s: f64| 1e-9 * s.abs().max(1.0);
        let mut prev_slope = f64::NEG_INFINITY;
        for k in 0..ts.len() - 1 {
            let slope = (vals[k + 1] - vals[k]) / (ts[k + 1] - ts[k]);
            if slope < -tol(vals[k]) {
                return Err(Error::invalid(format!(
                    "Φ `{}` decreases near t = {}",
                    self.label, ts[k]
                )));
            }
            if slope < prev_slope - tol(prev_slope) {
                return Err(Error::invalid(format!(
                    "Φ `{}` is not convex near t = {}",
                    self.label, ts[k]
                )));
            }
            prev_slope = slope;
        }
        Ok(())
    }
}

/// Classification of an improper integral from its decade increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralClass {
    Convergent,
    Divergent,
    Inconclusive,
}

impl IntegralClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntegralClass::Convergent => "convergent",
            IntegralClass::Divergent => "divergent",
            IntegralClass::Inconclusive => "inconclusive",
        }
    }

    /// A Φ-condition holds when its integral diverges.
    pub fn verdict(&self) -> Verdict {
        match self {
            IntegralClass::Divergent => Verdict::Holds,
            IntegralClass::Convergent => Verdict::Fails,
            IntegralClass::Inconclusive => Verdict::Inconclusive,
        }
    }
}

/// Tail ratio at or below which increments count as geometrically decaying.
pub const GEOMETRIC_RATIO: f64 = 0.5;
/// Tail ratios at or above this everywhere mean the increments have
/// stopped decaying.
pub const STALL_RATIO: f64 = 0.999;
/// Algebraic decay exponents `I_k ~ x^{-s}` at or above this are summable.
pub const CONVERGENT_EXPONENT: f64 = 1.5;
/// Decay exponents at or below this are not.
pub const DIVERGENT_EXPONENT: f64 = 1.25;
/// Number of decades.
pub const DECADES: usize = 8;

/// Details of one classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementFit {
    pub class: IntegralClass,
    /// Largest ratio of successive increments over the last three.
    pub tail_ratio: f64,
    /// Decay exponent `s` of `I_k ~ x^{-s}` (NaN when not fitted).
    pub exponent: f64,
    pub r2: f64,
}

/// Classifies `Σ I_k` from nonnegative increments `I_k` over consecutive
/// windows with midpoints `x_k` (a log of the cutoff, growing linearly in
/// `k`). Geometric tails converge and stalled tails diverge; otherwise the
/// decay exponent of `log I_k` against `log x_k` over the last six
/// increments decides.
pub fn classify_increments(increments: &[f64], x: &[f64]) -> IncrementFit {
    let n = increments.len();
    let scale = increments.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tail = &increments[n.saturating_sub(4)..];
    let negligible = |v: f64| v.abs() <= 1e-300 || v.abs() <= 1e-14 * scale;
    let mut tail_ratio = 0.0f64;
    let mut min_ratio = f64::INFINITY;
    for w in tail.windows(2) {
        let r = if negligible(w[1]) {
            0.0
        } else if negligible(w[0]) {
            f64::INFINITY
        } else {
            w[1] / w[0]
        };
        tail_ratio = tail_ratio.max(r);
        min_ratio = min_ratio.min(r);
    }
    let mut fit = IncrementFit {
        class: IntegralClass::Inconclusive,
        tail_ratio,
        exponent: f64::NAN,
        r2: f64::NAN,
    };
    if scale == 0.0 || tail_ratio <= GEOMETRIC_RATIO {
        fit.class = IntegralClass::Convergent;
        return fit;
    }
    // Increments that stop shrinking make the partial sums grow linearly.
    if min_ratio >= STALL_RATIO {
        fit.class = IntegralClass::Divergent;
        fit.exponent = 0.0;
        return fit;
    }
    let start = n.saturating_sub(6);
    if increments[start..].iter().any(|v| !(*v > 0.0)) || x[start..].iter().any(|v| !(*v > 0.0)) {
        return fit;
    }
    let lx: Vec<f64> = x[start..].iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = increments[start..].iter().map(|v| v.ln()).collect();
    let (slope, _, r2) = linear_fit(&lx, &ly);
    fit.exponent = -slope;
    fit.r2 = r2;
    if r2 < MIN_R2 {
        return fit;
    }
    fit.class = if fit.exponent >= CONVERGENT_EXPONENT {
        IntegralClass::Convergent
    } else if fit.exponent <= DIVERGENT_EXPONENT {
        IntegralClass::Divergent
    } else {
        IntegralClass::Inconclusive
    };
    fit
}

/// Relative tolerance of the per-decade quadratures.
const QUAD_TOL: f64 = 1e-9;

/// `1/H⁻¹(η)`, recording the first evaluation error.
fn recip_inverse(phi: &PhiFunction, eta: f64, err: &RefCell<Option<Error>>) -> f64 {
    match phi.inverse_log(eta) {
        Ok(t) => 1.0 / t,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    }
}

fn decade_report(criterion: &str, label: &str, increments: &[f64], x: &[f64]) -> (CriterionReport, IncrementFit) {
    let fit = classify_increments(increments, x);
    let mut report = CriterionReport::new(criterion, None)
        .param("phi", label)
        .param("tail_ratio", fit.tail_ratio)
        .param("exponent", fit.exponent);
    report.verdict = fit.class.verdict();
    report.label = fit.class.as_str().to_string();
    report.evidence = Evidence::new(&["decade", "log_cutoff", "increment", "partial_integral"]);
    let mut total = 0.0;
    for (k, (&inc, &xk)) in increments.iter().zip(x).enumerate() {
        total += inc;
        report.evidence.push(vec![(k + 1) as f64, xk, inc, total]);
    }
    (report, fit)
}

/// Divergence of `∫_{δ0}^∞ dτ / (τ Φ⁻¹(τ))` from its increments over the
/// decades `[δ0 10^{k-1}, δ0 10^k]`, `k = 1..8`. The verdict holds when the
/// integral is classified divergent.
pub fn phi_divergence(phi: &PhiFunction, delta0: f64) -> Result<CriterionReport> {
    let phi0 = phi.value(0.0)?;
    if !(delta0 > phi0 && delta0.is_finite()) {
        return Err(Error::invalid(format!("δ0 must exceed Φ(0) = {phi0}, got {delta0}")));
    }
    // τ = e^η turns the integrand into 1/Φ⁻¹(e^η) = 1/H⁻¹(η).
    let eta0 = delta0.ln();
    let step = 10f64.ln();
    let err = RefCell::new(None);
    let integrand = |eta: f64| recip_inverse(phi, eta, &err);
    let mut increments = Vec::with_capacity(DECADES);
    let mut x = Vec::with_capacity(DECADES);
    for k in 1..=DECADES {
        let (a, b) = (eta0 + (k - 1) as f64 * step, eta0 + k as f64 * step);
        let coarse = midpoint(&integrand, a, b, 64).abs();
        increments.push(adaptive_simpson(&integrand, a, b, (QUAD_TOL * coarse).max(f64::MIN_POSITIVE)));
        x.push((0.5 * (a + b)).max(f64::MIN_POSITIVE));
    }
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let (report, _) = decade_report("phi-divergence", phi.label(), &increments, &x);
    Ok(report.param("delta0", delta0))
}

/// The five integrals in `H = log Φ` whose divergence is equivalent to the
/// Φ-condition.
pub const PHI_INTEGRALS: [&str; 5] = ["dH/dt / t", "dH / t", "H / t^2", "H(1/t) near 0", "1 / H^-1(eta)"];

/// Classifications of the five equivalent integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiEquivalents {
    pub classes: [IntegralClass; 5],
    pub fits: [IncrementFit; 5],
    /// All five classifications coincide and none is inconclusive.
    pub agreement: bool,
    /// `Δ`: lower limit of the `t` integrals (`δ = 1/Δ` for the fourth).
    pub lower: f64,
    /// `H(Δ)`: lower limit of the `η` integral.
    pub lower_eta: f64,
    pub report: CriterionReport,
}

/// Classifies `∫_Δ^∞ H'(t) dt/t`, `∫_Δ^∞ dH(t)/t`, `∫_Δ^∞ H(t) dt/t²`,
/// `∫_0^δ H(1/t) dt` and `∫_{H(Δ)}^∞ dη/H⁻¹(η)` over eight decades of their
/// cutoffs, with `Δ = 1 + Φ⁻¹(e max(1, Φ(0)))` so that `H ≥ 1` on the range
/// and `δ = 1/Δ`.
pub fn phi_equivalents(phi: &PhiFunction) -> Result<PhiEquivalents> {
    let phi0 = phi.value(0.0)?;
    let t_start = 1.0 + phi.inverse_log(1.0 + phi0.max(1.0).ln())?;
    if !t_start.is_finite() {
        return Err(Error::invalid(format!("Φ `{}` never exceeds e", phi.label())));
    }
    let t_stop = t_start * 10f64.powi(DECADES as i32);
    phi.check_domain(t_stop)
        .map_err(|_| Error::invalid(format!("Φ `{}` must be defined up to t = {t_stop}", phi.label())))?;
    let h = |t: f64| (phi.log_phi)(t);
    let eta_start = h(t_start);
    let cut = |k: usize| t_start * 10f64.powi(k as i32);

    let mut incs: [Vec<f64>; 5] = Default::default();
    let mut xs: [Vec<f64>; 5] = Default::default();
    let err = RefCell::new(None);
    let inv = |eta: f64| recip_inverse(phi, eta, &err);
    for k in 1..=DECADES {
        let (a, b) = (cut(k - 1), cut(k));
        let xmid = (a * b).sqrt().ln();
        // H' by central differences.
        let dh = |t: f64| {
            let e = 1e-5 * t;
            (h(t + e) - h(t - e)) / (2.0 * e) / t
        };
        incs[0].push(log_simpson(&dh, a, b, QUAD_TOL));
        // Riemann–Stieltjes sums on a geometric partition.
        let n = 4096;
        let q = (b / a).powf(1.0 / n as f64);
        let mut s = 0.0;
        let mut t = a;
        for _ in 0..n {
            let t1 = t * q;
            s += (h(t1) - h(t)) / (0.5 * (t + t1));
            t = t1;
        }
        incs[1].push(s);
        incs[2].push(log_simpson(&|t: f64| h(t) / (t * t), a, b, QUAD_TOL));
        incs[3].push(log_simpson(&|t: f64| h(1.0 / t), 1.0 / b, 1.0 / a, QUAD_TOL));
        for x in xs.iter_mut().take(4) {
            x.push(xmid);
        }
        let (ea, eb) = (eta_start * 10f64.powi(k as i32 - 1), eta_start * 10f64.powi(k as i32));
        incs[4].push(log_simpson(&inv, ea, eb, QUAD_TOL));
        xs[4].push((ea * eb).sqrt().ln().max(f64::MIN_POSITIVE));
    }
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let fits: Vec<IncrementFit> = (0..5).map(|i| classify_increments(&incs[i], &xs[i])).collect();
    let fits: [IncrementFit; 5] = fits.try_into().expect("five fits");
    let classes = fits.map(|f| f.class);
    let agreement = classes[0] != IntegralClass::Inconclusive && classes.iter().all(|c| *c == classes[0]);

    let mut report = CriterionReport::new("phi-equivalents", None)
        .param("phi", phi.label())
        .param("agreement", agreement)
        .param("delta", t_start)
        .param(
            "classes",
            classes.iter().map(|c| c.as_str()).collect::<Vec<_>>().join("|"),
        );
    report.verdict = if agreement { classes[0].verdict() } else { Verdict::Inconclusive };
    report.label = if agreement { classes[0].as_str().to_string() } else { "disagreement".into() };
    report.evidence = Evidence::new(&["integral", "decade", "increment", "tail_ratio", "exponent"]);
    for i in 0..5 {
        for (k, inc) in incs[i].iter().enumerate() {
            report
                .evidence
                .push(vec![(i + 1) as f64, (k + 1) as f64, *inc, fits[i].tail_ratio, fits[i].exponent]);
        }
    }
    Ok(PhiEquivalents {
        classes,
        fits,
        agreement,
        lower: t_start,
        lower_eta: eta_start,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_members_are_convex_and_invertible() {
        for name in PHI_CATALOG {
            let phi = PhiFunction::catalog(name).unwrap();
            for tau in [3.0, 10.0, 1e3] {
                let t = phi.inverse(tau).unwrap();
                assert!((phi.value(t).unwrap() - tau).abs() < 1e-9 * tau, "{name} at {tau}");
            }
        }
        assert!(PhiFunction::catalog("nope").is_err());
    }

    #[test]
    fn nonconvex_functions_are_rejected() {
        assert!(PhiFunction::from_log("sqrt", |t: f64| 0.5 * t.ln(), None).is_err());
        assert!(PhiFunction::from_log("raw-exp-sqrt", |t: f64| t.sqrt(), None).is_err());
        assert!(PhiFunction::from_log("decreasing", |t: f64| -t, None).is_err());
    }

    #[test]
    fn generalized_inverse_skips_flat_pieces() {
        let phi = PhiFunction::tabulated("flat", vec![(0.0, 1.0), (1.0, 1.0), (2.0, 3.0)]).unwrap();
        assert!(phi.inverse(1.0).unwrap() == 0.0);
        assert!((phi.inverse(2.0).unwrap() - 1.5).abs() < 1e-12);
        assert!(phi.inverse(4.0).is_err());
        assert!(phi.value(2.5).is_err());
    }

    #[test]
    fn tabulated_phi_reads_csv() {
        let text = "t,phi\n0,0\n1,1\n2,4\n3,9\n";
        let phi = PhiFunction::from_csv("squares", text.as_bytes()).unwrap();
        assert!((phi.value(1.5).unwrap() - 2.5).abs() < 1e-12);
        assert!(PhiFunction::from_csv("bad", "t,phi\n0,0\n1,x\n".as_bytes()).is_err());
        assert!(PhiFunction::from_csv("concave", "t,phi\n0,0\n1,2\n2,3\n".as_bytes()).is_err());
    }

    #[test]
    fn divergence_classifies_the_p_integrals() {
        let cases = [("exp", "divergent"), ("t2", "convergent"), ("t", "convergent")];
        for (name, want) in cases {
            let phi = PhiFunction::catalog(name).unwrap();
            let r = phi_divergence(&phi, 2.0 * phi.value(0.0).unwrap().max(1.0)).unwrap();
            assert_eq!(r.label, want, "{name}");
        }
    }

    #[test]
    fn divergence_increments_match_closed_form() {
        // Φ = e^t: ∫ dτ/(τ log τ) over [a, b] is log(log b / log a).
        let phi = PhiFunction::catalog("exp").unwrap();
        let r = phi_divergence(&phi, 10.0).unwrap();
        let inc = r.evidence.column("increment").unwrap();
        for (k, v) in inc.iter().enumerate() {
            let want = ((k + 2) as f64 / (k + 1) as f64).ln();
            assert!((v - want).abs() < 1e-8, "decade {k}: {v} vs {want}");
        }
    }

    #[test]
    fn delta0_below_phi0_is_rejected() {
        let phi = PhiFunction::catalog("exp").unwrap();
        assert!(phi_divergence(&phi, 0.5).is_err());
    }

    #[test]
    fn equivalents_agree_on_the_catalog() {
        let want = [
            ("t", IntegralClass::Convergent),
            ("t2", IntegralClass::Convergent),
            ("exp", IntegralClass::Divergent),
            ("exp-sqrt", IntegralClass::Convergent),
            ("t-log", IntegralClass::Convergent),
            ("exp-over-t", IntegralClass::Divergent),
        ];
        for (name, class) in want {
            let eq = phi_equivalents(&PhiFunction::catalog(name).unwrap()).unwrap();
            assert!(eq.agreement, "{name}: {:?} {:?}", eq.classes, eq.fits);
            assert_eq!(eq.classes[0], class, "{name}");
        }
    }

    #[test]
    fn geometric_and_algebraic_tails_are_classified() {
        let x: Vec<f64> = (1..=8).map(|k| 2.3 * k as f64).collect();
        let geo: Vec<f64> = (1..=8).map(|k| 0.3f64.powi(k)).collect();
        assert_eq!(classify_increments(&geo, &x).class, IntegralClass::Convergent);
        let harmonic: Vec<f64> = x.iter().map(|v| 1.0 / v).collect();
        assert_eq!(classify_increments(&harmonic, &x).class, IntegralClass::Divergent);
        let square: Vec<f64> = x.iter().map(|v| 1.0 / (v * v)).collect();
        assert_eq!(classify_increments(&square, &x).class, IntegralClass::Convergent);
        assert_eq!(classify_increments(&[0.0; 8], &x).class, IntegralClass::Convergent);
    }
}
