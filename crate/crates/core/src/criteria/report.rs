//! Verdicts, growth-model fits and criterion reports.

use std::io::Write;

use crate::error::Result;
use crate::geometry::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// `Holds` only if every verdict holds; `Fails` if any fails.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Holds;
        for v in verdicts {
            match v {
                Verdict::Fails => return Verdict::Fails,
                Verdict::Inconclusive => out = Verdict::Inconclusive,
                Verdict::Holds => {}
            }
        }
        out
    }
}

/// Growth models fitted against `x = log(1/ε)` (or a log cutoff).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthModel {
    /// Increments decay at least geometrically.
    Bounded,
    /// `a + b log x`.
    LogLog,
    /// `a + b x`.
    Log,
    /// `log y = a + b x`.
    Power,
    /// Increments decay like `x^{-s}`, `s` the slope.
    AlgebraicDecay,
}

impl GrowthModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            GrowthModel::Bounded => "bounded",
            GrowthModel::LogLog => "loglog",
            GrowthModel::Log => "log",
            GrowthModel::Power => "power",
            GrowthModel::AlgebraicDecay => "algebraic-decay",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub model: GrowthModel,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least-squares line `y ≈ intercept + slope x` and its `R²`. A `y` that
/// is constant up to rounding is fitted exactly (`R² = 1`).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let e = b - intercept - slope * a;
            e * e
        })
        .sum();
    let r2 = if syy <= 1e-20 * n * (1.0 + my * my) {
        1.0
    } else {
        1.0 - ss_res / syy
    };
    (slope, intercept, r2)
}

/// Best of the log, log-log and power models for `y` against `x > 0`.
pub fn fit_growth(x: &[f64], y: &[f64]) -> GrowthFit {
    let mut best = {
        let (s, i, r) = linear_fit(x, y);
        GrowthFit {
            model: GrowthModel::Log,
            slope: s,
            intercept: i,
            r2: r,
        }
    };
    if x.iter().all(|&v| v > 0.0) {
        let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let (s, i, r) = linear_fit(&lx, y);
        if r > best.r2 {
            best = GrowthFit {
                model: GrowthModel::LogLog,
                slope: s,
                intercept: i,
                r2: r,
            };
        }
    }
    if y.iter().all(|&v| v > 0.0) {
        let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
        let (s, i, r) = linear_fit(x, &ly);
        if r > best.r2 {
            best = GrowthFit {
                model: GrowthModel::Power,
                slope: s,
                intercept: i,
                r2: r,
            };
        }
    }
    best
}

/// R² below which no growth model is trusted.
pub const MIN_R2: f64 = 0.99;
/// Ladders shorter than this give inconclusive verdicts.
pub const MIN_LADDER: usize = 4;

/// Tabular evidence behind a verdict.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Evidence {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Evidence {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.rows.push(row);
    }

    /// Values of one column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Outcome of one numerical criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub criterion: String,
    pub point: Option<C64>,
    pub verdict: Verdict,
    /// Human-readable classification, e.g. `divergent` or `bounded`.
    pub label: String,
    pub fit: Option<GrowthFit>,
    pub evidence: Evidence,
    pub parameters: Vec<(String, String)>,
}

impl CriterionReport {
    pub fn new(criterion: &str, point: Option<C64>) -> Self {
        Self {
            criterion: criterion.to_string(),
            point,
            verdict: Verdict::Inconclusive,
            label: String::new(),
            fit: None,
            evidence: Evidence::default(),
            parameters: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn parameter(&self, key: &str) -> Option<&str> {
        self.parameters
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Writes one row per report:
/// `criterion,point_re,point_im,verdict,label,model,slope,r2,parameters`.
pub fn write_reports_csv<W: Write>(reports: &[CriterionReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "criterion",
        "point_re",
        "point_im",
        "verdict",
        "label",
        "model",
        "slope",
        "r2",
        "parameters",
    ])?;
    for r in reports {
        let (re, im) = r
            .point
            .map(|p| (p.re.to_string(), p.im.to_string()))
            .unwrap_or_default();
        let (model, slope, r2) = r
            .fit
            .map(|f| (f.model.as_str().to_string(), f.slope.to_string(), f.r2.to_string()))
            .unwrap_or_default();
        let params = r
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.criterion.as_str(),
            &re,
            &im,
            r.verdict.as_str(),
            &r.label,
            &model,
            &slope,
            &r2,
            &params,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_fit_recovers_lines() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let (s, i, r) = linear_fit(&x, &y);
        assert!((s - 2.0).abs() < 1e-12 && (i + 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
        let (s, _, r) = linear_fit(&x, &[5.0; 4]);
        assert_eq!((s, r), (0.0, 1.0));
    }

    #[test]
    fn growth_models_are_told_apart() {
        let x: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        let log: Vec<f64> = x.iter().map(|v| 0.3 * v + 1.0).collect();
        let loglog: Vec<f64> = x.iter().map(|v| 0.3 * v.ln() + 1.0).collect();
        let power: Vec<f64> = x.iter().map(|v| (2.0 * v).exp()).collect();
        assert_eq!(fit_growth(&x, &log).model, GrowthModel::Log);
        assert_eq!(fit_growth(&x, &loglog).model, GrowthModel::LogLog);
        assert_eq!(fit_growth(&x, &power).model, GrowthModel::Power);
    }

    #[test]
    fn verdicts_combine() {
        use Verdict::*;
        assert_eq!(Verdict::all([Holds, Holds]), Holds);
        assert_eq!(Verdict::all([Holds, Inconclusive]), Inconclusive);
        assert_eq!(Verdict::all([Inconclusive, Fails]), Fails);
    }

    #[test]
    fn reports_serialize_to_one_row_each() {
        let r = CriterionReport::new("fmo", Some(C64::new(0.0, 1.0))).param("eps0", 0.5);
        let mut buf = Vec::new();
        write_reports_csv(&[r.clone(), r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains("eps0=0.5"));
    }
}
