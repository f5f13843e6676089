//! The TOML run configuration: a `[run]` table and `[[scenario]]` entries.
//! Unknown keys anywhere are rejected.

use std::collections::BTreeSet;

use beltrami_core::dirichlet::BoundaryFunction;
use beltrami_core::field::MuGenerator;
use beltrami_core::geometry::{DomainSpec, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_OUTPUT: &str = "beltrami-out";

#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub run: RunSection,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<ScenarioConfig>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Output directory, relative to the output root.
    #[serde(default = "default_output")]
    pub output: String,
    /// Seed for scenarios that do not set their own.
    #[serde(default)]
    pub seed: u64,
    /// Also draw an SVG per plottable table.
    #[serde(default)]
    pub svg: bool,
    /// Run scenarios on separate threads.
    #[serde(default)]
    pub parallel: bool,
}

fn default_output() -> String {
    DEFAULT_OUTPUT.to_string()
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            output: default_output(),
            seed: 0,
            svg: false,
            parallel: false,
        }
    }
}

/// Domain of an experiment.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainConfig {
    Disk,
    /// `[-half_width, half_width]²`.
    Square { half_width: f64 },
    /// `[-1, 1]²` with a thin notch along `[0, 1]`.
    SlitSquare { half_opening: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    /// Regular polygon with a vertex at angle 0.
    Regular { sides: usize, radius: f64 },
    Annulus { center: [f64; 2], inner: f64, outer: f64 },
}

impl DomainConfig {
    pub fn to_spec(&self) -> CliResult<DomainSpec> {
        let checked = |d: DomainSpec| d.validate().map(|_| d).map_err(|e| CliError::config(format!("domain: {e}")));
        match self {
            DomainConfig::Disk => Ok(DomainSpec::UnitDisk),
            DomainConfig::Square { half_width } => {
                positive("domain.half_width", *half_width)?;
                checked(DomainSpec::square(*half_width))
            }
            DomainConfig::SlitSquare { half_opening } => {
                if !(*half_opening > 0.0 && *half_opening < 0.5) {
                    return Err(CliError::config("domain.half_opening must lie in (0, 0.5)"));
                }
                checked(DomainSpec::slit_square(*half_opening))
            }
            DomainConfig::Polygon { vertices } => checked(DomainSpec::Polygon(vertices.iter().map(|&v| point(v)).collect())),
            DomainConfig::Regular { sides, radius } => {
                positive("domain.radius", *radius)?;
                if *sides < 3 {
                    return Err(CliError::config("domain.sides must be at least 3"));
                }
                let n = *sides as f64;
                checked(DomainSpec::Polygon(
                    (0..*sides)
                        .map(|k| C64::from_polar(*radius, std::f64::consts::TAU * k as f64 / n))
                        .collect(),
                ))
            }
            DomainConfig::Annulus { center, inner, outer } => checked(DomainSpec::Annulus {
                center: point(*center),
                inner: *inner,
                outer: *outer,
            }),
        }
    }
}

/// Beltrami coefficient generator.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MuConfig {
    Zero,
    Constant { re: f64, im: f64 },
    RadialStretch { k: f64 },
    LogBlowup { center: [f64; 2] },
}

impl MuConfig {
    pub fn generator(&self) -> CliResult<MuGenerator> {
        match *self {
            MuConfig::Zero => Ok(MuGenerator::Constant(C64::new(0.0, 0.0))),
            MuConfig::Constant { re, im } => {
                if !(C64::new(re, im).norm() < 1.0) {
                    return Err(CliError::config("mu: |re + i im| must be below 1"));
                }
                Ok(MuGenerator::Constant(C64::new(re, im)))
            }
            MuConfig::RadialStretch { k } => {
                positive("mu.k", k)?;
                Ok(MuGenerator::RadialStretch { k })
            }
            MuConfig::LogBlowup { center } => Ok(MuGenerator::LogarithmicBlowup { center: point(center) }),
        }
    }
}

/// Named boundary data.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundaryConfig {
    Constant { value: f64 },
    Cos { k: u32 },
    RandomTrig { seed: u64, degree: u32 },
    StepSmoothed { sharpness: f64 },
}

impl BoundaryConfig {
    pub fn function(&self) -> CliResult<BoundaryFunction> {
        match *self {
            BoundaryConfig::Constant { value } => {
                if !value.is_finite() {
                    return Err(CliError::config("phi.value must be finite"));
                }
                Ok(BoundaryFunction::Constant(value))
            }
            BoundaryConfig::Cos { k } => Ok(BoundaryFunction::Cos { k }),
            BoundaryConfig::RandomTrig { seed, degree } => {
                if degree == 0 {
                    return Err(CliError::config("phi.degree must be positive"));
                }
                Ok(BoundaryFunction::RandomTrig { seed, degree })
            }
            BoundaryConfig::StepSmoothed { sharpness } => {
                positive("phi.sharpness", sharpness)?;
                Ok(BoundaryFunction::StepSmoothed { sharpness })
            }
        }
    }
}

/// One `[[scenario]]` entry. Every key except `name` is optional; each
/// scenario accepts only the keys it uses.
#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    /// Subdirectory of the run output; defaults to the name.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolutions: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<MuConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<BoundaryConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    /// `[inner, outer]` radii.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<f64>>,
    /// Outer radius of a probe (`ε₀`, `R` or `δ` depending on the scenario).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge: Option<f64>,
}

/// Keys every scenario accepts.
pub const COMMON_KEYS: [&str; 3] = ["name", "output", "seed"];

impl ScenarioConfig {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            ..Self::default()
        }
    }

    /// Keys present in this entry.
    pub fn given_keys(&self) -> BTreeSet<&'static str> {
        let mut k = BTreeSet::from(["name"]);
        let flags = [
            ("output", self.output.is_some()),
            ("seed", self.seed.is_some()),
            ("resolution", self.resolution.is_some()),
            ("resolutions", self.resolutions.is_some()),
            ("domain", self.domain.is_some()),
            ("mu", self.mu.is_some()),
            ("phi", self.phi.is_some()),
            ("center", self.center.is_some()),
            ("points", self.points.is_some()),
            ("radii", self.radii.is_some()),
            ("ladder", self.ladder.is_some()),
            ("outer", self.outer.is_some()),
            ("tol", self.tol.is_some()),
            ("truncation", self.truncation.is_some()),
            ("samples", self.samples.is_some()),
            ("trials", self.trials.is_some()),
            ("functions", self.functions.is_some()),
            ("nodes", self.nodes.is_some()),
            ("gauge", self.gauge.is_some()),
        ];
        k.extend(flags.iter().filter(|(_, on)| *on).map(|(n, _)| *n));
        k
    }

    /// Output subdirectory.
    pub fn output_dir(&self) -> &str {
        self.output.as_deref().unwrap_or(&self.name)
    }

    pub fn resolution_or(&self, default: usize) -> CliResult<usize> {
        let n = self.resolution.unwrap_or(default);
        check_resolution(n)?;
        Ok(n)
    }

    pub fn resolutions_or(&self, default: &[usize]) -> CliResult<Vec<usize>> {
        let v = self.resolutions.clone().unwrap_or_else(|| default.to_vec());
        if v.is_empty() {
            return Err(CliError::config("resolutions must not be empty"));
        }
        for &n in &v {
            check_resolution(n)?;
        }
        Ok(v)
    }

    pub fn domain_or(&self, default: DomainConfig) -> CliResult<DomainSpec> {
        self.domain.clone().unwrap_or(default).to_spec()
    }

    pub fn tol_or(&self, default: f64) -> CliResult<f64> {
        let t = self.tol.unwrap_or(default);
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::config(format!("tol must lie in (0, 1), got {t}")));
        }
        Ok(t)
    }

    pub fn center_or(&self, default: C64) -> C64 {
        self.center.map(point).unwrap_or(default)
    }

    pub fn points_or(&self, default: &[C64]) -> CliResult<Vec<C64>> {
        let v: Vec<C64> = self
            .points
            .as_ref()
            .map(|p| p.iter().map(|&q| point(q)).collect())
            .unwrap_or_else(|| default.to_vec());
        if v.is_empty() {
            return Err(CliError::config("points must not be empty"));
        }
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(CliError::config("points must be finite"));
        }
        Ok(v)
    }

    pub fn radii_or(&self, default: [f64; 2]) -> CliResult<(f64, f64)> {
        let [a, b] = self.radii.unwrap_or(default);
        if !(a > 0.0 && b > a && b.is_finite()) {
            return Err(CliError::config(format!("radii must satisfy 0 < inner < outer, got [{a}, {b}]")));
        }
        Ok((a, b))
    }

    /// Strictly decreasing positive ladder.
    pub fn ladder_or(&self, default: &[f64], min_len: usize) -> CliResult<Vec<f64>> {
        let v = self.ladder.clone().unwrap_or_else(|| default.to_vec());
        if v.len() < min_len {
            return Err(CliError::config(format!("ladder needs at least {min_len} entries")));
        }
        if v.iter().any(|x| !(*x > 0.0 && x.is_finite())) || v.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(CliError::config("ladder must be positive and strictly decreasing"));
        }
        Ok(v)
    }

    pub fn outer_or(&self, default: f64) -> CliResult<f64> {
        let r = self.outer.unwrap_or(default);
        positive("outer", r)?;
        Ok(r)
    }

    pub fn count_or(&self, value: Option<usize>, key: &str, default: usize, min: usize) -> CliResult<usize> {
        let n = value.unwrap_or(default);
        if n < min {
            return Err(CliError::config(format!("{key} must be at least {min}, got {n}")));
        }
        Ok(n)
    }

    pub fn truncation_or(&self, default: f64) -> CliResult<f64> {
        let n = self.truncation.unwrap_or(default);
        if !(n >= 1.0 && n.is_finite()) {
            return Err(CliError::config(format!("truncation must be a finite number >= 1, got {n}")));
        }
        Ok(n)
    }

    pub fn functions_or(&self, default: &[&str], known: &[&str]) -> CliResult<Vec<String>> {
        let v: Vec<String> = self
            .functions
            .clone()
            .unwrap_or_else(|| default.iter().map(|s| s.to_string()).collect());
        if v.is_empty() {
            return Err(CliError::config("functions must not be empty"));
        }
        for f in &v {
            if !known.contains(&f.as_str()) {
                return Err(CliError::config(format!("unknown function `{f}` (known: {})", known.join(", "))));
            }
        }
        Ok(v)
    }
}

pub fn point(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

fn positive(key: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(format!("{key} must be positive, got {v}")))
    }
}

fn check_resolution(n: usize) -> CliResult<()> {
    use beltrami_core::geometry::{MAX_RESOLUTION, MIN_RESOLUTION};
    if (MIN_RESOLUTION..=MAX_RESOLUTION).contains(&n) {
        Ok(())
    } else {
        Err(CliError::config(format!(
            "resolution {n} outside [{MIN_RESOLUTION}, {MAX_RESOLUTION}]"
        )))
    }
}

/// Parses a configuration text.
pub fn parse(text: &str) -> CliResult<Config> {
    toml::from_str(text).map_err(|e| CliError::config(e.to_string()))
}
