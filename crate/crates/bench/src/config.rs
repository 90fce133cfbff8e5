//! Experiment configuration read from TOML.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSource,
    #[serde(rename = "algorithm")]
    pub algorithms: Vec<AlgorithmSpec>,
    pub iterations: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub reference: ReferenceMode,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_seeds() -> Vec<u64> {
    (0..5).collect()
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

fn default_radius() -> f64 {
    1.0
}

fn default_mu() -> f64 {
    0.005
}

fn default_sigma_a() -> f64 {
    1.0
}

fn default_noise_var() -> f64 {
    1e-3
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProblemSource {
    SyntheticLs {
        n: usize,
        d: usize,
        #[serde(default = "default_sigma_a")]
        sigma_a: f64,
        #[serde(default = "default_noise_var")]
        noise_var: f64,
        #[serde(default = "default_radius")]
        radius: f64,
        #[serde(default)]
        seed: u64,
        #[serde(default = "yes")]
        constrained: bool,
    },
    Libsvm {
        path: PathBuf,
        #[serde(default = "default_mu")]
        mu: f64,
        #[serde(default = "default_radius")]
        radius: f64,
        dim: Option<usize>,
        #[serde(default = "yes")]
        constrained: bool,
    },
}

impl ProblemSource {
    pub fn radius(&self) -> f64 {
        match self {
            ProblemSource::SyntheticLs { radius, .. } | ProblemSource::Libsvm { radius, .. } => *radius,
        }
    }

    pub fn constrained(&self) -> bool {
        match self {
            ProblemSource::SyntheticLs { constrained, .. }
            | ProblemSource::Libsvm { constrained, .. } => *constrained,
        }
    }

    /// Parses `synthetic:n=500,d=100,...` using the TOML field names.
    pub fn from_spec_string(spec: &str) -> Result<Self> {
        let body = spec
            .strip_prefix("synthetic:")
            .with_context(|| format!("expected `synthetic:key=value,...`, got {spec:?}"))?;
        let mut table = toml::Table::new();
        table.insert("source".into(), "synthetic-ls".into());
        for pair in body.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .with_context(|| format!("expected key=value, got {pair:?}"))?;
            let value = format!("v = {}", v.trim())
                .parse::<toml::Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .with_context(|| format!("bad value for {k}: {v:?}"))?;
            table.insert(k.trim().to_string(), value);
        }
        let source: ProblemSource = toml::Value::Table(table)
            .try_into()
            .context("invalid synthetic problem")?;
        source.validate()?;
        Ok(source)
    }

    fn validate(&self) -> Result<()> {
        match self {
            ProblemSource::SyntheticLs { n, d, sigma_a, noise_var, radius, .. } => {
                ensure!(*n > 0 && *d > 0, "synthetic problem needs n > 0 and d > 0");
                ensure!(*sigma_a > 0.0 && sigma_a.is_finite(), "sigma_a must be positive");
                ensure!(*noise_var >= 0.0 && noise_var.is_finite(), "noise_var must be non-negative");
                ensure!(*radius > 0.0 && radius.is_finite(), "radius must be positive");
            }
            ProblemSource::Libsvm { mu, radius, .. } => {
                ensure!(*mu >= 0.0 && mu.is_finite(), "mu must be non-negative");
                ensure!(*radius > 0.0 && radius.is_finite(), "radius must be positive");
            }
        }
        Ok(())
    }
}

/// How the reference optimum is obtained.
#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceMode {
    #[default]
    ClosedForm,
    /// Multiplier applied to the experiment horizon.
    LongRun(usize),
}

impl std::str::FromStr for ReferenceMode {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "closed-form" {
            return Ok(ReferenceMode::ClosedForm);
        }
        if let Some(m) = s.strip_prefix("long-run:") {
            let m: usize = m.parse().with_context(|| format!("bad multiplier in {s:?}"))?;
            let mode = ReferenceMode::LongRun(m);
            mode.validate()?;
            return Ok(mode);
        }
        bail!("reference mode must be `closed-form` or `long-run:<m>`, got {s:?}")
    }
}

impl ReferenceMode {
    fn validate(&self) -> Result<()> {
        if let ReferenceMode::LongRun(m) = self {
            ensure!(*m >= 10, "long-run multiplier must be at least 10, got {m}");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Hash)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    OptimisticO2b,
    StronglyConvexO2b,
    Nag,
    Gd,
    HeavyBall,
    StabilizedUnixgrad,
    StabilizedJrgs,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum StepChoice {
    Constant,
    NagEquivalent,
    AdagradTwoGrad,
    AdagradOneGrad,
    Adaptive,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleChoice {
    Linear,
    LinearZeroLast,
    Unit,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum FormChoice {
    Proof,
    Literal,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    /// Label used in output file names.
    pub name: String,
    pub method: Method,
    pub step: Option<StepChoice>,
    pub schedule: Option<ScheduleChoice>,
    pub eta: Option<f64>,
    pub momentum: Option<f64>,
    pub form: Option<FormChoice>,
    pub diameter: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).context("invalid configuration")?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file; relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let mut config = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let ProblemSource::Libsvm { path: data, .. } = &mut config.problem {
            if data.is_relative() {
                *data = base.join(&*data);
            }
        }
        if config.output_dir.is_relative() {
            config.output_dir = base.join(&config.output_dir);
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.iterations >= 2, "iterations must be at least 2, got {}", self.iterations);
        ensure!(!self.seeds.is_empty(), "at least one seed is required");
        ensure!(!self.algorithms.is_empty(), "at least one [[algorithm]] is required");
        self.reference.validate()?;
        self.problem.validate()?;
        let mut seen = HashSet::new();
        for a in &self.algorithms {
            ensure!(
                !a.name.is_empty()
                    && a.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_'),
                "algorithm name {:?} must be non-empty and use only [A-Za-z0-9_-]",
                a.name
            );
            ensure!(seen.insert(a.name.as_str()), "duplicate algorithm name {:?}", a.name);
            for (what, v) in [("eta", a.eta), ("momentum", a.momentum), ("diameter", a.diameter)] {
                if let Some(v) = v {
                    ensure!(v.is_finite() && v > 0.0, "{what} for {:?} must be positive", a.name);
                }
            }
        }
        let mut seeds = HashSet::new();
        for s in &self.seeds {
            ensure!(seeds.insert(s), "duplicate seed {s}");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
iterations = 100
seeds = [1, 2]
reference = { long-run = 20 }

[problem]
source = "synthetic-ls"
n = 50
d = 10

[[algorithm]]
name = "o2b"
method = "optimistic-o2b"
step = "adagrad-one-grad"
"#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_toml_str(BASIC).unwrap();
        assert_eq!(c.iterations, 100);
        assert_eq!(c.reference, ReferenceMode::LongRun(20));
        assert_eq!(c.problem.radius(), 1.0);
        assert!(c.problem.constrained());
        assert_eq!(c.algorithms[0].step, Some(StepChoice::AdagradOneGrad));
        assert_eq!(c.output_dir, PathBuf::from("results"));
    }

    #[test]
    fn default_reference_and_seeds() {
        let text = BASIC.replace("seeds = [1, 2]\n", "").replace("reference = { long-run = 20 }\n", "");
        let c = ExperimentConfig::from_toml_str(&text).unwrap();
        assert_eq!(c.seeds, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.reference, ReferenceMode::ClosedForm);
    }

    #[test]
    fn rejects_bad_values() {
        for (from, to) in [
            ("iterations = 100", "iterations = 1"),
            ("long-run = 20", "long-run = 5"),
            ("seeds = [1, 2]", "seeds = []"),
            ("seeds = [1, 2]", "seeds = [3, 3]"),
            ("name = \"o2b\"", "name = \"a/b\""),
            ("method = \"optimistic-o2b\"", "method = \"adam\""),
            ("n = 50", "n = 0"),
            ("d = 10", "d = 10\nbogus = 1"),
        ] {
            let text = BASIC.replace(from, to);
            assert!(ExperimentConfig::from_toml_str(&text).is_err(), "{to}");
        }
    }

    #[test]
    fn synthetic_spec_string() {
        let p = ProblemSource::from_spec_string("synthetic:n=20,d=4,seed=3,constrained=false").unwrap();
        assert_eq!(
            p,
            ProblemSource::SyntheticLs {
                n: 20,
                d: 4,
                sigma_a: 1.0,
                noise_var: 1e-3,
                radius: 1.0,
                seed: 3,
                constrained: false
            }
        );
        assert!(ProblemSource::from_spec_string("synthetic:n=20").is_err());
        assert!(ProblemSource::from_spec_string("n=20,d=4").is_err());
    }

    #[test]
    fn reference_mode_strings() {
        assert_eq!("closed-form".parse::<ReferenceMode>().unwrap(), ReferenceMode::ClosedForm);
        assert_eq!("long-run:12".parse::<ReferenceMode>().unwrap(), ReferenceMode::LongRun(12));
        assert!("long-run:3".parse::<ReferenceMode>().is_err());
        assert!("exact".parse::<ReferenceMode>().is_err());
    }
}
