//! Experiment configuration and its flat `key=value` file format.
//!
//! ```text
//! m=100000
//! pi1=0.1
//! mu=2
//! procedure=bh
//! level=
//! gamma=0.1
//! trials=100
//! seed=42
//! m_schedule=1000,10000,100000
//! ```
//!
//! `level` parameterizes `alpha` and `bonferroni`, `gamma` parameterizes
//! `bh` and `oracle`; the other one stays empty. Blank lines and `#`
//! comments are ignored when parsing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{HypothesisField, ModelParams};
use crate::probability::Probability;
use crate::procedures::{
    alpha_threshold, benjamini_hochberg, bonferroni, oracle_threshold, ThresholdDecision,
};

pub const CONFIG_KEYS: [&str; 9] =
    ["m", "pi1", "mu", "procedure", "level", "gamma", "trials", "seed", "m_schedule"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProcedureSpec {
    Alpha(Probability<f64>),
    Bonferroni(Probability<f64>),
    Bh(Probability<f64>),
    Oracle(Probability<f64>),
}

impl ProcedureSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProcedureSpec::Alpha(_) => "alpha",
            ProcedureSpec::Bonferroni(_) => "bonferroni",
            ProcedureSpec::Bh(_) => "bh",
            ProcedureSpec::Oracle(_) => "oracle",
        }
    }

    /// The level or FDR target.
    pub fn param(&self) -> Probability<f64> {
        match *self {
            ProcedureSpec::Alpha(p)
            | ProcedureSpec::Bonferroni(p)
            | ProcedureSpec::Bh(p)
            | ProcedureSpec::Oracle(p) => p,
        }
    }

    /// Whether the threshold is fixed in advance rather than data driven.
    pub fn fixed_threshold(&self, m: usize) -> Option<Probability<f64>> {
        match *self {
            ProcedureSpec::Alpha(a) => Some(a),
            ProcedureSpec::Bonferroni(l) => Some(Probability::new_unchecked(l.value() / m as f64)),
            ProcedureSpec::Bh(_) | ProcedureSpec::Oracle(_) => None,
        }
    }

    fn uses_gamma(&self) -> bool {
        matches!(self, ProcedureSpec::Bh(_) | ProcedureSpec::Oracle(_))
    }

    pub fn apply(&self, field: &HypothesisField<f64>) -> Result<ThresholdDecision<f64>> {
        let p = field.p_values();
        match *self {
            ProcedureSpec::Alpha(a) => Ok(alpha_threshold(p, a)),
            ProcedureSpec::Bonferroni(l) => bonferroni(p, l),
            ProcedureSpec::Bh(g) => benjamini_hochberg(p, g),
            ProcedureSpec::Oracle(g) => oracle_threshold(p, field.statuses(), g),
        }
    }

    fn build(name: &str, level: Option<f64>, gamma: Option<f64>) -> Result<Self> {
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::Config(format!("procedure `{name}` needs `{key}`")))
                .and_then(|x| Probability::new(x).map_err(|e| Error::Config(format!("{key}: {e}"))))
        };
        let spec = match name {
            "alpha" => ProcedureSpec::Alpha(need(level, "level")?),
            "bonferroni" => ProcedureSpec::Bonferroni(need(level, "level")?),
            "bh" => ProcedureSpec::Bh(need(gamma, "gamma")?),
            "oracle" => ProcedureSpec::Oracle(need(gamma, "gamma")?),
            other => return Err(Error::Config(format!("unknown procedure `{other}`"))),
        };
        let stray = if spec.uses_gamma() { level.map(|_| "level") } else { gamma.map(|_| "gamma") };
        if let Some(key) = stray {
            return Err(Error::Config(format!("`{key}` is not used by procedure `{name}`")));
        }
        match spec {
            ProcedureSpec::Bh(g) | ProcedureSpec::Oracle(g)
                if g.value() <= 0.0 || g.value() >= 1.0 =>
            {
                Err(Error::Config(format!("gamma must lie in (0, 1), got {g}")))
            }
            ProcedureSpec::Bonferroni(l) if l.value() <= 0.0 => {
                Err(Error::Config("bonferroni level must be positive".into()))
            }
            _ => Ok(spec),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelParams<f64>,
    pub procedure: ProcedureSpec,
    pub trials: u64,
    pub master_seed: u64,
    pub m_schedule: Option<Vec<usize>>,
}

impl ExperimentConfig {
    pub fn new(
        model: ModelParams<f64>,
        procedure: ProcedureSpec,
        trials: u64,
        master_seed: u64,
    ) -> Result<Self> {
        let config = ExperimentConfig { model, procedure, trials, master_seed, m_schedule: None };
        config.validate()?;
        Ok(config)
    }

    pub fn with_schedule(mut self, schedule: Vec<usize>) -> Result<Self> {
        self.m_schedule = Some(schedule);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if let Some(schedule) = &self.m_schedule {
            if schedule.is_empty() {
                return Err(Error::Config("m_schedule is empty".into()));
            }
            if schedule.contains(&0) {
                return Err(Error::Config("m_schedule entries must be positive".into()));
            }
            if schedule.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("m_schedule must be strictly increasing".into()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let param = self.procedure.param().value();
        let (level, gamma) = if self.procedure.uses_gamma() {
            (String::new(), param.to_string())
        } else {
            (param.to_string(), String::new())
        };
        let schedule = self
            .m_schedule
            .as_ref()
            .map(|s| s.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","))
            .unwrap_or_default();
        writeln!(f, "m={}", self.model.m())?;
        writeln!(f, "pi1={}", self.model.pi1().value())?;
        writeln!(f, "mu={}", self.model.mu().value())?;
        writeln!(f, "procedure={}", self.procedure.name())?;
        writeln!(f, "level={level}")?;
        writeln!(f, "gamma={gamma}")?;
        writeln!(f, "trials={}", self.trials)?;
        writeln!(f, "seed={}", self.master_seed)?;
        writeln!(f, "m_schedule={schedule}")
    }
}

fn parse_value<V: FromStr>(key: &str, raw: &str) -> Result<V>
where
    V::Err: fmt::Display,
{
    raw.parse().map_err(|e| Error::Config(format!("`{key}`: cannot parse `{raw}`: {e}")))
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key=value`", lineno + 1))
            })?;
            let key = key.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if entries.insert(key, value.trim()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }

        let get = |key: &str| entries.get(key).copied().filter(|v| !v.is_empty());
        let required = |key: &str| get(key).ok_or_else(|| Error::Config(format!("missing `{key}`")));

        let m: usize = parse_value("m", required("m")?)?;
        let pi1: f64 = parse_value("pi1", required("pi1")?)?;
        let mu: f64 = parse_value("mu", required("mu")?)?;
        let model = ModelParams::new(m, pi1, mu).map_err(|e| Error::Config(e.to_string()))?;

        let level = get("level").map(|v| parse_value::<f64>("level", v)).transpose()?;
        let gamma = get("gamma").map(|v| parse_value::<f64>("gamma", v)).transpose()?;
        let procedure = ProcedureSpec::build(required("procedure")?, level, gamma)?;

        let trials = parse_value("trials", required("trials")?)?;
        let master_seed = parse_value("seed", required("seed")?)?;
        let m_schedule = get("m_schedule")
            .map(|raw| {
                raw.split(',').map(|m| parse_value::<usize>("m_schedule", m.trim())).collect()
            })
            .transpose()?;

        let config = ExperimentConfig { model, procedure, trials, master_seed, m_schedule };
        config.validate()?;
        Ok(config)
    }
}
