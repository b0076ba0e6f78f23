use serde::{Deserialize, Serialize};

use crate::aggregate::Rule;
use crate::bundles::is_prime;
use crate::error::{Error, Result};
use crate::noise::DEFAULT_MAX_ATTEMPTS;

use super::preset::{preset, PresetName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFamily {
    Random,
    Girth6,
    Kkk,
}

impl GraphFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphFamily::Random => "random",
            GraphFamily::Girth6 => "girth6",
            GraphFamily::Kkk => "kkk",
        }
    }
}

impl std::fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(GraphFamily::Random),
            "girth6" => Ok(GraphFamily::Girth6),
            "kkk" => Ok(GraphFamily::Kkk),
            other => Err(Error::InvalidParameter(format!("unknown graph family {other:?}"))),
        }
    }
}

fn default_experiment() -> String {
    "custom".to_string()
}

fn default_max_attempts() -> u64 {
    DEFAULT_MAX_ATTEMPTS
}

/// One experiment cell: a graph shape, a noise level, the rules to apply and
/// how many independent trials to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_experiment")]
    pub experiment: String,
    pub graph_family: GraphFamily,
    pub n: usize,
    pub k: usize,
    pub noise_level: f64,
    pub rules: Vec<Rule>,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.noise_level) {
            return Err(Error::Config(format!("noise_level {} outside [0, 1]", self.noise_level)));
        }
        if self.rules.is_empty() {
            return Err(Error::Config("no aggregation rules given".into()));
        }
        if self.k == 0 || self.k >= self.n {
            return Err(Error::Config(format!("need 1 <= k < n, got n={}, k={}", self.n, self.k)));
        }
        if self.max_attempts == 0 {
            return Err(Error::Config("max_attempts must be positive".into()));
        }
        if self.graph_family == GraphFamily::Girth6 {
            let p = self.k - 1;
            if p != 1 && !is_prime(p) {
                return Err(Error::Config(format!("girth6 needs k = p+1 with p prime or 1, got k={}", self.k)));
            }
            let size = p * p + p + 1;
            if self.n % size != 0 {
                return Err(Error::Config(format!("girth6 with k={} needs n divisible by {size}", self.k)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetRef {
    pub preset: PresetName,
    pub master_seed: u64,
}

/// What a `run --config` file may contain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigFile {
    Preset(PresetRef),
    Single(ExperimentConfig),
    Many(Vec<ExperimentConfig>),
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn into_configs(self) -> Result<Vec<ExperimentConfig>> {
        let configs = match self {
            ConfigFile::Preset(p) => preset(p.preset, p.master_seed),
            ConfigFile::Single(c) => vec![c],
            ConfigFile::Many(cs) => cs,
        };
        for c in &configs {
            c.validate()?;
        }
        Ok(configs)
    }
}
