use serde::{Deserialize, Serialize};

use crate::aggregate::Rule;
use crate::error::{Error, Result};
use crate::noise::DEFAULT_MAX_ATTEMPTS;
use crate::seed::hash64;

use super::config::{ExperimentConfig, GraphFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetName {
    Table1,
    Table2,
    Fig2,
    Fig3,
}

impl PresetName {
    pub const ALL: [PresetName; 4] =
        [PresetName::Table1, PresetName::Table2, PresetName::Fig2, PresetName::Fig3];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Table1 => "table1",
            PresetName::Table2 => "table2",
            PresetName::Fig2 => "fig2",
            PresetName::Fig3 => "fig3",
        }
    }
}

impl std::fmt::Display for PresetName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset {s:?} (expected table1, table2, fig2 or fig3)")))
    }
}

/// `(k, n)` rows of the perfect-grading comparison across graph families.
pub const TABLE1_ROWS: [(usize, usize); 6] =
    [(2, 1002), (3, 1001), (4, 1001), (6, 1023), (8, 1026), (12, 1064)];

pub const TABLE2_KS: [usize; 3] = [5, 8, 12];

/// Noise levels in the order the table lists them, noisiest first.
pub const TABLE2_NOISE: [f64; 6] = [0.5, 0.4, 0.3, 0.2, 0.1, 0.0];

/// Expands a named preset into its cells. Cell `i` gets master seed
/// `hash64(seed, i)`, so every cell has an independent stream family.
pub fn preset(name: PresetName, seed: u64) -> Vec<ExperimentConfig> {
    let mut cells: Vec<(GraphFamily, usize, usize, f64, Vec<Rule>, usize)> = Vec::new();
    let pair = || vec![Rule::Borda, Rule::Rsd];
    match name {
        PresetName::Table1 => {
            for &(k, n) in &TABLE1_ROWS {
                for family in [GraphFamily::Random, GraphFamily::Girth6, GraphFamily::Kkk] {
                    cells.push((family, n, k, 0.0, pair(), 50));
                }
            }
        }
        PresetName::Table2 => {
            for &k in &TABLE2_KS {
                for &noise in &TABLE2_NOISE {
                    cells.push((GraphFamily::Random, 1000, k, noise, Rule::ALL.to_vec(), 50));
                }
            }
        }
        PresetName::Fig2 => {
            for k in 2..=25 {
                cells.push((GraphFamily::Random, 1000, k, 0.0, pair(), 50));
            }
        }
        PresetName::Fig3 => {
            for noise in [0.5, 0.0] {
                cells.push((GraphFamily::Random, 1000, 8, noise, pair(), 500));
            }
        }
    }
    cells
        .into_iter()
        .enumerate()
        .map(|(i, (graph_family, n, k, noise_level, rules, trials))| ExperimentConfig {
            experiment: name.to_string(),
            graph_family,
            n,
            k,
            noise_level,
            rules,
            trials,
            master_seed: hash64(seed, i as u64),
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        })
        .collect()
}

/// Cells where the rejection sampler is expected to give up under the default
/// attempt budget: bundles of 12 at noise 0.3 or more.
pub fn potentially_infeasible(config: &ExperimentConfig) -> bool {
    config.k >= 12 && config.noise_level >= 0.3 - 1e-9
}
