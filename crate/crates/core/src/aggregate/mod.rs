//! Aggregation rules: profile of partial rankings in, complete ranking out.

mod borda;
mod closure;
mod mc4;
mod rsd;

pub use borda::{borda, borda_scores, ScoreTable};
pub use closure::RelationState;
pub use mc4::{mc4, mc4_stationary, Mc4Params, TransitionMatrix};
pub use rsd::rsd;

use serde::{Deserialize, Serialize};

/// Names of the aggregation rules, as used in configs and CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Borda,
    Rsd,
    Mc4,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::Borda, Rule::Rsd, Rule::Mc4];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Borda => "borda",
            Rule::Rsd => "rsd",
            Rule::Mc4 => "mc4",
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Rule {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "borda" => Ok(Rule::Borda),
            "rsd" => Ok(Rule::Rsd),
            "mc4" => Ok(Rule::Mc4),
            other => Err(crate::Error::InvalidParameter(format!("unknown rule {other:?}"))),
        }
    }
}
