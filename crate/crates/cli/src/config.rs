use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Verification suites, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Recursion,
    Duality,
    Poles,
    Residues,
    Integral,
    Kac,
    Gaiotto,
    Agt,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Recursion,
        Suite::Duality,
        Suite::Poles,
        Suite::Residues,
        Suite::Integral,
        Suite::Kac,
        Suite::Gaiotto,
        Suite::Agt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Recursion => "recursion",
            Suite::Duality => "duality",
            Suite::Poles => "poles",
            Suite::Residues => "residues",
            Suite::Integral => "integral",
            Suite::Kac => "kac",
            Suite::Gaiotto => "gaiotto",
            Suite::Agt => "agt",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| ConfigError(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub max_level: usize,
    pub num_param_points: usize,
    pub rng_seed: u64,
    pub suites: Vec<Suite>,
    pub output_path: String,
    pub format: Format,
    /// Adds per-record wall times; reports are then no longer reproducible.
    #[serde(default)]
    pub timings: bool,
}

impl CampaignConfig {
    /// Validates raw command-line values. Suites are deduplicated and sorted.
    pub fn new(
        max_level: i64,
        num_param_points: i64,
        rng_seed: u64,
        suites: &[Suite],
        output_path: impl Into<String>,
        format: Format,
    ) -> Result<Self, ConfigError> {
        let max_level = usize::try_from(max_level)
            .map_err(|_| ConfigError(format!("max level must be non-negative, got {max_level}")))?;
        let num_param_points = usize::try_from(num_param_points)
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| ConfigError(format!("need at least one parameter point, got {num_param_points}")))?;
        let suites: Vec<Suite> = suites.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if suites.is_empty() {
            return Err(ConfigError("suite list is empty".into()));
        }
        let output_path = output_path.into();
        if output_path.is_empty() {
            return Err(ConfigError("output path is empty".into()));
        }
        Ok(Self {
            max_level,
            num_param_points,
            rng_seed,
            suites,
            output_path,
            format,
            timings: false,
        })
    }
}
