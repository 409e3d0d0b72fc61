//! TOML configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vapokit_core::grpo::TrainConfig;
use vapokit_core::reward::{EntityMatch, MalformedPolicy, RewardConfig, RewardWeights, VaVariant};

use crate::error::{Error, Result};
use crate::io::read_to_string;

fn parse_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    toml::from_str(&read_to_string(path)?).map_err(|e| Error::Config {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Reads `lambda_format`, `lambda_ocr`, `lambda_asr`, `lambda_va`; missing
/// keys default to 1.
pub fn load_weights(path: &Path) -> Result<RewardWeights> {
    let w: RewardWeights = parse_toml(path)?;
    Ok(w.validated()?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    /// Sample file, relative to the config file.
    pub samples: PathBuf,
    #[serde(default = "defaults::steps")]
    pub steps: usize,
    #[serde(default = "defaults::group_size")]
    pub group_size: usize,
    #[serde(default = "defaults::lr")]
    pub lr: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub weights: RewardWeights,
    #[serde(default)]
    pub entity_match: EntityMatch,
    #[serde(default)]
    pub va_variant: VaVariant,
    #[serde(default)]
    pub malformed: MalformedPolicy,
}

mod defaults {
    pub fn steps() -> usize {
        2000
    }
    pub fn group_size() -> usize {
        8
    }
    pub fn lr() -> f64 {
        0.1
    }
}

impl SimulateConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let mut c: SimulateConfig = parse_toml(path)?;
        if c.samples.is_relative() {
            let base = path.parent().unwrap_or(Path::new("."));
            c.samples = base.join(&c.samples);
        }
        c.weights = c.weights.validated()?;
        Ok(c)
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            steps: self.steps,
            group_size: self.group_size,
            lr: self.lr,
            seed: self.seed,
            reward: RewardConfig {
                weights: self.weights,
                entity_match: self.entity_match,
                va_variant: self.va_variant,
                malformed: self.malformed,
            },
        }
    }
}
