//! One TOML config drives every pipeline. Every field has a default, so an
//! empty file is valid and `Config::default_toml()` documents the schema.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusConfig, SyntheticSpec};
use crate::error::TrainError;
use crate::nncore::sha256_bytes;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    /// Embedding and feature dimension.
    pub d: usize,
    /// Hidden width of the attention scorers.
    pub k: usize,
    /// Content tokens kept per record.
    pub max_content_len: usize,
    /// Comment tokens kept per record (all comments concatenated).
    pub max_comment_len: usize,
    /// Tokens rarer than this in the train split map to UNK.
    pub min_count: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            d: 32,
            k: 16,
            max_content_len: 64,
            max_comment_len: 128,
            min_count: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainingConfig {
    pub lr: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Epochs without a new best validation macro F1 before stopping.
    pub patience: usize,
    /// Distillation weight for student training.
    pub alpha: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            lr: 1e-3,
            batch_size: 16,
            max_epochs: 50,
            patience: 5,
            alpha: 0.4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct Config {
    pub seed: u64,
    pub model: ModelConfig,
    pub training: TrainingConfig,
    pub corpus: CorpusConfig,
    pub synthetic: SyntheticSpec,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, TrainError> {
        let text = fs::read_to_string(path)
            .map_err(|e| TrainError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| TrainError::Config(format!("bad config {}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Schema documentation: the full default config.
    pub fn default_toml() -> String {
        Config::default().to_toml()
    }

    /// Canonical hash over the serialized form, so two differently formatted
    /// files with equal values produce the same checkpoint fingerprint.
    pub fn hash(&self) -> [u8; 32] {
        sha256_bytes(self.to_toml().as_bytes())
    }
}
