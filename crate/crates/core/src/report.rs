//! Serializable results of `embias score`, plus the word-score CSV.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::direct_bias::SubspaceConstruction;
use crate::error::{Error, Result};
use crate::same::SameReport;
use crate::weat::PValueMethod;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingInfo {
    pub source: String,
    pub dim: usize,
    pub vocabulary: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedWord {
    pub list: String,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordScore {
    pub target_set: String,
    pub word: String,
    pub metric: String,
    pub value: f64,
    pub resolution: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeatReport {
    pub x: String,
    pub y: String,
    pub attribute_a: String,
    pub attribute_b: String,
    pub effect_size: f64,
    pub test_statistic: f64,
    pub p_value: Option<f64>,
    pub p_method: Option<PValueMethod>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionInfo {
    pub construction: SubspaceConstruction,
    pub defining_pairs: Vec<(String, String)>,
    pub explained_variance: Vec<f64>,
    pub c: f64,
}

/// Set-level scores of one target list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub name: String,
    pub words: usize,
    /// Metric name → set score (`mac`, `direct-bias`, `same`, and for two
    /// attribute sets `same-skew` and `same-stereotype`).
    pub scores: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub same: Option<SameReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub embedding: EmbeddingInfo,
    pub targets: Vec<TargetReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weat: Option<WeatReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct_bias_direction: Option<DirectionInfo>,
    pub word_scores: Vec<WordScore>,
    pub dropped_words: Vec<DroppedWord>,
    /// Only filled when timing is requested, so reports stay byte-identical
    /// across reruns by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl BiasReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// `word,metric,value,resolution`, one row per word score.
    pub fn word_scores_csv(&self) -> String {
        let mut out = String::from("word,metric,value,resolution\n");
        for s in &self.word_scores {
            out.push_str(&format!("{},{},{},{}\n", csv_field(&s.word), s.metric, s.value, s.resolution));
        }
        out
    }

    pub fn target(&self, name: &str) -> Option<&TargetReport> {
        self.targets.iter().find(|t| t.name == name)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}
