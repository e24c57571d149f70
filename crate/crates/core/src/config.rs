//! Run configuration for `embias score`: one JSON document naming the
//! embedding file, the word lists, the metrics and their options.
//!
//! ```json
//! {
//!   "embeddings": { "path": "vectors.txt", "format": "auto" },
//!   "attribute_sets": [
//!     { "name": "male", "words": ["he", "man"] },
//!     { "name": "female", "words_file": "female.txt" }
//!   ],
//!   "targets": [{ "name": "occupations", "words_file": "occupations.txt" }],
//!   "metrics": ["same", "mac"]
//! }
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::same::StereotypeMode;
use crate::store::{CasePolicy, PhrasePolicy, TextFormat};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingsConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: TextFormat,
}

/// A named word list given inline (`words`) or as a file with one word per
/// line (`words_file`; blank lines and `#` comments are skipped). With
/// `column`, each line is split on whitespace and that field (0-based) is
/// taken, so one file of pairs can feed two attribute sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordList {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub words: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub words_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl WordList {
    pub fn inline(name: impl Into<String>, words: &[&str]) -> Self {
        Self {
            name: name.into(),
            words: Some(words.iter().map(|w| w.to_string()).collect()),
            words_file: None,
            column: None,
        }
    }

    pub fn file(name: impl Into<String>, path: impl Into<PathBuf>, column: Option<usize>) -> Self {
        Self {
            name: name.into(),
            words: None,
            words_file: Some(path.into()),
            column,
        }
    }

    /// The words, reading `words_file` relative to `base_dir`.
    pub fn load(&self, base_dir: &Path) -> Result<Vec<String>> {
        match (&self.words, &self.words_file) {
            (Some(words), None) => Ok(words.clone()),
            (None, Some(file)) => {
                let path = base_dir.join(file);
                let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                let lines = parse_word_list(&text);
                let Some(col) = self.column else { return Ok(lines) };
                lines
                    .iter()
                    .map(|l| {
                        l.split_whitespace().nth(col).map(str::to_string).ok_or_else(|| {
                            Error::Config(vec![format!(
                                "word list `{}`: line `{l}` in {} has no column {col}",
                                self.name,
                                path.display()
                            )])
                        })
                    })
                    .collect()
            }
            _ => Err(Error::Config(vec![format!(
                "word list `{}` needs exactly one of `words` or `words_file`",
                self.name
            )])),
        }
    }
}

/// One word per line; blank lines and lines starting with `#` are skipped.
pub fn parse_word_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

/// Names of the two target lists compared by WEAT.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeatPartitionConfig {
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Weat,
    Mac,
    DirectBias,
    Same,
    SameSkew,
    SameStereotype,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Weat => "weat",
            Metric::Mac => "mac",
            Metric::DirectBias => "direct-bias",
            Metric::Same => "same",
            Metric::SameSkew => "same-skew",
            Metric::SameStereotype => "same-stereotype",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum PValueOption {
    #[default]
    Off,
    Exact,
    MonteCarlo { iterations: u64 },
}

fn default_c() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Direct Bias strictness exponent.
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub stereotype_mode: StereotypeMode,
    #[serde(default)]
    pub p_value: PValueOption,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub skip_missing: bool,
    #[serde(default)]
    pub phrase_policy: PhrasePolicy,
    #[serde(default)]
    pub case_policy: CasePolicy,
    /// Also contrast every attribute set with the union of the others.
    #[serde(default)]
    pub one_vs_rest: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            c: default_c(),
            stereotype_mode: StereotypeMode::default(),
            p_value: PValueOption::default(),
            seed: 0,
            skip_missing: false,
            phrase_policy: PhrasePolicy::default(),
            case_policy: CasePolicy::default(),
            one_vs_rest: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub embeddings: EmbeddingsConfig,
    pub attribute_sets: Vec<WordList>,
    pub targets: Vec<WordList>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weat_partition: Option<WeatPartitionConfig>,
    /// Word pairs for the Direct Bias direction. Without them the members of
    /// the first two attribute sets are paired by position.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub defining_pairs: Vec<(String, String)>,
    pub metrics: Vec<Metric>,
    #[serde(default)]
    pub options: Options,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(vec![format!("invalid config: {e}")]))
    }

    /// Reads and validates a config file; returns it with the directory
    /// relative paths resolve against.
    pub fn load(path: impl AsRef<Path>) -> Result<(Self, PathBuf)> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config = Self::from_json(&text)?;
        config.validate()?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((config, base))
    }

    pub fn requests(&self, metric: Metric) -> bool {
        self.metrics.contains(&metric)
    }

    /// Checks every precondition that does not need the embeddings and
    /// reports all problems at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();

        let check_lists = |kind: &str, lists: &[WordList], problems: &mut Vec<String>| {
            let mut seen = HashSet::new();
            for l in lists {
                if !seen.insert(l.name.as_str()) {
                    problems.push(format!("{kind}: duplicate name `{}`", l.name));
                }
                match (&l.words, &l.words_file) {
                    (Some(w), None) if w.is_empty() => problems.push(format!("{kind} `{}`: empty word list", l.name)),
                    (Some(_), None) if l.column.is_some() => {
                        problems.push(format!("{kind} `{}`: `column` needs `words_file`", l.name))
                    }
                    (Some(_), None) | (None, Some(_)) => {}
                    _ => problems.push(format!(
                        "{kind} `{}`: needs exactly one of `words` or `words_file`",
                        l.name
                    )),
                }
            }
        };
        check_lists("attribute_sets", &self.attribute_sets, &mut problems);
        check_lists("targets", &self.targets, &mut problems);

        if self.attribute_sets.len() < 2 {
            problems.push(format!(
                "attribute_sets: at least 2 sets are required, got {}",
                self.attribute_sets.len()
            ));
        }
        if self.targets.is_empty() {
            problems.push("targets: at least one target list is required".into());
        }
        if self.metrics.is_empty() {
            problems.push("metrics: no metric requested".into());
        }

        if self.requests(Metric::Weat) {
            match &self.weat_partition {
                None => problems.push("weat_partition: required when metric `weat` is requested".into()),
                Some(p) => {
                    for name in [&p.x, &p.y] {
                        if !self.targets.iter().any(|t| &t.name == name) {
                            problems.push(format!("weat_partition: no target list named `{name}`"));
                        }
                    }
                    if p.x == p.y {
                        problems.push("weat_partition: x and y must be different target lists".into());
                    }
                }
            }
        }
        if self.requests(Metric::DirectBias) {
            if self.defining_pairs.is_empty() && self.attribute_sets.len() < 2 {
                problems.push("direct-bias: needs defining_pairs or two attribute sets".into());
            }
            if !(self.options.c >= 0.0) || !self.options.c.is_finite() {
                problems.push(format!("options.c: must be ≥ 0, got {}", self.options.c));
            }
        }
        if let PValueOption::MonteCarlo { iterations: 0 } = self.options.p_value {
            problems.push("options.p_value: monte-carlo needs iterations > 0".into());
        }

        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> RunConfig {
        RunConfig::from_json(
            r#"{
                "embeddings": {"path": "v.txt"},
                "attribute_sets": [{"name": "A", "words": ["a"]}, {"name": "B", "words": ["b"]}],
                "targets": [{"name": "T", "words": ["t"]}],
                "metrics": ["same"]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn minimal_config_is_valid_with_defaults() {
        let c = minimal();
        c.validate().unwrap();
        assert_eq!(c.options.c, 1.0);
        assert_eq!(c.options.p_value, PValueOption::Off);
        assert_eq!(c.embeddings.format, TextFormat::Auto);
    }

    #[test]
    fn weat_without_partition_names_the_field() {
        let mut c = minimal();
        c.metrics.push(Metric::Weat);
        let Err(Error::Config(p)) = c.validate() else { panic!("expected config error") };
        assert!(p.iter().any(|m| m.contains("weat_partition")));
    }

    #[test]
    fn problems_are_collected_not_fail_fast() {
        let mut c = minimal();
        c.attribute_sets.truncate(1);
        c.metrics = vec![Metric::Weat, Metric::DirectBias];
        c.options.c = -1.0;
        let Err(Error::Config(p)) = c.validate() else { panic!("expected config error") };
        assert!(p.len() >= 3, "{p:?}");
    }

    #[test]
    fn unknown_fields_and_metrics_are_rejected() {
        assert!(RunConfig::from_json(r#"{"embeddings": {"path": "v"}, "bogus": 1}"#).is_err());
        let text = r#"{"embeddings": {"path": "v"}, "attribute_sets": [], "targets": [], "metrics": ["nope"]}"#;
        assert!(RunConfig::from_json(text).is_err());
    }

    #[test]
    fn p_value_spellings() {
        let p: PValueOption = serde_json::from_str(r#"{"method": "monte-carlo", "iterations": 100}"#).unwrap();
        assert_eq!(p, PValueOption::MonteCarlo { iterations: 100 });
        let p: PValueOption = serde_json::from_str(r#"{"method": "exact"}"#).unwrap();
        assert_eq!(p, PValueOption::Exact);
    }

    #[test]
    fn word_list_files() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("w.txt"), "# comment\nnurse\n\n  teacher \n").unwrap();
        let l = WordList::file("T", "w.txt", None);
        assert_eq!(l.load(dir.path()).unwrap(), vec!["nurse", "teacher"]);
        fs::write(dir.path().join("p.txt"), "he she\nman woman\n").unwrap();
        assert_eq!(WordList::file("F", "p.txt", Some(1)).load(dir.path()).unwrap(), vec!["she", "woman"]);
        assert!(WordList::file("F", "p.txt", Some(2)).load(dir.path()).is_err());
    }
}
