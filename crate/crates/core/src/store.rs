//! Loading word vectors from word2vec and GloVe text files, and resolving
//! words and phrases against them.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TextFormat {
    /// Header line `<count> <dim>`, then one `word v1 … vd` row per word.
    Word2vecText,
    /// Headerless `word v1 … vd` rows.
    GloveText,
    /// Word2vec if the first line is exactly two integer tokens, GloVe otherwise.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CasePolicy {
    #[default]
    Exact,
    /// Fold vocabulary keys and lookups to lowercase.
    Lowercase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PhrasePolicy {
    /// Multi-token entries must exist verbatim in the vocabulary.
    #[default]
    Error,
    /// Fall back to the arithmetic mean of the token vectors.
    AverageTokens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Resolution {
    Direct,
    AveragedTokens,
}

impl Resolution {
    pub fn as_str(self) -> &'static str {
        match self {
            Resolution::Direct => "direct",
            Resolution::AveragedTokens => "averaged-tokens",
        }
    }
}

/// A word together with a finite, nonzero vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedWord {
    surface: String,
    vector: Vec<f64>,
    resolution: Resolution,
}

impl ResolvedWord {
    pub fn new(surface: impl Into<String>, vector: Vec<f64>) -> Result<Self> {
        Self::with_resolution(surface.into(), vector, Resolution::Direct)
    }

    fn with_resolution(surface: String, vector: Vec<f64>, resolution: Resolution) -> Result<Self> {
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(surface));
        }
        if vector.iter().all(|&x| x == 0.0) {
            return Err(Error::ZeroVector(surface));
        }
        Ok(Self {
            surface,
            vector,
            resolution,
        })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn vector(&self) -> &[f64] {
        &self.vector
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }
}

/// Immutable vocabulary → vector map. Every vector has `dim` finite
/// components and is nonzero; keys are unique after case folding.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSpace {
    dim: usize,
    words: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
    source: String,
    case_policy: CasePolicy,
}

impl EmbeddingSpace {
    pub fn load(path: impl AsRef<Path>, format: TextFormat) -> Result<Self> {
        Self::load_with(path, format, CasePolicy::Exact)
    }

    pub fn load_with(path: impl AsRef<Path>, format: TextFormat, case_policy: CasePolicy) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(BufReader::new(file), format, case_policy, &path.display().to_string())
    }

    pub fn read<R: BufRead>(reader: R, format: TextFormat, case_policy: CasePolicy, source: &str) -> Result<Self> {
        let mut lines = reader
            .lines()
            .enumerate()
            .map(|(i, l)| l.map(|l| (i + 1, l)))
            .filter(|r| r.as_ref().map_or(true, |(_, l)| !l.trim().is_empty()));

        let mut builder = Builder::new(case_policy, source);
        let mut header: Option<(usize, usize)> = None;

        let first = match lines.next() {
            Some(r) => r.map_err(|e| Error::io(source, e))?,
            None => return Err(Error::EmptySet(format!("embedding file {source} has no rows"))),
        };
        let first_is_header = parse_header(&first.1);
        match format {
            TextFormat::Word2vecText => {
                let h = first_is_header.ok_or_else(|| Error::Parse {
                    line: first.0,
                    message: "expected word2vec header `<count> <dim>`".into(),
                })?;
                header = Some(h);
            }
            TextFormat::Auto if first_is_header.is_some() => header = first_is_header,
            _ => builder.push_line(first.0, &first.1)?,
        }
        if let Some((_, dim)) = header {
            if dim == 0 {
                return Err(Error::Parse {
                    line: first.0,
                    message: "header declares dimension 0".into(),
                });
            }
            builder.dim = Some(dim);
        }

        for r in lines {
            let (line_no, line) = r.map_err(|e| Error::io(source, e))?;
            builder.push_line(line_no, &line)?;
        }

        if let Some((count, _)) = header {
            if builder.words.len() != count {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("header declares {count} rows but {} were read", builder.words.len()),
                });
            }
        }
        builder.finish()
    }

    /// Builds a space from in-memory rows with the same validation as loading.
    pub fn from_entries<I, S>(entries: I, case_policy: CasePolicy) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut builder = Builder::new(case_policy, "<memory>");
        for (i, (word, vector)) in entries.into_iter().enumerate() {
            builder.push(i + 1, word.into(), vector)?;
        }
        builder.finish()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn case_policy(&self) -> CasePolicy {
        self.case_policy
    }

    /// Vocabulary in file order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        let key = self.fold(word);
        self.index.get(key.as_str()).map(|&i| self.vectors[i].as_slice())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.get(word).is_some()
    }

    fn fold(&self, word: &str) -> String {
        match self.case_policy {
            CasePolicy::Exact => word.to_string(),
            CasePolicy::Lowercase => word.to_lowercase(),
        }
    }

    /// Looks up `word`; with [`PhrasePolicy::AverageTokens`], a missing
    /// whitespace-separated phrase resolves to the mean of its token vectors.
    pub fn resolve(&self, word: &str, phrase_policy: PhrasePolicy) -> Result<ResolvedWord> {
        if word.trim().is_empty() {
            return Err(Error::InvalidParameter("cannot resolve an empty word".into()));
        }
        if let Some(v) = self.get(word) {
            return ResolvedWord::with_resolution(word.to_string(), v.to_vec(), Resolution::Direct);
        }
        let tokens: Vec<&str> = word.split_whitespace().collect();
        if tokens.len() < 2 || phrase_policy == PhrasePolicy::Error {
            return Err(Error::OutOfVocabulary(word.to_string()));
        }
        let vectors = tokens
            .iter()
            .map(|t| self.get(t).ok_or_else(|| Error::OutOfVocabulary((*t).to_string())))
            .collect::<Result<Vec<_>>>()?;
        let mean = linalg::mean(vectors);
        ResolvedWord::with_resolution(word.to_string(), mean, Resolution::AveragedTokens)
    }

    /// Resolves a word list. With `skip_missing`, out-of-vocabulary entries
    /// are dropped and returned separately instead of failing.
    pub fn resolve_all<S: AsRef<str>>(
        &self,
        words: &[S],
        phrase_policy: PhrasePolicy,
        skip_missing: bool,
    ) -> Result<(Vec<ResolvedWord>, Vec<String>)> {
        let mut resolved = Vec::with_capacity(words.len());
        let mut dropped = Vec::new();
        for w in words {
            match self.resolve(w.as_ref(), phrase_policy) {
                Ok(r) => resolved.push(r),
                Err(Error::OutOfVocabulary(_)) if skip_missing => dropped.push(w.as_ref().to_string()),
                Err(e) => return Err(e),
            }
        }
        Ok((resolved, dropped))
    }

    /// Writes every row with 17 significant digits so a reload is bit-identical.
    pub fn write_text<W: Write>(&self, mut out: W, format: TextFormat) -> std::io::Result<()> {
        if format == TextFormat::Word2vecText {
            writeln!(out, "{} {}", self.len(), self.dim)?;
        }
        for (word, vector) in self.words.iter().zip(&self.vectors) {
            write!(out, "{word}")?;
            for x in vector {
                write!(out, " {x:.16e}")?;
            }
            writeln!(out)?;
        }
        out.flush()
    }

    pub fn save(&self, path: impl AsRef<Path>, format: TextFormat) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_text(BufWriter::new(file), format)
            .map_err(|e| Error::io(path, e))
    }
}

pub fn load_text_embeddings(path: impl AsRef<Path>, format: TextFormat) -> Result<EmbeddingSpace> {
    EmbeddingSpace::load(path, format)
}

pub fn resolve(space: &EmbeddingSpace, word: &str, phrase_policy: PhrasePolicy) -> Result<ResolvedWord> {
    space.resolve(word, phrase_policy)
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let count = it.next()?.parse().ok()?;
    let dim = it.next()?.parse().ok()?;
    it.next().is_none().then_some((count, dim))
}

struct Builder {
    dim: Option<usize>,
    words: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
    case_policy: CasePolicy,
    source: String,
}

impl Builder {
    fn new(case_policy: CasePolicy, source: &str) -> Self {
        Self {
            dim: None,
            words: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
            case_policy,
            source: source.to_string(),
        }
    }

    fn push_line(&mut self, line_no: usize, line: &str) -> Result<()> {
        let mut tokens = line.split_whitespace();
        let word = tokens.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: "empty row".into(),
        })?;
        let vector = tokens
            .map(|t| {
                t.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("non-numeric component `{t}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.push(line_no, word.to_string(), vector)
    }

    fn push(&mut self, line_no: usize, word: String, vector: Vec<f64>) -> Result<()> {
        let dim = *self.dim.get_or_insert(vector.len());
        if vector.len() != dim || dim == 0 {
            return Err(Error::Parse {
                line: line_no,
                message: Error::DimensionMismatch {
                    expected: dim,
                    found: vector.len(),
                }
                .to_string(),
            });
        }
        let key = match self.case_policy {
            CasePolicy::Exact => word,
            CasePolicy::Lowercase => word.to_lowercase(),
        };
        let checked = ResolvedWord::new(key, vector)?;
        if self.index.contains_key(&checked.surface) {
            return Err(Error::DuplicateWord {
                word: checked.surface,
                line: line_no,
            });
        }
        self.index.insert(checked.surface.clone(), self.words.len());
        self.words.push(checked.surface);
        self.vectors.push(checked.vector);
        Ok(())
    }

    fn finish(self) -> Result<EmbeddingSpace> {
        let dim = match self.dim {
            Some(d) if !self.words.is_empty() => d,
            _ => return Err(Error::EmptySet(format!("embedding source {} has no rows", self.source))),
        };
        Ok(EmbeddingSpace {
            dim,
            words: self.words,
            vectors: self.vectors,
            index: self.index,
            source: self.source,
            case_policy: self.case_policy,
        })
    }
}
