//! Cosine-based bias metrics for static word embeddings.
//!
//! The crate implements four families of bias scores over one shared cosine
//! kernel:
//!
//! * [`weat`]: word association, effect size, test statistic and permutation
//!   p-value of the Word Embedding Association Test.
//! * [`mac`]: Mean Average Cosine similarity.
//! * [`direct_bias`]: bias directions from word pairs or PCA over defining
//!   sets, and the Direct Bias score.
//! * [`same`]: SAME, a normalized pairwise bias with a Gram-Schmidt bias
//!   subspace for more than two groups, plus skew and stereotype scores.
//!
//! [`diagnostics`] builds the geometric counterexamples that show where each
//! score misreports bias, and [`synth`] generates embeddings with planted
//! ground-truth bias to compare the scores empirically.

pub mod commands;
pub mod config;
pub mod diagnostics;
pub mod direct_bias;
pub mod error;
pub mod linalg;
pub mod mac;
pub mod report;
pub mod rng;
pub mod same;
pub mod similarity;
pub mod stats;
pub mod store;
pub mod synth;
pub mod weat;

pub use error::{Error, Result};
pub use similarity::{AttributeFamily, AttributeSet, TargetSet};
pub use store::{CasePolicy, EmbeddingSpace, PhrasePolicy, Resolution, ResolvedWord, TextFormat};
