//! Embedding spaces with planted ground-truth bias, and the experiments that
//! compare the metrics on them: correlation with the planted values, a
//! (μ, σ) grid, subset robustness and rerun stability.
//!
//! A word `k` gets a group probability `p_k = clip(μ + σ z_k, 0, 1)` and a
//! planted bias `β_k = 2 p_k − 1`, and is placed at
//! `w_k = β_k g + sqrt(1 − β_k²) u_k` with `u_k ⟂ g`. The attribute sets are
//! noisy copies of `g` and `−g`, so without noise the SAME pairwise score of
//! every word is exactly `β_k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::direct_bias::{direct_bias, direct_bias_word, subspace_pca, BiasSubspace, DefiningSet};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mac::{mac, mac_word};
use crate::rng::{derive_seed, SplitMix64};
use crate::same::{same_pairwise, same_set, same_skew, same_stereotype, same_subspace, StereotypeMode};
use crate::similarity::{AttributeFamily, AttributeSet, TargetSet};
use crate::stats;
use crate::store::{CasePolicy, EmbeddingSpace, ResolvedWord};
use crate::weat::{weat_effect_size, weat_word, WeatPartition};

const OCCUPATIONS: &str = include_str!("../data/occupations.txt");

/// The bundled list of 258 gender-neutral occupations, in list order.
pub fn occupations() -> Vec<&'static str> {
    OCCUPATIONS.lines().map(str::trim).filter(|l| !l.is_empty()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub dim: usize,
    pub n_words: usize,
    /// Mean group probability.
    pub mu: f64,
    /// Standard deviation of the group probability before clipping.
    pub sigma: f64,
    /// Scale of the Gaussian perturbation added to attribute and word vectors.
    pub noise: f64,
    /// Seed for the axis, residual directions and noise.
    pub seed: u64,
    /// Seed for the standardized pattern `z_k`; defaults to `seed`. Sharing it
    /// keeps the planted pattern fixed while μ, σ or the residuals change.
    pub pattern_seed: Option<u64>,
    /// Members per attribute set.
    pub attribute_size: usize,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            dim: 32,
            n_words: 258,
            mu: 0.5,
            sigma: 0.1,
            noise: 0.0,
            seed: 0,
            pattern_seed: None,
            attribute_size: 8,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.dim < 3 {
            problems.push(format!("dim must be ≥ 3, got {}", self.dim));
        }
        if self.n_words < 2 {
            problems.push(format!("n_words must be ≥ 2, got {}", self.n_words));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            problems.push(format!("mu must be in [0, 1], got {}", self.mu));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            problems.push(format!("sigma must be > 0, got {}", self.sigma));
        }
        if !(self.noise >= 0.0) || !self.noise.is_finite() {
            problems.push(format!("noise must be ≥ 0, got {}", self.noise));
        }
        if self.attribute_size == 0 {
            problems.push("attribute_size must be ≥ 1".into());
        }
        match problems.len() {
            0 => Ok(()),
            1 => Err(Error::InvalidParameter(problems.remove(0))),
            _ => Err(Error::Config(problems)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpace {
    space: EmbeddingSpace,
    family: AttributeFamily,
    targets: TargetSet,
    probabilities: Vec<f64>,
    planted: Vec<f64>,
    axis: Vec<f64>,
    clipped: usize,
}

impl SyntheticSpace {
    /// All generated vectors (targets and attribute members).
    pub fn space(&self) -> &EmbeddingSpace {
        &self.space
    }

    /// Attribute sets `A` (around `g`) and `B` (around `−g`).
    pub fn family(&self) -> &AttributeFamily {
        &self.family
    }

    pub fn targets(&self) -> &TargetSet {
        &self.targets
    }

    /// Planted `β_k`, aligned with [`Self::targets`].
    pub fn planted(&self) -> &[f64] {
        &self.planted
    }

    /// Clipped group probabilities `p_k`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// The unit bias axis `g`.
    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    /// Number of words whose probability was clipped to 0 or 1.
    pub fn clipped(&self) -> usize {
        self.clipped
    }

    /// `Σ |β_k| / 2`, the analog of summing `|0.5 − p_k|`.
    pub fn absolute_bias(&self) -> f64 {
        self.planted.iter().map(|b| b.abs()).sum::<f64>() / 2.0
    }

    /// Attribute members paired by index, `{a_i, b_i}`.
    pub fn defining_sets(&self) -> Result<Vec<DefiningSet>> {
        let sets = self.family.sets();
        sets[0]
            .members()
            .iter()
            .zip(sets[1].members())
            .map(|(a, b)| DefiningSet::new(vec![a.clone(), b.clone()]))
            .collect()
    }

    /// First principal component of the defining pairs.
    pub fn bias_direction(&self) -> Result<BiasSubspace> {
        subspace_pca(&self.defining_sets()?, 1)
    }

    /// Which words belong to the WEAT group X under `split`.
    pub fn weat_membership(&self, split: WeatSplit) -> Vec<bool> {
        let n = self.planted.len();
        match split {
            WeatSplit::ListOrder => (0..n).map(|k| k < n / 2).collect(),
            WeatSplit::PlantedSign => self.planted.iter().map(|&b| b >= 0.0).collect(),
        }
    }

    pub fn context(&self, split: WeatSplit) -> Result<ScoringContext> {
        ScoringContext::new(
            self.targets.clone(),
            self.family.clone(),
            self.bias_direction()?,
            self.weat_membership(split),
        )
    }
}

fn random_unit(rng: &mut SplitMix64, dim: usize) -> Vec<f64> {
    loop {
        if let Some(v) = linalg::normalized(&rng.gaussian_vec(dim, 1.0)) {
            return v;
        }
    }
}

/// Unit vector orthogonal to the unit vector `g`.
fn random_orthogonal_unit(rng: &mut SplitMix64, g: &[f64]) -> Vec<f64> {
    loop {
        let mut u = rng.gaussian_vec(g.len(), 1.0);
        let c = linalg::dot(&u, g);
        linalg::axpy(&mut u, -c, g);
        if linalg::norm(&u) > 1e-6 {
            if let Some(u) = linalg::normalized(&u) {
                return u;
            }
        }
    }
}

fn word_names(n: usize) -> Vec<String> {
    let occ = occupations();
    if n <= occ.len() {
        occ[..n].iter().map(|w| w.replace(' ', "_")).collect()
    } else {
        (0..n).map(|k| format!("word{k}")).collect()
    }
}

/// Builds a planted-bias space; a pure function of its parameters.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticSpace> {
    spec.validate()?;
    let dim = spec.dim;
    let mut pattern = SplitMix64::new(derive_seed(spec.pattern_seed.unwrap_or(spec.seed), &[0]));
    let mut rng = SplitMix64::new(derive_seed(spec.seed, &[1]));
    let noise_scale = spec.noise / (dim as f64).sqrt();

    let mut clipped = 0;
    let probabilities: Vec<f64> = (0..spec.n_words)
        .map(|_| {
            let p = spec.mu + spec.sigma * pattern.gaussian();
            if !(0.0..=1.0).contains(&p) {
                clipped += 1;
            }
            p.clamp(0.0, 1.0)
        })
        .collect();
    let planted: Vec<f64> = probabilities.iter().map(|p| 2.0 * p - 1.0).collect();

    let g = random_unit(&mut rng, dim);
    let names = word_names(spec.n_words);
    let mut words = Vec::with_capacity(spec.n_words);
    for (name, &beta) in names.iter().zip(&planted) {
        let u = random_orthogonal_unit(&mut rng, &g);
        let mut w = linalg::scale(&g, beta);
        linalg::axpy(&mut w, (1.0 - beta * beta).max(0.0).sqrt(), &u);
        if spec.noise > 0.0 {
            linalg::add_assign(&mut w, &rng.gaussian_vec(dim, noise_scale));
        }
        words.push(ResolvedWord::new(name.clone(), w)?);
    }

    let family = loop {
        let mut make = |prefix: &str, sign: f64| -> Result<AttributeSet> {
            let members = (0..spec.attribute_size)
                .map(|i| {
                    let mut v = linalg::scale(&g, sign);
                    if spec.noise > 0.0 {
                        linalg::add_assign(&mut v, &rng.gaussian_vec(dim, noise_scale));
                    }
                    ResolvedWord::new(format!("{prefix}{i}"), v)
                })
                .collect::<Result<Vec<_>>>()?;
            AttributeSet::new(prefix.to_uppercase(), members)
        };
        let a = make("a", 1.0)?;
        let b = make("b", -1.0)?;
        if linalg::norm(&linalg::sub(a.centroid(), b.centroid())) > 1e-12 {
            break AttributeFamily::pair(a, b)?;
        }
    };

    let entries = words
        .iter()
        .chain(family.sets().iter().flat_map(|s| s.members()))
        .map(|w| (w.surface().to_string(), w.vector().to_vec()));
    let space = EmbeddingSpace::from_entries(entries, CasePolicy::Exact)?;
    Ok(SyntheticSpace {
        space,
        family,
        targets: TargetSet::new("targets", words)?,
        probabilities,
        planted,
        axis: g,
        clipped,
    })
}

/// Squared Pearson correlation. Constant input is [`Error::Undefined`].
pub fn r2(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParameter(format!(
            "r2 needs equal lengths, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidParameter("r2 needs at least 2 points".into()));
    }
    if stats::is_constant(xs, 1e-12) || stats::is_constant(ys, 1e-12) {
        return Err(Error::Undefined);
    }
    let (mx, my) = (stats::mean(xs), stats::mean(ys));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    Ok((sxy * sxy / (sxx * syy)).clamp(0.0, 1.0))
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Undefined) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Word-wise scores of every metric, aligned with the targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordScores {
    pub same: Vec<f64>,
    pub weat: Vec<f64>,
    pub direct_bias: Vec<f64>,
    pub mac: Vec<f64>,
}

impl WordScores {
    fn by_metric(&self) -> [(&'static str, &[f64]); 4] {
        [
            ("same", &self.same),
            ("weat", &self.weat),
            ("direct-bias", &self.direct_bias),
            ("mac", &self.mac),
        ]
    }
}

/// SAME pairwise, WEAT word, Direct Bias (`c = 1`, PCA over the attribute
/// pairs) and MAC word scores of every target.
pub fn word_scores(space: &SyntheticSpace) -> Result<WordScores> {
    let sets = space.family().sets();
    let (a, b) = (&sets[0], &sets[1]);
    let g = space.bias_direction()?;
    let mut out = WordScores {
        same: Vec::new(),
        weat: Vec::new(),
        direct_bias: Vec::new(),
        mac: Vec::new(),
    };
    for w in space.targets().members() {
        out.same.push(same_pairwise(w, a, b)?);
        out.weat.push(weat_word(w, a, b)?);
        out.direct_bias.push(direct_bias_word(w, &g, 1.0)?);
        out.mac.push(mac_word(w, space.family())?);
    }
    Ok(out)
}

/// R² of one metric's word scores against `β` (`r2`) and against `|β|`
/// (`r2_abs`); `None` where undefined (constant scores).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R2Entry {
    pub metric: String,
    pub r2: Option<f64>,
    pub r2_abs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub spec: SyntheticSpec,
    /// SAME and WEAT word scores differ by the constant `‖â − b̂‖`, so they
    /// share the `same-weat` entry.
    pub entries: Vec<R2Entry>,
}

impl CorrelationReport {
    pub fn entry(&self, metric: &str) -> Option<&R2Entry> {
        self.entries.iter().find(|e| e.metric == metric)
    }
}

fn r2_entries(space: &SyntheticSpace, scores: &WordScores) -> Result<Vec<R2Entry>> {
    let beta = space.planted();
    let abs_beta: Vec<f64> = beta.iter().map(|b| b.abs()).collect();
    let mut out = Vec::new();
    for (metric, xs) in [
        ("same-weat", &scores.same),
        ("direct-bias", &scores.direct_bias),
        ("mac", &scores.mac),
    ] {
        out.push(R2Entry {
            metric: metric.into(),
            r2: defined(r2(xs, beta))?,
            r2_abs: defined(r2(xs, &abs_beta))?,
        });
    }
    Ok(out)
}

pub fn correlation_experiment(spec: &SyntheticSpec) -> Result<CorrelationReport> {
    let space = generate(spec)?;
    let scores = word_scores(&space)?;
    Ok(CorrelationReport {
        spec: *spec,
        entries: r2_entries(&space, &scores)?,
    })
}

/// How targets are split into the WEAT groups X and Y.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeatSplit {
    /// First half of the word list is X. Independent of the planted values,
    /// like an external stereotype rating.
    #[default]
    ListOrder,
    /// X holds the words with `β ≥ 0`.
    PlantedSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricId {
    Weat,
    Mac,
    DirectBias,
    Same,
    SameSkew,
    SameStereotype,
}

impl MetricId {
    pub const ALL: [MetricId; 6] = [
        MetricId::Weat,
        MetricId::Mac,
        MetricId::DirectBias,
        MetricId::Same,
        MetricId::SameSkew,
        MetricId::SameStereotype,
    ];

    /// Width of the score range, used to normalize deviations.
    pub fn interval_length(self) -> f64 {
        match self {
            MetricId::Weat => 4.0,
            MetricId::Mac | MetricId::SameSkew => 2.0,
            MetricId::DirectBias | MetricId::Same | MetricId::SameStereotype => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Weat => "weat",
            MetricId::Mac => "mac",
            MetricId::DirectBias => "direct-bias",
            MetricId::Same => "same",
            MetricId::SameSkew => "same-skew",
            MetricId::SameStereotype => "same-stereotype",
        }
    }
}

/// Targets, a two-set family, a bias direction and the WEAT X membership:
/// everything needed to compute any set-level score on a subset of words.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringContext {
    targets: TargetSet,
    family: AttributeFamily,
    direction: BiasSubspace,
    same_basis: BiasSubspace,
    in_x: Vec<bool>,
}

impl ScoringContext {
    pub fn new(targets: TargetSet, family: AttributeFamily, direction: BiasSubspace, in_x: Vec<bool>) -> Result<Self> {
        if in_x.len() != targets.len() {
            return Err(Error::InvalidParameter(format!(
                "WEAT membership has {} entries for {} targets",
                in_x.len(),
                targets.len()
            )));
        }
        let same_basis = same_subspace(&family)?;
        Ok(Self {
            targets,
            family,
            direction,
            same_basis,
            in_x,
        })
    }

    pub fn targets(&self) -> &TargetSet {
        &self.targets
    }

    fn restricted(&self, indices: &[usize]) -> Result<Self> {
        Ok(Self {
            targets: self.targets.subset(self.targets.name(), indices)?,
            family: self.family.clone(),
            direction: self.direction.clone(),
            same_basis: self.same_basis.clone(),
            in_x: indices.iter().map(|&i| self.in_x[i]).collect(),
        })
    }

    /// Set-level score of `metric` (`c = 1`, stddev stereotype).
    pub fn score(&self, metric: MetricId) -> Result<f64> {
        let sets = self.family.sets();
        let (a, b) = (&sets[0], &sets[1]);
        match metric {
            MetricId::Weat => {
                let (mut x, mut y) = (Vec::new(), Vec::new());
                for (w, &inx) in self.targets.members().iter().zip(&self.in_x) {
                    if inx { &mut x } else { &mut y }.push(w.clone());
                }
                let part = WeatPartition::new(TargetSet::new("X", x)?, TargetSet::new("Y", y)?)?;
                weat_effect_size(&part, a, b)
            }
            MetricId::Mac => mac(&self.targets, &self.family),
            MetricId::DirectBias => direct_bias(&self.targets, &self.direction, 1.0),
            MetricId::Same => same_set(&self.targets, &self.same_basis),
            MetricId::SameSkew => same_skew(&self.targets, a, b),
            MetricId::SameStereotype => same_stereotype(&self.targets, a, b, StereotypeMode::Stddev),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Robustness {
    /// Mean `|b(W_i) − b(W)|` divided by the metric's interval length.
    pub value: f64,
    pub evaluated: usize,
    /// Subsets where the metric was undefined (an empty WEAT group or equal
    /// scores).
    pub skipped: usize,
}

/// Mean normalized deviation of `metric` over random half-size subsets.
pub fn subset_robustness(ctx: &ScoringContext, metric: MetricId, iterations: usize, seed: u64) -> Result<Robustness> {
    let n = ctx.targets.len();
    if n < 4 {
        return Err(Error::InvalidParameter(format!("subset robustness needs ≥ 4 words, got {n}")));
    }
    let full = ctx.score(metric)?;
    let mut rng = SplitMix64::new(seed);
    let (mut total, mut evaluated, mut skipped) = (0.0, 0, 0);
    for _ in 0..iterations {
        let idx = rng.sample_indices(n, n / 2);
        match ctx.restricted(&idx)?.score(metric) {
            Ok(v) => {
                total += (v - full).abs() / metric.interval_length();
                evaluated += 1;
            }
            Err(Error::EmptySet(_)) | Err(Error::DegenerateVariance) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if evaluated == 0 {
        return Err(Error::Undefined);
    }
    Ok(Robustness {
        value: total / evaluated as f64,
        evaluated,
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityEntry {
    pub metric: String,
    /// Mean over rep pairs of `100·|s_i − s_j| / ((s_i + s_j)/2)`, where
    /// `s` is the standard deviation of the word scores in one rep.
    pub percentage_difference: f64,
    pub score_stddevs: Vec<f64>,
}

/// Regenerates `reps` spaces with the same planted values but fresh axis,
/// residuals and noise, and compares the spread of word scores across them.
pub fn rerun_stability(spec: &SyntheticSpec, reps: usize) -> Result<Vec<StabilityEntry>> {
    if reps < 2 {
        return Err(Error::InvalidParameter(format!("rerun stability needs ≥ 2 reps, got {reps}")));
    }
    let pattern_seed = spec.pattern_seed.unwrap_or(spec.seed);
    let scores = (0..reps)
        .map(|r| {
            let s = SyntheticSpec {
                seed: derive_seed(spec.seed, &[r as u64]),
                pattern_seed: Some(pattern_seed),
                ..*spec
            };
            word_scores(&generate(&s)?)
        })
        .collect::<Result<Vec<_>>>()?;

    let names = scores[0].by_metric().map(|(name, _)| name);
    let mut out = Vec::new();
    for (m, name) in names.iter().enumerate() {
        let sds: Vec<f64> = scores.iter().map(|s| stats::population_std(s.by_metric()[m].1)).collect();
        let (mut total, mut pairs) = (0.0, 0);
        for i in 0..reps {
            for j in i + 1..reps {
                let mean = (sds[i] + sds[j]) / 2.0;
                total += if mean > 0.0 { 100.0 * (sds[i] - sds[j]).abs() / mean } else { 0.0 };
                pairs += 1;
            }
        }
        out.push(StabilityEntry {
            metric: name.to_string(),
            percentage_difference: total / pairs as f64,
            score_stddevs: sds,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub mu_grid: Vec<f64>,
    pub sigma_grid: Vec<f64>,
    pub reps: usize,
    pub base_seed: u64,
    pub dim: usize,
    pub n_words: usize,
    pub noise: f64,
    pub attribute_size: usize,
    pub weat_split: WeatSplit,
}

impl GridConfig {
    /// μ ∈ {0.25, 0.30, …, 0.75}, σ ∈ {0.10, 0.15, …, 0.35}, 5 reps, 258
    /// words in 32 dimensions, no noise.
    pub fn standard(base_seed: u64) -> Self {
        Self {
            mu_grid: (0..11).map(|i| (25 + 5 * i) as f64 / 100.0).collect(),
            sigma_grid: (0..6).map(|i| (10 + 5 * i) as f64 / 100.0).collect(),
            reps: 5,
            base_seed,
            dim: 32,
            n_words: 258,
            noise: 0.0,
            attribute_size: 8,
            weat_split: WeatSplit::ListOrder,
        }
    }

    /// Spec of one grid cell. The planted pattern depends only on `rep`, so
    /// cells of one rep differ only through μ and σ.
    pub fn cell_spec(&self, mu_index: usize, sigma_index: usize, rep: usize) -> SyntheticSpec {
        SyntheticSpec {
            dim: self.dim,
            n_words: self.n_words,
            mu: self.mu_grid[mu_index],
            sigma: self.sigma_grid[sigma_index],
            noise: self.noise,
            seed: derive_seed(self.base_seed, &[mu_index as u64, sigma_index as u64, rep as u64]),
            pattern_seed: Some(derive_seed(self.base_seed, &[rep as u64])),
            attribute_size: self.attribute_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub mu_index: usize,
    pub sigma_index: usize,
    pub mu: f64,
    pub sigma: f64,
    pub rep: usize,
    pub seed: u64,
    pub clipped: usize,
    pub absolute_bias: f64,
    pub same_set: f64,
    pub same_skew: f64,
    pub same_stereotype: f64,
    pub weat_effect_size: Option<f64>,
    pub mac: f64,
    pub direct_bias: f64,
    pub r2: Vec<R2Entry>,
}

impl GridCell {
    /// `(metric, value)` pairs in CSV order; `None` for undefined values.
    pub fn values(&self) -> Vec<(String, Option<f64>)> {
        let mut v = vec![
            ("absolute-bias".to_string(), Some(self.absolute_bias)),
            ("same".to_string(), Some(self.same_set)),
            ("same-skew".to_string(), Some(self.same_skew)),
            ("same-stereotype".to_string(), Some(self.same_stereotype)),
            ("weat".to_string(), self.weat_effect_size),
            ("mac".to_string(), Some(self.mac)),
            ("direct-bias".to_string(), Some(self.direct_bias)),
        ];
        for e in &self.r2 {
            v.push((format!("r2-{}", e.metric), e.r2));
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub config: GridConfig,
    pub cells: Vec<GridCell>,
}

impl GridReport {
    pub fn cell(&self, mu_index: usize, sigma_index: usize, rep: usize) -> Option<&GridCell> {
        self.cells
            .iter()
            .find(|c| c.mu_index == mu_index && c.sigma_index == sigma_index && c.rep == rep)
    }

    /// Long-format CSV: `mu,sigma,rep,seed,metric,value`; undefined values
    /// are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mu,sigma,rep,seed,metric,value\n");
        for c in &self.cells {
            for (metric, value) in c.values() {
                let value = value.map(|v| v.to_string()).unwrap_or_default();
                out.push_str(&format!("{},{},{},{},{},{}\n", c.mu, c.sigma, c.rep, c.seed, metric, value));
            }
        }
        out
    }
}

fn grid_cell(config: &GridConfig, mu_index: usize, sigma_index: usize, rep: usize) -> Result<GridCell> {
    let spec = config.cell_spec(mu_index, sigma_index, rep);
    let space = generate(&spec)?;
    let ctx = space.context(config.weat_split)?;
    let scores = word_scores(&space)?;
    let weat = match ctx.score(MetricId::Weat) {
        Ok(d) => Some(d),
        Err(Error::EmptySet(_)) | Err(Error::DegenerateVariance) => None,
        Err(e) => return Err(e),
    };
    Ok(GridCell {
        mu_index,
        sigma_index,
        mu: spec.mu,
        sigma: spec.sigma,
        rep,
        seed: spec.seed,
        clipped: space.clipped(),
        absolute_bias: space.absolute_bias(),
        same_set: ctx.score(MetricId::Same)?,
        same_skew: ctx.score(MetricId::SameSkew)?,
        same_stereotype: ctx.score(MetricId::SameStereotype)?,
        weat_effect_size: weat,
        mac: ctx.score(MetricId::Mac)?,
        direct_bias: ctx.score(MetricId::DirectBias)?,
        r2: r2_entries(&space, &scores)?,
    })
}

/// Runs every `(μ, σ, rep)` cell. Cells are independent and evaluated in
/// parallel; the output order and values do not depend on scheduling.
pub fn grid_experiment(config: &GridConfig) -> Result<GridReport> {
    if config.mu_grid.is_empty() || config.sigma_grid.is_empty() || config.reps == 0 {
        return Err(Error::InvalidParameter("grid needs at least one μ, one σ and one rep".into()));
    }
    let keys: Vec<(usize, usize, usize)> = (0..config.mu_grid.len())
        .flat_map(|m| (0..config.sigma_grid.len()).flat_map(move |s| (0..config.reps).map(move |r| (m, s, r))))
        .collect();
    let cells = keys
        .par_iter()
        .map(|&(m, s, r)| grid_cell(config, m, s, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridReport {
        config: config.clone(),
        cells,
    })
}
