//! Word Embedding Association Test: per-word association, effect size, test
//! statistic and permutation p-value.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::similarity::{assoc, AttributeSet, TargetSet};
use crate::stats;
use crate::store::ResolvedWord;

/// Largest number of partitions the exact p-value will enumerate.
pub const EXACT_PARTITION_LIMIT: u128 = 200_000;

/// Two disjoint target groups. `|X| = |Y|` is the classical setting; unequal
/// sizes are accepted and the permutation test then preserves both sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatPartition {
    x: TargetSet,
    y: TargetSet,
}

impl WeatPartition {
    pub fn new(x: TargetSet, y: TargetSet) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch {
                expected: x.dim(),
                found: y.dim(),
            });
        }
        let xs: HashSet<&str> = x.members().iter().map(ResolvedWord::surface).collect();
        if let Some(shared) = y.members().iter().find(|w| xs.contains(w.surface())) {
            return Err(Error::InvalidParameter(format!(
                "word `{}` appears in both X and Y",
                shared.surface()
            )));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &TargetSet {
        &self.x
    }

    pub fn y(&self) -> &TargetSet {
        &self.y
    }

    pub fn is_balanced(&self) -> bool {
        self.x.len() == self.y.len()
    }

    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    fn words(&self) -> impl Iterator<Item = &ResolvedWord> {
        self.x.members().iter().chain(self.y.members())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PValueMethod {
    Exact,
    MonteCarlo { iterations: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeatResult {
    pub effect_size: f64,
    pub test_statistic: f64,
    pub p_value: Option<f64>,
    pub p_method: Option<PValueMethod>,
    pub word_scores: Vec<(String, f64)>,
}

/// `s(w, A, B) = s(w, A) − s(w, B)`
pub fn weat_word(w: &ResolvedWord, a: &AttributeSet, b: &AttributeSet) -> Result<f64> {
    Ok(assoc(w, a)? - assoc(w, b)?)
}

fn group_scores(part: &WeatPartition, a: &AttributeSet, b: &AttributeSet) -> Result<(Vec<f64>, Vec<f64>)> {
    let score = |t: &TargetSet| t.members().iter().map(|w| weat_word(w, a, b)).collect::<Result<Vec<_>>>();
    Ok((score(&part.x)?, score(&part.y)?))
}

/// Effect size from precomputed word scores of the two groups.
pub fn effect_size_from_scores(x: &[f64], y: &[f64]) -> Result<f64> {
    let all: Vec<f64> = x.iter().chain(y).copied().collect();
    if stats::is_constant(&all, 1e-12) {
        return Err(Error::DegenerateVariance);
    }
    Ok((stats::mean(x) - stats::mean(y)) / stats::population_std(&all))
}

/// Effect size `(mean_X s − mean_Y s) / std_{X∪Y} s` with the population
/// standard deviation. Equal word scores yield [`Error::DegenerateVariance`].
///
/// In `[−2, 2]` when `|X| = |Y|`. Unequal groups of sizes `m` and `n − m`
/// are bounded by `n / sqrt(m (n − m))` instead.
pub fn weat_effect_size(part: &WeatPartition, a: &AttributeSet, b: &AttributeSet) -> Result<f64> {
    let (x, y) = group_scores(part, a, b)?;
    effect_size_from_scores(&x, &y)
}

/// `Σ_X s(x, A, B) − Σ_Y s(y, A, B)`
pub fn weat_test_statistic(part: &WeatPartition, a: &AttributeSet, b: &AttributeSet) -> Result<f64> {
    let (x, y) = group_scores(part, a, b)?;
    Ok(x.iter().sum::<f64>() - y.iter().sum::<f64>())
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Fraction of size-preserving partitions `(X_i, Y_i)` of `X ∪ Y` whose test
/// statistic strictly exceeds the observed one.
///
/// The exact method enumerates subsets in lexicographic index order; the
/// Monte Carlo method draws uniform partitions from a seeded SplitMix64
/// stream. Ties within `1e-12 · Σ|s|` count as equal, so rounding never lets
/// the identity partition exceed itself.
pub fn weat_p_value(part: &WeatPartition, a: &AttributeSet, b: &AttributeSet, method: PValueMethod) -> Result<f64> {
    let (x, y) = group_scores(part, a, b)?;
    p_value_from_scores(&x, &y, method)
}

pub(crate) fn p_value_from_scores(x: &[f64], y: &[f64], method: PValueMethod) -> Result<f64> {
    let scores: Vec<f64> = x.iter().chain(y).copied().collect();
    let n = scores.len();
    let m = x.len();
    let total: f64 = scores.iter().sum();
    // statistic of a partition = 2 Σ_{X_i} s − Σ_all s
    let stat = |sum_x: f64| 2.0 * sum_x - total;
    let observed = stat(x.iter().sum());
    let tol = 1e-12 * scores.iter().map(|s| s.abs()).sum::<f64>().max(1.0);
    let exceeds = |sum_x: f64| stat(sum_x) > observed + tol;

    match method {
        PValueMethod::Exact => {
            let count = binomial(n as u64, m as u64);
            if count > EXACT_PARTITION_LIMIT {
                return Err(Error::PartitionOverflow {
                    count,
                    limit: EXACT_PARTITION_LIMIT,
                });
            }
            let mut hits = 0u64;
            let mut total_parts = 0u64;
            let mut idx: Vec<usize> = (0..m).collect();
            loop {
                total_parts += 1;
                if exceeds(idx.iter().map(|&i| scores[i]).sum()) {
                    hits += 1;
                }
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
            Ok(hits as f64 / total_parts as f64)
        }
        PValueMethod::MonteCarlo { iterations, seed } => {
            if iterations == 0 {
                return Err(Error::InvalidParameter("Monte Carlo p-value needs iterations > 0".into()));
            }
            let mut rng = SplitMix64::new(seed);
            let mut hits = 0u64;
            for _ in 0..iterations {
                let chosen = rng.sample_indices(n, m);
                if exceeds(chosen.iter().map(|&i| scores[i]).sum()) {
                    hits += 1;
                }
            }
            Ok(hits as f64 / iterations as f64)
        }
    }
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic
/// order; returns false after the last one.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Effect size, test statistic, word scores and (optionally) the p-value.
pub fn weat(
    part: &WeatPartition,
    a: &AttributeSet,
    b: &AttributeSet,
    p_method: Option<PValueMethod>,
) -> Result<WeatResult> {
    let (x, y) = group_scores(part, a, b)?;
    let effect_size = effect_size_from_scores(&x, &y)?;
    let test_statistic = x.iter().sum::<f64>() - y.iter().sum::<f64>();
    let p_value = p_method.map(|m| p_value_from_scores(&x, &y, m)).transpose()?;
    let word_scores = part
        .words()
        .map(|w| w.surface().to_string())
        .zip(x.iter().chain(&y).copied())
        .collect();
    Ok(WeatResult {
        effect_size,
        test_statistic,
        p_value,
        p_method,
        word_scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(name: &str, vs: &[[f64; 2]]) -> AttributeSet {
        AttributeSet::from_vectors(name, &vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn targets(name: &str, vs: &[[f64; 2]]) -> TargetSet {
        TargetSet::from_vectors(name, &vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn unit(deg: f64) -> [f64; 2] {
        let r = deg.to_radians();
        [r.cos(), r.sin()]
    }

    fn extreme() -> (WeatPartition, AttributeSet, AttributeSet) {
        let part = WeatPartition::new(targets("X", &[[1.0, 0.0]]), targets("Y", &[[0.0, 1.0]])).unwrap();
        (part, set("A", &[[1.0, 0.0]]), set("B", &[[0.0, 1.0]]))
    }

    #[test]
    fn word_scores() {
        let (a, b) = (set("A", &[[1.0, 0.0]]), set("B", &[[0.0, 1.0]]));
        let w = |v: [f64; 2]| ResolvedWord::new("w", v.to_vec()).unwrap();
        assert_eq!(weat_word(&w([1.0, 0.0]), &a, &b).unwrap(), 1.0);
        assert_eq!(weat_word(&w([0.0, 1.0]), &a, &b).unwrap(), -1.0);
        assert!(weat_word(&w([1.0, 1.0]), &a, &b).unwrap().abs() < 1e-15);
    }

    #[test]
    fn extreme_fixture_reaches_two() {
        let (part, a, b) = extreme();
        assert_eq!(weat_effect_size(&part, &a, &b).unwrap(), 2.0);
        assert_eq!(weat_test_statistic(&part, &a, &b).unwrap(), 2.0);
        assert_eq!(weat_test_statistic(&part.swapped(), &a, &b).unwrap(), -2.0);
        assert_eq!(weat_p_value(&part, &a, &b, PValueMethod::Exact).unwrap(), 0.0);
    }

    #[test]
    fn equal_scores_are_degenerate() {
        let part = WeatPartition::new(targets("X", &[[1.0, 0.0]]), targets("Y", &[[2.0, 0.0]])).unwrap();
        let (_, a, b) = extreme();
        assert!(matches!(weat_effect_size(&part, &a, &b), Err(Error::DegenerateVariance)));
    }

    #[test]
    fn zero_scores_give_zero_statistic_and_p() {
        // every word is equidistant to A and B
        let part = WeatPartition::new(targets("X", &[[1.0, 1.0], [2.0, 2.0]]), targets("Y", &[[-1.0, -1.0], [3.0, 3.0]]))
            .unwrap();
        let (_, a, b) = extreme();
        assert!(weat_test_statistic(&part, &a, &b).unwrap().abs() < 1e-15);
        assert_eq!(weat_p_value(&part, &a, &b, PValueMethod::Exact).unwrap(), 0.0);
    }

    #[test]
    fn blindspot_fixture_has_zero_effect_size() {
        let a = set("A", &[unit(10.0)]);
        let b = set("B", &[unit(-10.0)]);
        let x = targets("X", &[unit(60.0), unit(-60.0)]);
        let y = targets("Y", &[unit(120.0), unit(-120.0)]);
        let part = WeatPartition::new(x, y).unwrap();
        let d = weat_effect_size(&part, &a, &b).unwrap();
        assert!(d.abs() < 1e-9, "d = {d}");
        let expected = 2.0 * 60f64.to_radians().sin() * 10f64.to_radians().sin();
        for w in part.words() {
            let s = weat_word(w, &a, &b).unwrap();
            assert!((s.abs() - expected).abs() < 1e-12);
            assert!((s.abs() - 0.30070579).abs() < 1e-4);
        }
    }

    #[test]
    fn overlapping_partition_is_rejected() {
        let x = TargetSet::new("X", vec![ResolvedWord::new("nurse", vec![1.0, 0.0]).unwrap()]).unwrap();
        let y = TargetSet::new("Y", vec![ResolvedWord::new("nurse", vec![0.0, 1.0]).unwrap()]).unwrap();
        assert!(WeatPartition::new(x, y).is_err());
    }

    #[test]
    fn monte_carlo_requires_iterations_and_is_reproducible() {
        let (part, a, b) = extreme();
        let zero = PValueMethod::MonteCarlo { iterations: 0, seed: 1 };
        assert!(weat_p_value(&part, &a, &b, zero).is_err());
        let mc = PValueMethod::MonteCarlo { iterations: 500, seed: 9 };
        let p1 = weat_p_value(&part, &a, &b, mc).unwrap();
        let p2 = weat_p_value(&part, &a, &b, mc).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(p1, 0.0);
    }

    #[test]
    fn exact_enumeration_overflow() {
        let xs: Vec<[f64; 2]> = (0..10).map(|i| unit(i as f64 * 7.0)).collect();
        let ys: Vec<[f64; 2]> = (0..10).map(|i| unit(200.0 + i as f64 * 7.0)).collect();
        let part = WeatPartition::new(targets("X", &xs), targets("Y", &ys)).unwrap();
        let (_, a, b) = extreme();
        // C(20, 10) = 184_756 fits
        assert!(weat_p_value(&part, &a, &b, PValueMethod::Exact).is_ok());
        let xs: Vec<[f64; 2]> = (0..11).map(|i| unit(i as f64 * 7.0)).collect();
        let ys: Vec<[f64; 2]> = (0..11).map(|i| unit(200.0 + i as f64 * 7.0)).collect();
        let part = WeatPartition::new(targets("X", &xs), targets("Y", &ys)).unwrap();
        assert!(matches!(
            weat_p_value(&part, &a, &b, PValueMethod::Exact),
            Err(Error::PartitionOverflow { count: 705_432, .. })
        ));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(binomial(10, 5), 252);
    }
}
