//! SAME: normalized pairwise bias, a Gram-Schmidt bias subspace for any
//! number of groups, and the skew / stereotype decomposition.

use serde::{Deserialize, Serialize};

use crate::direct_bias::{BiasSubspace, SubspaceConstruction};
use crate::error::{Error, Result};
use crate::linalg;
use crate::similarity::{cosine, AttributeFamily, AttributeSet, TargetSet};
use crate::stats;
use crate::store::ResolvedWord;

/// Centroid differences shorter than this are treated as equal centroids.
pub const EQUAL_CENTROID_TOLERANCE: f64 = 1e-12;
/// Gram-Schmidt residuals shorter than this are dropped from the basis.
pub const DEGENERATE_DIRECTION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StereotypeMode {
    /// Population standard deviation of the pairwise biases.
    #[default]
    Stddev,
    /// `(1/|W|)·sqrt(Σ (b − skew)²)`, i.e. the standard deviation divided
    /// by `sqrt(|W|)`.
    Literal,
}

fn centroid_difference(ai: &AttributeSet, aj: &AttributeSet) -> Result<Vec<f64>> {
    if ai.dim() != aj.dim() {
        return Err(Error::DimensionMismatch {
            expected: ai.dim(),
            found: aj.dim(),
        });
    }
    let diff = linalg::sub(ai.centroid(), aj.centroid());
    if linalg::norm(&diff) < EQUAL_CENTROID_TOLERANCE {
        return Err(Error::EqualCentroids(ai.name().to_string(), aj.name().to_string()));
    }
    Ok(diff)
}

/// `(s(w, A_i) − s(w, A_j)) / ‖â_i − â_j‖`, computed as `cos(w, â_i − â_j)`.
pub fn same_pairwise(w: &ResolvedWord, ai: &AttributeSet, aj: &AttributeSet) -> Result<f64> {
    let diff = centroid_difference(ai, aj)?;
    cosine(w.vector(), &diff)
}

fn pairwise_scores(targets: &TargetSet, ai: &AttributeSet, aj: &AttributeSet) -> Result<Vec<f64>> {
    let diff = centroid_difference(ai, aj)?;
    targets.members().iter().map(|w| cosine(w.vector(), &diff)).collect()
}

/// Mean absolute pairwise bias over `W`.
pub fn same_binary_set(targets: &TargetSet, ai: &AttributeSet, aj: &AttributeSet) -> Result<f64> {
    let scores = pairwise_scores(targets, ai, aj)?;
    Ok(scores.iter().map(|b| b.abs()).sum::<f64>() / scores.len() as f64)
}

/// Orthonormal basis of `span{â_i − â_0}` over the family, with `A_0` the
/// first set.
pub fn same_subspace(family: &AttributeFamily) -> Result<BiasSubspace> {
    let sets = family.sets();
    for (i, ai) in sets.iter().enumerate() {
        for aj in &sets[i + 1..] {
            centroid_difference(ai, aj)?;
        }
    }
    let centroids: Vec<Vec<f64>> = sets.iter().map(|s| s.centroid().to_vec()).collect();
    subspace_from_centroids(&centroids)
}

/// Gram-Schmidt over `c_i − c_0`, `i = 1…n−1`, in the given order. A
/// direction whose residual is shorter than
/// [`DEGENERATE_DIRECTION_TOLERANCE`] is dropped and its index `i` recorded.
pub fn subspace_from_centroids(centroids: &[Vec<f64>]) -> Result<BiasSubspace> {
    if centroids.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "a bias subspace needs at least 2 centroids, got {}",
            centroids.len()
        )));
    }
    let dim = centroids[0].len();
    if let Some(bad) = centroids.iter().find(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    if centroids.len() - 1 > dim {
        return Err(Error::InvalidParameter(format!(
            "{} groups give {} directions, more than the embedding dimension {dim}",
            centroids.len(),
            centroids.len() - 1
        )));
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut dropped = Vec::new();
    for (i, c) in centroids.iter().enumerate().skip(1) {
        let mut r = linalg::sub(c, &centroids[0]);
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let proj = linalg::dot(&r, b);
                linalg::axpy(&mut r, -proj, b);
            }
        }
        let n = linalg::norm(&r);
        if n < DEGENERATE_DIRECTION_TOLERANCE {
            dropped.push(i);
        } else {
            basis.push(linalg::scale(&r, 1.0 / n));
        }
    }
    if basis.is_empty() {
        return Err(Error::EmptySubspace);
    }
    Ok(BiasSubspace::new(basis, SubspaceConstruction::SameGramSchmidt, Vec::new(), dropped))
}

/// `(cos(w, b_1), …, cos(w, b_n'))` over the subspace basis.
pub fn same_bias_vector(w: &ResolvedWord, subspace: &BiasSubspace) -> Result<Vec<f64>> {
    if subspace.is_empty() {
        return Err(Error::EmptySubspace);
    }
    subspace.basis().iter().map(|b| cosine(w.vector(), b)).collect()
}

/// Norm of [`same_bias_vector`], clamped to `[0, 1]`.
pub fn same_word(w: &ResolvedWord, subspace: &BiasSubspace) -> Result<f64> {
    Ok(linalg::norm(&same_bias_vector(w, subspace)?).min(1.0))
}

pub fn same_set(targets: &TargetSet, subspace: &BiasSubspace) -> Result<f64> {
    let mut total = 0.0;
    for w in targets.members() {
        total += same_word(w, subspace)?;
    }
    Ok(total / targets.len() as f64)
}

/// Signed mean of the pairwise biases.
pub fn same_skew(targets: &TargetSet, ai: &AttributeSet, aj: &AttributeSet) -> Result<f64> {
    Ok(stats::mean(&pairwise_scores(targets, ai, aj)?))
}

pub fn same_stereotype(targets: &TargetSet, ai: &AttributeSet, aj: &AttributeSet, mode: StereotypeMode) -> Result<f64> {
    Ok(stereotype_of(&pairwise_scores(targets, ai, aj)?, mode))
}

/// Stereotype score of precomputed pairwise biases.
pub fn stereotype_of(biases: &[f64], mode: StereotypeMode) -> f64 {
    let sd = stats::population_std(biases);
    match mode {
        StereotypeMode::Stddev => sd,
        StereotypeMode::Literal => sd / (biases.len() as f64).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseEntry {
    pub first: String,
    pub second: String,
    pub skew: f64,
    pub stereotype: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneVsRestEntry {
    pub set: String,
    pub skew: f64,
    pub stereotype: f64,
}

/// Cosine between two raw bias directions `â_i − â_0` and `â_j − â_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionCosine {
    pub first: String,
    pub second: String,
    pub cosine: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SameReport {
    pub same_set: f64,
    pub word_magnitudes: Vec<(String, f64)>,
    pub pairwise: Vec<PairwiseEntry>,
    pub one_vs_rest: Vec<OneVsRestEntry>,
    pub stereotype_mode: StereotypeMode,
    pub reference_set: String,
    pub dropped_directions: Vec<usize>,
    pub direction_cosines: Vec<DirectionCosine>,
}

/// Full SAME report: magnitude over the family subspace, skew and stereotype
/// for every unordered pair of sets and, optionally, each set against the
/// union of the others.
pub fn same_pairwise_report(
    targets: &TargetSet,
    family: &AttributeFamily,
    mode: StereotypeMode,
    one_vs_rest: bool,
) -> Result<SameReport> {
    let subspace = same_subspace(family)?;
    let mut word_magnitudes = Vec::with_capacity(targets.len());
    for w in targets.members() {
        word_magnitudes.push((w.surface().to_string(), same_word(w, &subspace)?));
    }
    let same_set = word_magnitudes.iter().map(|(_, m)| m).sum::<f64>() / targets.len() as f64;

    let sets = family.sets();
    let mut pairwise = Vec::new();
    for (i, ai) in sets.iter().enumerate() {
        for aj in &sets[i + 1..] {
            let biases = pairwise_scores(targets, ai, aj)?;
            pairwise.push(PairwiseEntry {
                first: ai.name().to_string(),
                second: aj.name().to_string(),
                skew: stats::mean(&biases),
                stereotype: stereotype_of(&biases, mode),
            });
        }
    }

    let mut rest_entries = Vec::new();
    if one_vs_rest {
        for (i, ai) in sets.iter().enumerate() {
            let rest = AttributeSet::union(
                format!("not-{}", ai.name()),
                sets.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| s),
            )?;
            let biases = pairwise_scores(targets, ai, &rest)?;
            rest_entries.push(OneVsRestEntry {
                set: ai.name().to_string(),
                skew: stats::mean(&biases),
                stereotype: stereotype_of(&biases, mode),
            });
        }
    }

    let reference = &sets[0];
    let mut direction_cosines = Vec::new();
    for (i, ai) in sets.iter().enumerate().skip(1) {
        for aj in &sets[i + 1..] {
            let di = linalg::sub(ai.centroid(), reference.centroid());
            let dj = linalg::sub(aj.centroid(), reference.centroid());
            direction_cosines.push(DirectionCosine {
                first: ai.name().to_string(),
                second: aj.name().to_string(),
                cosine: cosine(&di, &dj)?,
            });
        }
    }

    Ok(SameReport {
        same_set,
        word_magnitudes,
        pairwise,
        one_vs_rest: rest_entries,
        stereotype_mode: mode,
        reference_set: reference.name().to_string(),
        dropped_directions: subspace.dropped_directions().to_vec(),
        direction_cosines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::assoc;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn w(v: &[f64]) -> ResolvedWord {
        ResolvedWord::new("w", v.to_vec()).unwrap()
    }

    fn set(name: &str, v: &[f64]) -> AttributeSet {
        AttributeSet::from_vectors(name, &[v.to_vec()]).unwrap()
    }

    fn targets(vs: &[&[f64]]) -> TargetSet {
        TargetSet::from_vectors("W", &vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn axes3() -> AttributeFamily {
        AttributeFamily::new(vec![
            set("A0", &[1.0, 0.0, 0.0]),
            set("A1", &[0.0, 1.0, 0.0]),
            set("A2", &[0.0, 0.0, 1.0]),
        ])
        .unwrap()
    }

    #[test]
    fn pairwise_examples() {
        let (a, b) = (set("A", &[1.0, 0.0]), set("B", &[0.0, 1.0]));
        assert!((same_pairwise(&w(&[1.0, 0.0]), &a, &b).unwrap() - H).abs() < 1e-15);
        assert_eq!(same_pairwise(&w(&[1.0, 1.0]), &a, &b).unwrap(), 0.0);
        assert!((same_pairwise(&w(&[1.0, -1.0]), &a, &b).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(same_pairwise(&w(&[1.0, 0.0]), &a, &a), Err(Error::EqualCentroids(..))));
    }

    #[test]
    fn pairwise_matches_difference_form() {
        let a = AttributeSet::from_vectors("A", &[vec![1.0, 0.2, -0.3], vec![0.5, 0.9, 0.1]]).unwrap();
        let b = AttributeSet::from_vectors("B", &[vec![-0.4, 0.3, 0.8]]).unwrap();
        let x = w(&[0.3, -1.1, 0.7]);
        let diff = linalg::norm(&linalg::sub(a.centroid(), b.centroid()));
        let expected = (assoc(&x, &a).unwrap() - assoc(&x, &b).unwrap()) / diff;
        assert!((same_pairwise(&x, &a, &b).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn binary_set_examples() {
        let (a, b) = (set("A", &[1.0, 0.0]), set("B", &[0.0, 1.0]));
        assert!((same_binary_set(&targets(&[&[1.0, -1.0]]), &a, &b).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(same_binary_set(&targets(&[&[1.0, 1.0], &[-1.0, -1.0]]), &a, &b).unwrap(), 0.0);
        let v = same_binary_set(&targets(&[&[1.0, 0.0], &[0.0, 1.0]]), &a, &b).unwrap();
        assert!((v - 0.7071067811865475).abs() < 1e-15);
    }

    #[test]
    fn gram_schmidt_on_axes() {
        let s = same_subspace(&axes3()).unwrap();
        let r6 = 1.0 / 6f64.sqrt();
        let expected = [[-H, H, 0.0], [-r6, -r6, 2.0 * r6]];
        for (got, want) in s.basis().iter().zip(expected) {
            for (g, e) in got.iter().zip(want) {
                assert!((g - e).abs() < 1e-12);
            }
        }
        assert!(s.orthonormality_error() < 1e-12);
        assert!(s.dropped_directions().is_empty());
    }

    #[test]
    fn collinear_direction_is_dropped() {
        let s = subspace_from_centroids(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 2.0]]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.dropped_directions(), &[2]);
    }

    #[test]
    fn degenerate_and_oversized_families_are_rejected() {
        assert!(matches!(
            subspace_from_centroids(&[vec![1.0, 0.0], vec![1.0, 0.0]]),
            Err(Error::EmptySubspace)
        ));
        let four_in_2d = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]];
        assert!(subspace_from_centroids(&four_in_2d).is_err());
    }

    #[test]
    fn two_groups_reduce_to_the_pairwise_score() {
        let (a, b) = (set("A", &[1.0, 0.2, 0.0]), set("B", &[0.1, 1.0, 0.3]));
        let fam = AttributeFamily::pair(a.clone(), b.clone()).unwrap();
        let s = same_subspace(&fam).unwrap();
        let x = w(&[0.4, -0.8, 1.5]);
        let pw = same_pairwise(&x, &a, &b).unwrap().abs();
        assert!((same_word(&x, &s).unwrap() - pw).abs() < 1e-12);
    }

    #[test]
    fn word_magnitude_examples() {
        let s = same_subspace(&axes3()).unwrap();
        assert!(same_word(&w(&[1.0, 1.0, 1.0]), &s).unwrap() < 1e-12);
        assert!((same_word(&w(&[-1.0, 1.0, 0.0]), &s).unwrap() - 1.0).abs() < 1e-12);
        // projection oracle: span is the plane orthogonal to (1,1,1)
        let x = [1.0, 1.0, 0.0];
        let m = linalg::dot(&x, &[1.0, 1.0, 1.0]) / 3.0;
        let p: Vec<f64> = x.iter().map(|v| v - m).collect();
        let expected = linalg::norm(&p) / linalg::norm(&x);
        assert!((same_word(&w(&x), &s).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn set_magnitude_examples() {
        let s = same_subspace(&axes3()).unwrap();
        let inside = [-1.0, 1.0, 0.0];
        let orth = [1.0, 1.0, 1.0];
        assert!((same_set(&targets(&[&inside, &inside]), &s).unwrap() - 1.0).abs() < 1e-12);
        assert!(same_set(&targets(&[&orth]), &s).unwrap() < 1e-12);
        assert!((same_set(&targets(&[&inside, &orth]), &s).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn skew_and_stereotype_modes() {
        let biases = [0.5, -0.5];
        assert_eq!(stats::mean(&biases), 0.0);
        assert_eq!(stereotype_of(&biases, StereotypeMode::Stddev), 0.5);
        assert!((stereotype_of(&biases, StereotypeMode::Literal) - 0.35355339).abs() < 1e-8);
        assert_eq!(stereotype_of(&[0.3, 0.3, 0.3], StereotypeMode::Stddev), 0.0);
        assert_eq!(stereotype_of(&[0.3, 0.3, 0.3], StereotypeMode::Literal), 0.0);
    }

    #[test]
    fn skewed_words_have_positive_skew_and_no_stereotype() {
        let (a, b) = (set("A", &[1.0, 0.0]), set("B", &[0.0, 1.0]));
        let t = targets(&[&[1.0, 0.0], &[2.0, 0.0], &[0.5, 0.0]]);
        assert!((same_skew(&t, &a, &b).unwrap() - H).abs() < 1e-12);
        assert!(same_stereotype(&t, &a, &b, StereotypeMode::Stddev).unwrap() < 1e-12);
        let mixed = targets(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(same_stereotype(&mixed, &a, &b, StereotypeMode::Stddev).unwrap() > 0.7);
    }

    #[test]
    fn report_shapes() {
        let t = targets(&[&[1.0, 0.0, 0.0], &[0.3, 0.3, 0.9]]);
        let fam = axes3();
        let r = same_pairwise_report(&t, &fam, StereotypeMode::Stddev, true).unwrap();
        assert_eq!(r.pairwise.len(), 3);
        assert_eq!(r.one_vs_rest.len(), 3);
        assert_eq!(r.reference_set, "A0");
        assert_eq!(r.direction_cosines.len(), 1);
        assert!((r.direction_cosines[0].cosine - 0.5).abs() < 1e-12);
        let pair = AttributeFamily::pair(fam.sets()[0].clone(), fam.sets()[1].clone()).unwrap();
        let r2 = same_pairwise_report(&t, &pair, StereotypeMode::Literal, false).unwrap();
        assert_eq!(r2.pairwise.len(), 1);
        assert!(r2.one_vs_rest.is_empty());
    }
}
