//! Bias directions and subspaces (word pair, PCA over defining sets) and the
//! Direct Bias score.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::similarity::{cosine, TargetSet};
use crate::store::ResolvedWord;

pub const PCA_TOLERANCE: f64 = 1e-12;
pub const PCA_MAX_ITERATIONS: usize = 10_000;

/// Words that differ only in the protected attribute, e.g. `{man, woman}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefiningSet {
    members: Vec<ResolvedWord>,
    mean: Vec<f64>,
}

impl DefiningSet {
    pub fn new(members: Vec<ResolvedWord>) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a defining set needs at least 2 words, got {}",
                members.len()
            )));
        }
        let dim = members[0].dim();
        if let Some(bad) = members.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let mean = linalg::mean(members.iter().map(ResolvedWord::vector));
        Ok(Self { members, mean })
    }

    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let members = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| ResolvedWord::new(format!("d[{i}]"), v.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    pub fn members(&self) -> &[ResolvedWord] {
        &self.members
    }

    /// Arithmetic mean of the raw member vectors.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubspaceConstruction {
    WordPair,
    Pca { k: usize },
    SameGramSchmidt,
}

/// Orthonormal basis of a bias direction or subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasSubspace {
    basis: Vec<Vec<f64>>,
    construction: SubspaceConstruction,
    /// Variance captured by each PCA component (empty for other constructions).
    explained_variance: Vec<f64>,
    /// Input directions left out because they were linearly dependent.
    dropped_directions: Vec<usize>,
}

impl BiasSubspace {
    pub(crate) fn new(
        basis: Vec<Vec<f64>>,
        construction: SubspaceConstruction,
        explained_variance: Vec<f64>,
        dropped_directions: Vec<usize>,
    ) -> Self {
        Self {
            basis,
            construction,
            explained_variance,
            dropped_directions,
        }
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.basis.first().map_or(0, Vec::len)
    }

    pub fn construction(&self) -> SubspaceConstruction {
        self.construction
    }

    pub fn explained_variance(&self) -> &[f64] {
        &self.explained_variance
    }

    pub fn dropped_directions(&self) -> &[usize] {
        &self.dropped_directions
    }

    /// Largest deviation from orthonormality: `max |⟨b_i, b_j⟩ − δ_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, u) in self.basis.iter().enumerate() {
            for (j, v) in self.basis.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((linalg::dot(u, v) - target).abs());
            }
        }
        worst
    }

    /// Orthogonal projection of `v` onto the span.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; v.len()];
        for b in &self.basis {
            linalg::axpy(&mut p, linalg::dot(v, b), b);
        }
        p
    }
}

/// `g = (a − b)/‖a − b‖`
pub fn direction_from_pair(a: &ResolvedWord, b: &ResolvedWord) -> Result<BiasSubspace> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let diff = linalg::sub(a.vector(), b.vector());
    let g = linalg::normalized(&diff).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "`{}` and `{}` have identical vectors; no direction",
            a.surface(),
            b.surface()
        ))
    })?;
    Ok(BiasSubspace::new(vec![g], SubspaceConstruction::WordPair, Vec::new(), Vec::new()))
}

/// Flips `v` so its largest-magnitude component (first on ties) is positive.
pub(crate) fn canonical_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Top-`k` principal components of the residuals `w − μ_i` pooled over all
/// defining sets.
///
/// The residuals are already centered per set, so the second-moment matrix
/// is used without further centering. Components come from a symmetric
/// eigendecomposition and are returned in descending eigenvalue order with
/// the sign convention of [`canonical_sign`].
pub fn subspace_pca(defining_sets: &[DefiningSet], k: usize) -> Result<BiasSubspace> {
    let first = defining_sets
        .first()
        .ok_or_else(|| Error::EmptySet("no defining sets".into()))?;
    let dim = first.dim();
    if k == 0 || k > dim {
        return Err(Error::InvalidParameter(format!("k must be in 1..={dim}, got {k}")));
    }
    let mut moment = DMatrix::<f64>::zeros(dim, dim);
    let mut count = 0usize;
    for set in defining_sets {
        if set.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: set.dim(),
            });
        }
        for w in set.members() {
            let r = DVector::from_vec(linalg::sub(w.vector(), set.mean()));
            moment.ger(1.0, &r, &r, 1.0);
            count += 1;
        }
    }
    if count < k {
        return Err(Error::RankDeficient { requested: k, rank: count });
    }

    let (basis, eigenvalues) = top_eigenvectors(moment, k)?;
    let explained = eigenvalues.iter().map(|l| l / count as f64).collect();
    Ok(BiasSubspace::new(basis, SubspaceConstruction::Pca { k }, explained, Vec::new()))
}

/// Top `k` eigenpairs of a symmetric positive semi-definite matrix, in
/// descending eigenvalue order. Eigenvalues at or below `PCA_TOLERANCE`
/// times the trace count as zero.
fn top_eigenvectors(m: DMatrix<f64>, k: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let scale = m.trace();
    if scale <= 0.0 {
        return Err(Error::RankDeficient { requested: k, rank: 0 });
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, PCA_MAX_ITERATIONS)
        .ok_or(Error::NoConvergence(PCA_MAX_ITERATIONS))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    // stable sort keeps ties in the solver's order, so results are deterministic
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let mut vectors = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for &i in order.iter().take(k) {
        let lambda = eig.eigenvalues[i];
        if lambda <= PCA_TOLERANCE * scale {
            return Err(Error::RankDeficient {
                requested: k,
                rank: vectors.len(),
            });
        }
        let mut v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        canonical_sign(&mut v);
        vectors.push(v);
        values.push(lambda);
    }
    Ok((vectors, values))
}

/// `|cos(w, g)|^c` for a single word.
pub fn direct_bias_word(w: &ResolvedWord, subspace: &BiasSubspace, c: f64) -> Result<f64> {
    let g = single_direction(subspace)?;
    check_strictness(c)?;
    Ok(cosine(w.vector(), g)?.abs().powf(c))
}

/// `(1/|W|) Σ |cos(w, g)|^c`; needs a one-dimensional subspace and `c ≥ 0`.
pub fn direct_bias(targets: &TargetSet, subspace: &BiasSubspace, c: f64) -> Result<f64> {
    let g = single_direction(subspace)?;
    check_strictness(c)?;
    let mut total = 0.0;
    for w in targets.members() {
        total += cosine(w.vector(), g)?.abs().powf(c);
    }
    Ok(total / targets.len() as f64)
}

fn single_direction(subspace: &BiasSubspace) -> Result<&[f64]> {
    match subspace.basis() {
        [g] => Ok(g),
        other => Err(Error::InvalidParameter(format!(
            "Direct Bias needs a single direction, subspace has {}",
            other.len()
        ))),
    }
}

fn check_strictness(c: f64) -> Result<()> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("strictness c must be ≥ 0, got {c}")));
    }
    Ok(())
}

/// Normalized mean of the per-pair directions `(first − second)/‖·‖` over
/// two-word defining sets.
pub fn mean_pair_direction(defining_sets: &[DefiningSet]) -> Result<Vec<f64>> {
    if defining_sets.is_empty() {
        return Err(Error::EmptySet("no defining sets".into()));
    }
    let mut dirs = Vec::with_capacity(defining_sets.len());
    for set in defining_sets {
        match set.members() {
            [a, b] => dirs.push(direction_from_pair(a, b)?.basis[0].clone()),
            m => {
                return Err(Error::InvalidParameter(format!(
                    "pair directions need two-word defining sets, got {} words",
                    m.len()
                )))
            }
        }
    }
    let mean = linalg::mean(dirs.iter().map(Vec::as_slice));
    linalg::normalized(&mean).ok_or_else(|| Error::ZeroVector("mean of pair directions".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rw(v: &[f64]) -> ResolvedWord {
        ResolvedWord::new("w", v.to_vec()).unwrap()
    }

    fn crossed_pairs(r: f64, x: f64) -> Vec<DefiningSet> {
        let a1 = vec![-x, r * x];
        let a2 = vec![-x, -r * x];
        let c1: Vec<f64> = a1.iter().map(|v| -v).collect();
        let c2: Vec<f64> = a2.iter().map(|v| -v).collect();
        vec![
            DefiningSet::from_vectors(&[a1, c1]).unwrap(),
            DefiningSet::from_vectors(&[a2, c2]).unwrap(),
        ]
    }

    #[test]
    fn pair_direction() {
        let s = direction_from_pair(&rw(&[1.0, 0.0]), &rw(&[0.0, 1.0])).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.basis()[0][0] - h).abs() < 1e-15 && (s.basis()[0][1] + h).abs() < 1e-15);
        let s = direction_from_pair(&rw(&[2.0, 0.0]), &rw(&[1.0, 0.0])).unwrap();
        assert_eq!(s.basis()[0], vec![1.0, 0.0]);
        assert!(direction_from_pair(&rw(&[1.0, 2.0]), &rw(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn pca_on_crossed_pairs_picks_the_y_axis() {
        let s = subspace_pca(&crossed_pairs(2.0, 1.0), 1).unwrap();
        assert!((s.basis()[0][0]).abs() < 1e-9);
        assert!((s.basis()[0][1] - 1.0).abs() < 1e-9);
        // residuals (±1, ±2): variance 4 along y, 1 along x
        assert!((s.explained_variance()[0] - 4.0).abs() < 1e-9);
        let both = subspace_pca(&crossed_pairs(2.0, 1.0), 2).unwrap();
        assert!(both.orthonormality_error() < 1e-10);
        assert!((both.basis()[1][0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_pair_pca_matches_pair_direction_up_to_sign() {
        let a = rw(&[0.3, -1.2, 0.5]);
        let c = rw(&[-0.7, 0.4, 0.9]);
        let pca = subspace_pca(&[DefiningSet::new(vec![a.clone(), c.clone()]).unwrap()], 1).unwrap();
        let pair = direction_from_pair(&a, &c).unwrap();
        let dot = linalg::dot(&pca.basis()[0], &pair.basis()[0]);
        assert!((dot.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let sets = vec![DefiningSet::from_vectors(&[vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap()];
        assert!(matches!(subspace_pca(&sets, 2), Err(Error::RankDeficient { requested: 2, .. })));
        assert!(subspace_pca(&sets, 3).is_err());
        assert!(subspace_pca(&[], 1).is_err());
    }

    #[test]
    fn sign_convention_makes_largest_component_positive() {
        let mut v = vec![0.1, -0.9, 0.3];
        canonical_sign(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.3]);
    }

    #[test]
    fn direct_bias_examples() {
        let g = BiasSubspace::new(vec![vec![0.0, 1.0]], SubspaceConstruction::WordPair, vec![], vec![]);
        let t = |v: &[f64]| TargetSet::from_vectors("W", &[v.to_vec()]).unwrap();
        assert_eq!(direct_bias(&t(&[0.0, 1.0]), &g, 1.0).unwrap(), 1.0);
        assert_eq!(direct_bias(&t(&[1.0, 0.0]), &g, 1.0).unwrap(), 0.0);
        assert!(direct_bias(&t(&[1.0, 0.0]), &g, -0.5).is_err());
        let pca = subspace_pca(&crossed_pairs(2.0, 1.0), 1).unwrap();
        assert!((direct_bias(&t(&[0.0, 5.0]), &pca, 1.0).unwrap() - 1.0).abs() < 1e-9);
        let two = subspace_pca(&crossed_pairs(2.0, 1.0), 2).unwrap();
        assert!(direct_bias(&t(&[0.0, 5.0]), &two, 1.0).is_err());
    }

    #[test]
    fn mean_direction_of_crossed_pairs_is_horizontal() {
        let g = mean_pair_direction(&crossed_pairs(2.0, 1.0)).unwrap();
        assert!((g[0].abs() - 1.0).abs() < 1e-12 && g[1].abs() < 1e-12);
    }

    #[test]
    fn defining_set_needs_two_words() {
        assert!(DefiningSet::from_vectors(&[vec![1.0, 0.0]]).is_err());
        let d = DefiningSet::from_vectors(&[vec![1.0, 0.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(d.mean(), &[0.5, 1.5]);
    }
}
