//! Cosine kernel, attribute and target sets, and the word-to-set association
//! shared by every metric.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg;
use crate::store::ResolvedWord;

/// Cosine similarity clamped to `[-1, 1]`.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let nu = linalg::norm(u);
    let nv = linalg::norm(v);
    if nu == 0.0 {
        return Err(Error::ZeroVector("left operand".into()));
    }
    if nv == 0.0 {
        return Err(Error::ZeroVector("right operand".into()));
    }
    Ok((linalg::dot(u, v) / (nu * nv)).clamp(-1.0, 1.0))
}

fn check_dims(members: &[ResolvedWord], what: &str) -> Result<usize> {
    let first = members
        .first()
        .ok_or_else(|| Error::EmptySet(what.to_string()))?;
    let dim = first.dim();
    for m in members {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.dim(),
            });
        }
    }
    Ok(dim)
}

fn words_from_vectors(prefix: &str, vectors: &[Vec<f64>]) -> Result<Vec<ResolvedWord>> {
    vectors
        .iter()
        .enumerate()
        .map(|(i, v)| ResolvedWord::new(format!("{prefix}[{i}]"), v.clone()))
        .collect()
}

/// Words defining one protected group. The centroid is the mean of the
/// unit-normalized members; members are immutable once the set is built.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeSet {
    name: String,
    members: Vec<ResolvedWord>,
    centroid: Vec<f64>,
}

impl AttributeSet {
    pub fn new(name: impl Into<String>, members: Vec<ResolvedWord>) -> Result<Self> {
        let name = name.into();
        check_dims(&members, &format!("attribute set `{name}`"))?;
        let normalized: Vec<Vec<f64>> = members
            .iter()
            .map(|m| linalg::normalized(m.vector()).expect("resolved words are nonzero"))
            .collect();
        let centroid = linalg::mean(normalized.iter().map(Vec::as_slice));
        Ok(Self {
            name,
            members,
            centroid,
        })
    }

    /// Set of anonymous members named `name[i]`.
    pub fn from_vectors(name: impl Into<String>, vectors: &[Vec<f64>]) -> Result<Self> {
        let name = name.into();
        let members = words_from_vectors(&name, vectors)?;
        Self::new(name, members)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &[ResolvedWord] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.centroid.len()
    }

    /// `(1/|A|) Σ a/‖a‖`
    pub fn centroid(&self) -> &[f64] {
        &self.centroid
    }

    /// Pools the members of several sets into a single set.
    pub fn union<'a>(name: impl Into<String>, sets: impl IntoIterator<Item = &'a AttributeSet>) -> Result<Self> {
        let members = sets
            .into_iter()
            .flat_map(|s| s.members.iter().cloned())
            .collect();
        Self::new(name, members)
    }
}

/// Ordered collection of at least two attribute sets with unique names.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeFamily {
    sets: Vec<AttributeSet>,
}

impl AttributeFamily {
    pub fn new(sets: Vec<AttributeSet>) -> Result<Self> {
        if sets.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "an attribute family needs at least 2 sets, got {}",
                sets.len()
            )));
        }
        let mut seen = HashSet::new();
        for s in &sets {
            if !seen.insert(s.name()) {
                return Err(Error::InvalidParameter(format!("duplicate attribute set name `{}`", s.name())));
            }
        }
        let dim = sets[0].dim();
        if let Some(bad) = sets.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { sets })
    }

    pub fn pair(a: AttributeSet, b: AttributeSet) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn sets(&self) -> &[AttributeSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.sets[0].dim()
    }

    /// Same sets in a different order; `order` is a permutation of indices.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        Self::new(order.iter().map(|&i| self.sets[i].clone()).collect())
    }
}

/// Words that should be neutral with respect to the protected groups.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSet {
    name: String,
    members: Vec<ResolvedWord>,
}

impl TargetSet {
    pub fn new(name: impl Into<String>, members: Vec<ResolvedWord>) -> Result<Self> {
        let name = name.into();
        check_dims(&members, &format!("target set `{name}`"))?;
        Ok(Self { name, members })
    }

    pub fn from_vectors(name: impl Into<String>, vectors: &[Vec<f64>]) -> Result<Self> {
        let name = name.into();
        let members = words_from_vectors(&name, vectors)?;
        Self::new(name, members)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &[ResolvedWord] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// Subset by member indices (in the given order).
    pub fn subset(&self, name: impl Into<String>, indices: &[usize]) -> Result<Self> {
        Self::new(name, indices.iter().map(|&i| self.members[i].clone()).collect())
    }
}

/// `s(w, A)`: mean cosine between `w` and the members of `A`.
pub fn assoc(w: &ResolvedWord, set: &AttributeSet) -> Result<f64> {
    let mut total = 0.0;
    for a in set.members() {
        total += cosine(w.vector(), a.vector())?;
    }
    Ok(total / set.len() as f64)
}
