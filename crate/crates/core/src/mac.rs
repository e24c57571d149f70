//! Mean Average Cosine similarity, implemented as published.
//!
//! MAC averages cosine distances to each attribute set without contrasting
//! the sets, so it has known blind spots (antipodal attributes always give
//! 1). They are reproduced here on purpose; [`crate::diagnostics`] exhibits
//! them.

use crate::error::Result;
use crate::similarity::{cosine, AttributeFamily, AttributeSet, TargetSet};
use crate::store::ResolvedWord;

/// `(1/|A_j|) Σ_{a ∈ A_j} (1 − cos(t, a))`, in `[0, 2]`.
pub fn mac_word_set(t: &ResolvedWord, set: &AttributeSet) -> Result<f64> {
    let mut total = 0.0;
    for a in set.members() {
        total += 1.0 - cosine(t.vector(), a.vector())?;
    }
    Ok(total / set.len() as f64)
}

/// MAC score of a single word against every set of the family.
pub fn mac_word(t: &ResolvedWord, family: &AttributeFamily) -> Result<f64> {
    let mut total = 0.0;
    for set in family.sets() {
        total += mac_word_set(t, set)?;
    }
    Ok(total / family.len() as f64)
}

/// Mean of [`mac_word_set`] over all (target, attribute set) pairs.
pub fn mac(targets: &TargetSet, family: &AttributeFamily) -> Result<f64> {
    let mut total = 0.0;
    for t in targets.members() {
        total += mac_word(t, family)?;
    }
    Ok(total / targets.len() as f64)
}
