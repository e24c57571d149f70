// SAME with three attribute sets: the bias subspace is spanned by the
// centroid differences, words in that span score 1 and orthogonal words 0.

use embias::same::{same_pairwise_report, same_subspace, same_word, StereotypeMode};
use embias::similarity::{AttributeFamily, AttributeSet, TargetSet};
use embias::store::ResolvedWord;

pub fn run_example() -> embias::Result<()> {
    let family = AttributeFamily::new(vec![
        AttributeSet::from_vectors("A0", &[vec![1.0, 0.0, 0.0, 0.0], vec![0.9, 0.1, 0.0, 0.0]])?,
        AttributeSet::from_vectors("A1", &[vec![0.0, 1.0, 0.0, 0.0], vec![0.1, 0.9, 0.0, 0.0]])?,
        AttributeSet::from_vectors("A2", &[vec![0.0, 0.0, 1.0, 0.0]])?,
    ])?;
    let subspace = same_subspace(&family)?;
    println!("subspace rank {} in dim {}", subspace.len(), subspace.dim());

    let words = vec![
        ResolvedWord::new("in-span", subspace.basis()[0].clone())?,
        ResolvedWord::new("orthogonal", vec![1.0, 1.0, 1.0, 0.0])?,
        ResolvedWord::new("mixed", vec![0.5, 0.0, 0.0, 1.0])?,
    ];
    for w in &words {
        println!("{:<11} same_word = {:.6}", w.surface(), same_word(w, &subspace)?);
    }

    let targets = TargetSet::new("words", words)?;
    let report = same_pairwise_report(&targets, &family, StereotypeMode::Stddev, true)?;
    println!("same_set = {:.6}", report.same_set);
    for p in &report.pairwise {
        println!("{} vs {}: skew {:+.4} stereotype {:.4}", p.first, p.second, p.skew, p.stereotype);
    }
    for o in &report.one_vs_rest {
        println!("{} vs rest: skew {:+.4} stereotype {:.4}", o.set, o.skew, o.stereotype);
    }
    Ok(())
}

fn main() {
    run_example().expect("multiclass example");
}
