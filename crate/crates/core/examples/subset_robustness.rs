// How much does a metric move when scored on random halves of the target
// words? Reported relative to each metric's value range, next to the
// spread across regenerated spaces.

use embias::synth::{generate, rerun_stability, subset_robustness, MetricId, SyntheticSpec, WeatSplit};

pub fn run_example() -> embias::Result<()> {
    let spec = SyntheticSpec {
        noise: 0.05,
        seed: 3,
        ..SyntheticSpec::default()
    };
    let space = generate(&spec)?;
    let ctx = space.context(WeatSplit::ListOrder)?;

    println!("{:<16} {:>10} {:>9}", "metric", "robustness", "skipped");
    for m in MetricId::ALL {
        let r = subset_robustness(&ctx, m, 200, 11)?;
        println!("{:<16} {:>10.5} {:>9}", m.as_str(), r.value, r.skipped);
    }

    println!("\n{:<16} {:>10}", "metric", "rerun diff %");
    for e in rerun_stability(&spec, 4)? {
        println!("{:<16} {:>10.3}", e.metric, e.percentage_difference);
    }
    Ok(())
}

fn main() {
    run_example().expect("robustness example");
}
