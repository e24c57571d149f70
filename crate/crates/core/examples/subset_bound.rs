// Any m of n standardized values sum to at most sqrt(m(n-m)) in absolute
// value, and a two-level list reaches the bound. This caps how extreme a
// WEAT effect size can get for a given split.

use embias::diagnostics::subset_sum_bound_report;

pub fn run_example() -> embias::Result<()> {
    let lists: [&[f64]; 3] = [
        &[0.1, 0.4, -0.2, 0.9, 0.3],
        &[1.0, 1.0, 1.0, -1.0, -1.0, -1.0],
        &[5.0, -3.0, 0.5, 0.25, 2.0, -1.5, 0.0, 0.75],
    ];
    for xs in lists {
        let r = subset_sum_bound_report(xs)?;
        println!(
            "n={:<2} worst slack {:+.3e}  equality error {:.1e}  holds: {}",
            xs.len(),
            r.worst_slack,
            r.equality_error,
            r.holds()
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("subset bound example");
}
