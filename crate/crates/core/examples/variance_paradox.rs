// Six words with fixed planted scores, regrouped into WEAT's X and Y three
// ways. The effect size depends entirely on the grouping; SAME does not.

use embias::diagnostics::variance_paradox_demo;

pub fn run_example() -> embias::Result<()> {
    let demo = variance_paradox_demo()?;
    for (w, b) in &demo.planted {
        println!("{w:<12} planted {b:+.1}");
    }
    println!();
    for p in &demo.pairings {
        println!(
            "{:<16} X={:?} Y={:?}\n{:<16} d = {:+.4}  SAME = {:.4}",
            p.name, p.x, p.y, "", p.effect_size, p.same_binary_set
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("variance paradox example");
}
