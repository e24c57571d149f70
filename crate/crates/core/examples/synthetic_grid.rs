// A small planted-bias grid: generates spaces for a few (mu, sigma) pairs
// and prints how well each metric's word scores track the planted bias.

use embias::commands::{cmd_synth, SynthOptions};
use embias::synth::GridConfig;

pub fn run_example() -> embias::Result<()> {
    let mut grid = GridConfig::standard(7);
    grid.mu_grid = vec![0.3, 0.5, 0.7];
    grid.sigma_grid = vec![0.1, 0.3];
    grid.reps = 2;
    let out = cmd_synth(&SynthOptions { grid, out_dir: None })?;
    print!("{}", out.table);

    println!("\nmu    sigma  skew      stereotype  weat d");
    for c in out.grid.cells.iter().filter(|c| c.rep == 0) {
        println!(
            "{:.2}  {:.2}   {:+.4}   {:.4}      {}",
            c.mu,
            c.sigma,
            c.same_skew,
            c.same_stereotype,
            c.weat_effect_size.map_or("undefined".into(), |d| format!("{d:+.4}"))
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("synthetic grid example");
}
