// Scores the bundled toy vectors with every metric, the way `embias score`
// does, and prints the set-level table.

use std::path::Path;

use embias::commands::cmd_score;
use embias::config::RunConfig;

pub fn run_example() -> embias::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/configs/toy_gender.json");
    let (config, base) = RunConfig::load(&path)?;
    let report = cmd_score(&config, &base, false)?;

    println!("{} words of dim {}", report.embedding.vocabulary, report.embedding.dim);
    for t in &report.targets {
        let cols: Vec<String> = t.scores.iter().map(|(m, v)| format!("{m}={v:.3}")).collect();
        println!("{:<14} {}", t.name, cols.join("  "));
    }
    if let Some(w) = &report.weat {
        println!("weat {} vs {}: d = {:.3}, p = {:?}", w.x, w.y, w.effect_size, w.p_value);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
