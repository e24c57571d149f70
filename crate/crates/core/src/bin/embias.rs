use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use embias::commands::{cmd_diagnose, cmd_score, cmd_synth, SynthOptions};
use embias::config::RunConfig;
use embias::diagnostics::Metrics;
use embias::report::write_file;
use embias::synth::{GridConfig, WeatSplit};
use embias::{Error, Result};

#[derive(Parser)]
#[command(name = "embias", version, about = "Bias metrics for word embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score target word lists against attribute sets.
    Score {
        #[arg(long)]
        config: PathBuf,
        /// JSON report path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-word scores as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Record wall time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Check every metric against the counterexample fixtures.
    Diagnose {
        #[arg(long)]
        json: bool,
    },
    /// Run the synthetic grid experiment.
    Synth {
        /// Comma-separated μ values; defaults to 0.25..=0.75 step 0.05.
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<f64>>,
        /// Comma-separated σ values; defaults to 0.10..=0.35 step 0.05.
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<f64>>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 32)]
        dim: usize,
        #[arg(long, default_value_t = 258)]
        n_words: usize,
        /// How target words are split into WEAT's X and Y: list-order or planted-sign.
        #[arg(long, default_value = "list-order")]
        weat_split: String,
        /// Directory for grid.csv and summary.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Score {
            config,
            out,
            csv,
            timing,
        } => {
            let (cfg, base) = RunConfig::load(&config)?;
            let report = cmd_score(&cfg, &base, timing)?;
            let json = report.to_json()?;
            match out {
                Some(p) => write_file(&p, &json)?,
                None => print!("{json}"),
            }
            if let Some(p) = csv {
                write_file(&p, &report.word_scores_csv())?;
            }
            Ok(0)
        }
        Command::Diagnose { json } => {
            let (text, code) = cmd_diagnose(&Metrics::faithful(), json)?;
            print!("{text}");
            Ok(code)
        }
        Command::Synth {
            mu,
            sigma,
            reps,
            seed,
            noise,
            dim,
            n_words,
            weat_split,
            out_dir,
        } => {
            let mut grid = GridConfig::standard(seed);
            if let Some(mu) = mu {
                grid.mu_grid = mu;
            }
            if let Some(sigma) = sigma {
                grid.sigma_grid = sigma;
            }
            grid.reps = reps;
            grid.noise = noise;
            grid.dim = dim;
            grid.n_words = n_words;
            grid.weat_split = match weat_split.as_str() {
                "list-order" => WeatSplit::ListOrder,
                "planted-sign" => WeatSplit::PlantedSign,
                other => {
                    return Err(Error::Config(vec![format!(
                        "--weat-split: expected list-order or planted-sign, got `{other}`"
                    )]))
                }
            };
            let output = cmd_synth(&SynthOptions { grid, out_dir })?;
            print!("{}", output.table);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("EMBIAS_THREADS") {
        match n.parse::<usize>() {
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Err(_) => eprintln!("embias: ignoring EMBIAS_THREADS={n:?}"),
        }
    }
    // Usage errors are validation errors; clap's own code 2 means a numeric failure here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("embias: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
