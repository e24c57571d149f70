//! The three command entry points behind the `embias` binary, usable from
//! library code as well.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{Metric, PValueOption, RunConfig, WordList};
use crate::diagnostics::{self, Metrics};
use crate::direct_bias::{direct_bias, direct_bias_word, direction_from_pair, subspace_pca, BiasSubspace, DefiningSet};
use crate::error::{Error, Result};
use crate::mac::{mac, mac_word};
use crate::report::{
    write_file, BiasReport, DirectionInfo, DroppedWord, EmbeddingInfo, TargetReport, WeatReport, WordScore,
};
use crate::same::{same_pairwise, same_pairwise_report};
use crate::similarity::{AttributeFamily, AttributeSet, TargetSet};
use crate::store::{EmbeddingSpace, ResolvedWord};
use crate::synth::{grid_experiment, GridCell, GridConfig, GridReport};
use crate::weat::{weat, PValueMethod, WeatPartition};

struct Resolver<'a> {
    space: &'a EmbeddingSpace,
    config: &'a RunConfig,
    base_dir: &'a Path,
    dropped: Vec<DroppedWord>,
    missing: Vec<String>,
}

impl Resolver<'_> {
    fn words(&mut self, list: &str, words: &[String]) -> Result<Vec<ResolvedWord>> {
        let (resolved, dropped) = self.space.resolve_all(words, self.config.options.phrase_policy, true)?;
        for word in dropped {
            if self.config.options.skip_missing {
                self.dropped.push(DroppedWord {
                    list: list.to_string(),
                    word,
                });
            } else {
                self.missing.push(format!("`{word}` (in `{list}`) is not in the vocabulary"));
            }
        }
        Ok(resolved)
    }

    fn list(&mut self, list: &WordList) -> Result<Vec<ResolvedWord>> {
        let words = list.load(self.base_dir)?;
        self.words(&list.name, &words)
    }

    /// Missing words are reported together once everything was resolved.
    fn finish(&mut self) -> Result<()> {
        if self.missing.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(std::mem::take(&mut self.missing)))
        }
    }
}

fn bias_direction(
    config: &RunConfig,
    resolver: &mut Resolver,
    family: &AttributeFamily,
) -> Result<(BiasSubspace, Vec<(String, String)>)> {
    let mut pairs: Vec<(ResolvedWord, ResolvedWord)> = Vec::new();
    if config.defining_pairs.is_empty() {
        let sets = family.sets();
        for (a, b) in sets[0].members().iter().zip(sets[1].members()) {
            pairs.push((a.clone(), b.clone()));
        }
    } else {
        for (a, b) in &config.defining_pairs {
            let resolved = resolver.words("defining_pairs", &[a.clone(), b.clone()])?;
            if let [ra, rb] = resolved.as_slice() {
                pairs.push((ra.clone(), rb.clone()));
            }
        }
    }
    resolver.finish()?;
    let names = pairs
        .iter()
        .map(|(a, b)| (a.surface().to_string(), b.surface().to_string()))
        .collect();
    let subspace = match pairs.as_slice() {
        [] => return Err(Error::EmptySet("defining pairs".into())),
        [(a, b)] => direction_from_pair(a, b)?,
        many => {
            let sets = many
                .iter()
                .map(|(a, b)| DefiningSet::new(vec![a.clone(), b.clone()]))
                .collect::<Result<Vec<_>>>()?;
            subspace_pca(&sets, 1)?
        }
    };
    Ok((subspace, names))
}

fn push_scores(out: &mut Vec<WordScore>, list: &str, metric: &str, words: &[ResolvedWord], values: &[f64]) {
    for (w, v) in words.iter().zip(values) {
        out.push(WordScore {
            target_set: list.to_string(),
            word: w.surface().to_string(),
            metric: metric.to_string(),
            value: *v,
            resolution: w.resolution().as_str().to_string(),
        });
    }
}

/// Runs every requested metric. `base_dir` anchors relative paths in the
/// config; `timing` adds the wall time to the report.
pub fn cmd_score(config: &RunConfig, base_dir: &Path, timing: bool) -> Result<BiasReport> {
    let start = Instant::now();
    config.validate()?;
    let opts = &config.options;
    let emb_path = base_dir.join(&config.embeddings.path);
    let space = EmbeddingSpace::load_with(&emb_path, config.embeddings.format, opts.case_policy)?;

    let mut resolver = Resolver {
        space: &space,
        config,
        base_dir,
        dropped: Vec::new(),
        missing: Vec::new(),
    };
    let mut attr_words = Vec::new();
    for l in &config.attribute_sets {
        attr_words.push((l.name.clone(), resolver.list(l)?));
    }
    let mut target_words = Vec::new();
    for l in &config.targets {
        target_words.push((l.name.clone(), resolver.list(l)?));
    }
    resolver.finish()?;

    let family = AttributeFamily::new(
        attr_words
            .into_iter()
            .map(|(name, words)| AttributeSet::new(name, words))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let targets = target_words
        .into_iter()
        .map(|(name, words)| TargetSet::new(name, words))
        .collect::<Result<Vec<_>>>()?;
    let (a, b) = (&family.sets()[0], &family.sets()[1]);

    let direction = if config.requests(Metric::DirectBias) {
        Some(bias_direction(config, &mut resolver, &family)?)
    } else {
        None
    };

    let mut word_scores = Vec::new();
    let mut reports = Vec::new();
    let wants_same = [Metric::Same, Metric::SameSkew, Metric::SameStereotype]
        .iter()
        .any(|m| config.requests(*m));
    for t in &targets {
        let mut scores = BTreeMap::new();
        let mut same = None;
        if config.requests(Metric::Mac) {
            scores.insert("mac".to_string(), mac(t, &family)?);
            let v = t.members().iter().map(|w| mac_word(w, &family)).collect::<Result<Vec<_>>>()?;
            push_scores(&mut word_scores, t.name(), "mac", t.members(), &v);
        }
        if let Some((g, _)) = &direction {
            scores.insert("direct-bias".to_string(), direct_bias(t, g, opts.c)?);
            let v = t
                .members()
                .iter()
                .map(|w| direct_bias_word(w, g, opts.c))
                .collect::<Result<Vec<_>>>()?;
            push_scores(&mut word_scores, t.name(), "direct-bias", t.members(), &v);
        }
        if wants_same {
            let r = same_pairwise_report(t, &family, opts.stereotype_mode, opts.one_vs_rest)?;
            if config.requests(Metric::Same) {
                scores.insert("same".to_string(), r.same_set);
                let v: Vec<f64> = r.word_magnitudes.iter().map(|(_, m)| *m).collect();
                push_scores(&mut word_scores, t.name(), "same", t.members(), &v);
            }
            if family.len() == 2 {
                if config.requests(Metric::SameSkew) {
                    scores.insert("same-skew".to_string(), r.pairwise[0].skew);
                }
                if config.requests(Metric::SameStereotype) {
                    scores.insert("same-stereotype".to_string(), r.pairwise[0].stereotype);
                }
                let v = t.members().iter().map(|w| same_pairwise(w, a, b)).collect::<Result<Vec<_>>>()?;
                push_scores(&mut word_scores, t.name(), "same-pairwise", t.members(), &v);
            }
            same = Some(r);
        }
        reports.push(TargetReport {
            name: t.name().to_string(),
            words: t.len(),
            scores,
            same,
        });
    }

    let weat_report = match (&config.weat_partition, config.requests(Metric::Weat)) {
        (Some(p), true) => {
            let find = |name: &str| targets.iter().find(|t| t.name() == name).cloned().expect("validated");
            let (x, y) = (find(&p.x), find(&p.y));
            let part = WeatPartition::new(x.clone(), y.clone())?;
            let method = match opts.p_value {
                PValueOption::Off => None,
                PValueOption::Exact => Some(PValueMethod::Exact),
                PValueOption::MonteCarlo { iterations } => Some(PValueMethod::MonteCarlo {
                    iterations,
                    seed: opts.seed,
                }),
            };
            let r = weat(&part, a, b, method)?;
            let (xs, ys) = r.word_scores.split_at(x.len());
            let xv: Vec<f64> = xs.iter().map(|(_, v)| *v).collect();
            let yv: Vec<f64> = ys.iter().map(|(_, v)| *v).collect();
            push_scores(&mut word_scores, x.name(), "weat", x.members(), &xv);
            push_scores(&mut word_scores, y.name(), "weat", y.members(), &yv);
            Some(WeatReport {
                x: p.x.clone(),
                y: p.y.clone(),
                attribute_a: a.name().to_string(),
                attribute_b: b.name().to_string(),
                effect_size: r.effect_size,
                test_statistic: r.test_statistic,
                p_value: r.p_value,
                p_method: r.p_method,
            })
        }
        _ => None,
    };

    Ok(BiasReport {
        tool: "embias".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        embedding: EmbeddingInfo {
            source: config.embeddings.path.display().to_string(),
            dim: space.dim(),
            vocabulary: space.len(),
        },
        targets: reports,
        weat: weat_report,
        direct_bias_direction: direction.map(|(g, pairs)| DirectionInfo {
            construction: g.construction(),
            defining_pairs: pairs,
            explained_variance: g.explained_variance().to_vec(),
            c: opts.c,
        }),
        word_scores,
        dropped_words: resolver.dropped,
        wall_time_seconds: timing.then(|| start.elapsed().as_secs_f64()),
    })
}

/// Exit code for a failed diagnostics run.
pub const DIAGNOSTICS_FAILED: i32 = 3;

/// Runs every diagnostic against `metrics`; returns the rendered output and
/// the exit code (0 or [`DIAGNOSTICS_FAILED`]).
pub fn cmd_diagnose(metrics: &Metrics, json: bool) -> Result<(String, i32)> {
    let report = diagnostics::run_diagnostics(metrics);
    let text = if json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        diagnostics::render_table(&report)
    };
    Ok((text, if report.all_passed { 0 } else { DIAGNOSTICS_FAILED }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOptions {
    pub grid: GridConfig,
    pub out_dir: Option<PathBuf>,
}

/// Mean R² over reps for one (μ, σ), against `β` and against `|β|`;
/// `None` if undefined in any rep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R2Row {
    pub mu: f64,
    pub sigma: f64,
    pub r2: BTreeMap<String, Option<f64>>,
    pub r2_abs: BTreeMap<String, Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSummary {
    pub tool: String,
    pub version: String,
    pub config: GridConfig,
    pub r2_table: Vec<R2Row>,
    pub cells: Vec<GridCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub grid: GridReport,
    pub summary: SynthSummary,
    pub csv: String,
    pub summary_json: String,
    pub table: String,
}

fn r2_table(grid: &GridReport) -> Vec<R2Row> {
    let cfg = &grid.config;
    let mut rows = Vec::new();
    for (mi, &mu) in cfg.mu_grid.iter().enumerate() {
        for (si, &sigma) in cfg.sigma_grid.iter().enumerate() {
            let cells: Vec<&GridCell> = (0..cfg.reps).filter_map(|r| grid.cell(mi, si, r)).collect();
            let mean = |metric: &str, abs: bool| -> Option<f64> {
                let values: Option<Vec<f64>> = cells
                    .iter()
                    .map(|c| {
                        let e = c.r2.iter().find(|x| x.metric == metric)?;
                        if abs {
                            e.r2_abs
                        } else {
                            e.r2
                        }
                    })
                    .collect();
                values.map(|v| v.iter().sum::<f64>() / v.len() as f64)
            };
            let metrics: Vec<&str> = cells[0].r2.iter().map(|e| e.metric.as_str()).collect();
            rows.push(R2Row {
                mu,
                sigma,
                r2: metrics.iter().map(|m| (m.to_string(), mean(m, false))).collect(),
                r2_abs: metrics.iter().map(|m| (m.to_string(), mean(m, true))).collect(),
            });
        }
    }
    rows
}

fn render_r2_table(rows: &[R2Row]) -> String {
    let metrics: Vec<String> = rows.first().map(|r| r.r2.keys().cloned().collect()).unwrap_or_default();
    let mut out = format!("{:>6} {:>6}", "mu", "sigma");
    for m in &metrics {
        out.push_str(&format!(" {:>18} {:>18}", format!("R2 {m}"), format!("R2|b| {m}")));
    }
    out.push('\n');
    let cell = |v: Option<f64>| match v {
        Some(v) => format!(" {v:>18.6}"),
        None => format!(" {:>18}", "undefined"),
    };
    for r in rows {
        out.push_str(&format!("{:>6.2} {:>6.2}", r.mu, r.sigma));
        for m in &metrics {
            out.push_str(&cell(r.r2[m]));
            out.push_str(&cell(r.r2_abs[m]));
        }
        out.push('\n');
    }
    out
}

/// Runs the grid and, with an output directory, writes `grid.csv` and
/// `summary.json` there.
pub fn cmd_synth(opts: &SynthOptions) -> Result<SynthOutput> {
    let grid = grid_experiment(&opts.grid)?;
    let summary = SynthSummary {
        tool: "embias".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: grid.config.clone(),
        r2_table: r2_table(&grid),
        cells: grid.cells.clone(),
    };
    let csv = grid.to_csv();
    let summary_json = serde_json::to_string_pretty(&summary)? + "\n";
    let table = render_r2_table(&summary.r2_table);
    if let Some(dir) = &opts.out_dir {
        write_file(&dir.join("grid.csv"), &csv)?;
        write_file(&dir.join("summary.json"), &summary_json)?;
    }
    Ok(SynthOutput {
        grid,
        summary,
        csv,
        summary_json,
        table,
    })
}
