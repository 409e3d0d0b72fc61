//! One function per subcommand. Each reads its inputs, writes its outputs
//! and returns a short summary for the terminal.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use vapokit_core::bench::{assemble, build_record, LayoutConfig, SeedRecord, TemplateGenerator, TextGenerator};
use vapokit_core::grpo::{train, BehaviorTuple, StepRecord, TrainTrace};
use vapokit_core::metrics::{sample_counts, MetricCounts, MetricReport, MetricSelection};
use vapokit_core::ocr::{dataset_rate, VocabOptions};
use vapokit_core::reward::{total_reward, RewardBreakdown, RewardConfig, RewardWeights};
use vapokit_core::text::LangMode;
use vapokit_core::Sample;

use crate::config::{load_weights, SimulateConfig};
use crate::error::{Error, Result};
use crate::io::{pair_by_id, read_dataset, read_jsonl, write_bytes, write_json, write_jsonl, write_manifest, Hypothesis, Rollout};
use crate::remote::{RemoteConfig, RemoteGenerator};
use crate::report::{load_table, render, Format};

/// Tokenization override for `score`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LangChoice {
    En,
    Zh,
    Auto,
}

impl LangChoice {
    fn mode(self, sample: &Sample) -> LangMode {
        match self {
            LangChoice::En => LangMode::LatinWord,
            LangChoice::Zh => LangMode::Mixed,
            LangChoice::Auto => LangMode::detect(&sample.transcript_gt),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleScore {
    pub id: String,
    #[serde(flatten)]
    pub report: MetricReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScoreOutput {
    pub metrics: MetricSelection,
    pub corpus: MetricReport,
    pub samples: Vec<SampleScore>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub missing: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unknown: Vec<String>,
}

/// Per-sample and pooled metrics. Counts are summed over samples in id
/// order before dividing.
pub fn score(
    dataset: &Path,
    hyp: &Path,
    metrics: MetricSelection,
    lang: Option<LangChoice>,
    allow_partial: bool,
) -> Result<ScoreOutput> {
    let samples = read_dataset(dataset)?;
    let hyps: Vec<Hypothesis> = read_jsonl(hyp)?;
    let paired = pair_by_id(&samples, &hyps, |h| &h.id, allow_partial)?;
    let counts: Vec<(String, MetricCounts)> = paired
        .pairs
        .par_iter()
        .map(|(s, h)| {
            let mode = lang.map_or_else(|| s.mode(), |l| l.mode(s));
            (s.id.clone(), sample_counts(&s.transcript_gt, &h.text, &s.entities, mode))
        })
        .collect();
    let mut total = MetricCounts::default();
    let mut rows = Vec::with_capacity(counts.len());
    for (id, c) in counts {
        total += c;
        rows.push(SampleScore {
            id,
            report: c.report(metrics),
        });
    }
    Ok(ScoreOutput {
        metrics,
        corpus: total.report(metrics),
        samples: rows,
        missing: paired.missing,
        unknown: paired.unknown,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RewardRow {
    pub id: String,
    /// Position among the rollouts sharing this id, in file order.
    pub rollout: usize,
    #[serde(flatten)]
    pub breakdown: RewardBreakdown,
}

/// Scores every rollout. Output is ordered by id, then file order.
pub fn reward(dataset: &Path, rollouts: &Path, weights: Option<&Path>) -> Result<Vec<RewardRow>> {
    let samples = read_dataset(dataset)?;
    let rollouts: Vec<Rollout> = read_jsonl(rollouts)?;
    let weights = match weights {
        Some(p) => load_weights(p)?,
        None => RewardWeights::default(),
    };
    let config = RewardConfig::with_weights(weights);
    let by_id: std::collections::BTreeMap<&str, &Sample> = samples.iter().map(|s| (s.id.as_str(), s)).collect();
    let mut unknown: Vec<String> = rollouts
        .iter()
        .filter(|r| !by_id.contains_key(r.id.as_str()))
        .map(|r| r.id.clone())
        .collect();
    if !unknown.is_empty() || rollouts.is_empty() {
        unknown.dedup();
        return Err(Error::Pairing {
            missing: Vec::new(),
            unknown,
            duplicated: Vec::new(),
        });
    }
    let mut seen: std::collections::HashMap<&str, usize> = Default::default();
    let mut indexed: Vec<(&Rollout, usize)> = rollouts
        .iter()
        .map(|r| {
            let n = seen.entry(r.id.as_str()).or_default();
            *n += 1;
            (r, *n - 1)
        })
        .collect();
    indexed.sort_by(|a, b| a.0.id.cmp(&b.0.id).then(a.1.cmp(&b.1)));
    Ok(indexed
        .par_iter()
        .map(|(r, k)| RewardRow {
            id: r.id.clone(),
            rollout: *k,
            breakdown: total_reward(by_id[r.id.as_str()], &r.output, &config),
        })
        .collect())
}

/// OCR-behavior rate with per-sample flags.
pub fn detect(dataset: &Path, hyp: &Path, name: Option<&str>, min_token_chars: usize) -> Result<Value> {
    let samples = read_dataset(dataset)?;
    let hyps: Vec<Hypothesis> = read_jsonl(hyp)?;
    pair_by_id(&samples, &hyps, |h| &h.id, false)?;
    let outputs: Vec<(String, String)> = hyps.into_iter().map(|h| (h.id, h.text)).collect();
    let summary = dataset_rate(&samples, &outputs, VocabOptions { min_token_chars })?;
    let name = name
        .map(str::to_string)
        .or_else(|| hyp.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_default();
    let split = dataset.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut v = serde_json::to_value(&summary).expect("summary serializes");
    let obj = v.as_object_mut().expect("summary is an object");
    obj.insert("name".into(), json!(name));
    obj.insert("split".into(), json!(split));
    // label first, like a table row
    let mut ordered = serde_json::Map::new();
    for k in ["name", "split", "percentage", "detected", "total", "flags"] {
        if let Some(x) = obj.remove(k) {
            ordered.insert(k.into(), x);
        }
    }
    Ok(Value::Object(ordered))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GeneratorChoice {
    Template,
    Remote,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildSummary {
    pub samples: usize,
    pub entities: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hours: Option<f64>,
    pub failures: usize,
    pub manifest: PathBuf,
}

fn build_with<G: TextGenerator + Clone + Send + Sync>(
    records: &[SeedRecord],
    generator: &G,
    outdir: &Path,
) -> Result<BuildSummary> {
    let layout = LayoutConfig::default();
    let results = records
        .par_iter()
        .enumerate()
        .map(|(i, r)| build_record(i, r, &mut generator.clone(), &layout))
        .collect();
    let out = assemble(results);
    for (rel, svg) in &out.slides {
        write_bytes(&outdir.join(rel), svg.as_bytes())?;
    }
    let manifest = outdir.join("manifest.jsonl");
    write_manifest(&manifest, &out.manifest)?;
    write_jsonl(&outdir.join("failures.jsonl"), &out.failures)?;
    Ok(BuildSummary {
        samples: out.manifest.header.samples,
        entities: out.manifest.header.entities,
        hours: out.manifest.header.hours,
        failures: out.failures.len(),
        manifest,
    })
}

/// Builds `manifest.jsonl`, `failures.jsonl` and `slides/*.svg` under `outdir`.
pub fn build(seeds: &Path, outdir: &Path, generator: GeneratorChoice) -> Result<BuildSummary> {
    let records: Vec<SeedRecord> = read_jsonl(seeds)?;
    match generator {
        GeneratorChoice::Template => build_with(&records, &TemplateGenerator, outdir),
        GeneratorChoice::Remote => {
            let remote = RemoteGenerator::new(RemoteConfig::from_env()?);
            build_with(&records, &remote, outdir)
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum TraceLine<'a> {
    Config {
        seed: u64,
        config: &'a vapokit_core::grpo::TrainConfig,
        samples: usize,
    },
    Step(&'a StepRecord),
    Final {
        optimal_tuple: String,
        optimal_mass: f64,
        probabilities: &'a [f64],
    },
}

/// Trains and writes the trace as JSON lines at `out` plus a CSV of the
/// step records next to it.
pub fn simulate(config: &Path, out: &Path, seed: Option<u64>) -> Result<TrainTrace> {
    let mut cfg = SimulateConfig::load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let samples = read_dataset(&cfg.samples)?;
    let trace = train(&cfg.train_config(), &samples)?;
    let mut lines = vec![TraceLine::Config {
        seed: trace.seed,
        config: &trace.config,
        samples: samples.len(),
    }];
    lines.extend(trace.steps.iter().map(TraceLine::Step));
    lines.push(TraceLine::Final {
        optimal_tuple: BehaviorTuple::OPTIMAL.to_string(),
        optimal_mass: trace.final_probabilities[BehaviorTuple::OPTIMAL.index()],
        probabilities: &trace.final_probabilities,
    });
    write_jsonl(out, &lines)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in &trace.steps {
        w.serialize(s)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(out, e.into_error()))?;
    write_bytes(&out.with_extension("csv"), &bytes)?;
    Ok(trace)
}

pub fn report(input: &Path, format: Format) -> Result<String> {
    Ok(render(&load_table(input)?, format))
}

pub fn write_output<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_json(path, value)
}
