use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use vapokit::commands::{self, GeneratorChoice, LangChoice};
use vapokit::io::{validate_manifest, write_jsonl};
use vapokit::report::Format;
use vapokit::{Error, Result};
use vapokit_core::metrics::MetricSelection;

#[derive(Parser)]
#[command(name = "vapokit", version, about = "Slide-aware ASR evaluation, rewards and benchmark tooling")]
struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// WER, B-WER, U-WER, recall, NE-WER and NE-FNR per sample and pooled.
    Score {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long, default_value = "wer,bwer,uwer,recall,newer,nefnr", value_parser = parse_metrics)]
        metrics: MetricSelection,
        /// Tokenization; defaults to each sample's own language.
        #[arg(long, value_enum)]
        lang: Option<LangChoice>,
        #[arg(long)]
        out: PathBuf,
        /// Score the ids that pair up and list the rest instead of failing.
        #[arg(long)]
        allow_partial: bool,
    },
    /// Format, OCR, ASR and anchoring rewards for raw rollouts.
    Reward {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        rollouts: PathBuf,
        /// TOML with lambda_format, lambda_ocr, lambda_asr, lambda_va.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Share of outputs containing slide-only words.
    Detect {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Row label; defaults to the hypothesis file name.
        #[arg(long)]
        name: Option<String>,
        /// Ignore slide-only words shorter than this.
        #[arg(long, default_value_t = 0)]
        min_token_chars: usize,
    },
    /// Generate slides for seed records and write a dataset manifest.
    Build {
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long)]
        outdir: PathBuf,
        #[arg(long, value_enum, default_value = "template")]
        generator: GeneratorChoice,
    },
    /// Re-check a manifest and list violations.
    Validate {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Run the toy GRPO trainer.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render a metrics file as a table.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
}

fn parse_metrics(s: &str) -> std::result::Result<MetricSelection, String> {
    MetricSelection::parse(s).map_err(|bad| format!("unknown metric `{bad}`"))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Score {
            dataset,
            hyp,
            metrics,
            lang,
            out,
            allow_partial,
        } => {
            let result = commands::score(&dataset, &hyp, metrics, lang, allow_partial)?;
            commands::write_output(&out, &result)?;
            let c = &result.corpus;
            println!(
                "{}",
                json!({"samples": result.samples.len(), "wer": c.wer, "b_wer": c.b_wer, "u_wer": c.u_wer,
                       "recall": c.recall, "ne_wer": c.ne_wer, "ne_fnr": c.ne_fnr,
                       "missing": result.missing.len(), "unknown": result.unknown.len()})
            );
        }
        Command::Reward {
            dataset,
            rollouts,
            weights,
            out,
        } => {
            let rows = commands::reward(&dataset, &rollouts, weights.as_deref())?;
            write_jsonl(&out, &rows)?;
            println!("{}", json!({"rollouts": rows.len()}));
        }
        Command::Detect {
            dataset,
            hyp,
            out,
            name,
            min_token_chars,
        } => {
            let summary = commands::detect(&dataset, &hyp, name.as_deref(), min_token_chars)?;
            commands::write_output(&out, &summary)?;
            println!(
                "{}",
                json!({"name": summary["name"], "percentage": summary["percentage"], "detected": summary["detected"], "total": summary["total"]})
            );
        }
        Command::Build {
            seeds,
            outdir,
            generator,
        } => {
            let summary = commands::build(&seeds, &outdir, generator)?;
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
        }
        Command::Validate { manifest } => {
            let violations = validate_manifest(&manifest)?;
            for v in &violations {
                println!("{}", serde_json::to_string(v).expect("violation serializes"));
            }
            if !violations.is_empty() {
                return Err(Error::Usage(format!("{} manifest violations", violations.len())));
            }
        }
        Command::Simulate { config, out, seed } => {
            let trace = commands::simulate(&config, &out, seed)?;
            let last = trace.last();
            println!(
                "{}",
                json!({"seed": trace.seed, "steps": trace.steps.len(), "optimal_mass": last.optimal_mass,
                       "expected_reward": last.expected_reward})
            );
        }
        Command::Report { input, format } => {
            print!("{}", commands::report(&input, format)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let message = message.trim().trim_start_matches("error: ");
            eprintln!("{}", Error::Usage(message.to_string()).to_record());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_record());
            ExitCode::FAILURE
        }
    }
}
