use std::path::PathBuf;

use serde_json::{json, Value};
use thiserror::Error;
use vapokit_core::bench::BenchError;
use vapokit_core::grpo::GrpoError;
use vapokit_core::metrics::MetricError;
use vapokit_core::ocr::OcrError;
use vapokit_core::reward::WeightError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("manifest-parse: {}: {message}", path.display())]
    ManifestParse { path: PathBuf, message: String },
    #[error("config: {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("pairing: missing hypotheses for {missing:?}, unknown ids {unknown:?}, duplicated ids {duplicated:?}")]
    Pairing {
        missing: Vec<String>,
        unknown: Vec<String>,
        duplicated: Vec<String>,
    },
    #[error("no-rows: nothing to report")]
    NoRows,
    #[error("generator-config: {0}")]
    GeneratorConfig(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Grpo(#[from] GrpoError),
    #[error(transparent)]
    Ocr(#[from] OcrError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable code for scripts.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::ManifestParse { .. } => "manifest-parse",
            Error::Config { .. } => "config",
            Error::Pairing { .. } => "pairing",
            Error::NoRows => "no-rows",
            Error::GeneratorConfig(_) => "generator-config",
            Error::Usage(_) => "usage",
            Error::Metric(e) => match e {
                MetricError::UndefinedWer => "undefined-wer",
                MetricError::NoKeywords => "no-keywords",
                MetricError::NoEntities => "no-entities",
                MetricError::EntityNotInReference(_) => "entity-not-in-reference",
            },
            Error::Grpo(e) => match e {
                GrpoError::DegenerateGroup(_) => "degenerate-group",
                GrpoError::Numerical => "numerical",
                GrpoError::SampleTooSmall(_) => "sample-too-small",
                GrpoError::InvalidConfig(_) => "config",
            },
            Error::Ocr(e) => match e {
                OcrError::NoSlide(_) => "no-slide",
                OcrError::Pairing { .. } | OcrError::Empty => "pairing",
            },
            Error::Bench(e) => e.kind(),
            Error::Weights(_) => "config",
            Error::Csv(_) => "io",
        }
    }

    /// The error as a single JSON object.
    pub fn to_record(&self) -> Value {
        let mut record = json!({ "error": self.kind(), "message": self.to_string() });
        if let Error::Pairing {
            missing,
            unknown,
            duplicated,
        } = self
        {
            record["missing"] = json!(missing);
            record["unknown"] = json!(unknown);
            record["duplicated"] = json!(duplicated);
        }
        record
    }
}
