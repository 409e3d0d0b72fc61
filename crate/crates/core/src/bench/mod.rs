//! Synthetic slide benchmark construction: slide text generation, layout
//! and manifest assembly.

mod layout;
mod manifest;
mod slide;

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub use layout::{render_slide, text_width, FontClass, LayoutConfig, LayoutLine, SlideLayout};
pub use manifest::{
    assemble, build_dataset, build_record, manifest_violations, BuildOutput, BuiltRecord,
    DatasetManifest, ManifestHeader, ManifestIssue, ManifestViolation, RecordFailure, SeedRecord,
};
pub use slide::{
    generate_slide_text, slide_issues, GeneratedText, GeneratorError, SlideIssue, SlideText,
    TemplateGenerator, TextGenerator, MAX_ATTEMPTS, MAX_BODY_WORDS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("no entities given")]
    NoEntities,
    #[error("generator-unreachable: {0}")]
    GeneratorUnreachable(String),
    #[error("generation-invalid: output still invalid after {attempts} attempts")]
    GenerationInvalid {
        attempts: usize,
        issues: Vec<SlideIssue>,
    },
    #[error("unwrappable-token: `{0}` is wider than the canvas")]
    UnwrappableToken(String),
    #[error("vertical-overflow: text needs {needed} units, canvas is {height}")]
    VerticalOverflow { needed: u32, height: u32 },
    #[error("invalid-seed: {0}")]
    InvalidSeed(String),
}

impl BenchError {
    /// Stable machine-readable code.
    pub fn kind(&self) -> &'static str {
        match self {
            BenchError::NoEntities => "no-entities",
            BenchError::GeneratorUnreachable(_) => "generator-unreachable",
            BenchError::GenerationInvalid { .. } => "generation-invalid",
            BenchError::UnwrappableToken(_) => "unwrappable-token",
            BenchError::VerticalOverflow { .. } => "vertical-overflow",
            BenchError::InvalidSeed(_) => "invalid-seed",
        }
    }
}
