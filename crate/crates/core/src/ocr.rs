//! OCR-behavior diagnostic.
//!
//! A model output "behaves like OCR" when it contains a word that appears
//! on the slide but not in the spoken transcript: such a word can only have
//! come from reading the image.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sample::Sample;
use crate::text::{normalize_tokenize, LangMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OcrError {
    #[error("no-slide: sample `{0}` has no slide text")]
    NoSlide(String),
    #[error("pairing: ids do not match (missing outputs: {missing:?}, unknown outputs: {unknown:?})")]
    Pairing {
        missing: Vec<String>,
        unknown: Vec<String>,
    },
    #[error("pairing: no samples")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VocabOptions {
    /// Slide-only words shorter than this many characters are ignored.
    /// 0 keeps everything.
    pub min_token_chars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VocabPartition {
    pub common: BTreeSet<String>,
    pub slide_only: BTreeSet<String>,
}

fn vocab(text: &str, mode: LangMode) -> BTreeSet<String> {
    normalize_tokenize(text, mode).tokens().iter().cloned().collect()
}

/// Splits the slide vocabulary into words shared with the transcript and
/// slide-only words.
pub fn partition_vocab(sample: &Sample, opts: VocabOptions) -> Result<VocabPartition, OcrError> {
    let mode = sample.mode();
    let slide = vocab(&sample.slide_text, mode);
    if slide.is_empty() {
        return Err(OcrError::NoSlide(sample.id.clone()));
    }
    let transcript = vocab(&sample.transcript_gt, mode);
    let (common, slide_only): (BTreeSet<String>, BTreeSet<String>) =
        slide.into_iter().partition(|w| transcript.contains(w));
    let slide_only = slide_only
        .into_iter()
        .filter(|w| w.chars().count() >= opts.min_token_chars)
        .collect();
    Ok(VocabPartition { common, slide_only })
}

/// True when `output` shares at least one word with the slide-only vocabulary.
pub fn detect(output: &str, partition: &VocabPartition, mode: LangMode) -> bool {
    if partition.slide_only.is_empty() {
        return false;
    }
    normalize_tokenize(output, mode)
        .tokens()
        .iter()
        .any(|t| partition.slide_only.contains(t))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleFlag {
    pub id: String,
    pub ocr_behavior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionSummary {
    pub detected: usize,
    pub total: usize,
    /// `100 · detected / total`.
    pub percentage: f64,
    /// Sorted by id.
    pub flags: Vec<SampleFlag>,
}

/// Flags each sample and computes the percentage showing OCR behavior.
/// `outputs` are `(id, text)` pairs and must cover exactly the sample ids.
pub fn dataset_rate(
    samples: &[Sample],
    outputs: &[(String, String)],
    opts: VocabOptions,
) -> Result<DetectionSummary, OcrError> {
    if samples.is_empty() {
        return Err(OcrError::Empty);
    }
    let mut by_id: Vec<(&str, &str)> = outputs
        .iter()
        .map(|(id, text)| (id.as_str(), text.as_str()))
        .collect();
    by_id.sort_by(|a, b| a.0.cmp(b.0));
    let mut ordered: Vec<&Sample> = samples.iter().collect();
    ordered.sort_by(|a, b| a.id.cmp(&b.id));

    let sample_ids: BTreeSet<&str> = ordered.iter().map(|s| s.id.as_str()).collect();
    let output_ids: BTreeSet<&str> = by_id.iter().map(|(id, _)| *id).collect();
    let duplicate_outputs = output_ids.len() != by_id.len();
    if sample_ids != output_ids || duplicate_outputs || sample_ids.len() != ordered.len() {
        return Err(OcrError::Pairing {
            missing: sample_ids.difference(&output_ids).map(|s| String::from(*s)).collect(),
            unknown: output_ids.difference(&sample_ids).map(|s| String::from(*s)).collect(),
        });
    }

    let mut flags = Vec::with_capacity(ordered.len());
    for (sample, (_, text)) in ordered.iter().zip(&by_id) {
        let partition = partition_vocab(sample, opts)?;
        flags.push(SampleFlag {
            id: sample.id.clone(),
            ocr_behavior: detect(text, &partition, sample.mode()),
        });
    }
    let detected = flags.iter().filter(|f| f.ocr_behavior).count();
    let total = flags.len();
    Ok(DetectionSummary {
        detected,
        total,
        percentage: 100.0 * detected as f64 / total as f64,
        flags,
    })
}
