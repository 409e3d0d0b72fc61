//! Rewards for one rollout: format, OCR, ASR and visual anchoring, plus
//! their weighted total.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{fuzzy_find, EntityRef};
use crate::sample::{Lang, Sample};
use crate::structured::{parse_structured, salvage, StructuredOutput};
use crate::text::normalize_tokenize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("weight `{name}` must be finite and non-negative, got {value}")]
    Invalid { name: &'static str, value: f64 },
}

/// Mixing weights for the four reward terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RewardWeights {
    #[serde(rename = "lambda_format")]
    pub format: f64,
    #[serde(rename = "lambda_ocr")]
    pub ocr: f64,
    #[serde(rename = "lambda_asr")]
    pub asr: f64,
    #[serde(rename = "lambda_va")]
    pub va: f64,
}

impl Default for RewardWeights {
    fn default() -> Self {
        RewardWeights::BALANCED
    }
}

impl RewardWeights {
    pub const BALANCED: RewardWeights = RewardWeights {
        format: 1.0,
        ocr: 1.0,
        asr: 1.0,
        va: 1.0,
    };

    pub fn new(format: f64, ocr: f64, asr: f64, va: f64) -> Result<Self, WeightError> {
        RewardWeights {
            format,
            ocr,
            asr,
            va,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self, WeightError> {
        for (name, value) in [
            ("lambda_format", self.format),
            ("lambda_ocr", self.ocr),
            ("lambda_asr", self.asr),
            ("lambda_va", self.va),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(WeightError::Invalid { name, value });
            }
        }
        Ok(self)
    }

    pub fn sum(&self) -> f64 {
        self.format + self.ocr + self.asr + self.va
    }

    pub fn scaled(&self, k: f64) -> Self {
        RewardWeights {
            format: self.format * k,
            ocr: self.ocr * k,
            asr: self.asr * k,
            va: self.va * k,
        }
    }

    /// `λ1·format + λ2·ocr + λ3·asr + λ4·va`, always evaluated in this order.
    pub fn combine(&self, format: f64, ocr: f64, asr: f64, va: f64) -> f64 {
        self.format * format + self.ocr * ocr + self.asr * asr + self.va * va
    }
}

/// How entities are recognized inside think/answer text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntityMatch {
    /// Same tolerance as NE-WER.
    #[default]
    Fuzzy,
    Exact,
}

/// Prediction side of the anchoring F1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VaVariant {
    /// Precision over every sample entity detected in the answer, so
    /// unanchored entities in the answer lower the score.
    #[default]
    AnswerEntities,
    /// Precision over anchored entities only (precision is then 1 whenever
    /// anything matches, and F1 reduces to `2R / (1 + R)`).
    AnchoredOnly,
}

/// What content rewards see when the format check fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MalformedPolicy {
    /// Score empty think/answer blocks: every content reward is 0.
    #[default]
    EmptyFallback,
    /// Score whatever [`salvage`] recovers. Ablation only.
    Salvage,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RewardConfig {
    pub weights: RewardWeights,
    pub entity_match: EntityMatch,
    pub va_variant: VaVariant,
    pub malformed: MalformedPolicy,
}

impl RewardConfig {
    pub fn with_weights(weights: RewardWeights) -> Self {
        RewardConfig {
            weights,
            ..RewardConfig::default()
        }
    }
}

/// Non-fatal conditions met while scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewardDiagnostic {
    EmptySlideText,
    EmptyTranscript,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub r_format: f64,
    pub r_ocr: f64,
    pub r_asr: f64,
    pub r_va: f64,
    pub total: f64,
    pub anchored_entities: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<RewardDiagnostic>,
}

/// A clipped `1 - WER` score. `empty_reference` is set when the reference
/// normalized to nothing; the value is then 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClippedScore {
    pub value: f64,
    pub empty_reference: bool,
}

fn clipped_accuracy(hypothesis: &str, reference: &str, lang: Lang) -> ClippedScore {
    let mode = lang.mode();
    let reference = normalize_tokenize(reference, mode);
    if reference.is_empty() {
        return ClippedScore {
            value: 0.0,
            empty_reference: true,
        };
    }
    let hypothesis = normalize_tokenize(hypothesis, mode);
    let counts = crate::metrics::wer_counts(&reference, &hypothesis);
    let wer = counts.errors as f64 / counts.reference_tokens as f64;
    ClippedScore {
        value: (1.0 - wer).max(0.0),
        empty_reference: false,
    }
}

/// 1 for a well-formed output, 0 otherwise.
pub fn r_format(parsed: &StructuredOutput) -> f64 {
    if parsed.well_formed {
        1.0
    } else {
        0.0
    }
}

/// `max(1 - WER(think, slide), 0)`.
pub fn r_ocr(think: &str, slide_text: &str, lang: Lang) -> ClippedScore {
    clipped_accuracy(think, slide_text, lang)
}

/// `max(1 - WER(answer, transcript), 0)`.
pub fn r_asr(answer: &str, transcript_gt: &str, lang: Lang) -> ClippedScore {
    clipped_accuracy(answer, transcript_gt, lang)
}

fn found_in<'a>(
    text: &str,
    candidates: impl Iterator<Item = &'a str>,
    lang: Lang,
    matching: EntityMatch,
) -> Vec<String> {
    let mode = lang.mode();
    let tokens = normalize_tokenize(text, mode);
    let mut out: Vec<String> = Vec::new();
    if tokens.is_empty() {
        return out;
    }
    for surface in candidates {
        if out.iter().any(|s| s == surface) {
            continue;
        }
        let entity = match matching {
            EntityMatch::Fuzzy => EntityRef::new(surface, mode),
            EntityMatch::Exact => EntityRef::with_tolerance(surface, mode, 0),
        };
        if entity.token_count() > 0 && fuzzy_find(&entity, &tokens).is_some() {
            out.push(surface.to_string());
        }
    }
    out
}

/// Sample entities recognized in the think block, deduplicated, in entity
/// list order.
pub fn extract_anchored(
    think: &str,
    entities: &[String],
    lang: Lang,
    matching: EntityMatch,
) -> Vec<String> {
    found_in(think, entities.iter().map(String::as_str), lang, matching)
}

/// F1 between the anchored entities and the entities detected in the answer.
///
/// Returns 0 when nothing is anchored or nothing is detected.
pub fn r_va(
    anchored: &[String],
    answer: &str,
    entities: &[String],
    lang: Lang,
    matching: EntityMatch,
    variant: VaVariant,
) -> f64 {
    if anchored.is_empty() {
        return 0.0;
    }
    let detected = match variant {
        VaVariant::AnswerEntities => {
            found_in(answer, entities.iter().map(String::as_str), lang, matching)
        }
        VaVariant::AnchoredOnly => {
            found_in(answer, anchored.iter().map(String::as_str), lang, matching)
        }
    };
    if detected.is_empty() {
        return 0.0;
    }
    let overlap = anchored.iter().filter(|e| detected.contains(e)).count();
    // harmonic mean of overlap/|detected| and overlap/|anchored|
    2.0 * overlap as f64 / (anchored.len() + detected.len()) as f64
}

/// Parses `raw_output` and scores it against `sample`. Never fails.
pub fn total_reward(sample: &Sample, raw_output: &str, config: &RewardConfig) -> RewardBreakdown {
    let parsed = parse_structured(raw_output);
    let format = r_format(&parsed);
    let (think, answer) = if parsed.well_formed {
        (parsed.think, parsed.answer)
    } else {
        match config.malformed {
            MalformedPolicy::EmptyFallback => (String::new(), String::new()),
            MalformedPolicy::Salvage => salvage(raw_output),
        }
    };

    let mut diagnostics = Vec::new();
    let ocr = r_ocr(&think, &sample.slide_text, sample.lang);
    if ocr.empty_reference {
        diagnostics.push(RewardDiagnostic::EmptySlideText);
    }
    let asr = r_asr(&answer, &sample.transcript_gt, sample.lang);
    if asr.empty_reference {
        diagnostics.push(RewardDiagnostic::EmptyTranscript);
    }
    let anchored = extract_anchored(&think, &sample.entities, sample.lang, config.entity_match);
    let va = r_va(
        &anchored,
        &answer,
        &sample.entities,
        sample.lang,
        config.entity_match,
        config.va_variant,
    );
    RewardBreakdown {
        r_format: format,
        r_ocr: ocr.value,
        r_asr: asr.value,
        r_va: va,
        total: config.weights.combine(format, ocr.value, asr.value, va),
        anchored_entities: anchored,
        diagnostics,
    }
}
