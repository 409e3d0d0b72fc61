//! The SlideASR sample record shared by every module.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::metrics::EntityRef;
use crate::text::{normalize_tokenize, LangMode, TokenSeq};

/// Sample language. Chinese is scored one character per token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lang {
    #[default]
    En,
    Zh,
}

impl Lang {
    pub fn mode(self) -> LangMode {
        match self {
            Lang::En => LangMode::LatinWord,
            Lang::Zh => LangMode::Mixed,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Lang::En => "en",
            Lang::Zh => "zh",
        }
    }
}

/// Domain label that is allowed to carry no entities.
pub const GENERAL_DOMAIN: &str = "general";

/// One audio clip with its slide and transcript. Audio and image are opaque
/// references; nothing here decodes them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub domain: String,
    #[serde(default)]
    pub lang: Lang,
    #[serde(default)]
    pub slide_text: String,
    pub transcript_gt: String,
    #[serde(default)]
    pub entities: Vec<String>,
    #[serde(default)]
    pub audio_ref: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slide_image_ref: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
}

/// A broken sample invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SampleViolation {
    EntityNotInTranscript { entity: String },
    MissingEntities,
    EmptyTranscript,
    EmptyId,
}

impl Sample {
    pub fn mode(&self) -> LangMode {
        self.lang.mode()
    }

    pub fn transcript_tokens(&self) -> TokenSeq {
        normalize_tokenize(&self.transcript_gt, self.mode())
    }

    pub fn slide_tokens(&self) -> TokenSeq {
        normalize_tokenize(&self.slide_text, self.mode())
    }

    pub fn entity_refs(&self) -> Vec<EntityRef> {
        crate::metrics::entity_refs(&self.entities, self.mode())
    }

    /// Checks the record-level invariants.
    pub fn violations(&self) -> Vec<SampleViolation> {
        let mut out = Vec::new();
        if self.id.trim().is_empty() {
            out.push(SampleViolation::EmptyId);
        }
        let transcript = self.transcript_tokens();
        if transcript.is_empty() {
            out.push(SampleViolation::EmptyTranscript);
        }
        if self.entities.is_empty() && self.domain != GENERAL_DOMAIN {
            out.push(SampleViolation::MissingEntities);
        }
        for entity in &self.entities {
            let e = EntityRef::new(entity, self.mode());
            let toks = transcript.tokens();
            let n = e.token_count();
            let present = n > 0 && toks.windows(n).any(|w| w == e.tokens());
            if !present {
                out.push(SampleViolation::EntityNotInTranscript {
                    entity: entity.to_string(),
                });
            }
        }
        out
    }
}
