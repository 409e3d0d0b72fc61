//! Slide-aware speech recognition evaluation: text normalization and error
//! metrics, the structured `<think>/<answer>` format and its rewards, an
//! OCR-behavior detector, a toy GRPO simulator and a synthetic slide
//! benchmark builder.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, networking
//! and the command line live in the `vapokit` crate.

#![no_std]

extern crate alloc;

pub mod align;
pub mod bench;
pub mod grpo;
pub mod metrics;
pub mod ocr;
pub mod prompts;
pub mod reward;
pub mod sample;
pub mod structured;
pub mod text;

pub use align::{align, Alignment, EditOp};
pub use metrics::{sample_counts, EntityRef, MetricCounts, MetricError, MetricReport, MetricSelection};
pub use reward::{total_reward, RewardBreakdown, RewardConfig, RewardWeights};
pub use sample::{Lang, Sample};
pub use structured::{parse_structured, StructuredOutput};
pub use text::{normalize_tokenize, LangMode, TokenSeq};
