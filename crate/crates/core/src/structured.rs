//! The `<think>…</think><answer>…</answer>` output structure.
//!
//! A well-formed output is, exactly:
//!
//! ```text
//! ws* <think> T </think> ws* <answer> A </answer> ws*
//! ```
//!
//! where neither `T` nor `A` contains any of the four tag literals. Tags are
//! case-sensitive and contents may span lines.

use alloc::string::{String, ToString};

use serde::{Deserialize, Serialize};

pub const THINK_OPEN: &str = "<think>";
pub const THINK_CLOSE: &str = "</think>";
pub const ANSWER_OPEN: &str = "<answer>";
pub const ANSWER_CLOSE: &str = "</answer>";

pub const TAGS: [&str; 4] = [THINK_OPEN, THINK_CLOSE, ANSWER_OPEN, ANSWER_CLOSE];

/// A parsed rollout. When `well_formed` is false both fields are empty.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StructuredOutput {
    pub think: String,
    pub answer: String,
    pub well_formed: bool,
}

fn contains_tag(s: &str) -> bool {
    TAGS.iter().any(|t| s.contains(t))
}

fn parse_blocks(raw: &str) -> Option<(&str, &str)> {
    let rest = raw.trim_start().strip_prefix(THINK_OPEN)?;
    let end = rest.find(THINK_CLOSE)?;
    let think = &rest[..end];
    let rest = rest[end + THINK_CLOSE.len()..]
        .trim_start()
        .strip_prefix(ANSWER_OPEN)?;
    let end = rest.find(ANSWER_CLOSE)?;
    let answer = &rest[..end];
    let tail = &rest[end + ANSWER_CLOSE.len()..];
    if contains_tag(think) || contains_tag(answer) || !tail.trim().is_empty() {
        return None;
    }
    Some((think, answer))
}

/// Parses a raw model output. Never fails: malformed input is reported
/// through `well_formed = false`.
pub fn parse_structured(raw: &str) -> StructuredOutput {
    match parse_blocks(raw) {
        Some((think, answer)) => StructuredOutput {
            think: think.to_string(),
            answer: answer.to_string(),
            well_formed: true,
        },
        None => StructuredOutput::default(),
    }
}

/// Inverse of [`parse_structured`] for contents without tag literals.
pub fn serialize(think: &str, answer: &str) -> String {
    let mut out = String::with_capacity(
        think.len() + answer.len() + TAGS.iter().map(|t| t.len()).sum::<usize>(),
    );
    out.push_str(THINK_OPEN);
    out.push_str(think);
    out.push_str(THINK_CLOSE);
    out.push_str(ANSWER_OPEN);
    out.push_str(answer);
    out.push_str(ANSWER_CLOSE);
    out
}

/// Best-effort block recovery for malformed outputs, used only by the
/// lenient scoring ablation. The think block runs from the first `<think>`
/// to the next `</think>` or `<answer>`; the answer block from the first
/// `<answer>` to the next `</answer>`. Unterminated blocks run to the end.
pub fn salvage(raw: &str) -> (String, String) {
    fn block<'a>(raw: &'a str, open: &str, closers: &[&str]) -> &'a str {
        let Some(start) = raw.find(open) else {
            return "";
        };
        let body = &raw[start + open.len()..];
        let end = closers
            .iter()
            .filter_map(|c| body.find(c))
            .min()
            .unwrap_or(body.len());
        &body[..end]
    }
    (
        block(raw, THINK_OPEN, &[THINK_CLOSE, ANSWER_OPEN]).to_string(),
        block(raw, ANSWER_OPEN, &[ANSWER_CLOSE, THINK_OPEN]).to_string(),
    )
}
