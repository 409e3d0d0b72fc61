//! Text normalization and tokenization.
//!
//! Every metric in this crate compares token sequences, so the rules here
//! decide what counts as "the same word". Normalization applies NFC,
//! lowercases, and turns every non-alphanumeric character into a separator.
//! Ideographic scripts are split one token per character.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

/// How a normalized string is cut into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LangMode {
    #[default]
    /// Whitespace-delimited words; ideographs stay glued to their run.
    LatinWord,
    /// Every character is a token (character error rate).
    CjkChar,
    /// Ideographs one per token, other scripts as whitespace words.
    Mixed,
}

impl LangMode {
    /// Picks [`LangMode::Mixed`] when any ideograph is present, otherwise
    /// [`LangMode::LatinWord`].
    pub fn detect(text: &str) -> Self {
        if text.chars().any(is_cjk) {
            LangMode::Mixed
        } else {
            LangMode::LatinWord
        }
    }
}

/// Ideographs and kana. Hangul is space-delimited and is treated as a word script.
pub fn is_cjk(c: char) -> bool {
    matches!(c as u32,
        0x3040..=0x309F      // hiragana
        | 0x30A0..=0x30FF    // katakana
        | 0x3400..=0x4DBF    // ext A
        | 0x4E00..=0x9FFF    // unified ideographs
        | 0xF900..=0xFAFF    // compatibility ideographs
        | 0x20000..=0x2EBEF  // ext B-F
        | 0x2F800..=0x2FA1F  // compatibility supplement
        | 0x30000..=0x323AF) // ext G-H
}

/// A normalized token sequence. Tokens are never empty and never contain
/// whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TokenSeq {
    tokens: Vec<String>,
    mode: LangMode,
}

impl TokenSeq {
    /// Builds a sequence from already-normalized tokens. Empty tokens and
    /// tokens with whitespace are split/dropped so the invariant holds.
    pub fn from_tokens<I, S>(tokens: I, mode: LangMode) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let tokens = tokens
            .into_iter()
            .flat_map(|t| {
                t.as_ref()
                    .split_whitespace()
                    .map(String::from)
                    .collect::<Vec<_>>()
            })
            .collect();
        TokenSeq {
            tokens,
            mode,
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn mode(&self) -> LangMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens joined by single spaces. Re-normalizing this string under the
    /// same mode reproduces the sequence.
    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.joined())
    }
}

fn keep(c: char) -> bool {
    c.is_alphanumeric()
}

/// Normalizes `text` and splits it into tokens under `mode`.
pub fn normalize_tokenize(text: &str, mode: LangMode) -> TokenSeq {
    // Lowercasing can produce decomposed sequences (e.g. U+0130), so NFC is
    // applied on both sides of it.
    let lowered: String = text.nfc().flat_map(char::to_lowercase).collect();
    let mut tokens: Vec<String> = Vec::new();
    let mut current = String::new();
    let flush = |current: &mut String, tokens: &mut Vec<String>| {
        if !current.is_empty() {
            tokens.push(core::mem::take(current));
        }
    };
    for c in lowered.nfc() {
        if !keep(c) {
            flush(&mut current, &mut tokens);
            continue;
        }
        let split_char = match mode {
            LangMode::LatinWord => false,
            LangMode::CjkChar => true,
            LangMode::Mixed => is_cjk(c),
        };
        if split_char {
            flush(&mut current, &mut tokens);
            let mut single = String::new();
            single.push(c);
            tokens.push(single);
        } else {
            current.push(c);
        }
    }
    flush(&mut current, &mut tokens);
    TokenSeq {
        tokens,
        mode,
    }
}

/// Counts "words" for length caps: whitespace-separated tokens for alphabetic
/// scripts, and half the number of ideographs (rounded up) for CJK text.
pub fn word_count(text: &str) -> usize {
    let mut words = 0usize;
    let mut cjk_chars = 0usize;
    for word in text.split_whitespace() {
        let mut has_word_chars = false;
        for c in word.chars() {
            if is_cjk(c) {
                cjk_chars += 1;
            } else if keep(c) {
                has_word_chars = true;
            }
        }
        words += usize::from(has_word_chars);
    }
    words + cjk_chars.div_ceil(2)
}
