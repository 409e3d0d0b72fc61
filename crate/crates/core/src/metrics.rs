//! WER-family metrics: plain WER, keyword-partitioned B-WER/U-WER, keyword
//! recall, and the named-entity metrics NE-WER and NE-FNR.
//!
//! Every metric is available both as a ratio and as raw counts. Corpus
//! scores are computed by summing counts over samples and dividing once.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::AddAssign;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::align::{align, char_distance, edit_distance, Alignment};
use crate::text::{normalize_tokenize, LangMode, TokenSeq};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("undefined-wer: reference has no tokens")]
    UndefinedWer,
    #[error("no-keywords: keyword set is empty")]
    NoKeywords,
    #[error("no-entities: entity list is empty")]
    NoEntities,
    #[error("entity `{0}` does not occur in the reference")]
    EntityNotInReference(String),
}

/// A named entity (or keyword) prepared for matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityRef {
    surface: String,
    tokens: TokenSeq,
    tolerance: usize,
}

/// Edit-distance budget for an entity of `word_count` tokens:
/// `2 / word_count - 1`, clamped at zero. One-word entities get 1, longer
/// ones must match exactly.
pub fn entity_tolerance(word_count: usize) -> usize {
    if word_count == 0 {
        return 0;
    }
    // floor(2/n - 1) for n >= 1, clamped; exact because 2/n - 1 >= 0 only for n <= 2.
    2usize.saturating_sub(word_count) / word_count
}

impl EntityRef {
    pub fn new(surface: &str, mode: LangMode) -> Self {
        let tokens = normalize_tokenize(surface, mode);
        let tolerance = entity_tolerance(tokens.len());
        EntityRef {
            surface: surface.to_string(),
            tokens,
            tolerance,
        }
    }

    /// Same as [`EntityRef::new`] but with an explicit budget (0 gives exact matching).
    pub fn with_tolerance(surface: &str, mode: LangMode, tolerance: usize) -> Self {
        EntityRef {
            tolerance,
            ..Self::new(surface, mode)
        }
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn tokens(&self) -> &[String] {
        self.tokens.tokens()
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn tolerance(&self) -> usize {
        self.tolerance
    }
}

/// Prepares a list of entity surfaces, dropping those that normalize to nothing.
pub fn entity_refs<S: AsRef<str>>(surfaces: &[S], mode: LangMode) -> Vec<EntityRef> {
    surfaces
        .iter()
        .map(|s| EntityRef::new(s.as_ref(), mode))
        .filter(|e| e.token_count() > 0)
        .collect()
}

/// An error tally over some set of reference tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ErrorCounts {
    pub errors: usize,
    pub reference_tokens: usize,
}

impl ErrorCounts {
    /// `errors / reference_tokens`, absent for an empty reference set.
    pub fn ratio(&self) -> Option<f64> {
        (self.reference_tokens > 0).then(|| self.errors as f64 / self.reference_tokens as f64)
    }
}

impl AddAssign for ErrorCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.errors += rhs.errors;
        self.reference_tokens += rhs.reference_tokens;
    }
}

/// A "found k of n" tally (keyword recall, entity detection).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FoundCounts {
    pub found: usize,
    pub total: usize,
}

impl FoundCounts {
    pub fn ratio(&self) -> Option<f64> {
        (self.total > 0).then(|| self.found as f64 / self.total as f64)
    }

    /// `1 - found / total`.
    pub fn miss_ratio(&self) -> Option<f64> {
        (self.total > 0).then(|| (self.total - self.found) as f64 / self.total as f64)
    }
}

impl AddAssign for FoundCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.found += rhs.found;
        self.total += rhs.total;
    }
}

pub fn wer_counts(reference: &TokenSeq, hypothesis: &TokenSeq) -> ErrorCounts {
    let a = align(reference.tokens(), hypothesis.tokens());
    ErrorCounts {
        errors: a.errors(),
        reference_tokens: reference.len(),
    }
}

/// `(S + D + I) / |reference|`. May exceed 1.
pub fn wer(reference: &TokenSeq, hypothesis: &TokenSeq) -> Result<f64, MetricError> {
    wer_counts(reference, hypothesis)
        .ratio()
        .ok_or(MetricError::UndefinedWer)
}

/// Non-overlapping exact occurrences of `needle` in `hay`, left to right.
fn exact_occurrences(hay: &[String], needle: &[String]) -> Vec<usize> {
    let mut out = Vec::new();
    if needle.is_empty() || needle.len() > hay.len() {
        return out;
    }
    let mut i = 0;
    while i + needle.len() <= hay.len() {
        if hay[i..i + needle.len()] == *needle {
            out.push(i);
            i += needle.len();
        } else {
            i += 1;
        }
    }
    out
}

/// A keyword occurrence in the reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeywordSpan {
    pub start: usize,
    pub len: usize,
    /// Index into the keyword list.
    pub keyword: usize,
}

/// Marks keyword spans in `reference` by scanning left to right and taking,
/// at each position, the longest keyword that matches exactly (first in list
/// order on equal length).
pub fn keyword_spans(reference: &TokenSeq, keywords: &[EntityRef]) -> Vec<KeywordSpan> {
    let toks = reference.tokens();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let mut best: Option<(usize, usize)> = None;
        for (k, kw) in keywords.iter().enumerate() {
            let n = kw.token_count();
            if n == 0 || i + n > toks.len() || toks[i..i + n] != *kw.tokens() {
                continue;
            }
            if best.is_none_or(|(_, len)| n > len) {
                best = Some((k, n));
            }
        }
        match best {
            Some((keyword, len)) => {
                spans.push(KeywordSpan { start: i, len, keyword });
                i += len;
            }
            None => i += 1,
        }
    }
    spans
}

/// Errors split between keyword and non-keyword reference tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartitionedCounts {
    pub keyword: ErrorCounts,
    pub unbiased: ErrorCounts,
}

impl PartitionedCounts {
    pub fn b_wer(&self) -> Option<f64> {
        self.keyword.ratio()
    }

    pub fn u_wer(&self) -> Option<f64> {
        self.unbiased.ratio()
    }
}

/// Attributes every alignment error to the keyword or non-keyword side.
///
/// Substitutions and deletions take the label of their reference token.
/// An insertion takes the label of the closest reference token consumed
/// before it; insertions before the first reference token count as
/// non-keyword.
pub fn partitioned_counts(
    reference: &TokenSeq,
    hypothesis: &TokenSeq,
    keywords: &[EntityRef],
) -> PartitionedCounts {
    let mut is_keyword = vec![false; reference.len()];
    for span in keyword_spans(reference, keywords) {
        is_keyword[span.start..span.start + span.len].fill(true);
    }
    let alignment = align(reference.tokens(), hypothesis.tokens());
    partition_alignment(&alignment, &is_keyword)
}

fn partition_alignment(alignment: &Alignment, is_keyword: &[bool]) -> PartitionedCounts {
    let mut out = PartitionedCounts::default();
    for &kw in is_keyword {
        if kw {
            out.keyword.reference_tokens += 1;
        } else {
            out.unbiased.reference_tokens += 1;
        }
    }
    let mut last_label = false;
    for op in &alignment.ops {
        let label = match op.reference_index() {
            Some(r) => {
                last_label = is_keyword[r];
                last_label
            }
            None => last_label,
        };
        if op.is_error() {
            if label {
                out.keyword.errors += 1;
            } else {
                out.unbiased.errors += 1;
            }
        }
    }
    out
}

/// `(b_wer, u_wer)`; either side is `None` when it has no reference tokens.
pub fn partitioned_wer(
    reference: &TokenSeq,
    hypothesis: &TokenSeq,
    keywords: &[EntityRef],
) -> (Option<f64>, Option<f64>) {
    let c = partitioned_counts(reference, hypothesis, keywords);
    (c.b_wer(), c.u_wer())
}

/// Keyword occurrences in the reference versus how many of them are
/// reproduced verbatim in the hypothesis. Each keyword is credited at most
/// as many times as it occurs in the hypothesis.
pub fn keyword_recall_counts(
    reference: &TokenSeq,
    hypothesis: &TokenSeq,
    keywords: &[EntityRef],
) -> Result<FoundCounts, MetricError> {
    if keywords.is_empty() {
        return Err(MetricError::NoKeywords);
    }
    let spans = keyword_spans(reference, keywords);
    let mut per_keyword = vec![0usize; keywords.len()];
    for span in &spans {
        per_keyword[span.keyword] += 1;
    }
    let mut found = 0;
    for (k, &in_ref) in per_keyword.iter().enumerate() {
        if in_ref == 0 {
            continue;
        }
        let in_hyp = exact_occurrences(hypothesis.tokens(), keywords[k].tokens()).len();
        found += in_ref.min(in_hyp);
    }
    Ok(FoundCounts {
        found,
        total: spans.len(),
    })
}

/// Fraction of keyword occurrences fully and exactly recognized. A
/// reference without any keyword occurrence yields `Ok(None)`.
pub fn keyword_recall(
    reference: &TokenSeq,
    hypothesis: &TokenSeq,
    keywords: &[EntityRef],
) -> Result<Option<f64>, MetricError> {
    keyword_recall_counts(reference, hypothesis, keywords).map(|c| c.ratio())
}

/// Where an entity was found in a token sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSpan {
    pub start: usize,
    pub len: usize,
    pub distance: usize,
}

fn fuzzy_find_in(entity: &EntityRef, text: &[String], used: &[bool]) -> Option<MatchSpan> {
    let n = entity.token_count();
    if n == 0 || text.is_empty() {
        return None;
    }
    let tol = entity.tolerance();
    let mut best: Option<MatchSpan> = None;
    let mut consider = |cand: MatchSpan| {
        if cand.distance <= tol && best.is_none_or(|b| cand.distance < b.distance) {
            best = Some(cand);
        }
    };
    let free = |start: usize, len: usize| !used[start..start + len].iter().any(|&u| u);
    if n == 1 {
        // Single words are compared character by character.
        let word = &entity.tokens()[0];
        for (start, tok) in text.iter().enumerate() {
            if free(start, 1) {
                consider(MatchSpan {
                    start,
                    len: 1,
                    distance: char_distance(word, tok),
                });
            }
        }
    } else {
        let min_len = n.saturating_sub(tol).max(1);
        let max_len = (n + tol).min(text.len());
        for start in 0..text.len() {
            for len in min_len..=max_len {
                if start + len > text.len() || !free(start, len) {
                    continue;
                }
                consider(MatchSpan {
                    start,
                    len,
                    distance: edit_distance(entity.tokens(), &text[start..start + len]),
                });
            }
        }
    }
    best
}

/// Finds the window of `text` closest to `entity` within its tolerance.
/// Ties go to the leftmost window, then the shortest.
pub fn fuzzy_find(entity: &EntityRef, text: &TokenSeq) -> Option<MatchSpan> {
    let used = vec![false; text.len()];
    fuzzy_find_in(entity, text.tokens(), &used)
}

/// Entity-restricted error counts.
///
/// Every exact occurrence of an entity in the reference claims one fuzzy
/// match in the hypothesis (windows are not reused). A match contributes
/// its token-level edit distance; a miss contributes one deletion per
/// entity token. The denominator is the number of entity tokens.
pub fn ne_wer_counts(
    entities: &[EntityRef],
    reference: &TokenSeq,
    hypothesis: &TokenSeq,
) -> Result<ErrorCounts, MetricError> {
    if entities.is_empty() {
        return Err(MetricError::NoEntities);
    }
    let mut used = vec![false; hypothesis.len()];
    let mut counts = ErrorCounts::default();
    for entity in entities {
        let occurrences = exact_occurrences(reference.tokens(), entity.tokens()).len();
        if occurrences == 0 {
            return Err(MetricError::EntityNotInReference(entity.surface().to_string()));
        }
        for _ in 0..occurrences {
            counts.reference_tokens += entity.token_count();
            match fuzzy_find_in(entity, hypothesis.tokens(), &used) {
                Some(span) => {
                    used[span.start..span.start + span.len].fill(true);
                    let window = &hypothesis.tokens()[span.start..span.start + span.len];
                    counts.errors += edit_distance(entity.tokens(), window);
                }
                None => counts.errors += entity.token_count(),
            }
        }
    }
    Ok(counts)
}

pub fn ne_wer(
    entities: &[EntityRef],
    reference: &TokenSeq,
    hypothesis: &TokenSeq,
) -> Result<f64, MetricError> {
    ne_wer_counts(entities, reference, hypothesis)
        .map(|c| c.ratio().unwrap_or(0.0))
}

/// How many listed entities are fuzzily found in the hypothesis.
pub fn ne_found_counts(
    entities: &[EntityRef],
    hypothesis: &TokenSeq,
) -> Result<FoundCounts, MetricError> {
    if entities.is_empty() {
        return Err(MetricError::NoEntities);
    }
    let found = entities
        .iter()
        .filter(|e| fuzzy_find(e, hypothesis).is_some())
        .count();
    Ok(FoundCounts {
        found,
        total: entities.len(),
    })
}

/// False-negative rate of entities: `1 - found / ground_truth`.
pub fn ne_fnr(entities: &[EntityRef], hypothesis: &TokenSeq) -> Result<f64, MetricError> {
    ne_found_counts(entities, hypothesis).map(|c| c.miss_ratio().unwrap_or(0.0))
}

/// Which metrics to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSelection {
    pub wer: bool,
    pub bwer: bool,
    pub uwer: bool,
    pub recall: bool,
    pub newer: bool,
    pub nefnr: bool,
}

impl MetricSelection {
    pub const ALL: MetricSelection = MetricSelection {
        wer: true,
        bwer: true,
        uwer: true,
        recall: true,
        newer: true,
        nefnr: true,
    };

    pub const NONE: MetricSelection = MetricSelection {
        wer: false,
        bwer: false,
        uwer: false,
        recall: false,
        newer: false,
        nefnr: false,
    };

    /// Parses a comma list such as `wer,bwer,nefnr`. Returns the offending
    /// name on failure.
    pub fn parse(list: &str) -> Result<Self, String> {
        let mut sel = Self::NONE;
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "wer" => sel.wer = true,
                "bwer" => sel.bwer = true,
                "uwer" => sel.uwer = true,
                "recall" => sel.recall = true,
                "newer" => sel.newer = true,
                "nefnr" => sel.nefnr = true,
                other => return Err(other.to_string()),
            }
        }
        Ok(sel)
    }
}

impl Default for MetricSelection {
    fn default() -> Self {
        Self::ALL
    }
}

/// Raw tallies behind a [`MetricReport`]. Summing these across samples and
/// then calling [`MetricCounts::report`] gives micro-averaged corpus scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MetricCounts {
    pub wer: ErrorCounts,
    pub partition: PartitionedCounts,
    pub recall: FoundCounts,
    pub ne_wer: ErrorCounts,
    pub ne_found: FoundCounts,
}

impl AddAssign for MetricCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.wer += rhs.wer;
        self.partition.keyword += rhs.partition.keyword;
        self.partition.unbiased += rhs.partition.unbiased;
        self.recall += rhs.recall;
        self.ne_wer += rhs.ne_wer;
        self.ne_found += rhs.ne_found;
    }
}

/// Ratios for one sample or one corpus. `None` marks a metric whose
/// reference set was empty (or that was not selected).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricReport {
    pub wer: Option<f64>,
    pub b_wer: Option<f64>,
    pub u_wer: Option<f64>,
    pub recall: Option<f64>,
    pub ne_wer: Option<f64>,
    pub ne_fnr: Option<f64>,
    pub counts: MetricCounts,
}

impl MetricCounts {
    pub fn report(&self, sel: MetricSelection) -> MetricReport {
        MetricReport {
            wer: self.wer.ratio().filter(|_| sel.wer),
            b_wer: self.partition.b_wer().filter(|_| sel.bwer),
            u_wer: self.partition.u_wer().filter(|_| sel.uwer),
            recall: self.recall.ratio().filter(|_| sel.recall),
            ne_wer: self.ne_wer.ratio().filter(|_| sel.newer),
            ne_fnr: self.ne_found.miss_ratio().filter(|_| sel.nefnr),
            counts: *self,
        }
    }
}

/// Counts every metric for one reference/hypothesis pair. Entities double
/// as the keyword list. Entities that do not occur in the reference are
/// skipped for NE-WER (they still count toward NE-FNR).
pub fn sample_counts(
    reference: &str,
    hypothesis: &str,
    entities: &[String],
    mode: LangMode,
) -> MetricCounts {
    let reference = normalize_tokenize(reference, mode);
    let hypothesis = normalize_tokenize(hypothesis, mode);
    let ents = entity_refs(entities, mode);
    let alignment = align(reference.tokens(), hypothesis.tokens());

    let mut is_keyword = vec![false; reference.len()];
    for span in keyword_spans(&reference, &ents) {
        is_keyword[span.start..span.start + span.len].fill(true);
    }
    let in_reference: Vec<EntityRef> = ents
        .iter()
        .filter(|e| !exact_occurrences(reference.tokens(), e.tokens()).is_empty())
        .cloned()
        .collect();

    MetricCounts {
        wer: ErrorCounts {
            errors: alignment.errors(),
            reference_tokens: reference.len(),
        },
        partition: partition_alignment(&alignment, &is_keyword),
        recall: keyword_recall_counts(&reference, &hypothesis, &ents).unwrap_or_default(),
        ne_wer: ne_wer_counts(&in_reference, &reference, &hypothesis).unwrap_or_default(),
        ne_found: ne_found_counts(&ents, &hypothesis).unwrap_or_default(),
    }
}
