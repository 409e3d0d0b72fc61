//! Turns a behavior tuple into a concrete rollout string for a sample.
//!
//! Each grade is realized by a corruption operator on normalized tokens:
//!
//! * OCR grade `g`: `ceil((1 - g) · n)` slide tokens in the think block are
//!   replaced by filler words (non-entity positions first).
//! * ASR grade `g`: the same on the non-entity transcript tokens of the
//!   answer block.
//! * Anchor grade `g`: only the first `ceil(g · m)` of the `m` entities keep
//!   their surface form in the answer; the others are overwritten by filler.
//! * `format_ok = false`: the closing `</answer>` tag is dropped.
//!
//! Fillers never occur in the sample and sit at least two edits away from
//! every one-word entity, so they can neither create hits nor fuzzy matches.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::behavior::{BehaviorTuple, Grade};
use super::GrpoError;
use crate::align::char_distance;
use crate::metrics::EntityRef;
use crate::sample::Sample;
use crate::structured::{ANSWER_CLOSE, ANSWER_OPEN, THINK_CLOSE, THINK_OPEN};

pub const MIN_ENTITIES: usize = 2;
pub const MIN_TRANSCRIPT_TOKENS: usize = 8;

struct Fillers<'a> {
    next: usize,
    avoid_exact: Vec<&'a str>,
    avoid_near: Vec<&'a str>,
}

impl<'a> Fillers<'a> {
    fn word(mut n: usize) -> String {
        let mut s = String::from("qx");
        loop {
            s.push((b'a' + (n % 26) as u8) as char);
            n /= 26;
            if n == 0 {
                break;
            }
        }
        s
    }

    fn take(&mut self) -> String {
        loop {
            let w = Self::word(self.next);
            self.next += 1;
            let clashes = self.avoid_exact.iter().any(|t| *t == w)
                || self.avoid_near.iter().any(|e| char_distance(e, &w) < 2);
            if !clashes {
                return w;
            }
        }
    }
}

/// Exact occurrences of every entity, as a per-token owner map.
fn entity_owner(tokens: &[String], entities: &[EntityRef]) -> Vec<Option<usize>> {
    let mut owner = vec![None; tokens.len()];
    for (k, e) in entities.iter().enumerate() {
        let n = e.token_count();
        if n == 0 || n > tokens.len() {
            continue;
        }
        let mut i = 0;
        while i + n <= tokens.len() {
            let free = owner[i..i + n].iter().all(Option::is_none);
            if free && tokens[i..i + n] == *e.tokens() {
                owner[i..i + n].fill(Some(k));
                i += n;
            } else {
                i += 1;
            }
        }
    }
    owner
}

fn corrupt_count(grade: Grade, n: usize) -> usize {
    match grade {
        Grade::Full => 0,
        Grade::Half => n.div_ceil(2),
        Grade::Zero => n,
    }
}

/// Positions to corrupt: shuffled non-entity positions, then shuffled
/// entity positions.
fn corruption_order<R: Rng + ?Sized>(owner: &[Option<usize>], rng: &mut R) -> Vec<usize> {
    let mut plain: Vec<usize> = (0..owner.len()).filter(|&i| owner[i].is_none()).collect();
    let mut ents: Vec<usize> = (0..owner.len()).filter(|&i| owner[i].is_some()).collect();
    plain.shuffle(rng);
    ents.shuffle(rng);
    plain.extend(ents);
    plain
}

/// Renders `tuple` for `sample`. The rng only decides which positions get
/// corrupted; with a seeded rng the output is reproducible.
pub fn render<R: Rng + ?Sized>(
    tuple: BehaviorTuple,
    sample: &Sample,
    rng: &mut R,
) -> Result<String, GrpoError> {
    let slide = sample.slide_tokens();
    let transcript = sample.transcript_tokens();
    let entities = sample.entity_refs();
    if entities.len() < MIN_ENTITIES
        || transcript.len() < MIN_TRANSCRIPT_TOKENS
        || slide.is_empty()
    {
        return Err(GrpoError::SampleTooSmall(sample.id.clone()));
    }

    let mut fillers = Fillers {
        next: 0,
        avoid_exact: slide
            .tokens()
            .iter()
            .chain(transcript.tokens())
            .map(String::as_str)
            .collect(),
        avoid_near: entities
            .iter()
            .filter(|e| e.token_count() == 1)
            .map(|e| e.tokens()[0].as_str())
            .collect(),
    };

    // think block
    let mut think: Vec<String> = slide.tokens().to_vec();
    let owner = entity_owner(&think, &entities);
    let order = corruption_order(&owner, rng);
    for &i in order.iter().take(corrupt_count(tuple.ocr, think.len())) {
        think[i] = fillers.take();
    }

    // answer block
    let mut answer: Vec<String> = transcript.tokens().to_vec();
    let owner = entity_owner(&answer, &entities);
    let present: Vec<usize> = (0..entities.len())
        .filter(|k| owner.contains(&Some(*k)))
        .collect();
    let drop = corrupt_count(tuple.anchor, present.len());
    let dropped = &present[present.len() - drop..];
    for (i, o) in owner.iter().enumerate() {
        if matches!(o, Some(k) if dropped.contains(k)) {
            answer[i] = fillers.take();
        }
    }
    let mut plain: Vec<usize> = (0..owner.len()).filter(|&i| owner[i].is_none()).collect();
    plain.shuffle(rng);
    for &i in plain.iter().take(corrupt_count(tuple.asr, plain.len())) {
        answer[i] = fillers.take();
    }

    let close = if tuple.format_ok { ANSWER_CLOSE } else { "" };
    Ok(format!(
        "{THINK_OPEN}{}{THINK_CLOSE}{ANSWER_OPEN}{}{close}",
        think.join(" "),
        answer.join(" ")
    ))
}
