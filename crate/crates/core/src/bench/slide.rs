//! Slide text generation: a pluggable generator plus the validation loop
//! every generator's output goes through.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::sample::Lang;
use crate::text::{normalize_tokenize, word_count};

/// Upper bound on body length, in words (see [`word_count`]).
pub const MAX_BODY_WORDS: usize = 150;

/// Number of generator calls before giving up.
pub const MAX_ATTEMPTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlideText {
    pub title: String,
    pub body: String,
    pub embedded_entities: Vec<String>,
}

impl SlideText {
    /// Title and body as the single string stored in a sample.
    pub fn full_text(&self) -> String {
        if self.body.is_empty() {
            self.title.clone()
        } else {
            format!("{}\n{}", self.title, self.body)
        }
    }
}

/// Raw generator output before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedText {
    pub title: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    /// Transport-level failure; not retried.
    Unreachable(String),
    /// The generator answered but the answer could not be used.
    Malformed(String),
}

pub trait TextGenerator {
    fn generate(
        &mut self,
        domain: &str,
        entities: &[String],
        lang: Lang,
    ) -> Result<GeneratedText, GeneratorError>;
}

impl<G: TextGenerator + ?Sized> TextGenerator for &mut G {
    fn generate(
        &mut self,
        domain: &str,
        entities: &[String],
        lang: Lang,
    ) -> Result<GeneratedText, GeneratorError> {
        (**self).generate(domain, entities, lang)
    }
}

/// Why a generated slide was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SlideIssue {
    EmptyTitle,
    MissingEntity { entity: String },
    BodyTooLong { words: usize },
    Unusable { detail: String },
}

/// Checks entity coverage, the word cap and a non-empty title.
pub fn slide_issues(text: &GeneratedText, entities: &[String], lang: Lang) -> Vec<SlideIssue> {
    let mode = lang.mode();
    let mut issues = Vec::new();
    if text.title.trim().is_empty() {
        issues.push(SlideIssue::EmptyTitle);
    }
    let words = word_count(&text.body);
    if words > MAX_BODY_WORDS {
        issues.push(SlideIssue::BodyTooLong { words });
    }
    let mut all = text.title.clone();
    all.push('\n');
    all.push_str(&text.body);
    let toks = normalize_tokenize(&all, mode);
    for entity in entities {
        let e = normalize_tokenize(entity, mode);
        let n = e.len();
        let found = n > 0 && toks.tokens().windows(n).any(|w| w == e.tokens());
        if !found {
            issues.push(SlideIssue::MissingEntity {
                entity: entity.clone(),
            });
        }
    }
    issues
}

/// Asks `generator` for a slide, retrying up to [`MAX_ATTEMPTS`] times until
/// the output passes [`slide_issues`].
pub fn generate_slide_text<G: TextGenerator + ?Sized>(
    domain: &str,
    entities: &[String],
    lang: Lang,
    generator: &mut G,
) -> Result<SlideText, BenchError> {
    if entities.is_empty() {
        return Err(BenchError::NoEntities);
    }
    let mut last = Vec::new();
    for _ in 0..MAX_ATTEMPTS {
        let text = match generator.generate(domain, entities, lang) {
            Ok(t) => t,
            Err(GeneratorError::Unreachable(msg)) => {
                return Err(BenchError::GeneratorUnreachable(msg))
            }
            Err(GeneratorError::Malformed(detail)) => {
                last = alloc::vec![SlideIssue::Unusable { detail }];
                continue;
            }
        };
        let issues = slide_issues(&text, entities, lang);
        if issues.is_empty() {
            return Ok(SlideText {
                title: text.title.trim().to_string(),
                body: text.body.trim().to_string(),
                embedded_entities: entities.to_vec(),
            });
        }
        last = issues;
    }
    Err(BenchError::GenerationInvalid {
        attempts: MAX_ATTEMPTS,
        issues: last,
    })
}

/// Deterministic offline generator: the title is the domain as a heading
/// and the body is one short sentence per group of two or three entities.
#[derive(Debug, Clone, Copy, Default)]
pub struct TemplateGenerator;

fn heading(domain: &str) -> String {
    let mut out = String::new();
    for (i, word) in domain.split(|c: char| c == '_' || c == '-' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .enumerate()
    {
        if i > 0 {
            out.push(' ');
        }
        // short domain names are acronyms ("ai", "nlp")
        if word.chars().count() <= 3 {
            out.extend(word.chars().flat_map(char::to_uppercase));
            continue;
        }
        let mut chars = word.chars();
        if let Some(first) = chars.next() {
            out.extend(first.to_uppercase());
            out.push_str(chars.as_str());
        }
    }
    out
}

/// Group sizes for `n` entities: threes, with two pairs instead of a
/// trailing single.
fn group_sizes(n: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    match n {
        0 => {}
        1 => sizes.push(1),
        _ => {
            let mut left = n;
            while left > 0 {
                let take = match left {
                    4 => 2,
                    2 | 3 => left,
                    _ => 3,
                };
                sizes.push(take);
                left -= take;
            }
        }
    }
    sizes
}

const EN_PAIRS: [&str; 3] = [
    "{a} and {b} are central topics in {d}.",
    "We compare {a} with {b}.",
    "{a} is often used together with {b}.",
];
const EN_TRIPLES: [&str; 2] = [
    "Key points include {a}, {b} and {c}.",
    "This part connects {a}, {b} and {c}.",
];
const ZH_PAIRS: [&str; 3] = [
    "{a}与{b}是{d}领域的核心内容。",
    "本节比较{a}和{b}。",
    "{a}常与{b}一起使用。",
];
const ZH_TRIPLES: [&str; 2] = ["要点包括{a}、{b}和{c}。", "本部分关联{a}、{b}与{c}。"];

/// Chinese label for the common domains; anything else is used as given.
fn zh_domain(domain: &str) -> &str {
    match domain {
        "chemistry" => "化学",
        "medicine" => "医学",
        "biology" => "生物学",
        "ai" => "人工智能",
        other => other,
    }
}

fn fill(template: &str, group: &[String], domain: &str) -> String {
    let mut s = template.replace("{d}", domain);
    for (slot, entity) in ["{a}", "{b}", "{c}"].iter().zip(group) {
        s = s.replace(slot, entity);
    }
    s
}

impl TextGenerator for TemplateGenerator {
    fn generate(
        &mut self,
        domain: &str,
        entities: &[String],
        lang: Lang,
    ) -> Result<GeneratedText, GeneratorError> {
        let domain = match lang {
            Lang::En => domain,
            Lang::Zh => zh_domain(domain),
        };
        let mut sentences = Vec::new();
        let mut start = 0;
        for (i, size) in group_sizes(entities.len()).into_iter().enumerate() {
            let group = &entities[start..start + size];
            start += size;
            let template = match (lang, size) {
                (Lang::En, 1) => "This slide introduces {a}.",
                (Lang::Zh, 1) => "本页介绍{a}。",
                (Lang::En, 2) => EN_PAIRS[i % EN_PAIRS.len()],
                (Lang::Zh, 2) => ZH_PAIRS[i % ZH_PAIRS.len()],
                (Lang::En, _) => EN_TRIPLES[i % EN_TRIPLES.len()],
                (Lang::Zh, _) => ZH_TRIPLES[i % ZH_TRIPLES.len()],
            };
            sentences.push(fill(template, group, domain));
        }
        let (title, sep) = match lang {
            Lang::En => (format!("{}: Key Concepts", heading(domain)), " "),
            Lang::Zh => (format!("{}：核心概念", domain), ""),
        };
        Ok(GeneratedText {
            title,
            body: sentences.join(sep),
        })
    }
}
