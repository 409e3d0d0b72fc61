//! Seed records in, samples plus rendered slides out.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::layout::{render_slide, LayoutConfig};
use super::slide::{generate_slide_text, TextGenerator};
use super::BenchError;
use crate::sample::{Lang, Sample, SampleViolation};

/// A sample without slide text; the builder fills the slide in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub domain: String,
    #[serde(default)]
    pub lang: Lang,
    pub entities: Vec<String>,
    #[serde(alias = "transcript")]
    pub transcript_gt: String,
    #[serde(default)]
    pub audio_ref: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
}

impl SeedRecord {
    /// Record id, or a positional default.
    pub fn id_at(&self, index: usize) -> String {
        match &self.id {
            Some(id) => id.clone(),
            None => format!("sample-{index:04}"),
        }
    }
}

/// Aggregate counts written at the top of a manifest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub samples: usize,
    pub entities: usize,
    /// Total audio duration; absent unless every entry has a duration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hours: Option<f64>,
}

impl ManifestHeader {
    pub fn of(entries: &[Sample]) -> Self {
        let hours = entries
            .iter()
            .map(|s| s.duration_s)
            .sum::<Option<f64>>()
            .filter(|_| !entries.is_empty())
            .map(|secs| secs / 3600.0);
        ManifestHeader {
            samples: entries.len(),
            entities: entries.iter().map(|s| s.entities.len()).sum(),
            hours,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub header: ManifestHeader,
    pub entries: Vec<Sample>,
}

impl DatasetManifest {
    pub fn new(entries: Vec<Sample>) -> Self {
        DatasetManifest {
            header: ManifestHeader::of(&entries),
            entries,
        }
    }
}

/// One seed record that did not make it into the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordFailure {
    pub index: usize,
    pub id: String,
    pub kind: String,
    pub message: String,
}

/// A successfully built record: the sample and its SVG slide.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltRecord {
    pub sample: Sample,
    pub svg: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOutput {
    pub manifest: DatasetManifest,
    /// `(relative path, svg)` in manifest order.
    pub slides: Vec<(String, String)>,
    pub failures: Vec<RecordFailure>,
}

/// Builds a single record. Pure in its inputs, so records can be built in
/// any order or concurrently and then passed to [`assemble`].
pub fn build_record<G: TextGenerator + ?Sized>(
    index: usize,
    record: &SeedRecord,
    generator: &mut G,
    layout: &LayoutConfig,
) -> Result<BuiltRecord, RecordFailure> {
    let id = record.id_at(index);
    let fail = |e: BenchError| RecordFailure {
        index,
        id: id.clone(),
        kind: e.kind().to_string(),
        message: e.to_string(),
    };
    let mut sample = Sample {
        id: id.clone(),
        domain: record.domain.clone(),
        lang: record.lang,
        slide_text: String::new(),
        transcript_gt: record.transcript_gt.clone(),
        entities: record.entities.clone(),
        audio_ref: record.audio_ref.clone(),
        slide_image_ref: Some(format!("slides/{id}.svg")),
        duration_s: record.duration_s,
    };
    let bad = sample.violations();
    if !bad.is_empty() {
        let detail: Vec<String> = bad.iter().map(|v| format!("{v:?}")).collect();
        return Err(fail(BenchError::InvalidSeed(detail.join("; "))));
    }
    let slide = generate_slide_text(&record.domain, &record.entities, record.lang, generator)
        .map_err(fail)?;
    let svg = render_slide(&slide, layout).map_err(fail)?.to_svg(layout);
    sample.slide_text = slide.full_text();
    Ok(BuiltRecord { sample, svg })
}

/// Collects per-record results, in input order, into a manifest and a
/// failure sidecar.
pub fn assemble(results: Vec<Result<BuiltRecord, RecordFailure>>) -> BuildOutput {
    let mut entries = Vec::new();
    let mut slides = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(built) => {
                let path = built.sample.slide_image_ref.clone().unwrap_or_default();
                slides.push((path, built.svg));
                entries.push(built.sample);
            }
            Err(f) => failures.push(f),
        }
    }
    BuildOutput {
        manifest: DatasetManifest::new(entries),
        slides,
        failures,
    }
}

/// Sequential build over all records.
pub fn build_dataset<G: TextGenerator + ?Sized>(
    records: &[SeedRecord],
    generator: &mut G,
    layout: &LayoutConfig,
) -> BuildOutput {
    let results = records
        .iter()
        .enumerate()
        .map(|(i, r)| build_record(i, r, generator, layout))
        .collect();
    assemble(results)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ManifestIssue {
    SampleCountMismatch { declared: usize, actual: usize },
    EntityCountMismatch { declared: usize, actual: usize },
    HoursMismatch,
    DuplicateId,
    MissingSlideText,
    EntityNotOnSlide { entity: String },
    Sample { violation: SampleViolation },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestViolation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub issue: ManifestIssue,
}

/// Re-checks header counts, id uniqueness and every sample invariant.
pub fn manifest_violations(manifest: &DatasetManifest) -> Vec<ManifestViolation> {
    let mut out = Vec::new();
    let actual = ManifestHeader::of(&manifest.entries);
    let h = &manifest.header;
    if h.samples != actual.samples {
        out.push(ManifestViolation {
            id: None,
            issue: ManifestIssue::SampleCountMismatch {
                declared: h.samples,
                actual: actual.samples,
            },
        });
    }
    if h.entities != actual.entities {
        out.push(ManifestViolation {
            id: None,
            issue: ManifestIssue::EntityCountMismatch {
                declared: h.entities,
                actual: actual.entities,
            },
        });
    }
    let hours_ok = match (h.hours, actual.hours) {
        (None, None) => true,
        (Some(a), Some(b)) => libm::fabs(a - b) < 1e-9,
        _ => false,
    };
    if !hours_ok {
        out.push(ManifestViolation {
            id: None,
            issue: ManifestIssue::HoursMismatch,
        });
    }
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for s in &manifest.entries {
        *seen.entry(s.id.as_str()).or_default() += 1;
    }
    for s in &manifest.entries {
        let id = Some(s.id.clone());
        if seen[s.id.as_str()] > 1 {
            out.push(ManifestViolation {
                id: id.clone(),
                issue: ManifestIssue::DuplicateId,
            });
        }
        for v in s.violations() {
            out.push(ManifestViolation {
                id: id.clone(),
                issue: ManifestIssue::Sample { violation: v },
            });
        }
        let slide = s.slide_tokens();
        if slide.is_empty() {
            out.push(ManifestViolation {
                id: id.clone(),
                issue: ManifestIssue::MissingSlideText,
            });
            continue;
        }
        for e in s.entity_refs() {
            let n = e.token_count();
            if n == 0 || !slide.tokens().windows(n).any(|w| w == e.tokens()) {
                out.push(ManifestViolation {
                    id: id.clone(),
                    issue: ManifestIssue::EntityNotOnSlide {
                        entity: e.surface().to_string(),
                    },
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{GeneratedText, GeneratorError, TemplateGenerator};
    use alloc::vec;

    fn seed(id: &str, entities: &[&str], transcript: &str) -> SeedRecord {
        SeedRecord {
            id: Some(id.into()),
            domain: "chemistry".into(),
            lang: Lang::En,
            entities: entities.iter().map(|e| e.to_string()).collect(),
            transcript_gt: transcript.into(),
            audio_ref: format!("audio/{id}.wav"),
            duration_s: Some(1800.0),
        }
    }

    fn seeds() -> Vec<SeedRecord> {
        vec![
            seed("a", &["benzene", "toluene"], "benzene and toluene are aromatic"),
            seed("b", &["ethanol"], "ethanol is a solvent"),
            seed("c", &["methane", "propane"], "methane burns cleaner than propane"),
        ]
    }

    #[test]
    fn builds_and_validates() {
        let out = build_dataset(&seeds(), &mut TemplateGenerator, &LayoutConfig::default());
        assert!(out.failures.is_empty());
        assert_eq!(out.manifest.header.samples, 3);
        assert_eq!(out.manifest.header.entities, 5);
        assert_eq!(out.manifest.header.hours, Some(1.5));
        assert_eq!(out.slides[1].0, "slides/b.svg");
        assert!(manifest_violations(&out.manifest).is_empty());
    }

    #[test]
    fn empty_build() {
        let out = build_dataset(&[], &mut TemplateGenerator, &LayoutConfig::default());
        assert_eq!(out.manifest.header.samples, 0);
        assert_eq!(out.manifest.header.entities, 0);
        assert_eq!(out.manifest.header.hours, None);
    }

    /// Template output, except records containing the given entity get a body without it.
    struct FailOn(&'static str);

    impl TextGenerator for FailOn {
        fn generate(&mut self, domain: &str, entities: &[String], lang: Lang) -> Result<GeneratedText, GeneratorError> {
            let mut t = TemplateGenerator.generate(domain, entities, lang)?;
            if entities.iter().any(|e| e == self.0) {
                t.body = "nothing relevant here".into();
            }
            Ok(t)
        }
    }

    #[test]
    fn failing_record_goes_to_sidecar() {
        let out = build_dataset(&seeds(), &mut FailOn("ethanol"), &LayoutConfig::default());
        assert_eq!(out.manifest.header.samples, 2);
        assert_eq!(out.manifest.header.entities, 4);
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].id, "b");
        assert_eq!(out.failures[0].kind, "generation-invalid");
    }

    #[test]
    fn invalid_seed_rejected() {
        let bad = vec![seed("x", &["argon"], "neon is inert")];
        let out = build_dataset(&bad, &mut TemplateGenerator, &LayoutConfig::default());
        assert_eq!(out.failures[0].kind, "invalid-seed");
    }

    #[test]
    fn corruption_is_reported() {
        let mut m = build_dataset(&seeds(), &mut TemplateGenerator, &LayoutConfig::default()).manifest;
        m.header.entities = 6;
        m.entries[0].transcript_gt = "aromatic rings".into();
        let v = manifest_violations(&m);
        assert!(v.contains(&ManifestViolation {
            id: None,
            issue: ManifestIssue::EntityCountMismatch { declared: 6, actual: 5 }
        }));
        assert!(v.iter().any(|v| v.id.as_deref() == Some("a")
            && matches!(v.issue, ManifestIssue::Sample { .. })));
    }

    #[test]
    fn default_ids() {
        let mut s = seeds();
        s[0].id = None;
        assert_eq!(s[0].id_at(7), "sample-0007");
    }
}
