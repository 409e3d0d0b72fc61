use proptest::prelude::*;
use vapokit_core::bench::*;
use vapokit_core::ocr::*;
use vapokit_core::sample::{Lang, Sample};
use vapokit_core::text::{word_count, LangMode};

const VOCAB: [&str; 8] = ["alpha", "beta", "gamma", "delta", "kappa", "sigma", "omega", "zeta"];

fn text(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(VOCAB.to_vec()), 0..=max).prop_map(|v| v.join(" "))
}

fn sample(id: &str, slide: &str, transcript: &str) -> Sample {
    Sample {
        id: id.into(),
        domain: "general".into(),
        lang: Lang::En,
        slide_text: slide.into(),
        transcript_gt: transcript.into(),
        entities: vec![],
        audio_ref: String::new(),
        slide_image_ref: None,
        duration_s: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn detection_is_monotone(slide in text(6).prop_filter("slide", |s| !s.is_empty()), tr in text(6), out in text(6), extra in text(3)) {
        let p = partition_vocab(&sample("s", &slide, &tr), VocabOptions::default()).unwrap();
        prop_assert!(p.common.is_disjoint(&p.slide_only));
        if detect(&out, &p, LangMode::LatinWord) {
            let after = format!("{out} {extra}");
            let before = format!("{extra} {out}");
            prop_assert!(detect(&after, &p, LangMode::LatinWord));
            prop_assert!(detect(&before, &p, LangMode::LatinWord));
        }
        if p.slide_only.is_empty() {
            prop_assert!(!detect(&out, &p, LangMode::LatinWord));
        }
    }

    #[test]
    fn rate_is_permutation_invariant(rows in prop::collection::vec((text(4).prop_filter("slide", |s| !s.is_empty()), text(4), text(4)), 1..8), shift in 0usize..8) {
        let samples: Vec<Sample> = rows.iter().enumerate().map(|(i, (s, t, _))| sample(&format!("id{i}"), s, t)).collect();
        let outputs: Vec<(String, String)> = rows.iter().enumerate().map(|(i, (_, _, o))| (format!("id{i}"), o.clone())).collect();
        let a = dataset_rate(&samples, &outputs, VocabOptions::default()).unwrap();
        let mut s2 = samples.clone();
        s2.rotate_left(shift % samples.len());
        let mut o2 = outputs.clone();
        o2.reverse();
        let b = dataset_rate(&s2, &o2, VocabOptions::default()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!((0.0..=100.0).contains(&a.percentage));
    }

    #[test]
    fn template_passes_its_own_checks(
        n in 1usize..12,
        picks in prop::collection::vec(0usize..WORDS.len(), 12),
        zh in any::<bool>(),
    ) {
        let pool: &[&str] = if zh { &ZH_WORDS } else { &WORDS };
        let lang = if zh { Lang::Zh } else { Lang::En };
        let mut entities: Vec<String> = Vec::new();
        for &p in picks.iter().take(n) {
            let w = pool[p % pool.len()].to_string();
            if !entities.contains(&w) {
                entities.push(w);
            }
        }
        let t = TemplateGenerator.generate("domain", &entities, lang).unwrap();
        prop_assert!(slide_issues(&t, &entities, lang).is_empty());
        prop_assert!(word_count(&t.body) <= MAX_BODY_WORDS);
        let slide = generate_slide_text("domain", &entities, lang, &mut TemplateGenerator).unwrap();
        prop_assert!(render_slide(&slide, &LayoutConfig::default()).is_ok());
    }
}

const WORDS: [&str; 12] = [
    "aspirin", "ibuprofen", "heparin", "insulin", "benzene", "toluene", "ethanol", "CRISPR",
    "ribosome", "transformer", "attention", "gradient descent",
];
const ZH_WORDS: [&str; 6] = ["阿司匹林", "布洛芬", "肝素", "胰岛素", "苯", "乙醇"];

#[test]
fn fixture_rates() {
    let rows = [
        ("a", "Heparin Dosage Guide", "we start with a low dose"),
        ("b", "Warfarin Interactions", "food can change the effect"),
        ("c", "Beta Blockers", "these slow the heart"),
        ("d", "Statins Overview", "they lower cholesterol"),
    ];
    let samples: Vec<Sample> = rows.iter().map(|(i, s, t)| sample(i, s, t)).collect();
    let ocr: Vec<(String, String)> = samples.iter().map(|s| (s.id.clone(), s.slide_text.clone())).collect();
    let faithful: Vec<(String, String)> = samples.iter().map(|s| (s.id.clone(), s.transcript_gt.clone())).collect();
    let mut mixed = faithful.clone();
    mixed[2] = ocr[2].clone();
    let rate = |o: &[(String, String)]| dataset_rate(&samples, o, VocabOptions::default()).unwrap().percentage;
    assert_eq!(rate(&ocr), 100.0);
    assert_eq!(rate(&faithful), 0.0);
    assert_eq!(rate(&mixed), 25.0);
}

fn seeds() -> Vec<SeedRecord> {
    (0..6)
        .map(|i| SeedRecord {
            id: None,
            domain: "medicine".into(),
            lang: Lang::En,
            entities: vec![WORDS[i].into(), WORDS[i + 1].into()],
            transcript_gt: format!("today {} and {} are compared", WORDS[i], WORDS[i + 1]),
            audio_ref: String::new(),
            duration_s: None,
        })
        .collect()
}

#[test]
fn build_is_idempotent_and_conserves_entities() {
    let layout = LayoutConfig::default();
    let a = build_dataset(&seeds(), &mut TemplateGenerator, &layout);
    let b = build_dataset(&seeds(), &mut TemplateGenerator, &layout);
    assert_eq!(a, b);
    let expected: usize = seeds().iter().map(|s| s.entities.len()).sum();
    assert_eq!(a.manifest.header.entities, expected);
    assert!(manifest_violations(&a.manifest).is_empty());
}
