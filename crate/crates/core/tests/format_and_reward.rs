use proptest::prelude::*;
use vapokit_core::reward::*;
use vapokit_core::sample::{Lang, Sample};
use vapokit_core::structured::{parse_structured, serialize, TAGS};

const PIECES: [&str; 14] = [
    "<think>", "</think>", "<answer>", "</answer>", " ", "\n", "a", "slide", "<", ">", "/", "think", "<Think>", "answer",
];

fn soup() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(PIECES.to_vec()), 0..12).prop_map(|v| v.concat())
}

/// Tries every placement of the four tags: the string is accepted iff it
/// splits as ws <think> A </think> ws <answer> B </answer> ws with no tag
/// literal inside A or B.
fn reference_recognizer(s: &str) -> Option<(String, String)> {
    let ws = |x: &str| x.chars().all(char::is_whitespace);
    let clean = |x: &str| !TAGS.iter().any(|t| x.contains(t));
    let at = |tag: &str| -> Vec<usize> { s.match_indices(tag).map(|(i, _)| i).collect() };
    let (to, tc, ao, ac) = (at("<think>"), at("</think>"), at("<answer>"), at("</answer>"));
    let mut found = None;
    for &a in &to {
        for &b in &tc {
            for &c in &ao {
                for &d in &ac {
                    if !(a + 7 <= b && b + 8 <= c && c + 8 <= d) {
                        continue;
                    }
                    let think = &s[a + 7..b];
                    let answer = &s[c + 8..d];
                    if ws(&s[..a]) && ws(&s[b + 8..c]) && ws(&s[d + 9..]) && clean(think) && clean(answer) {
                        assert!(found.is_none(), "grammar is unambiguous");
                        found = Some((think.to_string(), answer.to_string()));
                    }
                }
            }
        }
    }
    found
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20_000))]

    #[test]
    fn parser_agrees_with_reference(s in soup()) {
        let p = parse_structured(&s);
        match reference_recognizer(&s) {
            Some((think, answer)) => {
                prop_assert!(p.well_formed);
                prop_assert_eq!(p.think, think);
                prop_assert_eq!(p.answer, answer);
            }
            None => {
                prop_assert!(!p.well_formed);
                prop_assert!(p.think.is_empty() && p.answer.is_empty());
            }
        }
    }
}

proptest! {
    #[test]
    fn serialize_round_trips(think in "[^<>]{0,30}", answer in "[^<>]{0,30}") {
        let p = parse_structured(&serialize(&think, &answer));
        prop_assert!(p.well_formed);
        prop_assert_eq!(p.think, think);
        prop_assert_eq!(p.answer, answer);
    }
}

fn fixture() -> Sample {
    Sample {
        id: "f".into(),
        domain: "ai".into(),
        lang: Lang::En,
        slide_text: "Contrastive Learning: ConVIRT and CLIP align images with text".into(),
        transcript_gt: "convirt came before clip and both learn from paired images and text".into(),
        entities: vec!["ConVIRT".into(), "CLIP".into()],
        audio_ref: String::new(),
        slide_image_ref: None,
        duration_s: None,
    }
}

fn rollout() -> impl Strategy<Value = String> {
    prop_oneof![
        soup(),
        "\\PC{0,60}",
        (soup(), "[a-z ]{0,30}", soup()).prop_map(|(a, b, c)| format!("{a}{b}{c}")),
    ]
}

fn weights() -> impl Strategy<Value = RewardWeights> {
    (0.0..3.0f64, 0.0..3.0f64, 0.0..3.0f64, 0.0..3.0f64).prop_map(|(a, b, c, d)| RewardWeights::new(a, b, c, d).unwrap())
}

proptest! {
    #[test]
    fn breakdown_is_bounded_and_exact(raw in rollout(), w in weights(), salvage in any::<bool>()) {
        let mut config = RewardConfig::with_weights(w);
        if salvage {
            config.malformed = MalformedPolicy::Salvage;
        }
        let b = total_reward(&fixture(), &raw, &config);
        prop_assert!(b.r_format == 0.0 || b.r_format == 1.0);
        for r in [b.r_ocr, b.r_asr, b.r_va] {
            prop_assert!((0.0..=1.0).contains(&r));
        }
        prop_assert_eq!(b.total, w.format * b.r_format + w.ocr * b.r_ocr + w.asr * b.r_asr + w.va * b.r_va);
        prop_assert!(b.total >= 0.0 && b.total <= w.sum() + 1e-12);
        if b.r_format == 0.0 && !salvage {
            prop_assert_eq!((b.r_ocr, b.r_asr, b.r_va), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn doubling_weights_doubles_total(raw in rollout(), w in weights()) {
        let one = total_reward(&fixture(), &raw, &RewardConfig::with_weights(w)).total;
        let two = total_reward(&fixture(), &raw, &RewardConfig::with_weights(w.scaled(2.0))).total;
        prop_assert!((two - 2.0 * one).abs() <= 1e-12 * one.abs().max(1.0));
    }

    #[test]
    fn corrupting_answer_never_raises_asr(k in 0usize..12) {
        let s = fixture();
        let gt: Vec<&str> = s.transcript_gt.split(' ').collect();
        let score = |n: usize| {
            let answer: Vec<&str> = gt.iter().enumerate().map(|(i, w)| if i < n { "zzz" } else { *w }).collect();
            total_reward(&s, &serialize(&s.slide_text, &answer.join(" ")), &RewardConfig::default()).r_asr
        };
        prop_assert!(score(k + 1) <= score(k));
    }
}

#[test]
fn removing_anchored_entity_never_raises_va() {
    let s = fixture();
    let full = serialize(&s.slide_text, &s.transcript_gt);
    let without = serialize(&s.slide_text, &s.transcript_gt.replace("clip", "qqqq"));
    let c = RewardConfig::default();
    assert!(total_reward(&s, &without, &c).r_va <= total_reward(&s, &full, &c).r_va);
    assert!(total_reward(&s, &without, &c).r_va < 1.0);
}

#[test]
fn clipping_levels() {
    // reference has 4 tokens; WER 0, 0.5, 1.0, 1.5, 3.0
    let mut s = fixture();
    s.transcript_gt = "one two three four".into();
    let cases = [
        ("one two three four", 1.0),
        ("one two xx yy", 0.5),
        ("", 0.0),
        ("aa bb cc dd ee ff", 0.0),
        ("a b c d e f g h i j k l", 0.0),
    ];
    for (answer, want) in cases {
        assert_eq!(r_asr(answer, &s.transcript_gt, Lang::En).value, want, "{answer}");
    }
}

#[test]
fn pure_ocr_answer_is_penalized() {
    let s = fixture();
    let c = RewardConfig::default();
    let gt = total_reward(&s, &serialize(&s.slide_text, &s.transcript_gt), &c);
    let ocr = total_reward(&s, &serialize(&s.slide_text, &s.slide_text), &c);
    assert!(ocr.r_asr < gt.r_asr);
}
