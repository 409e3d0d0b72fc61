use proptest::prelude::*;
use vapokit_core::metrics::*;
use vapokit_core::text::{normalize_tokenize, LangMode, TokenSeq};

const WORDS: [&str; 6] = ["alpha", "beta", "gamma", "delta", "kappa", "omega"];

fn words(max: usize) -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(WORDS.to_vec()), 0..=max)
}

fn seq(w: &[&str]) -> TokenSeq {
    TokenSeq::from_tokens(w.iter().copied(), LangMode::LatinWord)
}

/// Character error rate by a plain Levenshtein table over chars.
fn cer(r: &str, h: &str) -> f64 {
    let r: Vec<char> = r.chars().filter(|c| !c.is_whitespace()).collect();
    let h: Vec<char> = h.chars().filter(|c| !c.is_whitespace()).collect();
    let mut prev: Vec<usize> = (0..=h.len()).collect();
    for i in 1..=r.len() {
        let mut cur = vec![i; h.len() + 1];
        for j in 1..=h.len() {
            cur[j] = (prev[j - 1] + usize::from(r[i - 1] != h[j - 1]))
                .min(prev[j] + 1)
                .min(cur[j - 1] + 1);
        }
        prev = cur;
    }
    prev[h.len()] as f64 / r.len() as f64
}

proptest! {
    #[test]
    fn wer_of_identity_is_zero(r in words(8).prop_filter("nonempty", |w| !w.is_empty())) {
        prop_assert_eq!(wer(&seq(&r), &seq(&r)).unwrap(), 0.0);
    }

    #[test]
    fn appending_shared_token_keeps_errors(r in words(6), h in words(6), w in prop::sample::select(WORDS.to_vec())) {
        let mut r2 = r.clone();
        let mut h2 = h.clone();
        r2.push(w);
        h2.push(w);
        prop_assert_eq!(wer_counts(&seq(&r), &seq(&h)).errors, wer_counts(&seq(&r2), &seq(&h2)).errors);
    }

    #[test]
    fn extra_substitution_never_lowers_errors(r in words(6), h in words(6).prop_filter("nonempty", |w| !w.is_empty()), pos in any::<prop::sample::Index>()) {
        let mut h2: Vec<String> = h.iter().map(|s| s.to_string()).collect();
        let i = pos.index(h2.len());
        h2[i] = "zzz".into();
        let before = wer_counts(&seq(&r), &seq(&h)).errors;
        let after = wer_counts(&seq(&r), &TokenSeq::from_tokens(h2, LangMode::LatinWord)).errors;
        prop_assert!(after >= before);
    }

    #[test]
    fn partition_is_exact(r in words(8), h in words(8), k in prop::collection::vec(prop::sample::select(WORDS.to_vec()), 0..3)) {
        let keys = entity_refs(&k, LangMode::LatinWord);
        let c = partitioned_counts(&seq(&r), &seq(&h), &keys);
        let total = wer_counts(&seq(&r), &seq(&h));
        prop_assert_eq!(c.keyword.errors + c.unbiased.errors, total.errors);
        prop_assert_eq!(c.keyword.reference_tokens + c.unbiased.reference_tokens, r.len());
    }

    #[test]
    fn ratios_in_unit_interval(r in words(8), h in words(8), k in prop::collection::vec(prop::sample::select(WORDS.to_vec()), 1..4)) {
        let keys = entity_refs(&k, LangMode::LatinWord);
        if let Some(rec) = keyword_recall(&seq(&r), &seq(&h), &keys).unwrap() {
            prop_assert!((0.0..=1.0).contains(&rec));
        }
        let fnr = ne_fnr(&keys, &seq(&h)).unwrap();
        prop_assert!((0.0..=1.0).contains(&fnr));
    }

    #[test]
    fn zero_tolerance_is_exact_search(text in words(8), e in words(3).prop_filter("nonempty", |w| !w.is_empty())) {
        let surface = e.join(" ");
        let entity = EntityRef::with_tolerance(&surface, LangMode::LatinWord, 0);
        let exact = text.windows(e.len()).position(|w| w == e.as_slice());
        let found = fuzzy_find(&entity, &seq(&text));
        prop_assert_eq!(found.map(|m| m.start), exact);
        if let Some(m) = found {
            prop_assert_eq!((m.len, m.distance), (e.len(), 0));
        }
    }

    #[test]
    fn pure_cjk_wer_is_cer(r in "[一二三四五]{1,8}", h in "[一二三四五]{0,8}") {
        for mode in [LangMode::CjkChar, LangMode::Mixed] {
            let w = wer(&normalize_tokenize(&r, mode), &normalize_tokenize(&h, mode)).unwrap();
            prop_assert!((w - cer(&r, &h)).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_is_idempotent(s in "\\PC{0,40}") {
        for mode in [LangMode::LatinWord, LangMode::CjkChar, LangMode::Mixed] {
            let once = normalize_tokenize(&s, mode);
            let twice = normalize_tokenize(&once.joined(), mode);
            prop_assert_eq!(once.tokens(), twice.tokens());
            prop_assert!(once.tokens().iter().all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        }
    }
}

#[test]
fn documented_examples() {
    let t = |s: &str| normalize_tokenize(s, LangMode::LatinWord);
    assert_eq!(t("The cat, sat.").tokens(), ["the", "cat", "sat"]);
    assert_eq!(normalize_tokenize("你好world", LangMode::Mixed).tokens(), ["你", "好", "world"]);
    assert!(t("").is_empty());

    assert!((wer(&t("a b c"), &t("a x c d")).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(wer(&t("a"), &t("x y z")).unwrap(), 3.0);
    assert_eq!(wer(&t(""), &t("a")), Err(MetricError::UndefinedWer));

    let convirt = EntityRef::new("ConVIRT", LangMode::LatinWord);
    assert_eq!(convirt.tolerance(), 1);
    let m = fuzzy_find(&convirt, &t("we trained convert on reports")).unwrap();
    assert_eq!((m.start, m.distance), (2, 1));

    let three = EntityRef::new("large language model", LangMode::LatinWord);
    assert_eq!(three.tolerance(), 0);
    assert!(fuzzy_find(&three, &t("a large language modem")).is_none());

    let ents = entity_refs(&["deep learning", "neural nets"], LangMode::LatinWord);
    assert_eq!(ne_wer(&ents, &t("deep learning and neural nets"), &t("deep learning and")).unwrap(), 0.5);
    let one = entity_refs(&["convirt"], LangMode::LatinWord);
    assert_eq!(ne_wer(&one, &t("convirt"), &t("convert")).unwrap(), 1.0);

    let four = entity_refs(&["alpha", "beta", "gamma", "delta"], LangMode::LatinWord);
    assert_eq!(ne_fnr(&four, &t("alpha beta gamma")).unwrap(), 0.25);
    assert_eq!(ne_fnr(&[], &t("x")), Err(MetricError::NoEntities));

    let kw = entity_refs(&["beta"], LangMode::LatinWord);
    assert_eq!(partitioned_wer(&t("alpha beta gamma"), &t("alpha bxta gamma"), &kw), (Some(1.0), Some(0.0)));
    assert_eq!(partitioned_wer(&t("alpha beta"), &t("alpha"), &[]), (None, Some(0.5)));
    assert_eq!(keyword_recall(&t("beta x beta"), &t("beta x"), &kw).unwrap(), Some(0.5));
}
