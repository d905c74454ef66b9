use proptest::prelude::*;
use zugang_core::text::{extract_access_text, looks_like_html};
use zugang_core::Tokenizer;

fn tokenizer() -> Tokenizer {
    Tokenizer::new(["mind.", "z.B.", "bzw.", "ggf.", "u.a."])
}

fn piece() -> impl Strategy<Value = String> {
    prop_oneof![
        6 => "[A-Za-zäöüßÄÖÜ]{1,10}",
        1 => "[0-9]{1,4}",
        1 => Just("mind.".to_string()),
        1 => Just("z.B.".to_string()),
        1 => Just("§66".to_string()),
        1 => Just("3.".to_string()),
        1 => Just("Bau-/Heimwerkerbedarf".to_string()),
        1 => Just("Fachberater/innen".to_string()),
        1 => Just("B2".to_string()),
        3 => prop::sample::select(vec![".", ",", ";", ":", "!", "?", "(", ")", "/", "\"", "„", "“", "-", "…", "&", "<"]).prop_map(str::to_string),
    ]
}

fn text() -> impl Strategy<Value = String> {
    let sep = prop::sample::select(vec!["", " ", " ", " ", "  ", "\n", "\t", " \u{a0}"]);
    prop::collection::vec((piece(), sep), 0..60).prop_map(|parts| parts.into_iter().map(|(p, s)| p + s).collect())
}

proptest! {
    #[test]
    fn token_offsets_point_at_surfaces(text in text()) {
        let doc = tokenizer().process("d", &text);
        for t in &doc.tokens {
            prop_assert_eq!(&doc.text[t.start..t.end], t.surface.as_str());
            prop_assert_eq!(t.lower.clone(), t.surface.to_lowercase());
        }
    }

    #[test]
    fn tokens_partition_non_whitespace(text in text()) {
        let doc = tokenizer().process("d", &text);
        let mut covered = vec![false; doc.text.len()];
        let mut last_end = 0;
        for t in &doc.tokens {
            prop_assert!(t.start >= last_end, "tokens overlap or are out of order");
            last_end = t.end;
            for c in &mut covered[t.start..t.end] {
                *c = true;
            }
        }
        for (i, ch) in doc.text.char_indices() {
            prop_assert_eq!(covered[i], !ch.is_whitespace(), "byte {} ({:?})", i, ch);
        }
    }

    #[test]
    fn tokens_lie_in_their_sentences(text in text()) {
        let doc = tokenizer().process("d", &text);
        for w in doc.sentences.windows(2) {
            prop_assert!(w[0].1 <= w[1].0);
        }
        let mut prev = 0;
        for t in &doc.tokens {
            let (start, end) = doc.sentences[t.sentence_index];
            prop_assert!(start <= t.start && t.end <= end);
            prop_assert!(t.sentence_index >= prev);
            prev = t.sentence_index;
        }
        for (i, _) in doc.sentences.iter().enumerate() {
            let range = doc.sentence_tokens(i);
            prop_assert!(doc.tokens[range].iter().all(|t| t.sentence_index == i));
        }
    }

    #[test]
    fn processing_is_deterministic(text in text()) {
        let a = tokenizer().process("d", &text);
        let b = tokenizer().process("d", &text);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn access_text_is_idempotent_on_plain_text(text in text()) {
        prop_assume!(!looks_like_html(&text));
        let once = extract_access_text(&text);
        prop_assert_eq!(extract_access_text(&once), once);
    }

    #[test]
    fn paragraph_text_is_recovered(words in prop::collection::vec("[A-Za-zäöü.,:;]{1,8}", 0..10), junk in "[a-z ]{0,10}") {
        let html = format!("<div>{junk}</div><p class=\"z\">\n {} </p>", words.join("  "));
        prop_assert_eq!(extract_access_text(&html), words.join(" "));
    }
}

#[test]
fn abbreviation_changes_fingerprint() {
    assert_ne!(Tokenizer::new(["mind."]).fingerprint(), Tokenizer::new(["mind.", "ca."]).fingerprint());
    assert_eq!(Tokenizer::new(["Mind.", "ca."]).fingerprint(), Tokenizer::new(["ca.", "mind."]).fingerprint());
}

#[test]
fn abbreviation_inside_sentence() {
    let doc = tokenizer().process("d", "Persönliches Beratungsgespräch, PROFIL-Eignungstest, mind. Hauptschulabschluss erforderlich");
    assert_eq!(doc.sentences.len(), 1);
    let surfaces: Vec<&str> = doc.tokens.iter().map(|t| t.surface.as_str()).collect();
    assert_eq!(
        surfaces,
        ["Persönliches", "Beratungsgespräch", ",", "PROFIL-Eignungstest", ",", "mind.", "Hauptschulabschluss", "erforderlich"]
    );
}
