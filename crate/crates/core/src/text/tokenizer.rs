use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use serde::{Deserialize, Serialize};

use crate::fold::{fold, Fnv};

/// Characters that become tokens of their own.
const PUNCT: &[char] = &[
    ',', '.', ';', ':', '!', '?', '(', ')', '"', '/', '[', ']', '{', '}', '„', '“', '”', '‚', '‘', '«', '»',
];
const OPENERS: &[char] = &['(', '[', '{', '"', '„', '“', '‚', '‘', '«', '»'];
const CLOSERS: &[char] = &[')', ']', '}', '"', '“', '”', '‘', '’', '«', '»', '\''];
const TERMINATORS: &[char] = &['.', '!', '?'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub start: usize,
    pub end: usize,
    pub sentence_index: usize,
}

/// Sentence splitter and tokenizer for German prose, configured with an
/// abbreviation list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tokenizer {
    abbreviations: BTreeSet<String>,
    fingerprint: u64,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self::new(core::iter::empty::<&str>())
    }
}

impl Tokenizer {
    /// Abbreviations are matched case-insensitively and must include their
    /// final period (`"mind."`, `"z.B."`).
    pub fn new<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let abbreviations: BTreeSet<String> = abbreviations
            .into_iter()
            .map(|a| fold(a.as_ref().trim()))
            .filter(|a| !a.is_empty())
            .collect();
        let mut h = Fnv::new();
        h.write(b"zugang-tokenizer-v1");
        for a in &abbreviations {
            h.write(a.as_bytes());
            h.write(&[0]);
        }
        Tokenizer { abbreviations, fingerprint: h.finish() }
    }

    /// Reads one abbreviation per line; blank lines and `#` comments are
    /// skipped.
    pub fn from_list(list: &str) -> Self {
        Self::new(list.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')))
    }

    /// Identifies the configuration. Matchers and documents built with
    /// different fingerprints must not be combined.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn abbreviations(&self) -> impl Iterator<Item = &str> {
        self.abbreviations.iter().map(String::as_str)
    }

    pub fn is_abbreviation(&self, word: &str) -> bool {
        self.abbreviations.contains(&fold(word))
    }

    /// Splits at `.`, `!`, `?`, `;` and newlines. A period does not end a
    /// sentence after a known abbreviation, an ordinal number (`3.`), inside
    /// a `§` reference, or when it is not followed by whitespace.
    pub fn split_sentences(&self, text: &str) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut seg_start = 0;
        let push = |from: usize, to: usize, out: &mut Vec<(usize, usize)>| {
            let seg = &text[from..to];
            let lead = seg.len() - seg.trim_start().len();
            let trail = seg.len() - seg.trim_end().len();
            if lead + trail < seg.len() {
                out.push((from + lead, to - trail));
            }
        };
        let mut iter = text.char_indices().peekable();
        while let Some((i, c)) = iter.next() {
            match c {
                '\n' => {
                    push(seg_start, i, &mut out);
                    seg_start = i + 1;
                }
                ';' => {
                    push(seg_start, i + 1, &mut out);
                    seg_start = i + 1;
                }
                c if TERMINATORS.contains(&c) => {
                    let mut end = i + c.len_utf8();
                    let mut run = 1;
                    while let Some(&(j, n)) = iter.peek() {
                        if TERMINATORS.contains(&n) {
                            run += 1;
                        } else if !CLOSERS.contains(&n) {
                            break;
                        }
                        end = j + n.len_utf8();
                        iter.next();
                    }
                    let followed_by_space = text[end..].chars().next().is_none_or(char::is_whitespace);
                    if !followed_by_space {
                        continue;
                    }
                    if c == '.' && run == 1 && self.period_is_not_final(text, i) {
                        continue;
                    }
                    push(seg_start, end, &mut out);
                    seg_start = end;
                }
                _ => {}
            }
        }
        push(seg_start, text.len(), &mut out);
        out
    }

    fn period_is_not_final(&self, text: &str, period: usize) -> bool {
        let word_start = text[..period].rfind(char::is_whitespace).map_or(0, |ws| {
            ws + text[ws..].chars().next().map_or(1, char::len_utf8)
        });
        let word = text[word_start..=period].trim_start_matches(OPENERS);
        let stem = &word[..word.len() - 1];
        self.is_abbreviation(word)
            || (!stem.is_empty() && stem.bytes().all(|b| b.is_ascii_digit()))
            || word.starts_with('§')
    }

    /// Tokenizes every sentence range. Whitespace separates tokens and the
    /// characters in `PUNCT` become single tokens, except a `/` that joins a
    /// word to a gender ending (`Fachberater/innen`) or closes a hyphenated
    /// compound (`Bau-/Heimwerkerbedarf`), a `.`, `,` or `:` between two
    /// alphanumerics, and the periods of a known abbreviation.
    pub fn tokenize(&self, text: &str, sentences: &[(usize, usize)]) -> Vec<Token> {
        let mut tokens = Vec::new();
        for (sentence_index, &(s_start, s_end)) in sentences.iter().enumerate() {
            let sentence = &text[s_start..s_end];
            let mut offset = 0;
            for run in sentence.split_whitespace() {
                let run_at = offset + sentence[offset..].find(run).expect("run comes from this sentence");
                offset = run_at + run.len();
                let abs = s_start + run_at;
                for range in self.split_run(run) {
                    let surface = &run[range.clone()];
                    tokens.push(Token {
                        surface: String::from(surface),
                        lower: fold(surface),
                        start: abs + range.start,
                        end: abs + range.end,
                        sentence_index,
                    });
                }
            }
        }
        tokens
    }

    fn split_run(&self, run: &str) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        // peel openers and closers, then check the core against the abbreviation list
        let core_start = run.len() - run.trim_start_matches(OPENERS).len();
        let trailing: &[char] = &[')', ']', '}', '"', '“', '”', '»', '«', ',', ';', ':', '!', '?'];
        let core_end = run.trim_end_matches(trailing).len().max(core_start);
        let core = &run[core_start..core_end];
        if core.contains('.') && self.is_abbreviation(core) {
            split_plain(run, 0..core_start, &mut out);
            out.push(core_start..core_end);
            split_plain(run, core_end..run.len(), &mut out);
            return out;
        }
        split_plain(run, 0..run.len(), &mut out);
        out
    }

    /// Runs the sentence splitter and tokenizer over already extracted text.
    pub fn document(&self, doc_id: impl Into<String>, raw: impl Into<String>, text: impl Into<String>) -> TokenizedDocument {
        let text = text.into();
        let sentences = self.split_sentences(&text);
        let tokens = self.tokenize(&text, &sentences);
        TokenizedDocument {
            doc_id: doc_id.into(),
            raw: raw.into(),
            text,
            sentences,
            tokens,
            fingerprint: self.fingerprint,
        }
    }

    /// Extracts access text from HTML (plain text passes through) and
    /// tokenizes it.
    pub fn process(&self, doc_id: impl Into<String>, raw: &str) -> TokenizedDocument {
        let text = super::extract_access_text(raw);
        self.document(doc_id, raw, text)
    }
}

fn split_plain(run: &str, range: Range<usize>, out: &mut Vec<Range<usize>>) {
    let part = &run[range.clone()];
    let chars: Vec<(usize, char)> = part.char_indices().collect();
    let mut word_start: Option<usize> = None;
    for (k, &(at, c)) in chars.iter().enumerate() {
        let prev = k.checked_sub(1).map(|p| chars[p].1);
        let next = chars.get(k + 1).map(|&(_, n)| n);
        let next2 = chars.get(k + 2).map(|&(_, n)| n);
        if PUNCT.contains(&c) && !attached(c, prev, next, next2) {
            if let Some(ws) = word_start.take() {
                out.push(range.start + ws..range.start + at);
            }
            out.push(range.start + at..range.start + at + c.len_utf8());
        } else if word_start.is_none() {
            word_start = Some(at);
        }
    }
    if let Some(ws) = word_start {
        out.push(range.start + ws..range.end);
    }
}

fn attached(c: char, prev: Option<char>, next: Option<char>, next2: Option<char>) -> bool {
    let (Some(p), Some(n)) = (prev, next) else { return false };
    match c {
        '/' => {
            (p.is_alphabetic() && n.is_lowercase())
                || (p == '-' && n.is_alphabetic())
                || (p.is_alphabetic() && n == '-' && next2.is_some_and(char::is_alphabetic))
        }
        '.' | ',' | ':' => p.is_alphanumeric() && n.is_alphanumeric(),
        _ => false,
    }
}

/// Extracted access text split into sentences and tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedDocument {
    pub doc_id: String,
    pub raw: String,
    pub text: String,
    pub sentences: Vec<(usize, usize)>,
    pub tokens: Vec<Token>,
    /// [`Tokenizer::fingerprint`] of the tokenizer that built this document.
    pub fingerprint: u64,
}

impl TokenizedDocument {
    /// Token index range of one sentence.
    pub fn sentence_tokens(&self, sentence: usize) -> Range<usize> {
        let from = self.tokens.partition_point(|t| t.sentence_index < sentence);
        let to = self.tokens.partition_point(|t| t.sentence_index <= sentence);
        from..to
    }

    /// Converts a byte offset into `text` to a Unicode scalar offset.
    pub fn char_offset(&self, byte: usize) -> usize {
        self.text[..byte].chars().count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn german() -> Tokenizer {
        Tokenizer::new(["mind.", "bzw.", "z.B.", "ggf.", "evtl.", "inkl.", "ca.", "u.a."])
    }

    fn surfaces(t: &Tokenizer, text: &str) -> Vec<String> {
        let s = t.split_sentences(text);
        t.tokenize(text, &s).into_iter().map(|t| t.surface).collect()
    }

    fn sentences<'a>(t: &Tokenizer, text: &'a str) -> Vec<&'a str> {
        t.split_sentences(text).into_iter().map(|(a, b)| &text[a..b]).collect()
    }

    #[test]
    fn sentence_examples() {
        let t = german();
        assert_eq!(
            sentences(&t, "Persönliches Beratungsgespräch, PROFIL-Eignungstest, mind. Hauptschulabschluss erforderlich").len(),
            1
        );
        assert!(t.split_sentences("").is_empty());
        assert_eq!(
            sentences(&t, "Abgeschlossene Ausbildung. Berufserfahrung wünschenswert."),
            ["Abgeschlossene Ausbildung.", "Berufserfahrung wünschenswert."]
        );
    }

    #[test]
    fn sentence_exceptions() {
        let t = german();
        assert_eq!(sentences(&t, "Ab dem 3. Monat z.B. Praxis. Ende").len(), 2);
        assert_eq!(sentences(&t, "Nach §66. BBiG geregelt").len(), 1);
        assert_eq!(sentences(&t, "Siehe www.arbeitsagentur.de jetzt").len(), 1);
        assert_eq!(sentences(&t, "a; b\n\n c! (d.) e?! f"), ["a;", "b", "c!", "(d.)", "e?!", "f"]);
    }

    #[test]
    fn token_examples() {
        let t = german();
        assert_eq!(surfaces(&t, "mind. Hauptschulabschluss erforderlich"), ["mind.", "Hauptschulabschluss", "erforderlich"]);
        assert_eq!(surfaces(&t, "abc"), ["abc"]);
        assert_eq!(surfaces(&t, "Fachberater/innen prüfen"), ["Fachberater/innen", "prüfen"]);
    }

    #[test]
    fn slashes_and_compounds() {
        let t = german();
        assert_eq!(
            surfaces(&t, "SGB II/SGB III (Bildungsgutschein)"),
            ["SGB", "II", "/", "SGB", "III", "(", "Bildungsgutschein", ")"]
        );
        assert_eq!(surfaces(&t, "Bau-/Heimwerkerbedarf"), ["Bau-/Heimwerkerbedarf"]);
        assert_eq!(surfaces(&t, "Kaufmann/-frau"), ["Kaufmann/-frau"]);
        assert_eq!(surfaces(&t, "Produktionstechnologe/Produktionstechnologin"), [
            "Produktionstechnologe",
            "/",
            "Produktionstechnologin"
        ]);
    }

    #[test]
    fn punctuation_and_numbers() {
        let t = german();
        assert_eq!(
            surfaces(&t, "(ca. 1,5 Jahre), z.B.: „Deutsch“!"),
            ["(", "ca.", "1,5", "Jahre", ")", ",", "z.B.", ":", "„", "Deutsch", "“", "!"]
        );
        assert_eq!(surfaces(&t, "Niveau B2."), ["Niveau", "B2", "."]);
    }

    #[test]
    fn offsets_and_sentences() {
        let t = german();
        let doc = t.document("d", "", "Gute Prüfung. Über 3 Jahre");
        for tok in &doc.tokens {
            assert_eq!(&doc.text[tok.start..tok.end], tok.surface);
        }
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.sentence_tokens(0), 0..3);
        assert_eq!(doc.sentence_tokens(1), 3..6);
        assert_eq!(doc.tokens[3].lower, "über");
        assert_eq!(doc.char_offset(doc.tokens[3].start), 14);
    }

    #[test]
    fn lowercasing_is_unicode() {
        let t = Tokenizer::default();
        let doc = t.document("d", "", "STRASSE Straße ÄRGER");
        let lower: Vec<&str> = doc.tokens.iter().map(|t| t.lower.as_str()).collect();
        assert_eq!(lower, ["strasse", "straße", "ärger"]);
    }

    #[test]
    fn fingerprint_tracks_abbreviations() {
        assert_eq!(german().fingerprint(), german().fingerprint());
        assert_ne!(german().fingerprint(), Tokenizer::default().fingerprint());
        assert_eq!(Tokenizer::new(["MIND."]).fingerprint(), Tokenizer::new(["mind."]).fingerprint());
        assert_eq!(Tokenizer::from_list("# c\nmind.\n\n").fingerprint(), Tokenizer::new(vec!["mind."]).fingerprint());
    }
}
