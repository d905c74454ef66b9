//! Surface-form expansion of taxonomy labels.
//!
//! Every entry keeps its label and gains variants from three rules:
//! degree synonyms from a [`SynonymLexicon`], the two halves of a
//! parenthetical (`"allgemeine Hochschulreife (Gymnasium)"`), and the male
//! and female titles of a slash-joined label
//! (`"Produktionstechnologe/Produktionstechnologin"`). Labels with both a
//! parenthetical and a slash also get the gender split of the outer part.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fold::{fold, normalize_ws};
use crate::gazetteer::Gazetteer;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: a synonym group needs at least two members")]
    GroupTooSmall { line: usize },
    #[error("line {line}: empty synonym member")]
    EmptyMember { line: usize },
    #[error("line {line}: {term:?} already belongs to another group")]
    DuplicateTerm { line: usize, term: String },
}

/// Groups of mutually substitutable degree terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    groups: Vec<Vec<String>>,
}

impl SynonymLexicon {
    /// Parses one group per line, members separated by `|`. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(input: &str) -> Result<Self, LexiconError> {
        let mut groups = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let body = trimmed.strip_suffix('|').unwrap_or(trimmed);
            let mut group = Vec::new();
            for member in body.split('|') {
                let member = normalize_ws(member);
                if member.is_empty() {
                    return Err(LexiconError::EmptyMember { line });
                }
                if !seen.insert(fold(&member)) {
                    return Err(LexiconError::DuplicateTerm { line, term: member });
                }
                group.push(member);
            }
            if group.len() < 2 {
                return Err(LexiconError::GroupTooSmall { line });
            }
            groups.push(group);
        }
        Ok(SynonymLexicon { groups })
    }

    pub fn from_groups<I, G, S>(groups: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = G>,
        G: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let text: Vec<String> = groups
            .into_iter()
            .map(|g| g.into_iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().join("|"))
            .collect();
        Self::parse(&text.join("\n"))
    }

    pub fn groups(&self) -> &[Vec<String>] {
        &self.groups
    }

    pub fn term_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }
}

/// Finds `needle` in `haystack` as a run of whole words.
fn contains_words(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    let word_char = |c: char| c.is_alphanumeric();
    haystack.match_indices(needle).any(|(at, _)| {
        let before_ok = haystack[..at].chars().next_back().is_none_or(|c| !word_char(c));
        let after_ok = haystack[at + needle.len()..].chars().next().is_none_or(|c| !word_char(c));
        before_ok && after_ok
    })
}

/// Returns, for every lexicon term found in `label`, the other members of
/// its group. Matching is case-insensitive over whitespace-normalized text
/// and only counts whole-word occurrences.
pub fn inject_synonyms(label: &str, lexicon: &SynonymLexicon) -> Vec<String> {
    let haystack = fold(&normalize_ws(label));
    let mut out: Vec<String> = Vec::new();
    for group in lexicon.groups() {
        let hits: Vec<usize> = group
            .iter()
            .enumerate()
            .filter(|(_, term)| contains_words(&haystack, &fold(term)))
            .map(|(i, _)| i)
            .collect();
        for &hit in &hits {
            for (i, member) in group.iter().enumerate() {
                if i != hit && !out.contains(member) {
                    out.push(member.clone());
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentheticalSplit {
    pub outer: String,
    pub inner: String,
    /// False when the label's `(` and `)` counts differ.
    pub balanced: bool,
}

/// Splits at the first `(`: the text before it, and the text after it with
/// every bracket removed. `None` when the label has no `(`.
pub fn split_parenthetical(label: &str) -> Option<ParentheticalSplit> {
    let (outer, rest) = label.split_once('(')?;
    let balanced = label.matches('(').count() == label.matches(')').count();
    let inner: String = rest.chars().filter(|&c| c != '(' && c != ')').collect();
    Some(ParentheticalSplit { outer: normalize_ws(outer), inner: normalize_ws(&inner), balanced })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenderSplit {
    pub male: String,
    pub female: String,
    /// The label had more than one `/`; only the first was used.
    pub extra_slashes: bool,
}

/// Splits a slash-joined male/female title.
///
/// The word right after the first `/` is the female head. Anything after
/// that word is a shared suffix appended to both forms, so
/// `"Fachpraktiker/Fachpraktikerin für Näherei"` yields
/// `"Fachpraktiker für Näherei"` and `"Fachpraktikerin für Näherei"`.
/// A head written as an ending (`"Fachberater/in"`) is glued onto the male
/// form. With more than one word before the slash both sides are complete
/// titles. `None` if there is no `/` or either side of it is empty.
pub fn split_gender(label: &str) -> Option<GenderSplit> {
    let (before, after) = label.split_once('/')?;
    let extra_slashes = after.contains('/');
    let before = before.trim_end();
    let after = after.trim_start();
    let (head, suffix) = match after.split_once(char::is_whitespace) {
        Some((h, s)) => (h, s.trim()),
        None => (after, ""),
    };
    if before.is_empty() || head.is_empty() {
        return None;
    }
    let head_is_ending = head.starts_with('-') || head.chars().next().is_some_and(char::is_lowercase);
    if !head_is_ending && before.split_whitespace().nth(1).is_some() {
        // several words before the slash: two complete titles
        return Some(GenderSplit { male: normalize_ws(before), female: normalize_ws(after), extra_slashes });
    }
    let female_head = if head_is_ending {
        let mut joined = before.to_string();
        joined.push_str(head.trim_start_matches('-'));
        joined
    } else {
        head.to_string()
    };
    let with_suffix = |head: &str| {
        if suffix.is_empty() {
            normalize_ws(head)
        } else {
            normalize_ws(&[head, suffix].join(" "))
        }
    };
    Some(GenderSplit { male: with_suffix(before), female: with_suffix(&female_head), extra_slashes })
}

/// How a variant was derived. The declaration order is the output order
/// within one entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantOrigin {
    Original,
    Synonym,
    ParentheticalOuter,
    ParentheticalInner,
    MaleForm,
    FemaleForm,
}

impl VariantOrigin {
    pub const ALL: [VariantOrigin; 6] = [
        VariantOrigin::Original,
        VariantOrigin::Synonym,
        VariantOrigin::ParentheticalOuter,
        VariantOrigin::ParentheticalInner,
        VariantOrigin::MaleForm,
        VariantOrigin::FemaleForm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VariantOrigin::Original => "original",
            VariantOrigin::Synonym => "synonym",
            VariantOrigin::ParentheticalOuter => "parenthetical_outer",
            VariantOrigin::ParentheticalInner => "parenthetical_inner",
            VariantOrigin::MaleForm => "male_form",
            VariantOrigin::FemaleForm => "female_form",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelVariant {
    pub entry_id: String,
    pub surface: String,
    pub origin: VariantOrigin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpansionWarning {
    UnbalancedParenthesis { entry_id: String },
    MultipleSlashes { entry_id: String },
}

impl core::fmt::Display for ExpansionWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ExpansionWarning::UnbalancedParenthesis { entry_id } => {
                write!(f, "{entry_id}: unbalanced parenthesis, brackets stripped from inner part")
            }
            ExpansionWarning::MultipleSlashes { entry_id } => {
                write!(f, "{entry_id}: more than one '/', gender split at the first")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expansion {
    pub variants: Vec<LabelVariant>,
    pub warnings: Vec<ExpansionWarning>,
}

impl Expansion {
    pub fn count_by_origin(&self) -> BTreeMap<VariantOrigin, usize> {
        let mut counts = BTreeMap::new();
        for v in &self.variants {
            *counts.entry(v.origin).or_insert(0) += 1;
        }
        counts
    }
}

/// Expands every entry of an already preparation-filtered gazetteer.
pub fn expand_all(gazetteer: &Gazetteer, lexicon: &SynonymLexicon) -> Vec<LabelVariant> {
    expand(gazetteer, lexicon).variants
}

/// [`expand_all`] plus the warnings raised on odd labels.
pub fn expand(gazetteer: &Gazetteer, lexicon: &SynonymLexicon) -> Expansion {
    let mut out = Expansion::default();
    for entry in gazetteer.entries() {
        let label = entry.label.as_str();
        let mut found: Vec<(VariantOrigin, String)> = Vec::new();
        found.push((VariantOrigin::Original, normalize_ws(label)));
        for s in inject_synonyms(label, lexicon) {
            found.push((VariantOrigin::Synonym, s));
        }

        let paren = split_parenthetical(label);
        if let Some(p) = &paren {
            if !p.balanced {
                out.warnings.push(ExpansionWarning::UnbalancedParenthesis { entry_id: entry.id.clone() });
            }
            found.push((VariantOrigin::ParentheticalOuter, p.outer.clone()));
            found.push((VariantOrigin::ParentheticalInner, p.inner.clone()));
        }

        let mut genders: Vec<GenderSplit> = Vec::new();
        if let Some(g) = split_gender(label) {
            if g.extra_slashes {
                out.warnings.push(ExpansionWarning::MultipleSlashes { entry_id: entry.id.clone() });
            }
            genders.push(g);
        }
        if let Some(g) = paren.as_ref().and_then(|p| split_gender(&p.outer)) {
            genders.push(g);
        }
        for g in &genders {
            found.push((VariantOrigin::MaleForm, g.male.clone()));
        }
        for g in genders {
            found.push((VariantOrigin::FemaleForm, g.female));
        }

        // `found` is built in origin order; the stable sort only guards it.
        found.sort_by_key(|(origin, _)| *origin);
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for (origin, surface) in found {
            if surface.is_empty() || !seen.insert(surface.clone()) {
                continue;
            }
            out.variants.push(LabelVariant { entry_id: entry.id.clone(), surface, origin });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gazetteer::DatasetKind;
    use alloc::vec;

    fn realschule_group() -> SynonymLexicon {
        SynonymLexicon::from_groups([[
            "Realschulabschluss",
            "mittlerer Schulabschluss",
            "Fachoberschulreife",
            "Sekundarabschluss I",
            "mittlere Reife",
        ]])
        .unwrap()
    }

    #[test]
    fn parenthetical_examples() {
        let p = split_parenthetical("allgemeine Hochschulreife (Gymnasium)").unwrap();
        assert_eq!((p.outer.as_str(), p.inner.as_str(), p.balanced), ("allgemeine Hochschulreife", "Gymnasium", true));
        let p = split_parenthetical("X (Y)").unwrap();
        assert_eq!((p.outer.as_str(), p.inner.as_str()), ("X", "Y"));
        let p = split_parenthetical("Fachpraktiker für Näherei (§66 BBiG)").unwrap();
        assert_eq!((p.outer.as_str(), p.inner.as_str()), ("Fachpraktiker für Näherei", "§66 BBiG"));
        assert!(split_parenthetical("no brackets").is_none());
    }

    #[test]
    fn parenthetical_unbalanced_is_flagged() {
        let p = split_parenthetical("Kurs (Teil 1").unwrap();
        assert_eq!(p.inner, "Teil 1");
        assert!(!p.balanced);
        let p = split_parenthetical("Kurs (a) b)").unwrap();
        assert_eq!(p.inner, "a b");
        assert!(!p.balanced);
    }

    #[test]
    fn gender_examples() {
        let g = split_gender("Produktionstechnologe/Produktionstechnologin").unwrap();
        assert_eq!((g.male.as_str(), g.female.as_str()), ("Produktionstechnologe", "Produktionstechnologin"));
        let g = split_gender("Fachpraktiker/Fachpraktikerin für Näherei und Schneiderei").unwrap();
        assert_eq!(g.male, "Fachpraktiker für Näherei und Schneiderei");
        assert_eq!(g.female, "Fachpraktikerin für Näherei und Schneiderei");
        let g = split_gender("A/B").unwrap();
        assert_eq!((g.male.as_str(), g.female.as_str(), g.extra_slashes), ("A", "B", false));
    }

    #[test]
    fn gender_edge_cases() {
        assert!(split_gender("kein Schrägstrich").is_none());
        assert!(split_gender("/B").is_none());
        assert!(split_gender("A/").is_none());
        let g = split_gender("a/b/c").unwrap();
        assert!(g.extra_slashes);
        assert_eq!(g.male, "a");
        let g = split_gender("Kaufmann im Einzelhandel/Kauffrau im Einzelhandel").unwrap();
        assert_eq!((g.male.as_str(), g.female.as_str()), ("Kaufmann im Einzelhandel", "Kauffrau im Einzelhandel"));
        let g = split_gender("Fachberater/in").unwrap();
        assert_eq!((g.male.as_str(), g.female.as_str()), ("Fachberater", "Fachberaterin"));
    }

    #[test]
    fn synonyms_emit_co_members() {
        let lex = realschule_group();
        assert_eq!(
            inject_synonyms("Realschulabschluss", &lex),
            ["mittlerer Schulabschluss", "Fachoberschulreife", "Sekundarabschluss I", "mittlere Reife"]
        );
        assert_eq!(
            inject_synonyms("Sekundarabschluss I (Realschule)", &lex),
            ["Realschulabschluss", "mittlerer Schulabschluss", "Fachoberschulreife", "mittlere Reife"]
        );
        assert!(inject_synonyms("Meisterprüfung", &lex).is_empty());
    }

    #[test]
    fn synonyms_need_whole_words() {
        let lex = SynonymLexicon::from_groups([["Abitur", "allgemeine Hochschulreife"]]).unwrap();
        assert!(inject_synonyms("Fachabitur", &lex).is_empty());
        assert_eq!(inject_synonyms("das  ABITUR!", &lex), ["allgemeine Hochschulreife"]);
        let lex = realschule_group();
        assert!(inject_synonyms("Sekundarabschluss II", &lex).is_empty());
    }

    #[test]
    fn lexicon_validation() {
        assert_eq!(SynonymLexicon::parse("a"), Err(LexiconError::GroupTooSmall { line: 1 }));
        assert_eq!(SynonymLexicon::parse("a||b"), Err(LexiconError::EmptyMember { line: 1 }));
        assert_eq!(
            SynonymLexicon::parse("a|b\n# note\nc|A"),
            Err(LexiconError::DuplicateTerm { line: 3, term: "A".into() })
        );
        let lex = SynonymLexicon::parse("a | b |\n\n c|d").unwrap();
        assert_eq!(lex.groups(), &[vec!["a".to_string(), "b".into()], vec!["c".to_string(), "d".into()]]);
    }

    #[test]
    fn expand_produktionstechnologe() {
        let g = Gazetteer::parse("B 27302-902|Produktionstechnologe/Produktionstechnologin|", DatasetKind::B).unwrap();
        let v = expand_all(&g, &SynonymLexicon::default());
        let got: Vec<(&str, VariantOrigin)> = v.iter().map(|v| (v.surface.as_str(), v.origin)).collect();
        assert_eq!(
            got,
            [
                ("Produktionstechnologe/Produktionstechnologin", VariantOrigin::Original),
                ("Produktionstechnologe", VariantOrigin::MaleForm),
                ("Produktionstechnologin", VariantOrigin::FemaleForm),
            ]
        );
    }

    #[test]
    fn expand_plain_label_is_single_variant() {
        let g = Gazetteer::parse("A 1|Hauptschulabschluss|", DatasetKind::A).unwrap();
        let v = expand_all(&g, &SynonymLexicon::default());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].origin, VariantOrigin::Original);
    }

    #[test]
    fn expand_composite_record() {
        let g = Gazetteer::parse(
            "B 28222-905|Fachpraktiker/Fachpraktikerin für Näherei und Schneiderei (§66 BBiG/§42r HwO)|",
            DatasetKind::B,
        )
        .unwrap();
        let e = expand(&g, &SynonymLexicon::default());
        let surfaces: Vec<&str> = e.variants.iter().map(|v| v.surface.as_str()).collect();
        assert!(surfaces.contains(&"Fachpraktiker/Fachpraktikerin für Näherei und Schneiderei"));
        assert!(surfaces.contains(&"Fachpraktiker für Näherei und Schneiderei"));
        assert!(surfaces.contains(&"Fachpraktikerin für Näherei und Schneiderei"));
        assert_eq!(e.warnings, [ExpansionWarning::MultipleSlashes { entry_id: "B 28222-905".into() }]);
    }

    #[test]
    fn expand_deduplicates_per_entry() {
        // the parenthetical inner repeats the synonym
        let lex = SynonymLexicon::from_groups([["Abitur", "allgemeine Hochschulreife"]]).unwrap();
        let g = Gazetteer::parse("A 1|Abitur (allgemeine Hochschulreife)|", DatasetKind::A).unwrap();
        let v = expand_all(&g, &lex);
        let got: Vec<(&str, VariantOrigin)> = v.iter().map(|v| (v.surface.as_str(), v.origin)).collect();
        assert_eq!(
            got,
            [
                ("Abitur (allgemeine Hochschulreife)", VariantOrigin::Original),
                ("allgemeine Hochschulreife", VariantOrigin::Synonym),
                ("Abitur", VariantOrigin::Synonym),
            ]
        );
    }
}
