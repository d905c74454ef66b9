//! Lexicon and rule matching, and polarity resolution.

mod lexicon;
mod rules;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gazetteer::DatasetKind;
use crate::text::TokenizedDocument;

pub use lexicon::{LexiconBuildError, LexiconMatch, LexiconMatcher};
pub use rules::{MatchOn, PredicateValue, Quantifier, RuleError, RuleSet, RuleSpec, TokenPredicate, MAX_GAP};

/// Taxonomy id every German-language requirement maps to.
pub const LANGUAGE_REQUIREMENT_ID: &str = "A 8.11";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    /// School and education degree.
    #[serde(rename = "ED")]
    Ed,
    /// Professional experience.
    #[serde(rename = "PE")]
    Pe,
    /// Prior apprenticeship or vocational training.
    #[serde(rename = "PA")]
    Pa,
    #[serde(rename = "SKILL")]
    Skill,
    /// Occupation.
    #[serde(rename = "OCC")]
    Occ,
    /// Continuing professional development.
    #[serde(rename = "CPD")]
    Cpd,
    /// German-language requirement.
    #[serde(rename = "LANG")]
    Lang,
}

impl Category {
    pub const ALL: [Category; 7] =
        [Category::Ed, Category::Pe, Category::Pa, Category::Skill, Category::Occ, Category::Cpd, Category::Lang];

    pub fn from_dataset(dataset: DatasetKind) -> Self {
        match dataset {
            DatasetKind::A => Category::Ed,
            DatasetKind::B => Category::Occ,
            DatasetKind::C => Category::Cpd,
            DatasetKind::K => Category::Skill,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Ed => "ED",
            Category::Pe => "PE",
            Category::Pa => "PA",
            Category::Skill => "SKILL",
            Category::Occ => "OCC",
            Category::Cpd => "CPD",
            Category::Lang => "LANG",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Lexicon,
    Rule,
}

/// A matched span. `token_span` is a half-open token index range,
/// `char_span` the same region in Unicode scalar offsets into the
/// document text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub doc_id: String,
    pub category: Category,
    pub polarity: Polarity,
    pub canonical_ids: Vec<String>,
    pub token_span: (usize, usize),
    pub char_span: (usize, usize),
    pub sentence_index: usize,
    pub source: Source,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_id: Option<String>,
    #[serde(default, skip_serializing_if = "core::ops::Not::not")]
    pub document_scope: bool,
}

impl Annotation {
    /// Annotation over tokens `start..end` of `doc`; `end > start`.
    pub fn from_tokens(
        doc: &TokenizedDocument,
        category: Category,
        polarity: Polarity,
        canonical_ids: Vec<String>,
        start: usize,
        end: usize,
        source: Source,
    ) -> Self {
        let byte_start = doc.tokens[start].start;
        let byte_end = doc.tokens[end - 1].end;
        let char_start = doc.char_offset(byte_start);
        let char_end = char_start + doc.text[byte_start..byte_end].chars().count();
        Annotation {
            doc_id: doc.doc_id.clone(),
            category,
            polarity,
            canonical_ids,
            token_span: (start, end),
            char_span: (char_start, char_end),
            sentence_index: doc.tokens[start].sentence_index,
            source,
            text: String::from(&doc.text[byte_start..byte_end]),
            rule_id: None,
            document_scope: false,
        }
    }

    fn overlaps(&self, other: &Annotation) -> bool {
        self.token_span.0 < other.token_span.1 && other.token_span.0 < self.token_span.1
    }
}

/// Drops every positive that shares its category and sentence with a
/// negative, every positive whose category has a document-scoped negative,
/// and all negatives. Output is ordered by sentence, then token start.
pub fn resolve_polarity(raw: &[Annotation]) -> Vec<Annotation> {
    let negatives = raw.iter().filter(|a| a.polarity == Polarity::Negative);
    let document_wide: BTreeSet<Category> = negatives.clone().filter(|a| a.document_scope).map(|a| a.category).collect();
    let in_sentence: BTreeSet<(Category, usize)> = negatives.map(|a| (a.category, a.sentence_index)).collect();
    let mut out: Vec<Annotation> = raw
        .iter()
        .filter(|a| a.polarity == Polarity::Positive)
        .filter(|a| !document_wide.contains(&a.category) && !in_sentence.contains(&(a.category, a.sentence_index)))
        .cloned()
        .collect();
    out.sort_by_key(|a| (a.sentence_index, a.token_span.0));
    out
}

/// Points every language annotation at [`LANGUAGE_REQUIREMENT_ID`].
pub fn map_language_requirements(raw: Vec<Annotation>) -> Vec<Annotation> {
    raw.into_iter()
        .map(|mut a| {
            if a.category == Category::Lang {
                a.canonical_ids = alloc::vec![String::from(LANGUAGE_REQUIREMENT_ID)];
            }
            a
        })
        .collect()
}

/// Collapses resolved positives to one annotation per requirement:
/// a rule hit without ids is dropped when it overlaps an id-bearing
/// annotation of the same category in its sentence, and later repeats of
/// the same (category, ids) pair in the document are dropped.
pub fn merge_duplicates(resolved: Vec<Annotation>) -> Vec<Annotation> {
    let subsumed: Vec<bool> = resolved
        .iter()
        .map(|a| {
            a.canonical_ids.is_empty()
                && resolved.iter().any(|b| {
                    !b.canonical_ids.is_empty()
                        && b.category == a.category
                        && b.sentence_index == a.sentence_index
                        && b.overlaps(a)
                })
        })
        .collect();
    let mut seen: BTreeSet<(Category, Vec<String>)> = BTreeSet::new();
    resolved
        .into_iter()
        .zip(subsumed)
        .filter(|(_, s)| !s)
        .map(|(a, _)| a)
        .filter(|a| seen.insert((a.category, a.canonical_ids.clone())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub doc_id: String,
    pub raw_annotations: Vec<Annotation>,
    pub requirements: Vec<Annotation>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("document {doc_id:?} was tokenized with configuration {document:016x}, the {component} was built with {built:016x}")]
    TokenizerMismatch { doc_id: String, component: &'static str, document: u64, built: u64 },
}

/// Runs both matchers over a document and resolves the hits into
/// requirements.
pub fn extract(
    doc: &TokenizedDocument,
    lexicon: &LexiconMatcher,
    rules: &RuleSet,
) -> Result<ExtractionResult, ExtractError> {
    for (component, built) in [("lexicon matcher", lexicon.fingerprint()), ("rule set", rules.fingerprint())] {
        if built != doc.fingerprint {
            return Err(ExtractError::TokenizerMismatch {
                doc_id: doc.doc_id.clone(),
                component,
                document: doc.fingerprint,
                built,
            });
        }
    }
    let mut raw = lexicon.match_lexicon(doc);
    raw.extend(rules.match_rules(doc));
    raw.sort_by_key(|a| (a.sentence_index, a.token_span.0));
    let requirements = merge_duplicates(resolve_polarity(&map_language_requirements(raw.clone())));
    Ok(ExtractionResult { doc_id: doc.doc_id.clone(), raw_annotations: raw, requirements })
}
