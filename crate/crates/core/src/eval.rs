//! Precision, recall and F1 of extraction output against gold labels.
//!
//! Matching is label-level per document: a predicted requirement is a true
//! positive if an unmatched gold label of the same category exists whose
//! id agrees with it (when either side has no id, the category alone
//! decides). Each gold label is used at most once, greedily in document
//! order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matcher::{Category, ExtractionResult};

/// One gold requirement of a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldLabel {
    pub doc_id: String,
    pub category: Category,
    pub canonical_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelFact {
    pub category: Category,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_id: Option<String>,
}

/// A judged document; an empty label list means "no requirements".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldDocument {
    pub doc_id: String,
    pub labels: Vec<LabelFact>,
}

impl GoldDocument {
    pub fn gold_labels(&self) -> impl Iterator<Item = GoldLabel> + '_ {
        self.labels.iter().map(|l| GoldLabel {
            doc_id: self.doc_id.clone(),
            category: l.category,
            canonical_id: l.canonical_id.clone(),
        })
    }
}

/// What evaluation needs from one predicted requirement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedRequirement {
    pub category: Category,
    #[serde(default)]
    pub canonical_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedDocument {
    pub doc_id: String,
    pub requirements: Vec<PredictedRequirement>,
}

impl From<&ExtractionResult> for PredictedDocument {
    fn from(r: &ExtractionResult) -> Self {
        PredictedDocument {
            doc_id: r.doc_id.clone(),
            requirements: r
                .requirements
                .iter()
                .map(|a| PredictedRequirement { category: a.category, canonical_ids: a.canonical_ids.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("no prediction record for gold documents: {}", .0.join(", "))]
    MissingPredictions(Vec<String>),
    #[error("document {0:?} appears twice in the gold data")]
    DuplicateGold(String),
    #[error("document {0:?} appears twice in the predictions")]
    DuplicatePrediction(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl core::ops::AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        self.tp += rhs.tp;
        self.fp += rhs.fp;
        self.fn_ += rhs.fn_;
    }
}

/// A ratio in `[0, 1]`. `degenerate` marks a zero denominator, in which
/// case `value` is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub value: f64,
    pub degenerate: bool,
}

impl Ratio {
    fn of(num: usize, den: usize) -> Self {
        if den == 0 {
            Ratio { value: 0.0, degenerate: true }
        } else {
            Ratio { value: num as f64 / den as f64, degenerate: false }
        }
    }
}

pub fn precision(tp: usize, fp: usize) -> Ratio {
    Ratio::of(tp, tp + fp)
}

pub fn recall(tp: usize, fn_: usize) -> Ratio {
    Ratio::of(tp, tp + fn_)
}

/// Harmonic mean `2PR / (P + R)`.
pub fn f1(precision: f64, recall: f64) -> Ratio {
    let sum = precision + recall;
    if sum > 0.0 {
        Ratio { value: 2.0 * precision * recall / sum, degenerate: false }
    } else {
        Ratio { value: 0.0, degenerate: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    #[serde(flatten)]
    pub counts: Counts,
    pub precision: Ratio,
    pub recall: Ratio,
    pub f1: Ratio,
}

impl From<Counts> for Metrics {
    fn from(counts: Counts) -> Self {
        let p = precision(counts.tp, counts.fp);
        let r = recall(counts.tp, counts.fn_);
        Metrics { counts, precision: p, recall: r, f1: f1(p.value, r.value) }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Comparison {
    pub per_category: BTreeMap<Category, Counts>,
    pub documents: usize,
    /// Predicted documents without a gold record; they are not scored.
    pub unjudged: Vec<String>,
}

impl Comparison {
    pub fn total(&self) -> Counts {
        let mut total = Counts::default();
        for c in self.per_category.values() {
            total += *c;
        }
        total
    }
}

fn id_agrees(gold: &Option<String>, predicted: &[String]) -> bool {
    match gold {
        None => true,
        Some(_) if predicted.is_empty() => true,
        Some(id) => predicted.contains(id),
    }
}

/// Counts true positives, false positives and false negatives per category.
pub fn compare(predicted: &[PredictedDocument], gold: &[GoldDocument]) -> Result<Comparison, EvalError> {
    let mut by_id: BTreeMap<&str, &PredictedDocument> = BTreeMap::new();
    for p in predicted {
        if by_id.insert(p.doc_id.as_str(), p).is_some() {
            return Err(EvalError::DuplicatePrediction(p.doc_id.clone()));
        }
    }
    let mut gold_ids = BTreeSet::new();
    for g in gold {
        if !gold_ids.insert(g.doc_id.as_str()) {
            return Err(EvalError::DuplicateGold(g.doc_id.clone()));
        }
    }
    let missing: Vec<String> = gold.iter().filter(|g| !by_id.contains_key(g.doc_id.as_str())).map(|g| g.doc_id.clone()).collect();
    if !missing.is_empty() {
        return Err(EvalError::MissingPredictions(missing));
    }

    let mut out = Comparison::default();
    for c in Category::ALL {
        out.per_category.insert(c, Counts::default());
    }
    for g in gold {
        let pred = by_id[g.doc_id.as_str()];
        let mut used = alloc::vec![false; g.labels.len()];
        for req in &pred.requirements {
            let candidates = || {
                g.labels.iter().enumerate().filter(|&(i, l)| !used[i] && l.category == req.category)
            };
            let exact = candidates().find(|(_, l)| l.canonical_id.as_ref().is_some_and(|id| req.canonical_ids.contains(id)));
            let hit = exact.or_else(|| candidates().find(|(_, l)| id_agrees(&l.canonical_id, &req.canonical_ids)));
            let counts = out.per_category.get_mut(&req.category).expect("all categories present");
            match hit {
                Some((i, _)) => {
                    used[i] = true;
                    counts.tp += 1;
                }
                None => counts.fp += 1,
            }
        }
        for (label, _) in g.labels.iter().zip(&used).filter(|(_, u)| !**u) {
            out.per_category.get_mut(&label.category).expect("all categories present").fn_ += 1;
        }
    }
    out.documents = gold.len();
    out.unjudged = predicted.iter().filter(|p| !gold_ids.contains(p.doc_id.as_str())).map(|p| p.doc_id.clone()).collect();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset_name: String,
    pub documents: usize,
    pub unjudged_documents: usize,
    pub per_category: BTreeMap<Category, Metrics>,
    pub overall: Metrics,
}

impl EvalReport {
    pub fn from_comparison(dataset_name: impl Into<String>, cmp: &Comparison) -> Self {
        EvalReport {
            dataset_name: dataset_name.into(),
            documents: cmp.documents,
            unjudged_documents: cmp.unjudged.len(),
            per_category: cmp.per_category.iter().map(|(&c, &counts)| (c, Metrics::from(counts))).collect(),
            overall: Metrics::from(cmp.total()),
        }
    }
}

/// One report per named dataset.
pub fn report<'a, I>(datasets: I) -> Result<Vec<EvalReport>, EvalError>
where
    I: IntoIterator<Item = (&'a str, &'a [PredictedDocument], &'a [GoldDocument])>,
{
    datasets
        .into_iter()
        .map(|(name, predicted, gold)| Ok(EvalReport::from_comparison(name, &compare(predicted, gold)?)))
        .collect()
}

fn cell(r: &Ratio) -> String {
    let mut s = String::new();
    if r.degenerate {
        s.push_str("   -");
    } else {
        let _ = write!(s, "{:.2}", r.value);
    }
    s
}

/// Renders the summary table (one row per dataset) followed by a
/// per-category breakdown with raw counts for each dataset.
pub fn render_table(reports: &[EvalReport]) -> String {
    let width = reports.iter().map(|r| r.dataset_name.chars().count()).max().unwrap_or(0).max(8);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$} | Precision | Recall | F1-score", "Data set");
    let _ = writeln!(out, "{:-<width$}-+-----------+--------+---------", "");
    for r in reports {
        let _ = writeln!(
            out,
            "{:<width$} | {:>9} | {:>6} | {:>8}",
            r.dataset_name,
            cell(&r.overall.precision),
            cell(&r.overall.recall),
            cell(&r.overall.f1)
        );
    }
    for r in reports {
        let _ = writeln!(out);
        let _ = writeln!(out, "{} ({} documents)", r.dataset_name, r.documents);
        let _ = writeln!(out, "{:<8} | {:>4} | {:>4} | {:>4} | Precision | Recall | F1-score", "Category", "TP", "FP", "FN");
        let rows = r.per_category.iter().map(|(c, m)| (c.as_str(), m)).chain(core::iter::once(("overall", &r.overall)));
        for (name, m) in rows {
            let _ = writeln!(
                out,
                "{:<8} | {:>4} | {:>4} | {:>4} | {:>9} | {:>6} | {:>8}",
                name,
                m.counts.tp,
                m.counts.fp,
                m.counts.fn_,
                cell(&m.precision),
                cell(&m.recall),
                cell(&m.f1)
            );
        }
    }
    out
}
