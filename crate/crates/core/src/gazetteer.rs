//! Taxonomy datasets in the pipe-delimited record format
//! `<id>|<label>|`, one record per line.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Labels containing this marker (case-insensitively) name a preparation
/// course rather than a qualification.
pub const PREPARATION_MARKER: &str = "vorbereitung";

/// The four taxonomy sections an entry can come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DatasetKind {
    /// School and higher-education degrees.
    A,
    /// Occupations.
    B,
    /// Continuing professional development.
    C,
    /// Skills.
    K,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 4] = [DatasetKind::A, DatasetKind::B, DatasetKind::C, DatasetKind::K];

    pub fn letter(self) -> char {
        match self {
            DatasetKind::A => 'A',
            DatasetKind::B => 'B',
            DatasetKind::C => 'C',
            DatasetKind::K => 'K',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'A' => Some(DatasetKind::A),
            'B' => Some(DatasetKind::B),
            'C' => Some(DatasetKind::C),
            'K' => Some(DatasetKind::K),
            _ => None,
        }
    }

    /// Reads the dataset from an id such as `"B 27302-902"`.
    pub fn from_id(id: &str) -> Option<Self> {
        let mut chars = id.chars();
        let kind = Self::from_letter(chars.next()?)?;
        (chars.next()? == ' ').then_some(kind)
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl core::str::FromStr for DatasetKind {
    type Err = GazetteerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Self::from_letter(c.to_ascii_uppercase()),
            _ => None,
        }
        .ok_or_else(|| GazetteerError::UnknownDataset(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    pub id: String,
    pub label: String,
    pub dataset: DatasetKind,
    pub is_preparation: bool,
}

impl GazetteerEntry {
    /// Builds an entry, deriving `is_preparation` from the label.
    pub fn new(id: impl Into<String>, label: impl Into<String>, dataset: DatasetKind) -> Self {
        let label = label.into();
        let is_preparation = is_preparation_label(&label);
        GazetteerEntry { id: id.into(), label, dataset, is_preparation }
    }
}

pub fn is_preparation_label(label: &str) -> bool {
    crate::fold::fold(label).contains(PREPARATION_MARKER)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GazetteerError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: &'static str },
    #[error("line {line}: id {id:?} does not belong to dataset {dataset}")]
    WrongDataset { line: usize, id: String, dataset: DatasetKind },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("unknown dataset {0:?} (expected one of A, B, C, K)")]
    UnknownDataset(String),
}

/// An immutable, id-indexed list of taxonomy entries. Line order is kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gazetteer {
    entries: Vec<GazetteerEntry>,
    by_id: BTreeMap<String, usize>,
}

impl Gazetteer {
    /// Parses the contents of one dataset file.
    ///
    /// Blank lines are skipped; every other line must be `<id>|<label>` with
    /// an optional trailing `|`. Line numbers in errors are 1-based.
    pub fn parse(input: &str, dataset: DatasetKind) -> Result<Self, GazetteerError> {
        let input = input.strip_prefix('\u{feff}').unwrap_or(input);
        let mut entries = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let (id, rest) = raw
                .split_once('|')
                .ok_or(GazetteerError::Parse { line, reason: "missing '|' separator" })?;
            let id = id.trim();
            if id.is_empty() {
                return Err(GazetteerError::Parse { line, reason: "empty id" });
            }
            let label = rest.split('|').next().unwrap_or_default().trim();
            if label.is_empty() {
                return Err(GazetteerError::Parse { line, reason: "empty label" });
            }
            if DatasetKind::from_id(id) != Some(dataset) {
                return Err(GazetteerError::WrongDataset { line, id: id.to_string(), dataset });
            }
            entries.push(GazetteerEntry::new(id, label, dataset));
        }
        Self::from_entries(entries)
    }

    pub fn from_entries(entries: Vec<GazetteerEntry>) -> Result<Self, GazetteerError> {
        let mut by_id = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            if by_id.insert(e.id.clone(), i).is_some() {
                return Err(GazetteerError::DuplicateId(e.id.clone()));
            }
        }
        Ok(Gazetteer { entries, by_id })
    }

    /// Appends the entries of `other`, keeping both orders.
    pub fn merge(mut self, other: Gazetteer) -> Result<Self, GazetteerError> {
        self.entries.extend(other.entries);
        Self::from_entries(self.entries)
    }

    /// Copy without preparation courses.
    pub fn filter_preparation(&self) -> Gazetteer {
        let kept = self.entries.iter().filter(|e| !e.is_preparation).cloned().collect();
        Self::from_entries(kept).expect("subset of unique ids is unique")
    }

    pub fn entries(&self) -> &[GazetteerEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&GazetteerEntry> {
        self.by_id.get(id).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, dataset: DatasetKind) -> usize {
        self.entries.iter().filter(|e| e.dataset == dataset).count()
    }

    pub fn preparation_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_preparation).count()
    }

    /// Renders the entries back into the record format.
    pub fn to_pipe_format(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.id);
            out.push('|');
            out.push_str(&e.label);
            out.push_str("|\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_record_with_trailing_pipe() {
        let g = Gazetteer::parse("B 27302-902|Produktionstechnologe/Produktionstechnologin|\n", DatasetKind::B).unwrap();
        assert_eq!(
            g.entries(),
            &[GazetteerEntry {
                id: "B 27302-902".into(),
                label: "Produktionstechnologe/Produktionstechnologin".into(),
                dataset: DatasetKind::B,
                is_preparation: false,
            }]
        );
        assert!(g.get("B 27302-902").is_some());
    }

    #[test]
    fn empty_input_is_empty_gazetteer() {
        assert!(Gazetteer::parse("", DatasetKind::A).unwrap().is_empty());
        assert!(Gazetteer::parse("\n  \n", DatasetKind::A).unwrap().is_empty());
    }

    #[test]
    fn preparation_marker_is_case_insensitive() {
        let g = Gazetteer::parse(
            "A 9.99|Vorbereitung auf den Hauptschulabschluss|\nA 9.98|Kurs zur VORBEREITUNG|\nA 1|Abitur",
            DatasetKind::A,
        )
        .unwrap();
        let flags: Vec<bool> = g.entries().iter().map(|e| e.is_preparation).collect();
        assert_eq!(flags, [true, true, false]);
    }

    #[test]
    fn trailing_pipe_is_optional() {
        let g = Gazetteer::parse("A 1|Abitur\r\nA 2|Fachabitur|", DatasetKind::A).unwrap();
        assert_eq!(g.entries()[0].label, "Abitur");
        assert_eq!(g.entries()[1].label, "Fachabitur");
    }

    #[test]
    fn malformed_lines_carry_line_numbers() {
        assert_eq!(
            Gazetteer::parse("A 1|x|\n\nA 2 no pipe", DatasetKind::A),
            Err(GazetteerError::Parse { line: 3, reason: "missing '|' separator" })
        );
        assert_eq!(
            Gazetteer::parse(" |x|", DatasetKind::A),
            Err(GazetteerError::Parse { line: 1, reason: "empty id" })
        );
        assert_eq!(
            Gazetteer::parse("A 1| |", DatasetKind::A),
            Err(GazetteerError::Parse { line: 1, reason: "empty label" })
        );
    }

    #[test]
    fn id_prefix_must_match_dataset() {
        let err = Gazetteer::parse("B 1|Koch|", DatasetKind::A).unwrap_err();
        assert!(matches!(err, GazetteerError::WrongDataset { line: 1, .. }));
        assert!(Gazetteer::parse("A1|x|", DatasetKind::A).is_err());
    }

    #[test]
    fn duplicate_id_is_rejected() {
        assert_eq!(
            Gazetteer::parse("K 1|a|\nK 1|b|", DatasetKind::K),
            Err(GazetteerError::DuplicateId("K 1".into()))
        );
    }

    #[test]
    fn filter_drops_only_flagged() {
        let g = Gazetteer::parse("A 1|Abitur|\nA 2|Vorbereitung Abitur|\nA 3|Fachabitur|", DatasetKind::A).unwrap();
        let f = g.filter_preparation();
        let ids: Vec<&str> = f.entries().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["A 1", "A 3"]);
        assert_eq!(g.len(), 3);
        assert!(f.get("A 2").is_none());
    }

    #[test]
    fn filter_without_flags_is_identity() {
        let g = Gazetteer::parse("A 1|Abitur|\nA 3|Fachabitur|", DatasetKind::A).unwrap();
        assert_eq!(g.filter_preparation(), g);
    }

    #[test]
    fn dataset_parsing() {
        assert_eq!("k".parse::<DatasetKind>().unwrap(), DatasetKind::K);
        assert!("AB".parse::<DatasetKind>().is_err());
        assert_eq!(DatasetKind::from_id("C 12"), Some(DatasetKind::C));
        assert_eq!(DatasetKind::from_id("C12"), None);
    }
}
