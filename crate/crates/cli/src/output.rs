//! Records written by `extract`.

use serde::{Deserialize, Serialize};
use zugang_core::{Annotation, Category, ExtractionResult, Polarity};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementRecord {
    pub category: Category,
    pub polarity: Polarity,
    pub canonical_ids: Vec<String>,
    pub text: String,
    pub char_span: (usize, usize),
    pub sentence: usize,
}

impl From<&Annotation> for RequirementRecord {
    fn from(a: &Annotation) -> Self {
        RequirementRecord {
            category: a.category,
            polarity: a.polarity,
            canonical_ids: a.canonical_ids.clone(),
            text: a.text.clone(),
            char_span: a.char_span,
            sentence: a.sentence_index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub doc_id: String,
    pub requirements: Vec<RequirementRecord>,
    /// Every lexicon and rule hit before polarity resolution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_annotations: Option<Vec<Annotation>>,
}

impl DocumentRecord {
    pub fn new(result: ExtractionResult, with_raw: bool) -> Self {
        DocumentRecord {
            requirements: result.requirements.iter().map(RequirementRecord::from).collect(),
            raw_annotations: with_raw.then_some(result.raw_annotations),
            doc_id: result.doc_id,
        }
    }
}

/// Written to stderr for input records that could not be processed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub line: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doc_id: Option<String>,
    pub error: String,
}
