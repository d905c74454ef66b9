//! Rule-based detection of access requirements in German training
//! advertisements.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here works on
//! in-memory strings; reading files, parsing JSON and the command line live
//! in the `zugang` companion crate.
//!
//! The pipeline:
//!
//! 1. [`gazetteer`] parses the pipe-delimited taxonomy files (datasets A, B,
//!    C and K) and drops preparation courses.
//! 2. [`synonyms`] expands every label into surface variants (degree
//!    synonyms, parenthetical halves, male and female titles).
//! 3. [`text`] extracts paragraph text from HTML, splits sentences and
//!    tokenizes German prose.
//! 4. [`matcher`] runs the token-level lexicon automaton and the token
//!    pattern rules, then resolves polarity: a negative hit removes the
//!    positives of its category.
//! 5. [`eval`] scores extraction output against gold labels.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod engine;
pub mod eval;
pub mod gazetteer;
pub mod matcher;
pub mod synonyms;
pub mod text;

mod fold;

pub use engine::{Engine, EngineError};
pub use eval::{Counts, EvalError, EvalReport, GoldDocument, GoldLabel, Metrics, Ratio};
pub use gazetteer::{DatasetKind, Gazetteer, GazetteerEntry, GazetteerError};
pub use matcher::{
    Annotation, Category, ExtractError, ExtractionResult, LexiconMatcher, Polarity, RuleError,
    RuleSet, RuleSpec, Source, TokenPredicate,
};
pub use synonyms::{LabelVariant, LexiconError, SynonymLexicon, VariantOrigin};
pub use text::{Token, TokenizedDocument, Tokenizer};
