use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::gazetteer::Gazetteer;
use crate::matcher::{extract, ExtractionResult, LexiconBuildError, LexiconMatcher, RuleError, RuleSet, RuleSpec};
use crate::synonyms::{expand, Expansion, SynonymLexicon};
use crate::text::Tokenizer;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Lexicon(#[from] LexiconBuildError),
    #[error(transparent)]
    Rules(#[from] RuleError),
}

/// Tokenizer, lexicon matcher and rule set built from one configuration.
#[derive(Debug, Clone)]
pub struct Engine {
    tokenizer: Tokenizer,
    lexicon: LexiconMatcher,
    rules: RuleSet,
    expansion: Expansion,
}

impl Engine {
    /// Drops preparation courses, expands the remaining labels and builds
    /// both matchers.
    pub fn build(
        tokenizer: Tokenizer,
        gazetteer: &Gazetteer,
        synonyms: &SynonymLexicon,
        rules: Vec<RuleSpec>,
    ) -> Result<Self, EngineError> {
        let expansion = expand(&gazetteer.filter_preparation(), synonyms);
        let lexicon = LexiconMatcher::build(&expansion.variants, &tokenizer)?;
        let rules = RuleSet::compile(rules, &tokenizer)?;
        Ok(Engine { tokenizer, lexicon, rules, expansion })
    }

    pub fn tokenizer(&self) -> &Tokenizer {
        &self.tokenizer
    }

    pub fn lexicon(&self) -> &LexiconMatcher {
        &self.lexicon
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn expansion(&self) -> &Expansion {
        &self.expansion
    }

    /// Full pipeline for one raw (HTML or plain text) document.
    pub fn extract(&self, doc_id: impl Into<String>, raw: &str) -> ExtractionResult {
        let doc = self.tokenizer.process(doc_id, raw);
        extract(&doc, &self.lexicon, &self.rules).expect("all parts share the engine tokenizer")
    }
}
