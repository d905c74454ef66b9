//! Declarative token-pattern rules.
//!
//! A rule is a sequence of token predicates, each with a quantifier. Rules
//! are evaluated inside one sentence at a time; at each start token the
//! longest match wins and the scan resumes after it, so hits of one rule
//! never overlap.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use regex_automata::meta::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Annotation, Category, Polarity, Source};
use crate::fold::fold;
use crate::text::{Token, TokenizedDocument, Tokenizer};

/// Longest gap a `zero_or_more` predicate may span.
pub const MAX_GAP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchOn {
    LowerExact,
    LowerInSet,
    Prefix,
    Regex,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    #[default]
    One,
    Optional,
    ZeroOrMore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PredicateValue {
    One(String),
    Set(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenPredicate {
    pub match_on: MatchOn,
    pub value: PredicateValue,
    #[serde(default)]
    pub quantifier: Quantifier,
    /// Upper bound for `zero_or_more`; required there, rejected elsewhere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_gap: Option<usize>,
}

impl TokenPredicate {
    pub fn exact(value: &str) -> Self {
        Self::new(MatchOn::LowerExact, PredicateValue::One(value.to_string()))
    }

    pub fn in_set<I: IntoIterator<Item = S>, S: Into<String>>(values: I) -> Self {
        Self::new(MatchOn::LowerInSet, PredicateValue::Set(values.into_iter().map(Into::into).collect()))
    }

    pub fn prefix(value: &str) -> Self {
        Self::new(MatchOn::Prefix, PredicateValue::One(value.to_string()))
    }

    pub fn regex(value: &str) -> Self {
        Self::new(MatchOn::Regex, PredicateValue::One(value.to_string()))
    }

    fn new(match_on: MatchOn, value: PredicateValue) -> Self {
        TokenPredicate { match_on, value, quantifier: Quantifier::One, max_gap: None }
    }

    pub fn optional(mut self) -> Self {
        self.quantifier = Quantifier::Optional;
        self
    }

    pub fn up_to(mut self, max_gap: usize) -> Self {
        self.quantifier = Quantifier::ZeroOrMore;
        self.max_gap = Some(max_gap);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub rule_id: String,
    pub category: Category,
    pub polarity: Polarity,
    pub pattern: Vec<TokenPredicate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_id: Option<String>,
    /// A negative hit of this rule suppresses its category in the whole
    /// document instead of only its sentence.
    #[serde(default, skip_serializing_if = "core::ops::Not::not")]
    pub document_scope: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("duplicate rule id {0:?}")]
    DuplicateRuleId(String),
    #[error("rule {0:?} has an empty pattern")]
    EmptyPattern(String),
    #[error("rule {0:?} can match zero tokens")]
    NullablePattern(String),
    #[error("rule {rule_id:?}: invalid regex {pattern:?}: {message}")]
    InvalidRegex { rule_id: String, pattern: String, message: String },
    #[error("rule {rule_id:?}, predicate {index}: {reason}")]
    InvalidPredicate { rule_id: String, index: usize, reason: &'static str },
}

#[derive(Debug, Clone)]
enum Test {
    Exact(String),
    InSet(BTreeSet<String>),
    Prefix(String),
    Regex(Regex),
}

impl Test {
    fn accepts(&self, token: &Token) -> bool {
        match self {
            Test::Exact(v) => token.lower == *v,
            Test::InSet(set) => set.contains(&token.lower),
            Test::Prefix(p) => token.lower.starts_with(p.as_str()),
            Test::Regex(re) => re.is_match(&token.lower),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Repeat {
    One,
    Optional,
    UpTo(usize),
}

#[derive(Debug, Clone)]
struct Step {
    test: Test,
    repeat: Repeat,
}

#[derive(Debug, Clone)]
struct CompiledRule {
    spec: RuleSpec,
    steps: Vec<Step>,
}

impl CompiledRule {
    /// Longest end of a match starting at `start`, tokens limited to
    /// `start..limit`.
    fn longest_at(&self, tokens: &[Token], start: usize, limit: usize) -> Option<usize> {
        let mut positions: BTreeSet<usize> = BTreeSet::new();
        positions.insert(start);
        for step in &self.steps {
            let mut next = BTreeSet::new();
            for &p in &positions {
                let accepts = |i: usize| i < limit && step.test.accepts(&tokens[i]);
                match step.repeat {
                    Repeat::One => {
                        if accepts(p) {
                            next.insert(p + 1);
                        }
                    }
                    Repeat::Optional => {
                        next.insert(p);
                        if accepts(p) {
                            next.insert(p + 1);
                        }
                    }
                    Repeat::UpTo(max) => {
                        next.insert(p);
                        let mut q = p;
                        while q - p < max && accepts(q) {
                            q += 1;
                            next.insert(q);
                        }
                    }
                }
            }
            if next.is_empty() {
                return None;
            }
            positions = next;
        }
        positions.last().copied().filter(|&end| end > start)
    }
}

fn compile_step(rule_id: &str, index: usize, p: &TokenPredicate) -> Result<Step, RuleError> {
    let invalid = |reason| RuleError::InvalidPredicate { rule_id: rule_id.to_string(), index, reason };
    let single = || match &p.value {
        PredicateValue::One(v) if !v.is_empty() => Ok(v.as_str()),
        PredicateValue::One(_) => Err(invalid("empty value")),
        PredicateValue::Set(_) => Err(invalid("expected a single string value")),
    };
    let test = match p.match_on {
        MatchOn::LowerExact => Test::Exact(fold(single()?)),
        MatchOn::Prefix => Test::Prefix(fold(single()?)),
        MatchOn::LowerInSet => match &p.value {
            PredicateValue::Set(values) if values.is_empty() => return Err(invalid("empty set")),
            PredicateValue::Set(values) => Test::InSet(values.iter().map(|v| fold(v)).collect()),
            PredicateValue::One(_) => return Err(invalid("lower_in_set expects a list of strings")),
        },
        MatchOn::Regex => {
            let pattern = single()?;
            let re = Regex::new(pattern).map_err(|e| RuleError::InvalidRegex {
                rule_id: rule_id.to_string(),
                pattern: pattern.to_string(),
                message: e.to_string(),
            })?;
            Test::Regex(re)
        }
    };
    let repeat = match (p.quantifier, p.max_gap) {
        (Quantifier::One, None) => Repeat::One,
        (Quantifier::Optional, None) => Repeat::Optional,
        (Quantifier::ZeroOrMore, Some(gap)) if (1..=MAX_GAP).contains(&gap) => Repeat::UpTo(gap),
        (Quantifier::ZeroOrMore, Some(_)) => return Err(invalid("max_gap must be between 1 and 5")),
        (Quantifier::ZeroOrMore, None) => return Err(invalid("zero_or_more needs max_gap")),
        (_, Some(_)) => return Err(invalid("max_gap is only allowed with zero_or_more")),
    };
    Ok(Step { test, repeat })
}

/// Compiled, immutable rule set.
#[derive(Debug, Clone)]
pub struct RuleSet {
    rules: Vec<CompiledRule>,
    fingerprint: u64,
}

impl RuleSet {
    pub fn compile(specs: Vec<RuleSpec>, tokenizer: &Tokenizer) -> Result<Self, RuleError> {
        let mut seen = BTreeSet::new();
        let mut rules = Vec::with_capacity(specs.len());
        for spec in specs {
            if !seen.insert(spec.rule_id.clone()) {
                return Err(RuleError::DuplicateRuleId(spec.rule_id));
            }
            if spec.pattern.is_empty() {
                return Err(RuleError::EmptyPattern(spec.rule_id));
            }
            let steps = spec
                .pattern
                .iter()
                .enumerate()
                .map(|(i, p)| compile_step(&spec.rule_id, i, p))
                .collect::<Result<Vec<_>, _>>()?;
            if steps.iter().all(|s| !matches!(s.repeat, Repeat::One)) {
                return Err(RuleError::NullablePattern(spec.rule_id));
            }
            rules.push(CompiledRule { spec, steps });
        }
        Ok(RuleSet { rules, fingerprint: tokenizer.fingerprint() })
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn specs(&self) -> impl Iterator<Item = &RuleSpec> {
        self.rules.iter().map(|r| &r.spec)
    }

    /// Runs every rule over every sentence.
    pub fn match_rules(&self, doc: &TokenizedDocument) -> Vec<Annotation> {
        let mut out = Vec::new();
        for sentence in 0..doc.sentences.len() {
            let range = doc.sentence_tokens(sentence);
            for rule in &self.rules {
                let mut i = range.start;
                while i < range.end {
                    match rule.longest_at(&doc.tokens, i, range.end) {
                        Some(end) => {
                            let spec = &rule.spec;
                            let ids = spec.canonical_id.iter().cloned().collect();
                            let mut a =
                                Annotation::from_tokens(doc, spec.category, spec.polarity, ids, i, end, Source::Rule);
                            a.rule_id = Some(spec.rule_id.clone());
                            a.document_scope = spec.document_scope;
                            out.push(a);
                            i = end;
                        }
                        None => i += 1,
                    }
                }
            }
        }
        out.sort_by_key(|a| (a.sentence_index, a.token_span.0));
        out
    }
}
