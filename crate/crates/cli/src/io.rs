//! Loading resources and JSON Lines files from disk.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use zugang_core::{DatasetKind, Engine, Gazetteer, GoldDocument, RuleSpec, SynonymLexicon, Tokenizer};
use zugang_core::eval::PredictedDocument;

use crate::config::EngineConfig;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Without a list the tokenizer knows no abbreviations.
pub fn load_tokenizer(path: Option<&Path>) -> Result<Tokenizer> {
    Ok(match path {
        Some(p) => Tokenizer::from_list(&read(p)?),
        None => Tokenizer::default(),
    })
}

/// Parses every configured dataset file and merges them.
pub fn load_gazetteer(cfg: &EngineConfig) -> Result<Gazetteer> {
    let mut merged = Gazetteer::default();
    for (key, path) in &cfg.gazetteer {
        let dataset: DatasetKind = key.parse().context("in [gazetteer] of the config")?;
        let parsed = Gazetteer::parse(&read(path)?, dataset).with_context(|| format!("in {}", path.display()))?;
        merged = merged.merge(parsed).with_context(|| format!("merging {}", path.display()))?;
    }
    Ok(merged)
}

pub fn load_synonyms(path: Option<&Path>) -> Result<SynonymLexicon> {
    match path {
        Some(p) => SynonymLexicon::parse(&read(p)?).with_context(|| format!("in {}", p.display())),
        None => Ok(SynonymLexicon::default()),
    }
}

/// One rule object per line; blank lines are skipped.
pub fn load_rules(path: Option<&Path>) -> Result<Vec<RuleSpec>> {
    match path {
        Some(p) => read_jsonl(p),
        None => Ok(Vec::new()),
    }
}

pub fn load_engine(cfg: &EngineConfig) -> Result<Engine> {
    let tokenizer = load_tokenizer(cfg.abbreviations.as_deref())?;
    let gazetteer = load_gazetteer(cfg)?;
    let synonyms = load_synonyms(cfg.synonyms.as_deref())?;
    let rules = load_rules(cfg.rules.as_deref())?;
    Engine::build(tokenizer, &gazetteer, &synonyms, rules).context("building the engine")
}

pub fn load_gold(path: &Path) -> Result<Vec<GoldDocument>> {
    read_jsonl(path)
}

pub fn load_predictions(path: &Path) -> Result<Vec<PredictedDocument>> {
    read_jsonl(path)
}

/// Reads a whole JSON Lines file; the first bad line is an error.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(v) => out.push(v),
            Err(e) => bail!("{}:{}: {e}", path.display(), idx + 1),
        }
    }
    Ok(out)
}

/// A document in JSON Lines input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDocument {
    pub doc_id: String,
    pub text: String,
}

/// Parses one JSON Lines input record.
pub fn parse_document(line: &str) -> Result<InputDocument, String> {
    serde_json::from_str(line).map_err(|e| e.to_string())
}
