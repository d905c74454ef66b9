//! File formats, configuration and subcommands of the `zugang` tool.

pub mod cli;
pub mod config;
pub mod io;
pub mod output;

pub use config::{EngineConfig, InputFormat};
pub use io::{load_engine, load_gazetteer, load_gold, load_predictions, load_rules, load_synonyms, load_tokenizer};
