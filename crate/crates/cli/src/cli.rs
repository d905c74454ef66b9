//! Argument parsing and the four subcommands.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use zugang_core::eval::{render_table, report};
use zugang_core::synonyms::expand;
use zugang_core::DatasetKind;

use crate::config::{EngineConfig, InputFormat};
use crate::io::{load_engine, load_gazetteer, load_gold, load_predictions, load_synonyms, parse_document, InputDocument};
use crate::output::{DocumentRecord, ErrorRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "zugang", version, about = "Extract access requirements from German course advertisements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the gazetteer files and report entry counts.
    Ingest {
        #[arg(long, default_value = "zugang.toml")]
        config: PathBuf,
    },
    /// Write the label variants of all non-preparation entries as JSON Lines.
    Expand {
        #[arg(long, default_value = "zugang.toml")]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract requirements from documents.
    Extract {
        #[arg(long, default_value = "zugang.toml")]
        config: PathBuf,
        /// Input file; standard input if omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Defaults to the config's `format`, else `jsonl`.
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
        /// Document id for `html` and `text` input; defaults to the file stem.
        #[arg(long)]
        doc_id: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
        /// Include all annotations before polarity resolution.
        #[arg(long)]
        raw: bool,
    },
    /// Score predictions against gold labels.
    Eval {
        /// Prediction file; repeat together with --gold for several datasets.
        #[arg(long, required = true)]
        predictions: Vec<PathBuf>,
        #[arg(long, required = true)]
        gold: Vec<PathBuf>,
        /// Dataset name per prediction file; defaults to the file stem.
        #[arg(long)]
        name: Vec<String>,
        /// Print the reports as JSON instead of tables.
        #[arg(long)]
        json: bool,
    },
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_DATA
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Ingest { config } => ingest(&config),
        Command::Expand { config, out } => expand_cmd(&config, out.as_deref()),
        Command::Extract { config, input, format, doc_id, out, jobs, raw } => {
            extract_cmd(&config, input.as_deref(), format, doc_id, out.as_deref(), jobs.into(), raw)
        }
        Command::Eval { predictions, gold, name, json } => eval_cmd(&predictions, &gold, &name, json),
    }
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn ingest(config: &Path) -> Result<i32> {
    let cfg = EngineConfig::load(config)?;
    let gazetteer = load_gazetteer(&cfg)?;
    let synonyms = load_synonyms(cfg.synonyms.as_deref())?;
    let mut stdout = io::stdout().lock();
    for d in DatasetKind::ALL {
        let n = gazetteer.entries().iter().filter(|e| e.dataset == d).count();
        let prep = gazetteer.entries().iter().filter(|e| e.dataset == d && e.is_preparation).count();
        writeln!(stdout, "{d}: {n} entries, {prep} preparation")?;
    }
    writeln!(stdout, "synonym groups: {}", synonyms.groups().len())?;
    let expansion = expand(&gazetteer.filter_preparation(), &synonyms);
    for w in &expansion.warnings {
        eprintln!("warning: {w}");
    }
    Ok(EXIT_OK)
}

fn expand_cmd(config: &Path, out: Option<&Path>) -> Result<i32> {
    let cfg = EngineConfig::load(config)?;
    let gazetteer = load_gazetteer(&cfg)?;
    let synonyms = load_synonyms(cfg.synonyms.as_deref())?;
    let expansion = expand(&gazetteer.filter_preparation(), &synonyms);
    let mut w = open_out(out)?;
    for v in &expansion.variants {
        serde_json::to_writer(&mut w, v)?;
        writeln!(w)?;
    }
    w.flush()?;
    for warning in &expansion.warnings {
        eprintln!("warning: {warning}");
    }
    for (origin, n) in expansion.count_by_origin() {
        eprintln!("{}: {n}", origin.as_str());
    }
    Ok(EXIT_OK)
}

fn extract_cmd(
    config: &Path,
    input: Option<&Path>,
    format: Option<InputFormat>,
    doc_id: Option<String>,
    out: Option<&Path>,
    jobs: usize,
    raw: bool,
) -> Result<i32> {
    let cfg = EngineConfig::load(config)?;
    let format = format.or(cfg.format).unwrap_or_default();
    let engine = load_engine(&cfg)?;
    let reader: Box<dyn BufRead> = match input {
        Some(p) => Box::new(BufReader::new(File::open(p).with_context(|| format!("opening {}", p.display()))?)),
        None => Box::new(BufReader::new(io::stdin().lock())),
    };

    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().context("starting worker threads")?;
    let mut w = open_out(out)?;
    let mut seen = BTreeSet::new();
    let mut failures = 0usize;
    let mut process = |batch: Vec<(usize, Result<InputDocument, String>)>, w: &mut dyn Write| -> Result<()> {
        let mut docs = Vec::new();
        let mut errors = Vec::new();
        for (line, item) in batch {
            match item {
                Err(error) => errors.push(ErrorRecord { line, doc_id: None, error }),
                Ok(doc) if doc.doc_id.trim().is_empty() => {
                    errors.push(ErrorRecord { line, doc_id: Some(doc.doc_id), error: "empty doc_id".into() })
                }
                Ok(doc) if !seen.insert(doc.doc_id.clone()) => errors.push(ErrorRecord {
                    line,
                    error: format!("duplicate doc_id {:?}", doc.doc_id),
                    doc_id: Some(doc.doc_id),
                }),
                Ok(doc) => docs.push(doc),
            }
        }
        let records: Vec<DocumentRecord> = pool.install(|| {
            docs.par_iter().map(|d| DocumentRecord::new(engine.extract(d.doc_id.clone(), &d.text), raw)).collect()
        });
        for r in &records {
            serde_json::to_writer(&mut *w, r)?;
            writeln!(w)?;
        }
        let mut stderr = io::stderr().lock();
        for e in &errors {
            serde_json::to_writer(&mut stderr, e)?;
            writeln!(stderr)?;
        }
        failures += errors.len();
        Ok(())
    };

    match format {
        InputFormat::Jsonl => {
            let mut batch = Vec::with_capacity(BATCH);
            for (idx, line) in reader.lines().enumerate() {
                let line = line.context("reading input")?;
                if line.trim().is_empty() {
                    continue;
                }
                batch.push((idx + 1, parse_document(&line)));
                if batch.len() == BATCH {
                    process(std::mem::take(&mut batch), &mut w)?;
                }
            }
            process(batch, &mut w)?;
        }
        InputFormat::Html | InputFormat::Text => {
            let mut text = String::new();
            let mut reader = reader;
            reader.read_to_string(&mut text).context("reading input (must be UTF-8)")?;
            let doc_id = doc_id
                .or_else(|| input.and_then(|p| p.file_stem()).map(|s| s.to_string_lossy().into_owned()))
                .unwrap_or_else(|| "stdin".to_string());
            process(vec![(1, Ok(InputDocument { doc_id, text }))], &mut w)?;
        }
    }
    w.flush()?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_DATA })
}

/// Documents extracted together; output order is input order regardless.
const BATCH: usize = 512;

fn eval_cmd(predictions: &[PathBuf], gold: &[PathBuf], names: &[String], json: bool) -> Result<i32> {
    if predictions.len() != gold.len() {
        bail!("{} prediction files but {} gold files", predictions.len(), gold.len());
    }
    if !names.is_empty() && names.len() != predictions.len() {
        bail!("{} names for {} datasets", names.len(), predictions.len());
    }
    let mut loaded = Vec::new();
    for (i, (p, g)) in predictions.iter().zip(gold).enumerate() {
        let name = names.get(i).cloned().unwrap_or_else(|| {
            p.file_stem().map_or_else(|| format!("dataset {}", i + 1), |s| s.to_string_lossy().into_owned())
        });
        loaded.push((name, load_predictions(p)?, load_gold(g)?));
    }
    let reports = report(loaded.iter().map(|(n, p, g)| (n.as_str(), p.as_slice(), g.as_slice())))?;
    let mut stdout = io::stdout().lock();
    if json {
        serde_json::to_writer_pretty(&mut stdout, &reports)?;
        writeln!(stdout)?;
    } else {
        write!(stdout, "{}", render_table(&reports))?;
    }
    for r in &reports {
        if r.unjudged_documents > 0 {
            eprintln!("note: {}: {} predicted documents have no gold record", r.dataset_name, r.unjudged_documents);
        }
    }
    Ok(EXIT_OK)
}
