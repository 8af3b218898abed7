//! The `pdfstyle` command line.
//!
//! Exit codes of `scan`: 0 producer, 2 ambiguous, 3 no result, 1 error.
//! Other commands exit 0 on success and 1 on error.

pub mod report;
pub mod stats;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::audit::{self, normalize_producer_string, ConsistencyStatus};
use crate::builtin::builtin;
use crate::detector::{classify, detect_sections, Outcome, Verdict};
use crate::fixtures;
use crate::miner::{self, emit_rulepack, mine_sections, LabeledCorpus, ManifestError, MineError, MineOptions};
use crate::producer::{Distro, Os, ProducerId, SectionKind};
use crate::rules::{load_rulepack, Rulepack, RulepackError};
use crate::segmenter::{segment, SegmentError};
use report::{render_csv, render_text, CsvRow, ErrorReport, ScanReport, SCHEMA};
use stats::{BatchStats, Graded};

pub const EXIT_PRODUCER: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_AMBIGUOUS: i32 = 2;
pub const EXIT_NO_RESULT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pdfstyle", version, about = "Identify the producer of a PDF file from its coding style")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect the producer of one file.
    Scan(ScanArgs),
    /// Detect every file of a manifest or directory and report statistics.
    Batch(BatchArgs),
    /// Compare the declared producer with the detected one.
    Audit(AuditArgs),
    /// Derive rules from a labelled corpus.
    Mine(MineArgs),
    /// Synthetic files for every builtin producer profile.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Truth {
    Manifest,
    Metadata,
}

fn parse_section(s: &str) -> Result<SectionKind, String> {
    SectionKind::from_keyword(s.trim()).ok_or_else(|| format!("unknown section {s:?}; expected header, body, xref or trailer"))
}

#[derive(Debug, Clone, Args)]
pub struct PackArgs {
    /// Rule file to use instead of the builtin pack.
    #[arg(long)]
    pub pack: Option<PathBuf>,
    /// Sections that take part, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_section)]
    pub sections: Vec<SectionKind>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub pack: PackArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BatchArgs {
    /// A manifest, or a directory holding `manifest.tsv` or PDF files.
    pub input: PathBuf,
    #[command(flatten)]
    pub pack: PackArgs,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long, value_enum, default_value = "manifest")]
    pub truth: Truth,
    /// Worker threads; 0 uses one per logical CPU.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Also write the per-file CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    /// A PDF file or a directory of them.
    pub input: PathBuf,
    #[command(flatten)]
    pub pack: PackArgs,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct MineArgs {
    pub manifest: PathBuf,
    /// Sections to mine, comma separated; all by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_section)]
    pub sections: Vec<SectionKind>,
    #[arg(long, default_value_t = MineOptions::default().min_len)]
    pub min_len: usize,
    #[arg(long, default_value_t = MineOptions::default().header_min_len)]
    pub header_min_len: usize,
    #[arg(long, default_value_t = MineOptions::default().max_discriminacy)]
    pub max_discriminacy: f64,
    #[arg(long, default_value = "mined")]
    pub name: String,
    /// Write the rule file here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FixturesArgs {
    #[command(subcommand)]
    pub action: FixturesAction,
}

#[derive(Debug, Clone, Subcommand)]
pub enum FixturesAction {
    /// Write the corpus and a manifest into a directory.
    Emit {
        #[arg(long)]
        dir: PathBuf,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        /// Files per profile.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", .path.display())]
    Rulepack { path: PathBuf, source: RulepackError },
    #[error(transparent)]
    Mine(#[from] MineError),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("output: {0}")]
    Output(std::io::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

impl PackArgs {
    pub fn load(&self) -> Result<Rulepack, CliError> {
        let pack = match &self.pack {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(io_err(p))?;
                load_rulepack(&text).map_err(|source| CliError::Rulepack { path: p.clone(), source })?
            }
            None => builtin().clone(),
        };
        Ok(if self.sections.is_empty() { pack } else { pack.restricted(&self.sections) })
    }
}

/// Analyses one file's bytes; `name` is what the report calls it.
pub fn analyze(name: &str, bytes: &[u8], pack: &Rulepack) -> Result<(ScanReport, Verdict), SegmentError> {
    let sections = segment(bytes)?;
    let (verdict, _) = detect_sections(pack, &sections);
    let declared = audit::declared_from_sections(&sections);
    let status = audit::report(declared.clone(), verdict.clone()).status;
    let report = ScanReport::new(name, &verdict, &declared, status, sections.diagnostics);
    Ok((report, verdict))
}

pub fn exit_code(o: &Outcome) -> i32 {
    match o {
        Outcome::Producer(_) => EXIT_PRODUCER,
        Outcome::Ambiguous(_) => EXIT_AMBIGUOUS,
        Outcome::NoResult => EXIT_NO_RESULT,
    }
}

fn error_kind(e: &SegmentError) -> &'static str {
    match e {
        SegmentError::NotAPdf => "not_a_pdf",
        #[allow(unreachable_patterns)]
        _ => "segment",
    }
}

fn put(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(CliError::Output)
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn cmd_scan(args: &ScanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let pack = args.pack.load()?;
    let name = args.file.display().to_string();
    let result = std::fs::read(&args.file)
        .map_err(|e| ErrorReport::new(&name, "io", e.to_string()))
        .and_then(|b| analyze(&name, &b, &pack).map_err(|e| ErrorReport::new(&name, error_kind(&e), e.to_string())));
    match result {
        Ok((report, verdict)) => {
            let text = match args.format {
                Format::Json => json(&report)?,
                Format::Csv => render_csv(&[CsvRow::from_report(&report)])?,
                Format::Table => render_text(&report),
            };
            put(out, &text)?;
            Ok(exit_code(&verdict.outcome))
        }
        Err(e) => {
            let text = match args.format {
                Format::Csv => render_csv(&[CsvRow::from_error(&e)])?,
                _ => json(&e)?,
            };
            put(out, &text)?;
            Ok(EXIT_ERROR)
        }
    }
}

/// One file of a batch with its optional labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchItem {
    pub name: String,
    pub path: PathBuf,
    pub label: Option<(ProducerId, Option<Os>, Option<Distro>)>,
}

fn pdfs_in(dir: &Path) -> Result<Vec<BatchItem>, CliError> {
    let mut items = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pdf")) {
            let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
            items.push(BatchItem { name, path, label: None });
        }
    }
    items.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(items)
}

fn manifest_items(path: &Path) -> Result<Vec<BatchItem>, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(miner::parse_manifest(&text)?
        .into_iter()
        .map(|e| BatchItem {
            name: e.path.display().to_string(),
            path: e.resolve(base),
            label: Some((e.producer, e.os, e.distro)),
        })
        .collect())
}

/// Files named by a manifest, or by `manifest.tsv` inside a directory,
/// or every `.pdf` of a directory without labels.
pub fn batch_items(input: &Path) -> Result<Vec<BatchItem>, CliError> {
    if input.is_dir() {
        let m = input.join(fixtures::MANIFEST_NAME);
        if m.is_file() {
            manifest_items(&m)
        } else {
            pdfs_in(input)
        }
    } else {
        manifest_items(input)
    }
}

/// Result of one batch file.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchFile {
    pub item: BatchItem,
    pub result: Result<(ScanReport, Verdict), ErrorReport>,
    pub truth: Option<ProducerId>,
}

impl BatchFile {
    pub fn csv_row(&self) -> CsvRow {
        let (row, class) = match &self.result {
            Ok((r, v)) => (CsvRow::from_report(r), self.truth.as_ref().map(|t| classify(v, t).file)),
            Err(e) => (CsvRow::from_error(e), None),
        };
        row.with_truth(self.truth.as_ref(), class)
    }
}

/// Analyses every item on `jobs` threads; output sorted by name.
pub fn run_batch(items: Vec<BatchItem>, pack: &Rulepack, truth: Truth, jobs: usize) -> Result<Vec<BatchFile>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let mut files: Vec<BatchFile> = pool.install(|| {
        items
            .into_par_iter()
            .map(|item| {
                let result = std::fs::read(&item.path)
                    .map_err(|e| ErrorReport::new(&item.name, "io", e.to_string()))
                    .and_then(|b| {
                        analyze(&item.name, &b, pack).map_err(|e| ErrorReport::new(&item.name, error_kind(&e), e.to_string()))
                    });
                let truth = match truth {
                    Truth::Manifest => item.label.as_ref().map(|l| l.0.clone()),
                    Truth::Metadata => result
                        .as_ref()
                        .ok()
                        .and_then(|(r, _)| r.declared.producer.as_deref())
                        .and_then(normalize_producer_string),
                };
                BatchFile { item, result, truth }
            })
            .collect()
    });
    files.sort_by(|a, b| a.item.name.cmp(&b.item.name));
    Ok(files)
}

pub fn batch_stats(files: &[BatchFile], truth: Truth) -> BatchStats {
    BatchStats::from_files(files.iter().map(|f| Graded {
        truth: f.truth.as_ref(),
        truth_os: match truth {
            Truth::Manifest => f.item.label.as_ref().and_then(|l| l.1),
            Truth::Metadata => None,
        },
        verdict: f.result.as_ref().ok().map(|(_, v)| v),
    }))
}

#[derive(Serialize)]
struct BatchJson<'a> {
    schema: u32,
    stats: &'a BatchStats,
    files: Vec<serde_json::Value>,
}

pub fn cmd_batch(args: &BatchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let pack = args.pack.load()?;
    let files = run_batch(batch_items(&args.input)?, &pack, args.truth, args.jobs)?;
    let stats = batch_stats(&files, args.truth);
    let rows: Vec<CsvRow> = files.iter().map(BatchFile::csv_row).collect();
    let csv_text = render_csv(&rows)?;
    if let Some(p) = &args.csv {
        std::fs::write(p, &csv_text).map_err(io_err(p))?;
    }
    let text = match args.format {
        Format::Csv => csv_text,
        Format::Table => stats.render_tables(),
        Format::Json => {
            let reports = files
                .iter()
                .map(|f| match &f.result {
                    Ok((r, _)) => serde_json::to_value(r),
                    Err(e) => serde_json::to_value(e),
                })
                .collect::<Result<Vec<_>, _>>()?;
            json(&BatchJson { schema: SCHEMA, stats: &stats, files: reports })?
        }
    };
    put(out, &text)?;
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRow {
    pub file: String,
    pub declared: Option<String>,
    pub detected: Outcome,
    pub status: ConsistencyStatus,
}

#[derive(Serialize)]
struct AuditJson<'a> {
    schema: u32,
    reports: &'a [AuditRow],
    errors: &'a [ErrorReport],
    summary: BTreeMap<ConsistencyStatus, usize>,
}

fn audit_summary(rows: &[AuditRow]) -> BTreeMap<ConsistencyStatus, usize> {
    let mut m: BTreeMap<ConsistencyStatus, usize> =
        [ConsistencyStatus::Consistent, ConsistencyStatus::Inconsistent, ConsistencyStatus::Unverifiable]
            .into_iter()
            .map(|s| (s, 0))
            .collect();
    for r in rows {
        *m.entry(r.status).or_default() += 1;
    }
    m
}

fn status_word(s: ConsistencyStatus) -> &'static str {
    match s {
        ConsistencyStatus::Consistent => "consistent",
        ConsistencyStatus::Inconsistent => "inconsistent",
        ConsistencyStatus::Unverifiable => "unverifiable",
    }
}

fn outcome_text(o: &Outcome) -> String {
    match o {
        Outcome::Producer(p) => p.to_string(),
        Outcome::Ambiguous(c) => c.iter().map(ProducerId::to_string).collect::<Vec<_>>().join("|"),
        Outcome::NoResult => "-".into(),
    }
}

pub fn cmd_audit(args: &AuditArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let pack = args.pack.load()?;
    let items = if args.input.is_dir() {
        pdfs_in(&args.input)?
    } else {
        vec![BatchItem { name: args.input.display().to_string(), path: args.input.clone(), label: None }]
    };
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for item in &items {
        let report = std::fs::read(&item.path)
            .map_err(|e| ErrorReport::new(&item.name, "io", e.to_string()))
            .and_then(|b| {
                audit::consistency_check(&b, &pack).map_err(|e| ErrorReport::new(&item.name, error_kind(&e), e.to_string()))
            });
        match report {
            Ok(r) => rows.push(AuditRow {
                file: item.name.clone(),
                declared: r.declared.producer.clone(),
                detected: r.detected.outcome.clone(),
                status: r.status,
            }),
            Err(e) => errors.push(e),
        }
    }
    let summary = audit_summary(&rows);
    let text = match args.format {
        Format::Json => json(&AuditJson { schema: SCHEMA, reports: &rows, errors: &errors, summary })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["file", "declared", "detected", "status"])?;
            for r in &rows {
                w.write_record([r.file.as_str(), r.declared.as_deref().unwrap_or(""), &outcome_text(&r.detected), status_word(r.status)])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Output(e.into_error()))?).expect("csv of strings is utf-8")
        }
        Format::Table => {
            let mut t = String::new();
            for r in &rows {
                t.push_str(&format!(
                    "{:<28} {:<40} {:<22} {}\n",
                    r.file,
                    r.declared.as_deref().unwrap_or("-"),
                    outcome_text(&r.detected),
                    status_word(r.status)
                ));
            }
            for e in &errors {
                t.push_str(&format!("{:<28} error: {}\n", e.file, e.error.message));
            }
            let counts: Vec<String> = summary.iter().map(|(s, n)| format!("{} {n}", status_word(*s))).collect();
            t.push_str(&counts.join("  "));
            t.push('\n');
            t
        }
    };
    put(out, &text)?;
    Ok(if errors.is_empty() { 0 } else { EXIT_ERROR })
}

pub fn cmd_mine(args: &MineArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let corpus = LabeledCorpus::from_manifest(&args.manifest)?;
    let opts = MineOptions {
        min_len: args.min_len,
        header_min_len: args.header_min_len,
        max_discriminacy: args.max_discriminacy,
    };
    let sections = if args.sections.is_empty() { SectionKind::ALL.to_vec() } else { args.sections.clone() };
    let mined = mine_sections(&corpus, &sections, &opts)?;
    let text = emit_rulepack(&mined, &args.name);
    match &args.output {
        Some(p) => std::fs::write(p, text).map_err(io_err(p))?,
        None => put(out, &text)?,
    }
    Ok(0)
}

pub fn cmd_fixtures(args: &FixturesArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    match &args.action {
        FixturesAction::Emit { dir, first_seed, seeds } => {
            let manifest = fixtures::emit(dir, *first_seed..first_seed + seeds).map_err(io_err(dir))?;
            put(out, &format!("{}\n", manifest.display()))?;
        }
    }
    Ok(0)
}

/// Runs a parsed command line; errors go to `err` and give exit code 1.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let r = match &cli.command {
        Command::Scan(a) => cmd_scan(a, out),
        Command::Batch(a) => cmd_batch(a, out),
        Command::Audit(a) => cmd_audit(a, out),
        Command::Mine(a) => cmd_mine(a, out),
        Command::Fixtures(a) => cmd_fixtures(a, out),
    };
    r.unwrap_or_else(|e| {
        let _ = writeln!(err, "pdfstyle: {e}");
        EXIT_ERROR
    })
}
