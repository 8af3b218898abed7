//! Per-file reports and their JSON, CSV and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::audit::{ConsistencyStatus, DeclaredMetadata, MetadataSource};
use crate::detector::{Detection, Outcome, Verdict};
use crate::producer::{Distro, Os, ProducerId, SectionKind};
use crate::segmenter::Diagnostic;

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Producer,
    Ambiguous,
    NoResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub kind: VerdictKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub producer: Option<ProducerId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<ProducerId>>,
}

impl VerdictReport {
    pub fn from_outcome(o: &Outcome) -> Self {
        match o {
            Outcome::Producer(p) => VerdictReport { kind: VerdictKind::Producer, producer: Some(p.clone()), candidates: None },
            Outcome::Ambiguous(s) => {
                VerdictReport { kind: VerdictKind::Ambiguous, producer: None, candidates: Some(s.iter().cloned().collect()) }
            }
            Outcome::NoResult => VerdictReport { kind: VerdictKind::NoResult, producer: None, candidates: None },
        }
    }

    pub fn outcome(&self) -> Outcome {
        match (self.kind, &self.producer, &self.candidates) {
            (VerdictKind::Producer, Some(p), _) => Outcome::Producer(p.clone()),
            (VerdictKind::Ambiguous, _, Some(c)) => Outcome::Ambiguous(c.iter().cloned().collect()),
            _ => Outcome::NoResult,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionReport {
    pub kind: SectionKind,
    pub candidates: Vec<ProducerId>,
    pub rules: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OsReport {
    pub os: Os,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distro: Option<Distro>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DeclaredReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub producer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub creator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<MetadataSource>,
}

impl From<&DeclaredMetadata> for DeclaredReport {
    fn from(d: &DeclaredMetadata) -> Self {
        DeclaredReport { producer: d.producer.clone(), creator: d.creator.clone(), source: d.source }
    }
}

/// Everything `scan` says about one file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema: u32,
    pub file: String,
    pub verdict: VerdictReport,
    pub votes: BTreeMap<ProducerId, u32>,
    pub sections: Vec<SectionReport>,
    pub os: Vec<OsReport>,
    pub declared: DeclaredReport,
    pub consistency: ConsistencyStatus,
    pub diagnostics: Vec<Diagnostic>,
}

impl ScanReport {
    pub fn new(
        file: impl Into<String>,
        verdict: &Verdict,
        declared: &DeclaredMetadata,
        consistency: ConsistencyStatus,
        diagnostics: Vec<Diagnostic>,
    ) -> Self {
        ScanReport {
            schema: SCHEMA,
            file: file.into(),
            verdict: VerdictReport::from_outcome(&verdict.outcome),
            votes: verdict.votes.clone(),
            sections: verdict
                .section_verdicts
                .iter()
                .map(|s| SectionReport { kind: s.section, candidates: s.candidates.iter().cloned().collect(), rules: s.rule_ids() })
                .collect(),
            os: verdict.os_candidates.iter().map(|&(os, distro)| OsReport { os, distro }).collect(),
            declared: declared.into(),
            consistency,
            diagnostics,
        }
    }

    pub fn section(&self, kind: SectionKind) -> Option<&SectionReport> {
        self.sections.iter().find(|s| s.kind == kind)
    }
}

/// Machine-readable failure of one file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub schema: u32,
    pub file: String,
    pub error: ErrorBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

impl ErrorReport {
    pub fn new(file: impl Into<String>, kind: &str, message: impl Into<String>) -> Self {
        ErrorReport { schema: SCHEMA, file: file.into(), error: ErrorBody { kind: kind.into(), message: message.into() } }
    }
}

fn join<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> String) -> String {
    items.into_iter().map(f).collect::<Vec<_>>().join(";")
}

pub fn os_label(r: &OsReport) -> String {
    match r.distro {
        Some(d) => format!("{}/{}", r.os.keyword(), d.keyword()),
        None => r.os.keyword().to_string(),
    }
}

/// Flat view of a report; lists are `;`-separated.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CsvRow {
    pub file: String,
    pub verdict: String,
    pub producer: String,
    pub candidates: String,
    pub votes: String,
    pub header: String,
    pub body: String,
    pub xref: String,
    pub trailer: String,
    pub os: String,
    pub declared_producer: String,
    pub declared_creator: String,
    pub declared_source: String,
    pub consistency: String,
    pub diagnostics: usize,
    pub truth: String,
    pub class: String,
    pub error: String,
}

fn keyword<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

impl CsvRow {
    pub fn from_report(r: &ScanReport) -> Self {
        let section = |k: SectionKind| r.section(k).map(|s| join(&s.candidates, |p| p.to_string())).unwrap_or_default();
        CsvRow {
            file: r.file.clone(),
            verdict: keyword(&r.verdict.kind),
            producer: r.verdict.producer.as_ref().map(|p| p.to_string()).unwrap_or_default(),
            candidates: r.verdict.candidates.as_ref().map(|c| join(c, |p| p.to_string())).unwrap_or_default(),
            votes: join(&r.votes, |(p, n)| format!("{p}={n}")),
            header: section(SectionKind::Header),
            body: section(SectionKind::Body),
            xref: section(SectionKind::Xref),
            trailer: section(SectionKind::Trailer),
            os: join(&r.os, os_label),
            declared_producer: r.declared.producer.clone().unwrap_or_default(),
            declared_creator: r.declared.creator.clone().unwrap_or_default(),
            declared_source: r.declared.source.as_ref().map(keyword).unwrap_or_default(),
            consistency: keyword(&r.consistency),
            diagnostics: r.diagnostics.len(),
            ..CsvRow::default()
        }
    }

    pub fn from_error(e: &ErrorReport) -> Self {
        CsvRow { file: e.file.clone(), verdict: "error".into(), error: e.error.message.clone(), ..CsvRow::default() }
    }

    pub fn with_truth(mut self, truth: Option<&ProducerId>, class: Option<Detection>) -> Self {
        self.truth = truth.map(|p| p.to_string()).unwrap_or_default();
        self.class = class.as_ref().map(keyword).unwrap_or_default();
        self
    }
}

/// CSV text with a header line.
pub fn render_csv(rows: &[CsvRow]) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of strings is utf-8"))
}

pub const CSV_COLUMNS: [&str; 18] = [
    "file",
    "verdict",
    "producer",
    "candidates",
    "votes",
    "header",
    "body",
    "xref",
    "trailer",
    "os",
    "declared_producer",
    "declared_creator",
    "declared_source",
    "consistency",
    "diagnostics",
    "truth",
    "class",
    "error",
];

fn set_text(v: &[ProducerId]) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        v.iter().map(ProducerId::to_string).collect::<Vec<_>>().join(", ")
    }
}

/// Human-readable rendering of one report.
pub fn render_text(r: &ScanReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "file         {}", r.file);
    let verdict = match r.verdict.outcome() {
        Outcome::Producer(p) => p.to_string(),
        Outcome::Ambiguous(c) => format!("ambiguous between {}", set_text(&c.into_iter().collect::<Vec<_>>())),
        Outcome::NoResult => "no result".into(),
    };
    let _ = writeln!(out, "verdict      {verdict}");
    let votes = join(&r.votes, |(p, n)| format!("{p} {n}")).replace(';', ", ");
    let _ = writeln!(out, "votes        {}", if votes.is_empty() { "-".into() } else { votes });
    for s in &r.sections {
        let rules = if s.rules.is_empty() { String::new() } else { format!("  [{}]", s.rules.join(" ")) };
        let _ = writeln!(out, "{:<12} {}{rules}", s.kind.keyword(), set_text(&s.candidates));
    }
    let os = join(&r.os, os_label).replace(';', ", ");
    let _ = writeln!(out, "os           {}", if os.is_empty() { "-".into() } else { os });
    let _ = writeln!(out, "declared     {}", r.declared.producer.as_deref().unwrap_or("-"));
    let _ = writeln!(out, "consistency  {}", keyword(&r.consistency));
    for d in &r.diagnostics {
        let _ = writeln!(out, "diagnostic   {} at {}: {}", keyword(&d.kind), d.offset, d.message);
    }
    out
}
