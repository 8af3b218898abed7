//! Rule induction from a corpus labelled by producer.
//!
//! For each producer the byte sequences shared by all of its files are
//! found section by section. Decimal runs and long hex strings are treated
//! as volatile, so `Length 2413` and `Length 187` have something in
//! common. A shared sequence becomes a rule when it never occurs in the
//! files of other producers.

mod lcs;
mod manifest;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lcs::{tokenize, Tok, DIGITS_CLASS, HEX_CLASS, HEX_RUN_MIN};
pub use manifest::{parse_manifest, render_manifest, ManifestEntry, ManifestError};

use crate::producer::{Distro, Os, ProducerId, SectionKind};
use crate::rules::{compile, element_bytes, render_rule, rule_hits, Rule, RuleKind};
use crate::segmenter::{segment, PdfSections, SegmentError};
use lcs::Slot;

#[derive(Debug, Error)]
pub enum MineError {
    #[error("no labelled files{}", .0.as_ref().map(|p| format!(" for {p}")).unwrap_or_default())]
    EmptyGroup(Option<ProducerId>),
    #[error("no {producer} file has a {} section", .section.keyword())]
    SectionAbsentEverywhere { producer: ProducerId, section: SectionKind },
    #[error("minimum length {0} is below 4")]
    MinLenTooSmall(usize),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{name}: {source}")]
    Segment { name: String, source: SegmentError },
}

/// One file of a corpus, already segmented.
#[derive(Debug, Clone)]
pub struct LabeledFile {
    pub name: String,
    pub os: Option<Os>,
    pub distro: Option<Distro>,
    pub sections: PdfSections,
}

/// Files grouped by the producer their manifest names.
#[derive(Debug, Clone, Default)]
pub struct LabeledCorpus {
    groups: BTreeMap<ProducerId, Vec<LabeledFile>>,
}

impl LabeledCorpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(
        &mut self,
        name: impl Into<String>,
        producer: ProducerId,
        os: Option<Os>,
        distro: Option<Distro>,
        bytes: &[u8],
    ) -> Result<(), MineError> {
        let name = name.into();
        let sections = segment(bytes).map_err(|source| MineError::Segment { name: name.clone(), source })?;
        self.groups.entry(producer).or_default().push(LabeledFile { name, os, distro, sections });
        Ok(())
    }

    /// Reads every file a manifest lists, relative paths taken from the
    /// manifest's directory.
    pub fn from_manifest(path: &Path) -> Result<Self, MineError> {
        let text = std::fs::read_to_string(path).map_err(|source| MineError::Io { path: path.into(), source })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut corpus = LabeledCorpus::new();
        for e in parse_manifest(&text)? {
            let p = e.resolve(base);
            let bytes = std::fs::read(&p).map_err(|source| MineError::Io { path: p.clone(), source })?;
            corpus.add(e.path.display().to_string(), e.producer, e.os, e.distro, &bytes)?;
        }
        Ok(corpus)
    }

    pub fn groups(&self) -> &BTreeMap<ProducerId, Vec<LabeledFile>> {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MineOptions {
    /// Shortest candidate in tokens; a volatile run is one token.
    pub min_len: usize,
    /// Same for the header, whose magic numbers are often 4 bytes.
    pub header_min_len: usize,
    /// Largest fraction of any other producer's files a rule may match.
    pub max_discriminacy: f64,
}

impl Default for MineOptions {
    fn default() -> Self {
        MineOptions { min_len: 8, header_min_len: 4, max_discriminacy: 0.0 }
    }
}

impl MineOptions {
    fn min_len_for(&self, section: SectionKind) -> usize {
        if section == SectionKind::Header {
            self.header_min_len
        } else {
            self.min_len
        }
    }
}

/// A pattern shared by one producer's files, with its scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePattern {
    pub producer: ProducerId,
    pub section: SectionKind,
    pub kind: RuleKind,
    pub template: String,
    /// Fraction of the producer's files matched.
    pub support: f64,
    /// Largest fraction of another producer's files matched.
    pub discriminacy: f64,
    /// Length in tokens.
    pub len: usize,
    pub os_tags: BTreeSet<Os>,
    pub distro_tags: BTreeSet<Distro>,
}

impl CandidatePattern {
    pub fn to_rule(&self, id: &str) -> Rule {
        Rule::new(id, self.producer.clone(), self.section, self.kind, &self.template)
            .expect("mined templates compile")
            .with_os(self.os_tags.iter().copied())
            .with_distro(self.distro_tags.iter().copied())
    }
}

fn kind_for(section: SectionKind) -> RuleKind {
    match section {
        SectionKind::Header => RuleKind::MagicNumber,
        _ => RuleKind::Template,
    }
}

/// Fixes each volatile slot to a value every file has there, if one
/// exists, keeping the smallest such value.
fn specialize(toks: &[Tok], files: &[LabeledFile], section: SectionKind) -> Vec<Slot> {
    let n = toks.iter().filter(|t| t.is_class()).count();
    let mut slots = vec![Slot::Class; n];
    for k in 0..n {
        slots[k] = Slot::Capture;
        let re = compile(&lcs::render(toks, &slots)).expect("rendered template compiles");
        let mut common: Option<BTreeSet<Vec<u8>>> = None;
        for f in files {
            let seen: BTreeSet<Vec<u8>> = element_bytes(&f.sections, section)
                .into_iter()
                .flat_map(|el| re.captures_iter(el).map(|c| c[1].to_vec()).collect::<Vec<_>>())
                .filter(|v| !v.is_empty())
                .collect();
            common = Some(match common {
                None => seen,
                Some(c) => c.intersection(&seen).cloned().collect(),
            });
        }
        slots[k] = match common.and_then(|c| c.into_iter().next()) {
            Some(v) => Slot::Literal(v),
            None => Slot::Class,
        };
    }
    slots
}

fn labels<T: Ord + Copy>(files: &[LabeledFile], f: impl Fn(&LabeledFile) -> Option<T>) -> BTreeSet<T> {
    let all: Option<BTreeSet<T>> = files.iter().map(f).collect();
    all.unwrap_or_default()
}

fn score(rule: &Rule, corpus: &LabeledCorpus) -> (f64, f64) {
    let mut support = 0.0;
    let mut discriminacy: f64 = 0.0;
    for (p, files) in &corpus.groups {
        let hit = files.iter().filter(|f| rule_hits(rule, &f.sections)).count() as f64 / files.len() as f64;
        if *p == rule.producer {
            support = hit;
        } else {
            discriminacy = discriminacy.max(hit);
        }
    }
    (support, discriminacy)
}

fn candidate(
    corpus: &LabeledCorpus,
    producer: &ProducerId,
    section: SectionKind,
    kind: RuleKind,
    template: String,
    len: usize,
) -> CandidatePattern {
    let files = &corpus.groups[producer];
    let rule = Rule::new("candidate", producer.clone(), section, kind, &template).expect("rendered template compiles");
    let (support, discriminacy) = score(&rule, corpus);
    CandidatePattern {
        producer: producer.clone(),
        section,
        kind,
        template,
        support,
        discriminacy,
        len,
        os_tags: labels(files, |f| f.os),
        distro_tags: labels(files, |f| f.distro),
    }
}

fn ranked(mut v: Vec<CandidatePattern>) -> Vec<CandidatePattern> {
    v.sort_by(|a, b| {
        a.discriminacy
            .total_cmp(&b.discriminacy)
            .then(b.len.cmp(&a.len))
            .then_with(|| a.template.cmp(&b.template))
    });
    v
}

/// Candidates of one producer in one section that match all its files
/// and stay within the discriminacy bound, best first.
pub fn mine_producer(
    corpus: &LabeledCorpus,
    producer: &ProducerId,
    section: SectionKind,
    opts: &MineOptions,
) -> Result<Vec<CandidatePattern>, MineError> {
    let files = corpus
        .groups
        .get(producer)
        .filter(|g| !g.is_empty())
        .ok_or_else(|| MineError::EmptyGroup(Some(producer.clone())))?;
    let contents: Vec<Vec<Vec<Tok>>> = files
        .iter()
        .map(|f| element_bytes(&f.sections, section).into_iter().map(tokenize).collect())
        .collect();
    if contents.iter().all(Vec::is_empty) {
        return Err(MineError::SectionAbsentEverywhere { producer: producer.clone(), section });
    }
    let kind = kind_for(section);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for toks in lcs::common_to_all(&contents, opts.min_len_for(section)) {
        let template = lcs::render(&toks, &specialize(&toks, files, section));
        if !seen.insert(template.clone()) {
            continue;
        }
        let c = candidate(corpus, producer, section, kind, template, toks.len());
        if c.support == 1.0 && c.discriminacy <= opts.max_discriminacy {
            out.push(c);
        }
    }
    Ok(ranked(out))
}

/// The table-absence fact for a producer that never writes a classic
/// xref table, if it discriminates well enough.
fn absence_candidate(corpus: &LabeledCorpus, producer: &ProducerId, opts: &MineOptions) -> Option<CandidatePattern> {
    let c = candidate(corpus, producer, SectionKind::Xref, RuleKind::PresenceFact, "^A$".to_string(), 1);
    (c.support == 1.0 && c.discriminacy <= opts.max_discriminacy).then_some(c)
}

/// Mines one section for every producer of the corpus.
pub fn mine(
    corpus: &LabeledCorpus,
    section: SectionKind,
    opts: &MineOptions,
) -> Result<BTreeMap<ProducerId, Vec<CandidatePattern>>, MineError> {
    for m in [opts.min_len, opts.header_min_len] {
        if m < 4 {
            return Err(MineError::MinLenTooSmall(m));
        }
    }
    if corpus.is_empty() {
        return Err(MineError::EmptyGroup(None));
    }
    let producers: Vec<&ProducerId> = corpus.groups.keys().collect();
    let mined: Vec<(ProducerId, Result<Vec<CandidatePattern>, MineError>)> = producers
        .par_iter()
        .map(|p| {
            let r = match mine_producer(corpus, p, section, opts) {
                Err(MineError::SectionAbsentEverywhere { section: SectionKind::Xref, .. }) => {
                    Ok(absence_candidate(corpus, p, opts).into_iter().collect())
                }
                Err(MineError::SectionAbsentEverywhere { .. }) => Ok(Vec::new()),
                r => r,
            };
            ((*p).clone(), r)
        })
        .collect();
    mined.into_iter().map(|(p, r)| r.map(|v| (p, v))).collect()
}

/// Mines several sections and merges the lists per producer, sections in
/// canonical order.
pub fn mine_sections(
    corpus: &LabeledCorpus,
    sections: &[SectionKind],
    opts: &MineOptions,
) -> Result<BTreeMap<ProducerId, Vec<CandidatePattern>>, MineError> {
    let mut out: BTreeMap<ProducerId, Vec<CandidatePattern>> = BTreeMap::new();
    for s in SectionKind::ALL.into_iter().filter(|s| sections.contains(s)) {
        for (p, v) in mine(corpus, s, opts)? {
            out.entry(p).or_default().extend(v);
        }
    }
    Ok(out)
}

/// Rule-file text for the candidates. Ids are `<producer>-<section>-<n>`,
/// numbered per producer and section in list order.
pub fn emit_rulepack(candidates: &BTreeMap<ProducerId, Vec<CandidatePattern>>, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# name: {name}");
    let _ = writeln!(out, "# version: 1");
    let _ = writeln!(out, "# Mined rules; support and discriminacy are over the mining corpus.");
    for (p, list) in candidates {
        let mut next = [0usize; 4];
        for c in list {
            let n = &mut next[c.section.index()];
            let id = format!("{}-{}-{}", p.slug(), c.section.keyword(), n);
            *n += 1;
            out.push('\n');
            let note = format!("support {:.2}, discriminacy {:.2}", c.support, c.discriminacy);
            render_rule(&mut out, &c.to_rule(&id), &[note]);
        }
    }
    out
}
