//! The embedded rulepack of known producer signatures.
//!
//! `rules/builtin.rules` is generated from [`tables`] by [`render_builtin`]
//! and checked in; a unit test keeps the two identical. Run the tests with
//! `PDFSTYLE_BLESS=1` to rewrite the file after editing the tables.

pub mod tables;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::producer::{ProducerId, SectionKind};
use crate::rules::{self, escape_pattern_literal, load_rulepack, Rule, RuleKind, Rulepack};

use tables::{TrailerForm, TrailerKeySignature};

pub const BUILTIN_SOURCE: &str = include_str!("../../rules/builtin.rules");
pub const PACK_NAME: &str = "builtin";
pub const PACK_VERSION: &str = "1";

/// The builtin pack, parsed once.
pub fn builtin() -> &'static Rulepack {
    static PACK: OnceLock<Rulepack> = OnceLock::new();
    PACK.get_or_init(|| load_rulepack(BUILTIN_SOURCE).expect("embedded builtin.rules is valid"))
}

fn key_token(key: &str) -> String {
    // the catalogue spells this one key in lowercase; accept both
    if key == "/info" {
        "/[Ii]nfo".to_string()
    } else {
        key.to_string()
    }
}

/// Regex for a trailer whose name tokens appear in exactly this order.
pub fn keyorder_pattern(sig: &TrailerKeySignature) -> String {
    let mut p = String::new();
    match sig.form {
        TrailerForm::Keyword => p.push_str(r"trailer\s*"),
        TrailerForm::XrefStream => {}
    }
    p.push_str(r"<<\s*");
    let mut keys = sig.key_sequence.iter().peekable();
    while let Some(k) = keys.next() {
        let last = keys.peek().is_none();
        p.push_str(&key_token(k));
        if *k == "/DocChecksum" && last {
            p.push_str(r"\s*/[0-9A-Fa-f]+\s*");
        } else {
            p.push_str("[^/]*");
        }
    }
    p.push_str(">>");
    p
}

/// Inverse of [`keyorder_pattern`]: the name tokens a pattern requires.
pub fn keys_of_pattern(pattern: &str) -> Vec<String> {
    let re = regex::Regex::new(r"/(\[Ii\])?[A-Za-z]+").expect("token regex");
    re.find_iter(pattern)
        .map(|m| m.as_str().replace("[Ii]", "i"))
        .collect()
}

struct Entry {
    rule: Rule,
    comments: Vec<String>,
}

fn entries() -> Vec<Entry> {
    let mut out: Vec<Entry> = Vec::new();
    let mut next_index: BTreeMap<(ProducerId, SectionKind), usize> = BTreeMap::new();
    let mut id = |p: &ProducerId, s: SectionKind| {
        let n = next_index.entry((p.clone(), s)).or_insert(0);
        let id = format!("{}-{}-{}", p.slug(), s.keyword(), n);
        *n += 1;
        id
    };
    let mk = |id: String, p: &ProducerId, s, k, pat: String| Rule::new(id, p.clone(), s, k, pat).expect("builtin pattern compiles");

    for m in tables::magic_numbers() {
        let hex: String = m.bytes.iter().map(|b| format!("{b:02X}")).collect();
        let mut comments = vec![format!("magic 0x{hex}")];
        comments.extend(m.note.map(str::to_string));
        let rule = mk(id(&m.producer, SectionKind::Header), &m.producer, SectionKind::Header, RuleKind::MagicNumber, escape_pattern_literal(m.bytes))
            .with_os(m.os.iter().copied())
            .with_distro(m.distro.iter().copied());
        out.push(Entry { rule, comments });
    }

    for t in tables::body_templates() {
        let rule = mk(id(&t.producer, SectionKind::Body), &t.producer, SectionKind::Body, RuleKind::Template, t.pattern.to_string())
            .with_os(t.os.iter().copied());
        out.push(Entry { rule, comments: vec![t.note.to_string()] });
    }

    for f in tables::presence_facts() {
        let (pat, what) = if f.table_present { ("^P$", "writes") } else { ("^A$", "omits") };
        let rule = mk(id(&f.producer, SectionKind::Xref), &f.producer, SectionKind::Xref, RuleKind::PresenceFact, pat.to_string())
            .with_distro(f.distro.iter().copied());
        out.push(Entry { rule, comments: vec![format!("{what} a classic xref table")] });
    }

    for s in tables::trailer_signatures() {
        let mut comments = vec![format!("keys: {}", s.key_sequence.join(" "))];
        if !s.shared_with.is_empty() {
            let names: Vec<&str> = s.shared_with.iter().map(ProducerId::canonical_name).collect();
            comments.push(format!("shared with: {}", names.join(", ")));
        }
        if s.key_sequence.contains(&"/info") {
            comments.push("catalogued as /info; both casings match".to_string());
        }
        let rule = mk(id(&s.producer, SectionKind::Trailer), &s.producer, SectionKind::Trailer, RuleKind::KeyOrder, keyorder_pattern(&s))
            .with_distro(s.distro.iter().copied());
        out.push(Entry { rule, comments });
    }

    for t in tables::trailer_templates() {
        let rule = mk(id(&t.producer, SectionKind::Trailer), &t.producer, SectionKind::Trailer, RuleKind::Template, t.pattern.to_string())
            .with_os(t.os.iter().copied());
        out.push(Entry { rule, comments: vec![t.note.to_string()] });
    }
    out
}

/// The text of `rules/builtin.rules`.
pub fn render_builtin() -> String {
    let entries = entries();
    let mut counts: BTreeMap<ProducerId, usize> = BTreeMap::new();
    for e in &entries {
        *counts.entry(e.rule.producer.clone()).or_insert(0) += 1;
    }
    let mut out = format!("# name: {PACK_NAME}\n# version: {PACK_VERSION}\n#\n");
    out.push_str("# Known producer signatures. Generated from src/builtin/tables.rs.\n");
    out.push_str("# Coverage against each producer's full reference rule set:\n");
    for (p, full) in tables::reference_rule_counts() {
        let have = counts.get(&p).copied().unwrap_or(0);
        out.push_str(&format!("#   {:<20} {have:>2} of {full}\n", p.canonical_name()));
    }
    for e in &entries {
        out.push('\n');
        rules::render_rule(&mut out, &e.rule, &e.comments);
    }
    out
}
