use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Rule, RuleKind, Rulepack};
use crate::producer::{ProducerId, SectionKind};
use crate::segmenter::{segment, PdfSections, SegmentError, Span};

/// Which element of a section a match came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "element", rename_all = "snake_case")]
pub enum ElementRef {
    Header,
    Object { index: usize, obj_num: u32, gen_num: u16 },
    XrefTable { index: usize },
    /// The synthesized one-byte presence token.
    XrefPresence,
    Trailer { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleMatch {
    pub rule_id: String,
    pub producer: ProducerId,
    pub section: SectionKind,
    /// Offset relative to the start of the matched element.
    pub match_offset: usize,
    pub match_len: usize,
    pub element: ElementRef,
    /// Where the matched element sits in the file, if it has bytes there.
    pub element_span: Option<Span>,
}

pub type SectionMatches = BTreeMap<SectionKind, Vec<RuleMatch>>;

/// `P` when a classic xref table exists, `A` when none does.
pub fn presence_token(sections: &PdfSections) -> &'static [u8] {
    if sections.classic_xref_absent {
        b"A"
    } else {
        b"P"
    }
}

struct Element<'a> {
    at: ElementRef,
    span: Option<Span>,
    bytes: &'a [u8],
}

fn elements<'a>(sections: &'a PdfSections, section: SectionKind, kind: RuleKind) -> Vec<Element<'a>> {
    match section {
        SectionKind::Header => sections
            .header
            .binary_comment
            .as_deref()
            .map(|b| Element { at: ElementRef::Header, span: sections.header.comment_span, bytes: b })
            .into_iter()
            .collect(),
        SectionKind::Body => sections
            .content_objects()
            .map(|(index, o)| Element {
                at: ElementRef::Object { index, obj_num: o.obj_num, gen_num: o.gen_num },
                span: Some(o.span),
                bytes: &o.raw,
            })
            .collect(),
        SectionKind::Xref if kind == RuleKind::PresenceFact => {
            vec![Element { at: ElementRef::XrefPresence, span: None, bytes: presence_token(sections) }]
        }
        SectionKind::Xref => sections
            .xref_tables
            .iter()
            .enumerate()
            .map(|(index, t)| Element { at: ElementRef::XrefTable { index }, span: Some(t.span), bytes: &t.raw })
            .collect(),
        SectionKind::Trailer => sections
            .trailers
            .iter()
            .enumerate()
            .map(|(index, t)| Element { at: ElementRef::Trailer { index }, span: Some(t.span), bytes: &t.raw })
            .collect(),
    }
}

/// Bytes that rules of any kind but presence see in `section`.
pub(crate) fn element_bytes(sections: &PdfSections, section: SectionKind) -> Vec<&[u8]> {
    elements(sections, section, RuleKind::Template).into_iter().map(|e| e.bytes).collect()
}

/// Whether `rule` matches anywhere in its section.
pub(crate) fn rule_hits(rule: &Rule, sections: &PdfSections) -> bool {
    elements(sections, rule.section, rule.kind).iter().any(|e| rule.is_match(e.bytes))
}

/// Runs every rule of `section`, one match per occurrence, ordered by rule
/// id, then element, then offset. Metadata objects never take part.
pub fn match_section(pack: &Rulepack, sections: &PdfSections, section: SectionKind) -> Vec<RuleMatch> {
    let mut out = Vec::new();
    for rule in pack.rules_for(section) {
        for el in elements(sections, section, rule.kind) {
            for m in rule.regex().find_iter(el.bytes) {
                out.push(RuleMatch {
                    rule_id: rule.id.0.clone(),
                    producer: rule.producer.clone(),
                    section,
                    match_offset: m.start(),
                    match_len: m.len(),
                    element: el.at,
                    element_span: el.span,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (&a.rule_id, a.element, a.match_offset, a.match_len).cmp(&(&b.rule_id, b.element, b.match_offset, b.match_len))
    });
    out
}

pub fn match_all(pack: &Rulepack, sections: &PdfSections) -> SectionMatches {
    SectionKind::ALL.into_iter().map(|s| (s, match_section(pack, sections, s))).collect()
}

/// Segments `bytes` and matches all four sections.
pub fn evaluate_file(pack: &Rulepack, bytes: &[u8]) -> Result<SectionMatches, SegmentError> {
    Ok(match_all(pack, &segment(bytes)?))
}
