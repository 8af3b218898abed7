//! Per-section candidate sets, the majority vote and OS inference.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::producer::{Distro, Os, ProducerId, SectionKind};
use crate::rules::{match_all, ElementRef, RuleMatch, Rulepack, SectionMatches};
use crate::segmenter::{segment, PdfSections, SegmentError, Span};

/// The producers one section points at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionVerdict {
    pub section: SectionKind,
    pub candidates: BTreeSet<ProducerId>,
    /// One match per (rule, element).
    pub supporting_matches: Vec<RuleMatch>,
}

impl SectionVerdict {
    pub fn empty(section: SectionKind) -> Self {
        SectionVerdict { section, candidates: BTreeSet::new(), supporting_matches: Vec::new() }
    }

    pub fn rule_ids(&self) -> Vec<String> {
        let ids: BTreeSet<&str> = self.supporting_matches.iter().map(|m| m.rule_id.as_str()).collect();
        ids.into_iter().map(str::to_string).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Outcome {
    Producer(ProducerId),
    Ambiguous(BTreeSet<ProducerId>),
    NoResult,
}

impl Outcome {
    pub fn producer(&self) -> Option<&ProducerId> {
        match self {
            Outcome::Producer(p) => Some(p),
            _ => None,
        }
    }
}

pub type OsCandidate = (Os, Option<Distro>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub votes: BTreeMap<ProducerId, u32>,
    /// Header, body, xref, trailer, in that order.
    pub section_verdicts: Vec<SectionVerdict>,
    pub os_candidates: BTreeSet<OsCandidate>,
}

impl Verdict {
    pub fn section(&self, kind: SectionKind) -> &SectionVerdict {
        &self.section_verdicts[kind.index()]
    }

    /// Rule ids that fired, per section.
    pub fn evidence(&self) -> BTreeMap<SectionKind, Vec<String>> {
        self.section_verdicts.iter().map(|s| (s.section, s.rule_ids())).collect()
    }
}

/// Candidate set of one section. Repeated hits of a rule in the same
/// element count once.
pub fn section_verdict(matches: &[RuleMatch], section: SectionKind) -> SectionVerdict {
    let mut seen: HashSet<(&str, ElementRef)> = HashSet::new();
    let mut supporting = Vec::new();
    for m in matches.iter().filter(|m| m.section == section) {
        if seen.insert((m.rule_id.as_str(), m.element)) {
            supporting.push(m.clone());
        }
    }
    SectionVerdict {
        section,
        candidates: supporting.iter().map(|m| m.producer.clone()).collect(),
        supporting_matches: supporting,
    }
}

/// Each section gives one vote to every producer in its candidate set.
/// A unique maximum wins; a tied maximum is ambiguous; no votes at all is
/// no result. A single vote can only be a unique maximum when no other
/// producer was named anywhere.
pub fn majority_vote(sections: &[SectionVerdict]) -> Verdict {
    let mut ordered: Vec<SectionVerdict> = SectionKind::ALL.iter().map(|&k| SectionVerdict::empty(k)).collect();
    for s in sections {
        ordered[s.section.index()] = s.clone();
    }
    let mut votes: BTreeMap<ProducerId, u32> = BTreeMap::new();
    for s in &ordered {
        for p in &s.candidates {
            *votes.entry(p.clone()).or_insert(0) += 1;
        }
    }
    let outcome = match votes.values().copied().max() {
        None => Outcome::NoResult,
        Some(top) => {
            let leaders: BTreeSet<ProducerId> =
                votes.iter().filter(|(_, &v)| v == top).map(|(p, _)| p.clone()).collect();
            if leaders.len() == 1 {
                Outcome::Producer(leaders.into_iter().next().expect("one leader"))
            } else {
                Outcome::Ambiguous(leaders)
            }
        }
    };
    Verdict { outcome, votes, section_verdicts: ordered, os_candidates: BTreeSet::new() }
}

/// Section, element, element span, offset and length of one match.
type MatchSite = (SectionKind, ElementRef, Option<Span>, usize, usize);

fn meet(a: &BTreeSet<OsCandidate>, b: &BTreeSet<OsCandidate>) -> BTreeSet<OsCandidate> {
    let mut out = BTreeSet::new();
    for &(o1, d1) in a {
        for &(o2, d2) in b {
            if o1 == o2 && (d1 == d2 || d1.is_none() || d2.is_none()) {
                out.insert((o1, d1.or(d2)));
            }
        }
    }
    out
}

/// OS claims of the winning producer's OS-tagged matches. Rules that hit
/// the same bytes are alternatives and their claims are pooled; claims
/// from different places must all hold, so they are intersected. No
/// tagged evidence means no claim.
pub fn detect_os(verdict: &Verdict, pack: &Rulepack) -> BTreeSet<OsCandidate> {
    let Outcome::Producer(winner) = &verdict.outcome else {
        return BTreeSet::new();
    };
    let mut groups: BTreeMap<MatchSite, BTreeSet<OsCandidate>> = BTreeMap::new();
    for s in &verdict.section_verdicts {
        for m in s.supporting_matches.iter().filter(|m| &m.producer == winner) {
            let Some(rule) = pack.get(&m.rule_id) else { continue };
            if rule.os_tags.is_empty() {
                continue;
            }
            let claims = groups.entry((m.section, m.element, m.element_span, m.match_offset, m.match_len)).or_default();
            for &os in &rule.os_tags {
                if rule.distro_tags.is_empty() {
                    claims.insert((os, None));
                }
                for &d in &rule.distro_tags {
                    claims.insert((os, Some(d)));
                }
            }
        }
    }
    let mut it = groups.into_values();
    let Some(first) = it.next() else {
        return BTreeSet::new();
    };
    it.fold(first, |acc, g| meet(&acc, &g))
}

/// Full detection on already segmented sections.
pub fn detect_sections(pack: &Rulepack, sections: &PdfSections) -> (Verdict, SectionMatches) {
    let matches = match_all(pack, sections);
    let verdicts: Vec<SectionVerdict> = SectionKind::ALL.iter().map(|&k| section_verdict(&matches[&k], k)).collect();
    let mut verdict = majority_vote(&verdicts);
    verdict.os_candidates = detect_os(&verdict, pack);
    (verdict, matches)
}

/// Segments, matches, votes and infers the OS.
pub fn detect(pack: &Rulepack, bytes: &[u8]) -> Result<Verdict, SegmentError> {
    Ok(detect_sections(pack, &segment(bytes)?).0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detection {
    Correct,
    Wrong,
    NoResult,
}

/// Refinement of a section that named exactly two producers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// The truth and one other producer.
    Confused,
    /// Two producers, neither the truth.
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionClass {
    pub section: SectionKind,
    /// Correct only when the section named the truth alone.
    pub detection: Detection,
    pub pair: Option<PairKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeClass {
    /// An ambiguous verdict is Wrong here.
    pub file: Detection,
    pub sections: Vec<SectionClass>,
}

pub fn classify_section(s: &SectionVerdict, truth: &ProducerId) -> SectionClass {
    let detection = match s.candidates.len() {
        0 => Detection::NoResult,
        1 if s.candidates.contains(truth) => Detection::Correct,
        _ => Detection::Wrong,
    };
    let pair = (s.candidates.len() == 2).then(|| {
        if s.candidates.contains(truth) {
            PairKind::Confused
        } else {
            PairKind::Error
        }
    });
    SectionClass { section: s.section, detection, pair }
}

pub fn classify(verdict: &Verdict, truth: &ProducerId) -> OutcomeClass {
    let file = match &verdict.outcome {
        Outcome::Producer(p) if p == truth => Detection::Correct,
        Outcome::NoResult => Detection::NoResult,
        _ => Detection::Wrong,
    };
    OutcomeClass { file, sections: verdict.section_verdicts.iter().map(|s| classify_section(s, truth)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Rule;
    use crate::rules::RuleKind;
    use ProducerId::*;

    fn sv(section: SectionKind, ps: &[ProducerId]) -> SectionVerdict {
        SectionVerdict { section, candidates: ps.iter().cloned().collect(), supporting_matches: Vec::new() }
    }

    fn four(h: &[ProducerId], b: &[ProducerId], x: &[ProducerId], t: &[ProducerId]) -> Vec<SectionVerdict> {
        vec![
            sv(SectionKind::Header, h),
            sv(SectionKind::Body, b),
            sv(SectionKind::Xref, x),
            sv(SectionKind::Trailer, t),
        ]
    }

    fn m(rule: &str, p: ProducerId, section: SectionKind, element: ElementRef) -> RuleMatch {
        RuleMatch {
            rule_id: rule.into(),
            producer: p,
            section,
            match_offset: 0,
            match_len: 4,
            element,
            element_span: Some(Span { offset: 10, len: 4 }),
        }
    }

    #[test]
    fn singleton_section() {
        let v = section_verdict(&[m("word-body-1", MicrosoftOfficeWord, SectionKind::Body, ElementRef::Header)], SectionKind::Body);
        assert_eq!(v.candidates, [MicrosoftOfficeWord].into());
    }

    #[test]
    fn shared_magic_gives_two_candidates() {
        let ms = [
            m("pdftex-header-0", PdfTeX, SectionKind::Header, ElementRef::Header),
            m("luatex-header-0", LuaTeX, SectionKind::Header, ElementRef::Header),
        ];
        assert_eq!(section_verdict(&ms, SectionKind::Header).candidates, [PdfTeX, LuaTeX].into());
        assert!(section_verdict(&[], SectionKind::Header).candidates.is_empty());
    }

    #[test]
    fn repeated_hits_deduplicated() {
        let mut a = m("r", Cairo, SectionKind::Trailer, ElementRef::Trailer { index: 0 });
        let mut b = a.clone();
        a.match_offset = 1;
        b.match_offset = 7;
        let c = m("r", Cairo, SectionKind::Trailer, ElementRef::Trailer { index: 1 });
        let v = section_verdict(&[a, b, c], SectionKind::Trailer);
        assert_eq!(v.supporting_matches.len(), 2);
    }

    #[test]
    fn strict_majority() {
        let v = majority_vote(&four(&[PdfTeX], &[PdfTeX], &[PdfTeX], &[Ghostscript]));
        assert_eq!(v.outcome, Outcome::Producer(PdfTeX));
        assert_eq!(v.votes, [(PdfTeX, 3), (Ghostscript, 1)].into());
    }

    #[test]
    fn two_two_tie_is_ambiguous() {
        let w = MicrosoftOfficeWord;
        let l = LibreOffice;
        let v = majority_vote(&four(std::slice::from_ref(&w), std::slice::from_ref(&w), std::slice::from_ref(&l), std::slice::from_ref(&l)));
        assert_eq!(v.outcome, Outcome::Ambiguous([w, l].into()));
    }

    #[test]
    fn nothing_is_no_result() {
        let v = majority_vote(&four(&[], &[], &[], &[]));
        assert_eq!(v.outcome, Outcome::NoResult);
        assert!(v.votes.is_empty());
    }

    #[test]
    fn confused_header_still_resolves() {
        let v = majority_vote(&four(&[PdfTeX, LuaTeX], &[PdfTeX], &[], &[PdfTeX, LuaTeX]));
        assert_eq!(v.outcome, Outcome::Producer(PdfTeX));
        assert_eq!(v.votes, [(PdfTeX, 3), (LuaTeX, 2)].into());
    }

    #[test]
    fn single_vote_rules() {
        assert_eq!(majority_vote(&four(&[Cairo], &[], &[], &[])).outcome, Outcome::Producer(Cairo));
        assert_eq!(
            majority_vote(&four(&[Cairo], &[], &[], &[SkiaPDF])).outcome,
            Outcome::Ambiguous([Cairo, SkiaPDF].into())
        );
    }

    #[test]
    fn classification() {
        let v = majority_vote(&four(&[Ghostscript], &[], &[Ghostscript], &[]));
        assert_eq!(classify(&v, &Ghostscript).file, Detection::Correct);
        assert_eq!(classify(&v, &Cairo).file, Detection::Wrong);
        let pair = sv(SectionKind::Header, &[PdfTeX, LuaTeX]);
        let c = classify_section(&pair, &PdfTeX);
        assert_eq!((c.detection, c.pair), (Detection::Wrong, Some(PairKind::Confused)));
        let c = classify_section(&sv(SectionKind::Trailer, &[Cairo, SkiaPDF]), &MicrosoftOfficeWord);
        assert_eq!(c.pair, Some(PairKind::Error));
        let c = classify_section(&sv(SectionKind::Body, &[]), &Cairo);
        assert_eq!((c.detection, c.pair), (Detection::NoResult, None));
        let nr = majority_vote(&four(&[], &[], &[], &[]));
        assert_eq!(classify(&nr, &Cairo).file, Detection::NoResult);
    }

    fn tagged_pack() -> Rulepack {
        let mut p = Rulepack::new("t", "1");
        let r = |id: &str, prod: ProducerId, pat: &str| Rule::new(id, prod, SectionKind::Header, RuleKind::MagicNumber, pat).unwrap();
        p.push(r("word-h", MicrosoftOfficeWord, "x").with_os([Os::Windows])).unwrap();
        p.push(r("lua-h", LuaTeX, "x").with_os([Os::Linux]).with_distro([Distro::TeXLive])).unwrap();
        p.push(r("lua-long-a", LuaTeX, "y").with_os([Os::Linux]).with_distro([Distro::MikTeX])).unwrap();
        p.push(r("lua-long-b", LuaTeX, "y").with_os([Os::MacOS, Os::Windows]).with_distro([Distro::TeXLive, Distro::MikTeX])).unwrap();
        p.push(r("pdftex-h", PdfTeX, "x").with_distro([Distro::TeXLive])).unwrap();
        p.push(r("lua-body-linux", LuaTeX, "z").with_os([Os::Linux])).unwrap();
        p.push(r("lua-body-mac", LuaTeX, "z").with_os([Os::MacOS])).unwrap();
        p
    }

    fn verdict_with(winner: ProducerId, ms: Vec<RuleMatch>) -> Verdict {
        let sections: Vec<SectionVerdict> = SectionKind::ALL.iter().map(|&k| section_verdict(&ms, k)).collect();
        let mut v = majority_vote(&sections);
        v.outcome = Outcome::Producer(winner);
        v
    }

    #[test]
    fn word_magic_means_windows() {
        let v = verdict_with(MicrosoftOfficeWord, vec![m("word-h", MicrosoftOfficeWord, SectionKind::Header, ElementRef::Header)]);
        assert_eq!(detect_os(&v, &tagged_pack()), [(Os::Windows, None)].into());
    }

    #[test]
    fn untagged_evidence_makes_no_claim() {
        let v = verdict_with(PdfTeX, vec![m("pdftex-h", PdfTeX, SectionKind::Header, ElementRef::Header)]);
        assert!(detect_os(&v, &tagged_pack()).is_empty());
    }

    #[test]
    fn luatex_short_magic_means_linux_texlive() {
        let v = verdict_with(LuaTeX, vec![
            m("lua-h", LuaTeX, SectionKind::Header, ElementRef::Header),
            m("pdftex-h", PdfTeX, SectionKind::Header, ElementRef::Header),
        ]);
        assert_eq!(detect_os(&v, &tagged_pack()), [(Os::Linux, Some(Distro::TeXLive))].into());
    }

    #[test]
    fn same_bytes_pool_and_other_places_intersect() {
        let header = vec![
            m("lua-long-a", LuaTeX, SectionKind::Header, ElementRef::Header),
            m("lua-long-b", LuaTeX, SectionKind::Header, ElementRef::Header),
        ];
        let v = verdict_with(LuaTeX, header.clone());
        assert_eq!(detect_os(&v, &tagged_pack()).len(), 5);

        let mut with_body = header;
        with_body.push(m("lua-body-linux", LuaTeX, SectionKind::Body, ElementRef::Object { index: 2, obj_num: 4, gen_num: 0 }));
        let v = verdict_with(LuaTeX, with_body);
        assert_eq!(detect_os(&v, &tagged_pack()), [(Os::Linux, Some(Distro::MikTeX))].into());
    }

    #[test]
    fn contradictory_places_yield_nothing() {
        let obj = |i| ElementRef::Object { index: i, obj_num: i as u32, gen_num: 0 };
        let v = verdict_with(LuaTeX, vec![
            m("lua-body-linux", LuaTeX, SectionKind::Body, obj(1)),
            m("lua-body-mac", LuaTeX, SectionKind::Body, obj(2)),
        ]);
        assert!(detect_os(&v, &tagged_pack()).is_empty());
    }

    #[test]
    fn no_claim_without_a_winner() {
        let mut v = verdict_with(MicrosoftOfficeWord, vec![m("word-h", MicrosoftOfficeWord, SectionKind::Header, ElementRef::Header)]);
        v.outcome = Outcome::NoResult;
        assert!(detect_os(&v, &tagged_pack()).is_empty());
    }
}
