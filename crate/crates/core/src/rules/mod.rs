//! Declarative byte-pattern rules and their execution.
//!
//! A rule binds one byte regular expression to one producer and one file
//! section. Patterns are compiled with Unicode disabled, so `\xE2` is the
//! raw byte 0xE2 and `[^/]` is any byte but `/`.

mod engine;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use regex::bytes::{Regex, RegexBuilder};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::producer::{Distro, Os, ProducerId, SectionKind};

pub use engine::{evaluate_file, match_all, match_section, presence_token, ElementRef, RuleMatch, SectionMatches};
pub use parse::{escape_pattern_literal, load_rulepack, render_rulepack};
pub(crate) use engine::{element_bytes, rule_hits};
pub(crate) use parse::render_rule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RulepackError {
    #[error("line {line}: {reason}")]
    RuleParse { line: usize, reason: String },
    #[error("rule {rule_id}: pattern does not compile: {reason}")]
    PatternCompile { rule_id: String, reason: String },
}

/// Identifier of a rule, unique within its pack.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RuleId(pub String);

impl RuleId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_valid(s: &str) -> bool {
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.'))
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for RuleId {
    fn from(s: &str) -> Self {
        RuleId(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    #[serde(rename = "magic")]
    MagicNumber,
    #[serde(rename = "keyorder")]
    KeyOrder,
    Template,
    #[serde(rename = "presence")]
    PresenceFact,
}

impl RuleKind {
    pub const ALL: [RuleKind; 4] = [RuleKind::MagicNumber, RuleKind::KeyOrder, RuleKind::Template, RuleKind::PresenceFact];

    pub fn keyword(self) -> &'static str {
        match self {
            RuleKind::MagicNumber => "magic",
            RuleKind::KeyOrder => "keyorder",
            RuleKind::Template => "template",
            RuleKind::PresenceFact => "presence",
        }
    }

    pub fn from_keyword(s: &str) -> Option<RuleKind> {
        RuleKind::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

/// One compiled signature.
#[derive(Debug, Clone)]
pub struct Rule {
    pub id: RuleId,
    pub producer: ProducerId,
    pub section: SectionKind,
    pub kind: RuleKind,
    /// Pattern source exactly as written in the rule file.
    pub pattern: String,
    /// Empty means the rule says nothing about the OS.
    pub os_tags: BTreeSet<Os>,
    pub distro_tags: BTreeSet<Distro>,
    regex: Regex,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.producer == other.producer
            && self.section == other.section
            && self.kind == other.kind
            && self.pattern == other.pattern
            && self.os_tags == other.os_tags
            && self.distro_tags == other.distro_tags
    }
}

pub(crate) fn compile(pattern: &str) -> Result<Regex, regex::Error> {
    RegexBuilder::new(pattern).unicode(false).build()
}

impl Rule {
    pub fn new(
        id: impl Into<String>,
        producer: ProducerId,
        section: SectionKind,
        kind: RuleKind,
        pattern: impl Into<String>,
    ) -> Result<Rule, RulepackError> {
        let id = id.into();
        let pattern = pattern.into();
        let regex = compile(&pattern)
            .map_err(|e| RulepackError::PatternCompile { rule_id: id.clone(), reason: e.to_string() })?;
        Ok(Rule {
            id: RuleId(id),
            producer,
            section,
            kind,
            pattern,
            os_tags: BTreeSet::new(),
            distro_tags: BTreeSet::new(),
            regex,
        })
    }

    pub fn with_os(mut self, os: impl IntoIterator<Item = Os>) -> Self {
        self.os_tags.extend(os);
        self
    }

    pub fn with_distro(mut self, distro: impl IntoIterator<Item = Distro>) -> Self {
        self.distro_tags.extend(distro);
        self
    }

    pub fn regex(&self) -> &Regex {
        &self.regex
    }

    pub fn is_match(&self, bytes: &[u8]) -> bool {
        self.regex.is_match(bytes)
    }
}

/// A named, versioned collection of rules with unique ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Rulepack {
    pub name: String,
    pub version: String,
    rules: Vec<Rule>,
}

impl Rulepack {
    pub fn new(name: impl Into<String>, version: impl Into<String>) -> Self {
        Rulepack { name: name.into(), version: version.into(), rules: Vec::new() }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id.as_str() == id)
    }

    /// Appends a rule, rejecting a duplicate id.
    pub fn push(&mut self, rule: Rule) -> Result<(), RulepackError> {
        if self.get(rule.id.as_str()).is_some() {
            return Err(RulepackError::RuleParse {
                line: 0,
                reason: format!("duplicate rule id {}", rule.id),
            });
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn counts_by_producer(&self) -> BTreeMap<ProducerId, usize> {
        let mut m = BTreeMap::new();
        for r in &self.rules {
            *m.entry(r.producer.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn rules_for(&self, section: SectionKind) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| r.section == section)
    }

    /// Keeps only rules of the given sections.
    pub fn restricted(&self, sections: &[SectionKind]) -> Rulepack {
        Rulepack {
            name: self.name.clone(),
            version: self.version.clone(),
            rules: self.rules.iter().filter(|r| sections.contains(&r.section)).cloned().collect(),
        }
    }
}
