//! Identify the software that produced a PDF file from how it wrote its
//! bytes rather than from what it claims in its metadata.
//!
//! A file is cut into header, body, cross-reference table and trailer
//! ([`segmenter`]). Each section is matched against a rulepack of byte
//! regular expressions ([`rules`], [`builtin`]), each section names a set
//! of candidate producers, and a majority vote decides ([`detector`]).
//! The verdict can be compared with the declared `/Producer` ([`audit`]),
//! new rules can be mined from a labelled corpus ([`miner`]), and
//! synthetic files for every known producer come from [`fixtures`].

pub mod audit;
pub mod builtin;
pub mod cli;
pub mod detector;
pub mod fixtures;
pub mod miner;
pub mod producer;
pub mod rules;
pub mod segmenter;

pub use audit::{consistency_check, extract_declared, normalize_producer_string, ConsistencyReport, ConsistencyStatus, DeclaredMetadata};
pub use detector::{classify, detect, detect_os, majority_vote, section_verdict, Outcome, SectionVerdict, Verdict};
pub use producer::{Distro, Os, ProducerId, SectionKind};
pub use rules::{evaluate_file, load_rulepack, match_section, Rule, RuleKind, RuleMatch, Rulepack};
pub use segmenter::{segment, PdfSections, SegmentError};
