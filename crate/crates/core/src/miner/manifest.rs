//! Corpus manifests: `<path>\t<producer>\t[os]\t[distro]`, one file per line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::producer::{Distro, Os, ProducerId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("manifest line {line}: {reason}")]
pub struct ManifestError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub producer: ProducerId,
    pub os: Option<Os>,
    pub distro: Option<Distro>,
}

impl ManifestEntry {
    /// Path of the file, relative entries taken from `base`.
    pub fn resolve(&self, base: &Path) -> PathBuf {
        if self.path.is_absolute() {
            self.path.clone()
        } else {
            base.join(&self.path)
        }
    }
}

fn optional<T>(field: Option<&str>, line: usize, what: &str, f: fn(&str) -> Option<T>) -> Result<Option<T>, ManifestError> {
    match field.map(str::trim) {
        None | Some("") | Some("-") => Ok(None),
        Some(v) => f(v).map(Some).ok_or_else(|| ManifestError { line, reason: format!("unknown {what} {v:?}") }),
    }
}

/// Blank lines and lines starting with `#` are skipped. An empty or `-`
/// os or distro field means unlabelled.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, ManifestError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let mut fields = raw.split('\t');
        let path = fields.next().unwrap_or_default();
        let producer = fields.next().map(str::trim).unwrap_or_default();
        if path.is_empty() || producer.is_empty() {
            return Err(ManifestError { line, reason: "expected <path>\\t<producer>".into() });
        }
        let os = optional(fields.next(), line, "os", Os::from_keyword)?;
        let distro = optional(fields.next(), line, "distro", Distro::from_keyword)?;
        if fields.next().is_some() {
            return Err(ManifestError { line, reason: "more than four fields".into() });
        }
        let producer = producer.parse().unwrap_or_else(|never| match never {});
        out.push(ManifestEntry { path: PathBuf::from(path), producer, os, distro });
    }
    Ok(out)
}

pub fn render_manifest(entries: &[ManifestEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            e.path.display(),
            e.producer.canonical_name(),
            e.os.map_or("-", Os::keyword),
            e.distro.map_or("-", Distro::keyword)
        );
    }
    out
}
