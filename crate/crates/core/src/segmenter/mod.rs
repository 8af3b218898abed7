//! Lexical segmentation of raw PDF bytes into header, body objects,
//! cross-reference tables and trailers.
//!
//! Nothing here interprets the document model. Objects are found by
//! scanning for `N G obj ... endobj`, classic xref tables and `trailer`
//! dictionaries are read from the bytes between objects, and objects whose
//! dictionary carries `/Type /XRef` double as trailers. Every element keeps
//! the byte span it was read from, so `&file[span]` reproduces its `raw`.

mod header;
pub mod lexer;
mod objects;
mod trailer;
mod xref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use header::parse_header;
pub use lexer::{Dict, PdfValue};
pub use xref::{render_entry, XrefEntry, XrefKind, XrefSubsection, XrefTable};

/// How far into the file the `%PDF` magic may appear.
pub const HEADER_SCAN_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("not a PDF: no %PDF magic in the first {HEADER_SCAN_LIMIT} bytes")]
    NotAPdf,
}

/// A byte range of the source file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub offset: usize,
    pub len: usize,
}

impl Span {
    pub fn new(offset: usize, end: usize) -> Self {
        Span { offset, len: end - offset }
    }

    pub fn end(&self) -> usize {
        self.offset + self.len
    }

    pub fn slice<'a>(&self, data: &'a [u8]) -> &'a [u8] {
        &data[self.offset..self.end()]
    }

    pub fn contains(&self, other: &Span) -> bool {
        other.offset >= self.offset && other.end() <= self.end()
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.offset < other.end() && other.offset < self.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    MalformedHeader,
    ShortBinaryComment,
    TruncatedObject,
    MalformedXrefEntry,
    ShortXrefSubsection,
    UnparseableTrailer,
}

/// A non-fatal irregularity found while segmenting.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub offset: usize,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn new(kind: DiagnosticKind, offset: usize, message: impl Into<String>) -> Self {
        Diagnostic { kind, offset, message: message.into() }
    }
}

/// The two header comment lines.
#[derive(Debug, Clone, PartialEq)]
pub struct HeaderInfo {
    /// `m.n` from `%PDF-m.n`.
    pub version: String,
    /// Bytes of the second comment line, `%` and end-of-line removed.
    pub binary_comment: Option<Vec<u8>>,
    /// Both header lines, from the `%PDF` magic on.
    pub span: Span,
    /// Where `binary_comment` sits in the file.
    pub comment_span: Option<Span>,
}

/// One `N G obj ... endobj` element of the body.
#[derive(Debug, Clone, PartialEq)]
pub struct IndirectObject {
    pub obj_num: u32,
    pub gen_num: u16,
    pub raw: Vec<u8>,
    pub span: Span,
    /// Top-level dictionary keys in source order.
    pub dict_keys: Vec<String>,
    pub dict: Option<Dict>,
    /// The top-level `<< ... >>`, when the object is a dictionary.
    pub dict_span: Option<Span>,
    pub has_stream: bool,
    /// Stream payload between `stream<eol>` and `endstream`.
    pub stream_span: Option<Span>,
    /// Document information dictionary or a `/Type /Metadata` stream.
    pub is_metadata: bool,
    /// No `endobj` was found before the next object or end of file.
    pub truncated: bool,
}

impl IndirectObject {
    pub fn is_xref_stream(&self) -> bool {
        self.dict.as_ref().is_some_and(|d| d.name_is("/Type", "/XRef"))
    }

    pub fn is_metadata_stream(&self) -> bool {
        self.dict.as_ref().is_some_and(|d| d.name_is("/Type", "/Metadata"))
    }
}

/// Whether a trailer came from a `trailer` keyword or from an xref stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrailerSource {
    Keyword,
    XrefStream { obj_num: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrailerDict {
    /// Top-level keys in source order.
    pub keys: Vec<String>,
    pub raw: Vec<u8>,
    pub span: Span,
    pub dict: Option<Dict>,
    pub startxref_value: Option<u64>,
    pub source: TrailerSource,
}

impl TrailerDict {
    /// Target of `/Info`, or of `/info` when only that spelling is present.
    pub fn info_ref(&self) -> Option<(u32, u16)> {
        let d = self.dict.as_ref()?;
        d.get("/Info").or_else(|| d.get("/info"))?.as_ref()
    }
}

/// A segmented PDF file.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfSections {
    pub header: HeaderInfo,
    pub objects: Vec<IndirectObject>,
    pub xref_tables: Vec<XrefTable>,
    pub trailers: Vec<TrailerDict>,
    pub file_len: usize,
    pub classic_xref_absent: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl PdfSections {
    /// Object referenced by `/Info` in the most recent trailer that has one.
    pub fn info_ref(&self) -> Option<(u32, u16)> {
        self.trailers.iter().rev().find_map(TrailerDict::info_ref)
    }

    /// Objects that take part in style analysis (metadata excluded).
    pub fn content_objects(&self) -> impl Iterator<Item = (usize, &IndirectObject)> {
        self.objects.iter().enumerate().filter(|(_, o)| !o.is_metadata)
    }

    pub fn metadata_objects(&self) -> impl Iterator<Item = &IndirectObject> {
        self.objects.iter().filter(|o| o.is_metadata)
    }
}

/// Lists every indirect object, with metadata objects flagged.
pub fn extract_objects(bytes: &[u8]) -> Vec<IndirectObject> {
    let mut diags = Vec::new();
    let mut objs = objects::scan(bytes, &mut diags);
    let trailers = trailer::collect(bytes, &objs, &mut diags);
    objects::flag_metadata(&mut objs, trailers.iter().rev().find_map(TrailerDict::info_ref));
    objs
}

/// All classic `xref` tables in byte order.
pub fn parse_xref(bytes: &[u8]) -> Vec<XrefTable> {
    let mut diags = Vec::new();
    let objs = objects::scan(bytes, &mut diags);
    xref::collect(bytes, &objs, &mut diags)
}

/// All trailer dictionaries, keyword and xref-stream alike, in byte order.
pub fn extract_trailers(bytes: &[u8]) -> Vec<TrailerDict> {
    let mut diags = Vec::new();
    let objs = objects::scan(bytes, &mut diags);
    trailer::collect(bytes, &objs, &mut diags)
}

/// Segments a whole file.
pub fn segment(bytes: &[u8]) -> Result<PdfSections, SegmentError> {
    let mut diagnostics = Vec::new();
    let header = header::parse(bytes, &mut diagnostics)?;
    let mut objects = objects::scan(bytes, &mut diagnostics);
    let xref_tables = xref::collect(bytes, &objects, &mut diagnostics);
    let trailers = trailer::collect(bytes, &objects, &mut diagnostics);
    objects::flag_metadata(&mut objects, trailers.iter().rev().find_map(TrailerDict::info_ref));
    diagnostics.sort();
    Ok(PdfSections {
        classic_xref_absent: xref_tables.is_empty(),
        header,
        objects,
        xref_tables,
        trailers,
        file_len: bytes.len(),
        diagnostics,
    })
}

/// Byte ranges between body objects, where xref tables and trailers live.
pub(crate) fn gaps(file_len: usize, objects: &[IndirectObject]) -> Vec<Span> {
    let mut out = Vec::new();
    let mut cursor = 0;
    for o in objects {
        if o.span.offset > cursor {
            out.push(Span::new(cursor, o.span.offset));
        }
        cursor = cursor.max(o.span.end());
    }
    if cursor < file_len {
        out.push(Span::new(cursor, file_len));
    }
    out
}
