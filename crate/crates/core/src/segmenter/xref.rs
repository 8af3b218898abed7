use serde::{Deserialize, Serialize};

use super::lexer::{is_whitespace, keyword_at, skip_ws};
use super::{gaps, Diagnostic, DiagnosticKind, IndirectObject, Span};

/// Fixed part of an entry: 10 offset digits, space, 5 generation digits,
/// space, kind letter.
pub const ENTRY_CORE_LEN: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum XrefKind {
    InUse,
    Free,
}

impl XrefKind {
    pub fn letter(self) -> char {
        match self {
            XrefKind::InUse => 'n',
            XrefKind::Free => 'f',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XrefEntry {
    pub offset: u64,
    pub generation: u32,
    pub kind: XrefKind,
    /// Bytes consumed including the end-of-line, 18 to 20.
    pub raw_len: usize,
}

/// Renders the 18-byte fixed part of an entry.
pub fn render_entry(e: &XrefEntry) -> String {
    format!("{:010} {:05} {}", e.offset, e.generation, e.kind.letter())
}

#[derive(Debug, Clone, PartialEq)]
pub struct XrefSubsection {
    pub first_obj: u64,
    pub count: u64,
    pub entries: Vec<XrefEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XrefTable {
    pub subsections: Vec<XrefSubsection>,
    /// Offset of the `xref` keyword.
    pub start_offset: usize,
    pub raw: Vec<u8>,
    pub span: Span,
}

fn digits(data: &[u8], pos: usize, n: usize) -> Option<u64> {
    let s = data.get(pos..pos + n)?;
    if !s.iter().all(u8::is_ascii_digit) {
        return None;
    }
    std::str::from_utf8(s).ok()?.parse().ok()
}

fn parse_entry(data: &[u8], pos: usize) -> Option<XrefEntry> {
    let offset = digits(data, pos, 10)?;
    if data.get(pos + 10) != Some(&b' ') {
        return None;
    }
    let generation = u32::try_from(digits(data, pos + 11, 5)?).ok()?;
    if data.get(pos + 16) != Some(&b' ') {
        return None;
    }
    let kind = match data.get(pos + 17)? {
        b'n' => XrefKind::InUse,
        b'f' => XrefKind::Free,
        _ => return None,
    };
    let mut len = ENTRY_CORE_LEN;
    let tail = &data[(pos + len).min(data.len())..];
    len += match tail {
        [b'\r', b'\n', ..] | [b' ', b'\n', ..] | [b' ', b'\r', ..] => 2,
        [b'\n', ..] | [b'\r', ..] | [b' ', ..] => 1,
        _ => 0,
    };
    Some(XrefEntry { offset, generation, kind, raw_len: len })
}

/// Reads `first count<eol>` at `pos`. Entry lines do not qualify because a
/// kind letter follows their second number.
fn parse_subsection_header(data: &[u8], pos: usize) -> Option<(u64, u64, usize)> {
    let num = |p: usize| -> Option<(u64, usize)> {
        let mut e = p;
        while e < data.len() && data[e].is_ascii_digit() {
            e += 1;
        }
        if e == p {
            return None;
        }
        Some((std::str::from_utf8(&data[p..e]).ok()?.parse().ok()?, e))
    };
    let (first, p) = num(pos)?;
    let mut p2 = p;
    while data.get(p2) == Some(&b' ') {
        p2 += 1;
    }
    if p2 == p {
        return None;
    }
    let (count, mut p3) = num(p2)?;
    while data.get(p3) == Some(&b' ') {
        p3 += 1;
    }
    match data.get(p3) {
        Some(b'\r') | Some(b'\n') | None => Some((first, count, p3)),
        _ => None,
    }
}

fn skip_line(data: &[u8], mut pos: usize) -> usize {
    while pos < data.len() && data[pos] != b'\n' && data[pos] != b'\r' {
        pos += 1;
    }
    while pos < data.len() && (data[pos] == b'\n' || data[pos] == b'\r') {
        pos += 1;
    }
    pos
}

pub(super) fn parse_table(data: &[u8], start: usize, diags: &mut Vec<Diagnostic>) -> XrefTable {
    let mut pos = start + b"xref".len();
    let mut end = pos;
    let mut subsections = Vec::new();
    loop {
        let p = skip_ws(data, pos);
        let Some((first_obj, count, after)) = parse_subsection_header(data, p) else {
            break;
        };
        pos = after;
        end = after;
        let mut entries = Vec::new();
        for i in 0..count {
            while pos < data.len() && matches!(data[pos], b'\r' | b'\n') {
                pos += 1;
            }
            if pos >= data.len() || !data[pos].is_ascii_digit() {
                diags.push(Diagnostic::new(
                    DiagnosticKind::ShortXrefSubsection,
                    pos,
                    format!("subsection {first_obj} {count} ended after {i} entries"),
                ));
                break;
            }
            match parse_entry(data, pos) {
                Some(e) => {
                    pos += e.raw_len;
                    end = pos;
                    entries.push(e);
                }
                None => {
                    diags.push(Diagnostic::new(
                        DiagnosticKind::MalformedXrefEntry,
                        pos,
                        "entry does not follow the 10+5 digit layout",
                    ));
                    pos = skip_line(data, pos);
                    end = pos;
                }
            }
        }
        subsections.push(XrefSubsection { first_obj, count, entries });
    }
    // trailing eol bytes belong to the table, not to what follows
    let mut tail = end;
    while tail < data.len() && matches!(data[tail], b'\r' | b'\n') && tail - end < 2 {
        tail += 1;
    }
    let span = Span::new(start, tail.max(end));
    XrefTable { subsections, start_offset: start, raw: span.slice(data).to_vec(), span }
}

pub(super) fn collect(data: &[u8], objects: &[IndirectObject], diags: &mut Vec<Diagnostic>) -> Vec<XrefTable> {
    let mut out = Vec::new();
    for gap in gaps(data.len(), objects) {
        let mut pos = gap.offset;
        while pos < gap.end() {
            let Some(at) = find_keyword(data, pos, gap.end(), b"xref") else {
                break;
            };
            let table = parse_table(data, at, diags);
            pos = table.span.end().max(at + 4);
            // an `xref 0 0` stub of a hybrid file indexes nothing
            if table.subsections.iter().any(|s| s.count > 0) {
                out.push(table);
            }
        }
    }
    out
}

/// Finds `word` as a whole token (so `startxref` never matches `xref`).
pub(super) fn find_keyword(data: &[u8], from: usize, to: usize, word: &[u8]) -> Option<usize> {
    let mut p = from;
    while p + word.len() <= to {
        if data[p..].starts_with(word)
            && (p == 0 || is_whitespace(data[p - 1]) || data[p - 1] == b'>')
            && keyword_at(data, p, word)
        {
            return Some(p);
        }
        p += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORD_TABLE: &[u8] = b"xref\n0 5\n0000000010 65535 f \n0000000017 00000 n \n0000000166 00000 n \n0000000222 00000 n \n0000000486 00000 n \ntrailer\n";

    #[test]
    fn word_table() {
        let mut d = Vec::new();
        let t = parse_table(WORD_TABLE, 0, &mut d);
        assert!(d.is_empty());
        assert_eq!(t.subsections.len(), 1);
        let s = &t.subsections[0];
        assert_eq!((s.first_obj, s.count), (0, 5));
        assert_eq!(s.entries.len(), 5);
        assert_eq!(
            s.entries[0],
            XrefEntry { offset: 10, generation: 65535, kind: XrefKind::Free, raw_len: 20 }
        );
        assert_eq!(s.entries[4].offset, 486);
        assert!(t.raw.ends_with(b"0000000486 00000 n \n"));
    }

    #[test]
    fn eol_variants_and_raw_len() {
        for (eol, len) in [(&b"\r\n"[..], 20), (b" \n", 20), (b" \r", 20), (b"\n", 19), (b"\r", 19)] {
            let mut src = b"xref\n0 2\n".to_vec();
            for _ in 0..2 {
                src.extend(b"0000000000 65535 f");
                src.extend(eol);
            }
            src.extend(b"trailer");
            let mut d = Vec::new();
            let t = parse_table(&src, 0, &mut d);
            assert!(d.is_empty(), "{eol:?}: {d:?}");
            assert_eq!(t.subsections[0].entries.len(), 2);
            assert!(t.subsections[0].entries.iter().all(|e| e.raw_len == len));
        }
    }

    #[test]
    fn malformed_entry_is_skipped_and_reported() {
        let src = b"xref\n0 3\n0000000000 65535 f \n00000017 00000 n \n0000000166 00000 n \ntrailer";
        let mut d = Vec::new();
        let t = parse_table(src, 0, &mut d);
        assert_eq!(t.subsections[0].entries.len(), 2);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::MalformedXrefEntry);
    }

    #[test]
    fn several_subsections_and_empty_one() {
        let src = b"xref\n0 1\n0000000000 65535 f \n3 1\n0000000025 00000 n \ntrailer";
        let mut d = Vec::new();
        let t = parse_table(src, 0, &mut d);
        assert_eq!(t.subsections.len(), 2);
        assert_eq!(t.subsections[1].first_obj, 3);

        let t = parse_table(b"xref\n0 0\ntrailer", 0, &mut d);
        assert_eq!(t.subsections.len(), 1);
        assert!(t.subsections[0].entries.is_empty());
    }

    #[test]
    fn startxref_is_not_an_xref_keyword() {
        let src = b"startxref\n123\n%%EOF";
        assert_eq!(find_keyword(src, 0, src.len(), b"xref"), None);
    }

    #[test]
    fn render_reproduces_widths() {
        let e = XrefEntry { offset: 10, generation: 65535, kind: XrefKind::Free, raw_len: 20 };
        assert_eq!(render_entry(&e), "0000000010 65535 f");
    }
}
