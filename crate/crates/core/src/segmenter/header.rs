use super::{Diagnostic, DiagnosticKind, HeaderInfo, SegmentError, Span, HEADER_SCAN_LIMIT};

const MAGIC: &[u8] = b"%PDF";

/// Reads the `%PDF-m.n` line and the optional binary comment after it.
pub fn parse_header(bytes: &[u8]) -> Result<HeaderInfo, SegmentError> {
    parse(bytes, &mut Vec::new())
}

fn line_end(bytes: &[u8], from: usize) -> (usize, usize) {
    let mut end = from;
    while end < bytes.len() && bytes[end] != b'\r' && bytes[end] != b'\n' {
        end += 1;
    }
    let mut next = end;
    if bytes.get(next) == Some(&b'\r') {
        next += 1;
    }
    if bytes.get(next) == Some(&b'\n') {
        next += 1;
    }
    (end, next)
}

pub(super) fn parse(bytes: &[u8], diags: &mut Vec<Diagnostic>) -> Result<HeaderInfo, SegmentError> {
    let window = &bytes[..bytes.len().min(HEADER_SCAN_LIMIT)];
    let start = window
        .windows(MAGIC.len())
        .position(|w| w == MAGIC)
        .ok_or(SegmentError::NotAPdf)?;

    let (first_end, second_start) = line_end(bytes, start);
    let first_line = &bytes[start + MAGIC.len()..first_end];
    let version = match first_line.strip_prefix(b"-") {
        Some(rest) => {
            let v: Vec<u8> = rest
                .iter()
                .copied()
                .take_while(|b| b.is_ascii_digit() || *b == b'.')
                .collect();
            String::from_utf8_lossy(&v).into_owned()
        }
        None => String::new(),
    };
    let well_formed = {
        let mut parts = version.split('.');
        matches!((parts.next(), parts.next(), parts.next()),
            (Some(m), Some(n), None) if !m.is_empty() && !n.is_empty())
    };
    if !well_formed {
        diags.push(Diagnostic::new(
            DiagnosticKind::MalformedHeader,
            start,
            format!("version {version:?} is not of the form m.n"),
        ));
    }

    let mut span_end = second_start;
    let mut binary_comment = None;
    let mut comment_span = None;
    if bytes.get(second_start) == Some(&b'%') && !bytes[second_start..].starts_with(b"%%EOF") {
        let (end, next) = line_end(bytes, second_start);
        let body = &bytes[second_start + 1..end];
        if !body.is_empty() {
            let high = body.iter().filter(|&&b| b >= 0x80).count();
            if high < 4 {
                diags.push(Diagnostic::new(
                    DiagnosticKind::ShortBinaryComment,
                    second_start,
                    format!("binary comment has {high} high-bit bytes, expected at least 4"),
                ));
            }
            binary_comment = Some(body.to_vec());
            comment_span = Some(Span::new(second_start + 1, end));
        }
        span_end = next;
    }

    Ok(HeaderInfo {
        version,
        binary_comment,
        span: Span::new(start, span_end),
        comment_span,
    })
}
