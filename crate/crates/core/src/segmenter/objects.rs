use std::sync::OnceLock;

use regex::bytes::Regex;

use super::lexer::{self, is_whitespace, keyword_at, skip_ws};
use super::{Diagnostic, DiagnosticKind, IndirectObject, Span};

fn header_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?-u)([0-9]{1,10})[\x00\t\n\x0C\r ]+([0-9]{1,5})[\x00\t\n\x0C\r ]+obj\b")
            .expect("object header regex")
    })
}

struct Header {
    start: usize,
    content: usize,
    num: u32,
    gen: u16,
}

/// Next `N G obj` in `data[from..to]` that is not glued to a preceding token.
fn next_header(data: &[u8], from: usize, to: usize) -> Option<Header> {
    let mut at = from;
    while at < to {
        let caps = header_re().captures_at(&data[..to], at)?;
        let whole = caps.get(0).expect("group 0");
        let glued = whole.start() > 0 && {
            let b = data[whole.start() - 1];
            !is_whitespace(b) && !lexer::is_delimiter(b)
        };
        if !glued {
            let num = std::str::from_utf8(&caps[1]).ok().and_then(|s| s.parse().ok());
            let gen = std::str::from_utf8(&caps[2]).ok().and_then(|s| s.parse().ok());
            if let (Some(num), Some(gen)) = (num, gen) {
                return Some(Header { start: whole.start(), content: whole.end(), num, gen });
            }
        }
        at = whole.start() + 1;
    }
    None
}

fn find(data: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    if from >= data.len() {
        return None;
    }
    data[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|p| p + from)
}

fn trim_trailing_ws(data: &[u8], start: usize, mut end: usize) -> usize {
    while end > start && is_whitespace(data[end - 1]) {
        end -= 1;
    }
    end
}

pub(super) fn scan(data: &[u8], diags: &mut Vec<Diagnostic>) -> Vec<IndirectObject> {
    let mut out = Vec::new();
    let mut pos = 0;
    while let Some(h) = next_header(data, pos, data.len()) {
        let body = skip_ws(data, h.content);
        let (dict, after_dict) = match lexer::parse_dict(data, body) {
            Some((d, end)) => (Some(d), end),
            None => (None, body),
        };
        let dict_span = dict.as_ref().map(|_| Span::new(body, after_dict));

        let mut cursor = after_dict;
        let mut has_stream = false;
        let mut stream_span = None;
        let mut truncated = false;
        let kw = skip_ws(data, after_dict);
        if dict.is_some() && keyword_at(data, kw, b"stream") {
            has_stream = true;
            let mut payload = kw + b"stream".len();
            if data.get(payload) == Some(&b'\r') {
                payload += 1;
            }
            if data.get(payload) == Some(&b'\n') {
                payload += 1;
            }
            match find(data, payload, b"endstream") {
                Some(es) => {
                    stream_span = Some(Span::new(payload, trim_eol(data, payload, es)));
                    cursor = es + b"endstream".len();
                }
                None => {
                    stream_span = Some(Span::new(payload, data.len()));
                    cursor = data.len();
                    truncated = true;
                }
            }
        }

        let end = if truncated {
            data.len()
        } else {
            let endobj = find(data, cursor, b"endobj");
            let limit = endobj.unwrap_or(data.len());
            match next_header(data, cursor, limit) {
                Some(next) => {
                    truncated = true;
                    trim_trailing_ws(data, h.start, next.start)
                }
                None => match endobj {
                    Some(e) => e + b"endobj".len(),
                    None => {
                        truncated = true;
                        trim_trailing_ws(data, h.start, data.len())
                    }
                },
            }
        };
        if truncated {
            diags.push(Diagnostic::new(
                DiagnosticKind::TruncatedObject,
                h.start,
                format!("object {} {} has no endobj", h.num, h.gen),
            ));
        }

        let span = Span::new(h.start, end);
        out.push(IndirectObject {
            obj_num: h.num,
            gen_num: h.gen,
            raw: span.slice(data).to_vec(),
            span,
            dict_keys: dict.as_ref().map(|d| d.keys()).unwrap_or_default(),
            dict,
            dict_span,
            has_stream,
            stream_span,
            is_metadata: false,
            truncated,
        });
        pos = end.max(h.start + 1);
    }
    out
}

fn trim_eol(data: &[u8], start: usize, mut end: usize) -> usize {
    if end > start && data[end - 1] == b'\n' {
        end -= 1;
    }
    if end > start && data[end - 1] == b'\r' {
        end -= 1;
    }
    end
}

pub(super) fn flag_metadata(objects: &mut [IndirectObject], info: Option<(u32, u16)>) {
    for o in objects {
        o.is_metadata = o.is_metadata_stream() || info == Some((o.obj_num, o.gen_num));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan_all(data: &[u8]) -> (Vec<IndirectObject>, Vec<Diagnostic>) {
        let mut d = Vec::new();
        let o = scan(data, &mut d);
        (o, d)
    }

    #[test]
    fn pdftex_object() {
        let src = b"4 0 obj\n<</Length 2413      /Filter/FlateDecode>>\nstream\n.....\nendstream\nendobj\n";
        let (objs, diags) = scan_all(src);
        assert!(diags.is_empty());
        assert_eq!(objs.len(), 1);
        let o = &objs[0];
        assert_eq!((o.obj_num, o.gen_num), (4, 0));
        assert_eq!(o.dict_keys, vec!["/Length", "/Filter"]);
        assert!(o.has_stream);
        assert_eq!(o.stream_span.unwrap().slice(src), b".....");
        assert!(o.raw.ends_with(b"endobj"));
    }

    #[test]
    fn luatex_object() {
        let src = b"4 0 obj\n<<\n/Length 2006      \n/Filter /FlateDecode\n>>\nstream\n.....\nendstream\nendobj\n";
        let (objs, _) = scan_all(src);
        assert_eq!(objs[0].dict_keys, vec!["/Length", "/Filter"]);
        assert!(objs[0].has_stream);
    }

    #[test]
    fn missing_endobj_is_truncated_not_fatal() {
        let src = b"1 0 obj\n<< /Type /Catalog >>\n2 0 obj\n<< /Type /Pages >>\nendobj\n";
        let (objs, diags) = scan_all(src);
        assert_eq!(objs.len(), 2);
        assert!(objs[0].truncated);
        assert!(!objs[1].truncated);
        assert_eq!(objs[0].raw, b"1 0 obj\n<< /Type /Catalog >>");
        assert_eq!(diags[0].kind, DiagnosticKind::TruncatedObject);
    }

    #[test]
    fn stream_payload_is_not_scanned_for_headers() {
        let src = b"3 0 obj\n<< /Length 9 >>\nstream\n7 0 obj x\nendstream\nendobj\n";
        let (objs, _) = scan_all(src);
        assert_eq!(objs.len(), 1);
        assert_eq!(objs[0].obj_num, 3);
    }

    #[test]
    fn glued_numbers_are_not_headers() {
        let (objs, _) = scan_all(b"x12 0 obj\n<<>>\nendobj\n");
        assert!(objs.is_empty());
    }

    #[test]
    fn empty_body() {
        let (objs, _) = scan_all(b"%PDF-1.4\n%%EOF\n");
        assert!(objs.is_empty());
    }
}
