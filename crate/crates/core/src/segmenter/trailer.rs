use super::lexer::{self, keyword_at, skip_ws};
use super::xref::find_keyword;
use super::{gaps, Diagnostic, DiagnosticKind, IndirectObject, Span, TrailerDict, TrailerSource};

fn startxref_after(data: &[u8], pos: usize) -> Option<u64> {
    let p = skip_ws(data, pos);
    if !keyword_at(data, p, b"startxref") {
        return None;
    }
    let p = skip_ws(data, p + b"startxref".len());
    let end = p + data[p..].iter().take_while(|b| b.is_ascii_digit()).count();
    std::str::from_utf8(&data[p..end]).ok()?.parse().ok()
}

fn keyword_trailer(data: &[u8], at: usize, gap_end: usize, diags: &mut Vec<Diagnostic>) -> TrailerDict {
    let p = skip_ws(data, at + b"trailer".len());
    match lexer::parse_dict(data, p) {
        Some((dict, end)) => {
            let span = Span::new(at, end);
            TrailerDict {
                keys: dict.keys(),
                raw: span.slice(data).to_vec(),
                span,
                startxref_value: startxref_after(data, end),
                dict: Some(dict),
                source: TrailerSource::Keyword,
            }
        }
        None => {
            let stop = find_keyword(data, p, gap_end, b"startxref").unwrap_or(gap_end);
            let mut end = stop;
            while end > at && lexer::is_whitespace(data[end - 1]) {
                end -= 1;
            }
            diags.push(Diagnostic::new(
                DiagnosticKind::UnparseableTrailer,
                at,
                "trailer keyword not followed by a readable dictionary",
            ));
            let span = Span::new(at, end.max(at + b"trailer".len()));
            TrailerDict {
                keys: Vec::new(),
                raw: span.slice(data).to_vec(),
                span,
                startxref_value: startxref_after(data, stop),
                dict: None,
                source: TrailerSource::Keyword,
            }
        }
    }
}

pub(super) fn collect(data: &[u8], objects: &[IndirectObject], diags: &mut Vec<Diagnostic>) -> Vec<TrailerDict> {
    let mut out = Vec::new();
    for gap in gaps(data.len(), objects) {
        let mut pos = gap.offset;
        while let Some(at) = find_keyword(data, pos, gap.end(), b"trailer") {
            let t = keyword_trailer(data, at, gap.end(), diags);
            pos = t.span.end().max(at + 1);
            out.push(t);
        }
    }
    for o in objects.iter().filter(|o| o.is_xref_stream()) {
        let (Some(dict), Some(dspan)) = (&o.dict, o.dict_span) else {
            continue;
        };
        let span = Span::new(o.span.offset, dspan.end());
        out.push(TrailerDict {
            keys: dict.keys(),
            raw: span.slice(data).to_vec(),
            span,
            dict: Some(dict.clone()),
            startxref_value: startxref_after(data, o.span.end()),
            source: TrailerSource::XrefStream { obj_num: o.obj_num },
        });
    }
    out.sort_by_key(|t| t.span.offset);
    out
}

#[cfg(test)]
mod tests {
    use super::super::extract_trailers;

    #[test]
    fn libreoffice_trailer() {
        let src = b"trailer\n<</Size 14/Root 12 0 R\n/Info 13 0 R\n/ID [ <438A4EF8B552AF586C55DFFE40065998>\n<438A4EF8B552AF586C55DFFE40065998> ]\n/DocChecksum /7C2B6DC7F4AF6CC658C0703D8002E3D4\n>>\nstartxref\n1234\n%%EOF\n";
        let t = extract_trailers(src);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].keys, vec!["/Size", "/Root", "/Info", "/ID", "/DocChecksum"]);
        assert_eq!(t[0].startxref_value, Some(1234));
        assert_eq!(t[0].info_ref(), Some((13, 0)));
    }

    #[test]
    fn word_double_trailer() {
        let src = b"trailer\n<</Size 25/Root 1 0 R/Info 9 0 R/ID[<70265267FB5C68469F73B4AB7F5E4003><70265267FB5C68469F73B4AB7F5E4003>] >>\nstartxref\n46566\nxref\n0 0\ntrailer\n<</Size 25/Root 1 0 R/Info 9 0 R/ID[<70265267FB5C68469F73B4AB7F5E4003><70265267FB5C68469F73B4AB7F5E4003>] /Prev 46566/XRefStm 46274>>\n";
        let t = extract_trailers(src);
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].keys, vec!["/Size", "/Root", "/Info", "/ID"]);
        assert_eq!(t[0].startxref_value, Some(46566));
        assert_eq!(t[1].keys, vec!["/Size", "/Root", "/Info", "/ID", "/Prev", "/XRefStm"]);
    }

    #[test]
    fn minimal_trailer() {
        let t = extract_trailers(b"trailer << /Size 4 /Root 1 0 R >>");
        assert_eq!(t[0].keys, vec!["/Size", "/Root"]);
        assert_eq!(t[0].startxref_value, None);
    }

    #[test]
    fn xref_stream_acts_as_trailer() {
        let src = b"7 0 obj\n<</Type/XRef/Index[0 8]/Size 8/W[1 2 1]/Root 1 0 R/Info 5 0 R/Length 6/Filter/FlateDecode>>\nstream\nabcdef\nendstream\nendobj\nstartxref\n300\n%%EOF\n";
        let t = extract_trailers(src);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].keys[0], "/Type");
        assert_eq!(t[0].startxref_value, Some(300));
        assert!(t[0].raw.starts_with(b"7 0 obj"));
        assert!(t[0].raw.ends_with(b">>"));
    }

    #[test]
    fn garbage_trailer_recorded_raw() {
        let t = extract_trailers(b"trailer\nnot a dict\nstartxref\n9\n%%EOF");
        assert_eq!(t.len(), 1);
        assert!(t[0].keys.is_empty());
        assert_eq!(t[0].raw, b"trailer\nnot a dict");
        assert_eq!(t[0].startxref_value, Some(9));
    }
}
