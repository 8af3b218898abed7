//! Declared producer metadata and its agreement with the detected one.

use std::sync::OnceLock;

use regex::bytes::Regex;
use serde::{Deserialize, Serialize};

use crate::detector::{detect_sections, Outcome, Verdict};
use crate::producer::ProducerId;
use crate::rules::Rulepack;
use crate::segmenter::lexer::decode_text_string;
use crate::segmenter::{segment, IndirectObject, PdfSections, SegmentError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetadataSource {
    InfoDict,
    XmpStream,
    Both,
}

/// What the file says about itself.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DeclaredMetadata {
    /// Info value if present, else the XMP value.
    pub producer: Option<String>,
    pub creator: Option<String>,
    pub source: Option<MetadataSource>,
    pub info_producer: Option<String>,
    pub info_creator: Option<String>,
    pub xmp_producer: Option<String>,
    pub xmp_creator: Option<String>,
    pub raw_spans: Vec<Span>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsistencyStatus {
    Consistent,
    Inconsistent,
    Unverifiable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub declared: DeclaredMetadata,
    pub detected: Verdict,
    pub status: ConsistencyStatus,
    /// Producer the declared string names, Info tried before XMP.
    pub normalized_declared: Option<ProducerId>,
}

fn string_value(o: &IndirectObject, key: &str) -> Option<String> {
    let v = o.dict.as_ref()?.get(key)?.as_string_bytes()?;
    Some(decode_text_string(v))
}

fn xml_unescape(s: &str) -> String {
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}

fn xmp_field(packet: &[u8], qname: &str) -> Option<String> {
    static CACHE: OnceLock<Vec<(String, Regex, Regex)>> = OnceLock::new();
    let res = CACHE.get_or_init(|| {
        ["pdf:Producer", "xmp:CreatorTool"]
            .iter()
            .map(|q| {
                let e = regex::escape(q);
                (
                    q.to_string(),
                    Regex::new(&format!(r"(?s-u)<{e}>(.*?)</{e}>")).expect("xmp element regex"),
                    Regex::new(&format!(r#"(?-u){e}\s*=\s*"([^"]*)""#)).expect("xmp attribute regex"),
                )
            })
            .collect()
    });
    let (_, elem, attr) = res.iter().find(|(q, _, _)| q == qname)?;
    let caps = elem.captures(packet).or_else(|| attr.captures(packet))?;
    let text = String::from_utf8_lossy(&caps[1]).trim().to_string();
    Some(xml_unescape(&text))
}

/// Declared metadata of already segmented sections.
pub fn declared_from_sections(sections: &PdfSections) -> DeclaredMetadata {
    let mut d = DeclaredMetadata::default();
    if let Some(info) = sections
        .info_ref()
        .and_then(|r| sections.objects.iter().rev().find(|o| (o.obj_num, o.gen_num) == r))
    {
        d.info_producer = string_value(info, "/Producer");
        d.info_creator = string_value(info, "/Creator");
        if d.info_producer.is_some() || d.info_creator.is_some() {
            d.raw_spans.push(info.span);
        }
    }
    for o in sections.objects.iter().filter(|o| o.is_metadata_stream()) {
        let filtered = o.dict.as_ref().is_some_and(|d| d.get("/Filter").is_some());
        let Some(stream) = o.stream_span.filter(|_| !filtered) else { continue };
        let payload = &o.raw[stream.offset - o.span.offset..stream.end() - o.span.offset];
        let p = xmp_field(payload, "pdf:Producer");
        let c = xmp_field(payload, "xmp:CreatorTool");
        if p.is_some() || c.is_some() {
            d.raw_spans.push(o.span);
            d.xmp_producer = d.xmp_producer.or(p);
            d.xmp_creator = d.xmp_creator.or(c);
        }
    }
    let info = d.info_producer.is_some() || d.info_creator.is_some();
    let xmp = d.xmp_producer.is_some() || d.xmp_creator.is_some();
    d.source = match (info, xmp) {
        (true, true) => Some(MetadataSource::Both),
        (true, false) => Some(MetadataSource::InfoDict),
        (false, true) => Some(MetadataSource::XmpStream),
        (false, false) => None,
    };
    d.producer = d.info_producer.clone().or_else(|| d.xmp_producer.clone());
    d.creator = d.info_creator.clone().or_else(|| d.xmp_creator.clone());
    d.raw_spans.sort();
    d
}

/// Reads `/Producer` and `/Creator` from the Info dictionary and the XMP
/// packet. A file that cannot be segmented declares nothing.
pub fn extract_declared(bytes: &[u8]) -> DeclaredMetadata {
    segment(bytes).map(|s| declared_from_sections(&s)).unwrap_or_default()
}

/// Strings that say the original producer was kept without naming it.
fn is_placeholder(squashed: &str) -> bool {
    squashed.starts_with("sameasoriginal")
}

/// Maps a declared producer string to a tool, ignoring case, spacing and
/// version numbers.
pub fn normalize_producer_string(s: &str) -> Option<ProducerId> {
    let k: String = s.chars().filter(|c| !c.is_whitespace()).flat_map(char::to_lowercase).collect();
    if k.is_empty() || is_placeholder(&k) {
        return None;
    }
    let has = |n: &str| k.contains(n);
    let p = if has("ghostscript") {
        ProducerId::Ghostscript
    } else if has("microsoft") && has("word") {
        ProducerId::MicrosoftOfficeWord
    } else if has("libreoffice") {
        ProducerId::LibreOffice
    } else if has("skia") {
        ProducerId::SkiaPDF
    } else if has("distiller") {
        ProducerId::AcrobatDistiller
    } else if has("pdflatex") {
        ProducerId::PDFLaTeX
    } else if has("pdftex") {
        ProducerId::PdfTeX
    } else if has("luatex") {
        ProducerId::LuaTeX
    } else if has("xdvipdfm") {
        ProducerId::XdviPDFmx
    } else if has("cairo") {
        ProducerId::Cairo
    } else if has("quartz") {
        ProducerId::MacOSXQuartz
    } else {
        return None;
    };
    Some(p)
}

/// Status of a declared string against a verdict.
pub fn consistency_status(declared: Option<&str>, detected: &Outcome) -> (ConsistencyStatus, Option<ProducerId>) {
    let normalized = declared.and_then(normalize_producer_string);
    let Outcome::Producer(p) = detected else {
        return (ConsistencyStatus::Unverifiable, normalized);
    };
    let Some(text) = declared.map(str::trim).filter(|t| !t.is_empty()) else {
        return (ConsistencyStatus::Unverifiable, None);
    };
    let squashed: String = text.chars().filter(|c| !c.is_whitespace()).flat_map(char::to_lowercase).collect();
    if is_placeholder(&squashed) {
        return (ConsistencyStatus::Unverifiable, None);
    }
    let status = if normalized.as_ref() == Some(p) {
        ConsistencyStatus::Consistent
    } else {
        ConsistencyStatus::Inconsistent
    };
    (status, normalized)
}

/// Detects the producer from style alone, then compares it with the
/// declared one.
pub fn consistency_check(bytes: &[u8], pack: &Rulepack) -> Result<ConsistencyReport, SegmentError> {
    let sections = segment(bytes)?;
    let (detected, _) = detect_sections(pack, &sections);
    let declared = declared_from_sections(&sections);
    Ok(report(declared, detected))
}

pub fn report(declared: DeclaredMetadata, detected: Verdict) -> ConsistencyReport {
    let producer = declared.info_producer.as_deref().or(declared.xmp_producer.as_deref());
    let (status, mut normalized_declared) = consistency_status(producer, &detected.outcome);
    if normalized_declared.is_none() {
        normalized_declared = declared.xmp_producer.as_deref().and_then(normalize_producer_string);
    }
    if status == ConsistencyStatus::Inconsistent {
        if let (Some(x), Outcome::Producer(p)) = (declared.xmp_producer.as_deref(), &detected.outcome) {
            // Info disagreeing does not matter when XMP names the detected tool
            if normalize_producer_string(x).as_ref() == Some(p) && declared.info_producer.is_none() {
                return ConsistencyReport { declared, detected, status: ConsistencyStatus::Consistent, normalized_declared };
            }
        }
    }
    ConsistencyReport { declared, detected, status, normalized_declared }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declared_strings_map_to_tools() {
        let cases = [
            ("GPL Ghostscript 9.23", Some(ProducerId::Ghostscript)),
            ("GPL Ghostscript 9.26", Some(ProducerId::Ghostscript)),
            ("Microsoft Word 2013", Some(ProducerId::MicrosoftOfficeWord)),
            ("Microsoft Word for Office 365", Some(ProducerId::MicrosoftOfficeWord)),
            ("LibreOffice 6.1", Some(ProducerId::LibreOffice)),
            ("Skia/PDF m76", Some(ProducerId::SkiaPDF)),
            ("Acrobat Distiller 10.1.16 (Windows)", Some(ProducerId::AcrobatDistiller)),
            ("pdfTeX-1.40.18", Some(ProducerId::PdfTeX)),
            ("LuaTeX-1.0.4", Some(ProducerId::LuaTeX)),
            ("xdvipdfmx (20170318)", Some(ProducerId::XdviPDFmx)),
            ("cairo 1.14.8 (https://cairographics.org)", Some(ProducerId::Cairo)),
            ("Mac OS X 10.14.6 Quartz PDFContext", Some(ProducerId::MacOSXQuartz)),
            ("Online2PDF.com", None),
            ("VeryPDF", None),
            ("3-Heights(TM) PDF Optimization Shell", None),
            ("Same as original file", None),
            ("", None),
        ];
        for (s, want) in cases {
            assert_eq!(normalize_producer_string(s), want, "{s:?}");
        }
    }

    #[test]
    fn names_normalize_to_themselves() {
        for p in ProducerId::KNOWN {
            assert_eq!(normalize_producer_string(p.display_name()).as_ref(), Some(&p));
            assert_eq!(normalize_producer_string(p.canonical_name()).as_ref(), Some(&p));
        }
    }

    #[test]
    fn status_rule() {
        let gs = Outcome::Producer(ProducerId::Ghostscript);
        use ConsistencyStatus::*;
        assert_eq!(consistency_status(Some("GPL Ghostscript 9.26"), &gs).0, Consistent);
        assert_eq!(consistency_status(Some("VeryPDF"), &gs).0, Inconsistent);
        assert_eq!(consistency_status(Some("LibreOffice 6.1"), &gs).0, Inconsistent);
        assert_eq!(consistency_status(None, &gs).0, Unverifiable);
        assert_eq!(consistency_status(Some("  "), &gs).0, Unverifiable);
        assert_eq!(consistency_status(Some("Same as original file"), &gs).0, Unverifiable);
        assert_eq!(consistency_status(Some("GPL Ghostscript"), &Outcome::NoResult).0, Unverifiable);
        let amb = Outcome::Ambiguous([ProducerId::Cairo, ProducerId::SkiaPDF].into());
        assert_eq!(consistency_status(Some("cairo"), &amb).0, Unverifiable);
    }

    fn with_info(info: &str) -> Vec<u8> {
        format!("%PDF-1.4\n1 0 obj\n<< /Type /Catalog >>\nendobj\n5 0 obj\n<< {info} >>\nendobj\ntrailer\n<< /Size 6 /Root 1 0 R /Info 5 0 R >>\n%%EOF\n")
            .into_bytes()
    }

    #[test]
    fn info_dictionary_strings() {
        let d = extract_declared(&with_info("/Producer (GPL Ghostscript 9.26) /Creator <FEFF00410042>"));
        assert_eq!(d.producer.as_deref(), Some("GPL Ghostscript 9.26"));
        assert_eq!(d.creator.as_deref(), Some("AB"));
        assert_eq!(d.source, Some(MetadataSource::InfoDict));
        assert_eq!(d.raw_spans.len(), 1);
    }

    #[test]
    fn nothing_declared() {
        let d = extract_declared(b"%PDF-1.4\n1 0 obj\n<< /Type /Catalog >>\nendobj\ntrailer\n<< /Root 1 0 R >>\n");
        assert_eq!(d, DeclaredMetadata::default());
        assert_eq!(extract_declared(b""), DeclaredMetadata::default());
    }

    #[test]
    fn info_and_xmp_both_kept() {
        let xmp = "<x:xmpmeta><rdf:Description pdf:Producer=\"B &amp; co\"><xmp:CreatorTool>Writer</xmp:CreatorTool></rdf:Description></x:xmpmeta>";
        let f = format!(
            "%PDF-1.4\n5 0 obj\n<< /Producer (A) >>\nendobj\n6 0 obj\n<< /Type /Metadata /Subtype /XML /Length {} >>\nstream\n{xmp}\nendstream\nendobj\ntrailer\n<< /Info 5 0 R >>\n",
            xmp.len()
        );
        let d = extract_declared(f.as_bytes());
        assert_eq!(d.source, Some(MetadataSource::Both));
        assert_eq!(d.info_producer.as_deref(), Some("A"));
        assert_eq!(d.xmp_producer.as_deref(), Some("B & co"));
        assert_eq!(d.producer.as_deref(), Some("A"));
        assert_eq!(d.creator.as_deref(), Some("Writer"));
        assert_eq!(d.raw_spans.len(), 2);
    }

    #[test]
    fn xmp_element_form() {
        let p = b"<rdf:Description><pdf:Producer>\n  LibreOffice 6.1\n</pdf:Producer></rdf:Description>";
        assert_eq!(xmp_field(p, "pdf:Producer").as_deref(), Some("LibreOffice 6.1"));
        assert_eq!(xmp_field(p, "xmp:CreatorTool"), None);
    }
}
