//! Small synthetic PDF files carrying each producer's published style.
//!
//! Every file has a header with the producer's magic number, a catalog,
//! a page tree, one page, one uncompressed content stream written in the
//! producer's body style, an `/Info` object and, depending on the profile,
//! a classic xref table with a keyword trailer or a cross-reference stream.
//! The seed varies stream lengths and contents and the `/ID` strings.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builtin::tables::{magic_numbers, trailer_signatures, TrailerForm};
use crate::miner::{render_manifest, ManifestEntry};
use crate::producer::{Distro, Os, ProducerId};

pub const MANIFEST_NAME: &str = "manifest.tsv";

/// How the content stream object is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyStyle {
    /// `<</Length 2413      /Filter/FlateDecode>>` on one line.
    PaddedOneLine,
    /// One key per line.
    KeyPerLine,
    /// `4 0 obj\r\n<</Filter/FlateDecode/Length N>>\r\nstream\r\n`.
    WordTemplate,
    /// `<< /Length N >>`.
    Neutral,
}

/// Spacing of the trailer or cross-reference stream dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DictStyle {
    /// `<< /Size 6 /Root 1 0 R >>`
    Spaced,
    /// `<</Size 6/Root 1 0 R>>`
    Compact,
    /// Compact, with a space after array values.
    CompactSpacedArrays,
    /// One entry per line.
    Lines,
    /// The line layout of LibreOffice trailers.
    LibreOffice,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProducerProfile {
    pub producer: ProducerId,
    pub version: &'static str,
    pub header_magic: &'static [u8],
    pub trailer_form: TrailerForm,
    pub trailer_keys: &'static [&'static str],
    pub dict_style: DictStyle,
    /// Invariant: true iff `trailer_form` is `Keyword`.
    pub include_classic_xref: bool,
    pub body_style: BodyStyle,
    /// Invariant: true only for Word.
    pub double_trailer: bool,
    pub eol: &'static str,
    /// Xref entry terminator after the 18 core bytes.
    pub xref_eol: &'static str,
    pub os: Option<Os>,
    pub distro: Option<Distro>,
    pub declared_producer: &'static str,
}

fn magic_of(producer: &ProducerId, long: bool) -> &'static [u8] {
    magic_numbers()
        .into_iter()
        .filter(|m| &m.producer == producer)
        .map(|m| m.bytes)
        .find(|b| !long || b.len() > 4)
        .expect("producer has a magic number")
}

fn keys_of(producer: &ProducerId, form: TrailerForm) -> &'static [&'static str] {
    trailer_signatures()
        .into_iter()
        .find(|s| &s.producer == producer && s.form == form)
        .map(|s| s.key_sequence)
        .expect("producer has a trailer signature")
}

/// The eleven builtin profiles.
pub fn profiles() -> Vec<ProducerProfile> {
    use ProducerId::*;
    struct P {
        producer: ProducerId,
        long_magic: bool,
        form: TrailerForm,
        style: DictStyle,
        body: BodyStyle,
        os: Option<Os>,
        distro: Option<Distro>,
        declared: &'static str,
    }
    let rows = [
        P { producer: AcrobatDistiller, long_magic: false, form: TrailerForm::XrefStream, style: DictStyle::Compact, body: BodyStyle::Neutral, os: Some(Os::Windows), distro: None, declared: "Acrobat Distiller 10.1.16 (Windows)" },
        P { producer: MicrosoftOfficeWord, long_magic: false, form: TrailerForm::Keyword, style: DictStyle::CompactSpacedArrays, body: BodyStyle::WordTemplate, os: Some(Os::Windows), distro: None, declared: "Microsoft Word 2013" },
        P { producer: LibreOffice, long_magic: false, form: TrailerForm::Keyword, style: DictStyle::LibreOffice, body: BodyStyle::Neutral, os: Some(Os::Linux), distro: None, declared: "LibreOffice 6.1" },
        P { producer: Ghostscript, long_magic: false, form: TrailerForm::Keyword, style: DictStyle::Spaced, body: BodyStyle::Neutral, os: Some(Os::Linux), distro: None, declared: "GPL Ghostscript 9.26" },
        P { producer: MacOSXQuartz, long_magic: false, form: TrailerForm::Keyword, style: DictStyle::Spaced, body: BodyStyle::Neutral, os: Some(Os::MacOS), distro: None, declared: "Mac OS X 10.14.6 Quartz PDFContext" },
        P { producer: PdfTeX, long_magic: false, form: TrailerForm::XrefStream, style: DictStyle::Lines, body: BodyStyle::PaddedOneLine, os: Some(Os::Linux), distro: Some(Distro::TeXLive), declared: "pdfTeX-1.40.18" },
        P { producer: SkiaPDF, long_magic: false, form: TrailerForm::Keyword, style: DictStyle::Spaced, body: BodyStyle::Neutral, os: None, distro: None, declared: "Skia/PDF m76" },
        P { producer: Cairo, long_magic: false, form: TrailerForm::Keyword, style: DictStyle::Spaced, body: BodyStyle::Neutral, os: Some(Os::Linux), distro: None, declared: "cairo 1.14.8 (https://cairographics.org)" },
        P { producer: XdviPDFmx, long_magic: false, form: TrailerForm::XrefStream, style: DictStyle::Compact, body: BodyStyle::Neutral, os: Some(Os::Linux), distro: Some(Distro::TeXLive), declared: "xdvipdfmx (20170318)" },
        P { producer: LuaTeX, long_magic: true, form: TrailerForm::Keyword, style: DictStyle::Lines, body: BodyStyle::KeyPerLine, os: Some(Os::Linux), distro: Some(Distro::MikTeX), declared: "LuaTeX-1.0.4" },
        P { producer: PDFLaTeX, long_magic: false, form: TrailerForm::Keyword, style: DictStyle::Spaced, body: BodyStyle::Neutral, os: None, distro: None, declared: "PDFLaTeX" },
    ];
    rows.into_iter()
        .map(|r| {
            let word = r.producer == MicrosoftOfficeWord;
            ProducerProfile {
                header_magic: magic_of(&r.producer, r.long_magic),
                trailer_keys: keys_of(&r.producer, r.form),
                include_classic_xref: r.form == TrailerForm::Keyword,
                double_trailer: word,
                eol: if word { "\r\n" } else { "\n" },
                xref_eol: if word { "\r\n" } else { " \n" },
                version: if r.form == TrailerForm::XrefStream || word { "1.5" } else { "1.4" },
                producer: r.producer,
                trailer_form: r.form,
                dict_style: r.style,
                body_style: r.body,
                os: r.os,
                distro: r.distro,
                declared_producer: r.declared,
            }
        })
        .collect()
}

pub fn profile(producer: &ProducerId) -> Option<ProducerProfile> {
    profiles().into_iter().find(|p| &p.producer == producer)
}

/// What a generated file declares about itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureOptions {
    /// `None` writes an `/Info` dictionary without `/Producer`.
    pub declared_producer: Option<String>,
    /// Adds an XMP packet naming the same producer.
    pub xmp: bool,
}

impl FixtureOptions {
    pub fn for_profile(p: &ProducerProfile) -> Self {
        FixtureOptions { declared_producer: Some(p.declared_producer.to_string()), xmp: false }
    }
}

/// Values the dictionary writer fills in.
#[derive(Debug, Clone, Default)]
pub struct DictValues {
    pub size: usize,
    pub root: u32,
    pub info: u32,
    pub id: String,
    pub length: usize,
    pub prev: Option<usize>,
    pub checksum: String,
}

/// Pairs a key sequence into entries; name values and the decode
/// parameters travel with their key.
fn entries<'a>(keys: &'a [&'a str]) -> Vec<(&'a str, Vec<&'a str>)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let k = keys[i];
        let take = match k {
            "/Type" | "/Filter" => 1,
            "/DecodeParms" => 2,
            _ => 0,
        };
        out.push((k, keys[i + 1..(i + 1 + take).min(keys.len())].to_vec()));
        i += 1 + take;
    }
    out
}

fn value(key: &str, inner: &[&str], v: &DictValues, spaced: bool) -> String {
    let sp = if spaced { " " } else { "" };
    match key {
        "/Type" | "/Filter" => inner.concat(),
        "/DecodeParms" => {
            let parts: Vec<String> = inner
                .iter()
                .map(|k| format!("{k} {}", if *k == "/Columns" { 5 } else { 12 }))
                .collect();
            format!("<<{sp}{}{sp}>>", parts.join(if spaced { " " } else { "" }))
        }
        "/Size" => v.size.to_string(),
        "/Root" => format!("{} 0 R", v.root),
        "/Info" | "/info" => format!("{} 0 R", v.info),
        "/ID" => format!("[<{0}>{sp}<{0}>]", v.id),
        "/Index" => format!("[0 {}]", v.size),
        "/W" => "[1 4 2]".to_string(),
        "/Length" => v.length.to_string(),
        "/Prev" | "/XRefStm" => v.prev.unwrap_or(0).to_string(),
        "/DocChecksum" => format!("/{}", v.checksum),
        _ => "null".to_string(),
    }
}

/// Renders a dictionary whose keys appear in the order of `keys`.
pub fn render_dict(keys: &[&str], style: DictStyle, v: &DictValues, eol: &str) -> String {
    let mut out = String::new();
    let es = entries(keys);
    match style {
        DictStyle::Spaced => {
            out.push_str("<<");
            for (k, inner) in &es {
                let _ = write!(out, " {k} {}", value(k, inner, v, true));
            }
            out.push_str(" >>");
        }
        DictStyle::Compact | DictStyle::CompactSpacedArrays => {
            out.push_str("<<");
            for (k, inner) in &es {
                let val = value(k, inner, v, false);
                let sep = if val.starts_with(|c: char| c.is_ascii_digit()) || val == "null" { " " } else { "" };
                let _ = write!(out, "{k}{sep}{val}");
                if style == DictStyle::CompactSpacedArrays && val.ends_with(']') {
                    out.push(' ');
                }
            }
            out.push_str(">>");
        }
        DictStyle::Lines => {
            let _ = write!(out, "<<{eol}");
            for (k, inner) in &es {
                let _ = write!(out, "{k} {}{eol}", value(k, inner, v, true));
            }
            out.push_str(">>");
        }
        DictStyle::LibreOffice => {
            out.push_str("<<");
            for (i, (k, inner)) in es.iter().enumerate() {
                let val = match *k {
                    "/ID" => format!("[ <{0}>{eol}<{0}> ]", v.id),
                    _ => value(k, inner, v, true),
                };
                // first two entries share the opening line
                if i > 1 {
                    out.push_str(eol);
                }
                let _ = write!(out, "{k} {val}");
            }
            let _ = write!(out, "{eol}>>");
        }
    }
    out
}

fn random_letters(rng: &mut ChaCha8Rng, n: usize) -> String {
    const ABC: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
    (0..n).map(|_| ABC[rng.gen_range(0..ABC.len())] as char).collect()
}

fn random_hex(rng: &mut ChaCha8Rng, bytes: usize) -> String {
    (0..bytes).fold(String::new(), |mut s, _| {
        let _ = write!(s, "{:02X}", rng.gen::<u8>());
        s
    })
}

fn pdf_literal(s: &str) -> String {
    let mut out = String::from("(");
    for c in s.chars() {
        if matches!(c, '(' | ')' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push(')');
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A byte buffer that remembers where each object starts.
struct Builder {
    buf: Vec<u8>,
    offsets: Vec<(u32, usize)>,
}

impl Builder {
    fn push(&mut self, s: &str) {
        self.buf.extend_from_slice(s.as_bytes());
    }

    fn object(&mut self, num: u32, text: &str) {
        self.offsets.push((num, self.buf.len()));
        self.push(text);
    }

    fn pos(&self) -> usize {
        self.buf.len()
    }
}

fn stream_object(p: &ProducerProfile, num: u32, data: &str) -> String {
    let n = data.len();
    let e = p.eol;
    match p.body_style {
        BodyStyle::WordTemplate => {
            format!("{num} 0 obj{e}<</Filter/FlateDecode/Length {n}>>{e}stream{e}{data}{e}endstream{e}endobj{e}")
        }
        BodyStyle::PaddedOneLine => {
            format!("{num} 0 obj{e}<</Length {n:<10}/Filter/FlateDecode>>{e}stream{e}{data}{e}endstream{e}endobj{e}")
        }
        BodyStyle::KeyPerLine => format!(
            "{num} 0 obj{e}<<{e}/Length {n:<10}{e}/Filter /FlateDecode{e}>>{e}stream{e}{data}{e}endstream{e}endobj{e}"
        ),
        BodyStyle::Neutral => format!("{num} 0 obj{e}<< /Length {n} >>{e}stream{e}{data}{e}endstream{e}endobj{e}"),
    }
}

fn seeded_rng(p: &ProducerProfile, seed: u64) -> ChaCha8Rng {
    let salt = p.producer.slug().bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
    ChaCha8Rng::seed_from_u64(seed ^ salt.rotate_left(17))
}

/// A file in the profile's style declaring its usual producer string.
pub fn generate(profile: &ProducerProfile, seed: u64) -> Vec<u8> {
    generate_with(profile, seed, &FixtureOptions::for_profile(profile))
}

pub fn generate_with(p: &ProducerProfile, seed: u64, opts: &FixtureOptions) -> Vec<u8> {
    let mut rng = seeded_rng(p, seed);
    let e = p.eol;
    let compact = matches!(p.dict_style, DictStyle::Compact | DictStyle::CompactSpacedArrays);
    let dict = |body: &str| if compact { format!("<<{body}>>") } else { format!("<< {body} >>") };
    let mut b = Builder { buf: Vec::new(), offsets: Vec::new() };

    b.push(&format!("%PDF-{}{e}%", p.version));
    b.buf.extend_from_slice(p.header_magic);
    b.push(e);

    let xmp_num = opts.xmp.then_some(6u32);
    let catalog = match (xmp_num, compact) {
        (Some(x), true) => format!("/Type/Catalog/Pages 2 0 R/Metadata {x} 0 R"),
        (Some(x), false) => format!("/Type /Catalog /Pages 2 0 R /Metadata {x} 0 R"),
        (None, true) => "/Type/Catalog/Pages 2 0 R".to_string(),
        (None, false) => "/Type /Catalog /Pages 2 0 R".to_string(),
    };
    b.object(1, &format!("1 0 obj{e}{}{e}endobj{e}", dict(&catalog)));
    let pages = if compact { "/Type/Pages/Kids[3 0 R]/Count 1" } else { "/Type /Pages /Kids [3 0 R] /Count 1" };
    b.object(2, &format!("2 0 obj{e}{}{e}endobj{e}", dict(pages)));
    let page = if compact {
        "/Type/Page/Parent 2 0 R/MediaBox[0 0 612 792]/Contents 4 0 R"
    } else {
        "/Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R"
    };
    b.object(3, &format!("3 0 obj{e}{}{e}endobj{e}", dict(page)));
    let len = rng.gen_range(40..2000);
    let data = random_letters(&mut rng, len);
    b.object(4, &stream_object(p, 4, &data));

    let sp = if compact { "" } else { " " };
    let mut info = Vec::new();
    if let Some(s) = &opts.declared_producer {
        info.push(format!("/Producer{sp}{}", pdf_literal(s)));
    }
    info.push(format!("/CreationDate{sp}(D:20190412101500Z)"));
    b.object(5, &format!("5 0 obj{e}{}{e}endobj{e}", dict(&info.join(sp))));

    if let Some(x) = xmp_num {
        let prod = opts.declared_producer.as_deref().map(xml_escape).unwrap_or_default();
        let packet = format!(
            "<?xpacket begin=\"\" id=\"W5M0MpCehiHzreSzNTczkc9d\"?><x:xmpmeta xmlns:x=\"adobe:ns:meta/\"><rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"><rdf:Description rdf:about=\"\" xmlns:pdf=\"http://ns.adobe.com/pdf/1.3/\"><pdf:Producer>{prod}</pdf:Producer></rdf:Description></rdf:RDF></x:xmpmeta><?xpacket end=\"w\"?>"
        );
        let d = if compact {
            format!("<</Type/Metadata/Subtype/XML/Length {}>>", packet.len())
        } else {
            format!("<< /Type /Metadata /Subtype /XML /Length {} >>", packet.len())
        };
        b.object(x, &format!("{x} 0 obj{e}{d}{e}stream{e}{packet}{e}endstream{e}endobj{e}"));
    }

    let id = random_hex(&mut rng, 16);
    let mut values = DictValues {
        size: 0,
        root: 1,
        info: 5,
        id,
        length: 0,
        prev: None,
        checksum: random_hex(&mut rng, 16),
    };
    match p.trailer_form {
        TrailerForm::Keyword => {
            values.size = b.offsets.len() + 1;
            let table = b.pos();
            let mut xref = format!("xref{e}0 {}{e}0000000000 65535 f{}", values.size, p.xref_eol);
            let mut offs = b.offsets.clone();
            offs.sort();
            for (_, off) in &offs {
                let _ = write!(xref, "{off:010} 00000 n{}", p.xref_eol);
            }
            b.push(&xref);
            let tr = render_dict(p.trailer_keys, p.dict_style, &values, e);
            b.push(&format!("trailer{e}{tr}{e}startxref{e}{table}{e}%%EOF{e}"));
            if p.double_trailer {
                let stub = b.pos();
                values.prev = Some(table);
                let mut keys = p.trailer_keys.to_vec();
                keys.extend(["/Prev", "/XRefStm"]);
                let tr = render_dict(&keys, p.dict_style, &values, e);
                b.push(&format!("xref{e}0 0{e}trailer{e}{tr}{e}startxref{e}{stub}{e}%%EOF{e}"));
            }
        }
        TrailerForm::XrefStream => {
            let num = b.offsets.len() as u32 + 1;
            values.size = num as usize + 1;
            let data = random_letters(&mut rng, 7 * values.size);
            values.length = data.len();
            let start = b.pos();
            let d = render_dict(p.trailer_keys, p.dict_style, &values, e);
            b.object(num, &format!("{num} 0 obj{e}{d}{e}stream{e}{data}{e}endstream{e}endobj{e}"));
            b.push(&format!("startxref{e}{start}{e}%%EOF{e}"));
        }
    }
    b.buf
}

/// A minimal file whose only signal is the header comment `magic`.
pub fn header_only_file(magic: &[u8]) -> Vec<u8> {
    let mut b = b"%PDF-1.4\n%".to_vec();
    b.extend_from_slice(magic);
    b.extend_from_slice(b"\n1 0 obj\n<< /Type /Catalog >>\nendobj\n");
    b
}

/// A minimal file whose only trailer carries `keys` in order, written as
/// a keyword trailer or as a cross-reference stream.
pub fn trailer_only_file(keys: &[&str], form: TrailerForm) -> Vec<u8> {
    let v = DictValues {
        size: 3,
        root: 1,
        info: 2,
        id: "0123456789ABCDEF0123456789ABCDEF".into(),
        length: 0,
        prev: Some(9),
        checksum: "7C2B6DC7F4AF6CC658C0703D8002E3D4".into(),
    };
    let mut s = String::from("%PDF-1.5\n1 0 obj\n<< /Type /Catalog >>\nendobj\n");
    let d = render_dict(keys, DictStyle::Spaced, &v, "\n");
    match form {
        TrailerForm::Keyword => {
            let _ = write!(s, "trailer\n{d}\n");
        }
        TrailerForm::XrefStream => {
            let _ = write!(s, "3 0 obj\n{d}\nstream\n\nendstream\nendobj\n");
        }
    }
    s.into_bytes()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub producer: ProducerId,
    pub os: Option<Os>,
    pub distro: Option<Distro>,
    pub seed: u64,
    pub bytes: Vec<u8>,
}

pub fn fixture_name(p: &ProducerProfile, seed: u64) -> String {
    format!("{}-{seed:03}.pdf", p.producer.slug())
}

/// Every profile for every seed, profiles in catalogue order.
pub fn corpus(seeds: impl IntoIterator<Item = u64> + Clone) -> Vec<Fixture> {
    let mut out = Vec::new();
    for p in profiles() {
        for seed in seeds.clone() {
            out.push(Fixture {
                name: fixture_name(&p, seed),
                producer: p.producer.clone(),
                os: p.os,
                distro: p.distro,
                seed,
                bytes: generate(&p, seed),
            });
        }
    }
    out
}

/// Writes the corpus into `dir` with a manifest; returns the manifest path.
pub fn emit(dir: &Path, seeds: impl IntoIterator<Item = u64> + Clone) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for f in corpus(seeds) {
        std::fs::write(dir.join(&f.name), &f.bytes)?;
        entries.push(ManifestEntry { path: PathBuf::from(&f.name), producer: f.producer, os: f.os, distro: f.distro });
    }
    let manifest = dir.join(MANIFEST_NAME);
    std::fs::write(&manifest, render_manifest(&entries))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::detector::{detect, Outcome};
    use crate::segmenter::segment;

    #[test]
    fn eleven_profiles_one_per_producer() {
        let ps = profiles();
        assert_eq!(ps.len(), 11);
        for k in ProducerId::KNOWN {
            assert_eq!(ps.iter().filter(|p| p.producer == k).count(), 1, "{k}");
        }
    }

    #[test]
    fn profile_invariants() {
        for p in profiles() {
            assert_eq!(p.include_classic_xref, p.trailer_form == TrailerForm::Keyword, "{}", p.producer);
            assert_eq!(p.double_trailer, p.producer == ProducerId::MicrosoftOfficeWord);
            assert!(magic_numbers().iter().any(|m| m.producer == p.producer && m.bytes == p.header_magic));
            assert!(trailer_signatures()
                .iter()
                .any(|s| s.producer == p.producer && s.form == p.trailer_form && s.key_sequence == p.trailer_keys));
        }
    }

    #[test]
    fn acrobat_seed_one() {
        let f = generate(&profile(&ProducerId::AcrobatDistiller).unwrap(), 1);
        let s = segment(&f).unwrap();
        assert_eq!(s.header.binary_comment.as_deref(), Some(&[0xE2, 0xE3, 0xCF, 0xD3][..]));
        assert!(s.xref_tables.is_empty());
        assert!(s.classic_xref_absent);
    }

    #[test]
    fn word_seed_one_has_two_trailers() {
        let f = generate(&profile(&ProducerId::MicrosoftOfficeWord).unwrap(), 1);
        let s = segment(&f).unwrap();
        assert_eq!(s.trailers.len(), 2);
        assert!(s.trailers[1].keys.ends_with(&["/Prev".to_string(), "/XRefStm".to_string()]));
    }

    #[test]
    fn libreoffice_trailer_ends_with_checksum() {
        let f = generate(&profile(&ProducerId::LibreOffice).unwrap(), 1);
        let s = segment(&f).unwrap();
        assert_eq!(s.trailers.last().unwrap().keys.last().map(String::as_str), Some("/DocChecksum"));
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        for p in profiles() {
            assert_eq!(generate(&p, 7), generate(&p, 7));
            assert_ne!(generate(&p, 7), generate(&p, 8));
        }
    }

    #[test]
    fn valid_without_diagnostics() {
        for p in profiles() {
            for seed in 0..5 {
                let s = segment(&generate(&p, seed)).unwrap();
                assert!(s.diagnostics.is_empty(), "{} {seed}: {:?}", p.producer, s.diagnostics);
                assert!(s.objects.len() >= 5);
                assert_eq!(s.info_ref(), Some((5, 0)));
                assert_eq!(s.xref_tables.len(), usize::from(p.include_classic_xref));
            }
        }
    }

    #[test]
    fn xref_offsets_point_at_objects() {
        for p in profiles().into_iter().filter(|p| p.include_classic_xref) {
            let f = generate(&p, 3);
            let s = segment(&f).unwrap();
            let entries: Vec<_> = s.xref_tables[0].subsections[0].entries.iter().skip(1).collect();
            assert_eq!(entries.len(), s.objects.len());
            for (e, o) in entries.iter().zip(&s.objects) {
                assert_eq!(e.offset as usize, o.span.offset, "{}", p.producer);
            }
        }
    }

    #[test]
    fn self_detection() {
        for p in profiles() {
            for seed in 0..10 {
                let v = detect(builtin(), &generate(&p, seed)).unwrap();
                assert_eq!(v.outcome, Outcome::Producer(p.producer.clone()), "{} {seed}: {:?}", p.producer, v.votes);
            }
        }
    }

    #[test]
    fn declared_producer_is_configurable() {
        let p = profile(&ProducerId::Ghostscript).unwrap();
        let opts = FixtureOptions { declared_producer: Some("VeryPDF (x)".into()), xmp: true };
        let d = crate::audit::extract_declared(&generate_with(&p, 1, &opts));
        assert_eq!(d.info_producer.as_deref(), Some("VeryPDF (x)"));
        assert_eq!(d.xmp_producer.as_deref(), Some("VeryPDF (x)"));
        let none = FixtureOptions { declared_producer: None, xmp: false };
        assert_eq!(crate::audit::extract_declared(&generate_with(&p, 1, &none)).producer, None);
    }

    #[test]
    fn trailer_renderings() {
        let v = DictValues { size: 25, root: 1, info: 9, id: "AB".into(), prev: Some(46566), ..DictValues::default() };
        let keys = ["/Size", "/Root", "/Info", "/ID", "/Prev", "/XRefStm"];
        assert_eq!(
            render_dict(&keys, DictStyle::CompactSpacedArrays, &v, "\n"),
            "<</Size 25/Root 1 0 R/Info 9 0 R/ID[<AB><AB>] /Prev 46566/XRefStm 46566>>"
        );
        let acro = ["/DecodeParms", "/Columns", "/Predictor", "/Filter", "/FlateDecode", "/W"];
        assert_eq!(
            render_dict(&acro, DictStyle::Compact, &v, "\n"),
            "<</DecodeParms<</Columns 5/Predictor 12>>/Filter/FlateDecode/W[1 4 2]>>"
        );
    }
}
