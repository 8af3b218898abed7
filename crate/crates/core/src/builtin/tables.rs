//! Signature data the builtin pack is rendered from.

use crate::producer::{Distro, Os, ProducerId};

use ProducerId::*;

const ALL_DISTROS: &[Distro] = &[Distro::TeXLive, Distro::MikTeX];

/// One row of the header magic catalogue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagicNumberEntry {
    pub bytes: &'static [u8],
    pub producer: ProducerId,
    /// Empty when the value is seen on every OS (or the OS is unknown).
    pub os: &'static [Os],
    pub distro: &'static [Distro],
    pub note: Option<&'static str>,
}

pub fn magic_numbers() -> Vec<MagicNumberEntry> {
    fn row(bytes: &'static [u8], producer: ProducerId, os: &'static [Os], distro: &'static [Distro]) -> MagicNumberEntry {
        MagicNumberEntry { bytes, producer, os, distro, note: None }
    }
    vec![
        row(&[0xE2, 0xE3, 0xCF, 0xD3], AcrobatDistiller, &[], &[]),
        row(&[0xB5, 0xB5, 0xB5, 0xB5], MicrosoftOfficeWord, &[Os::Windows], &[]),
        row(&[0xD0, 0xD4, 0xC5, 0xD8], PdfTeX, &[], ALL_DISTROS),
        row(&[0xD0, 0xD4, 0xC5, 0xD8], LuaTeX, &[Os::Linux], &[Distro::TeXLive]),
        row(&[0xCC, 0xD5, 0xC1, 0xD4, 0xC5, 0xD8, 0xD0, 0xC4, 0xC6], LuaTeX, &[Os::Linux], &[Distro::MikTeX]),
        row(&[0xCC, 0xD5, 0xC1, 0xD4, 0xC5, 0xD8, 0xD0, 0xC4, 0xC6], LuaTeX, &[Os::MacOS, Os::Windows], ALL_DISTROS),
        row(&[0xE4, 0xF0, 0xED, 0xF8], XdviPDFmx, &[], ALL_DISTROS),
        MagicNumberEntry {
            note: Some("distro tags kept as catalogued although Ghostscript is not a TeX tool"),
            ..row(&[0xC7, 0xEC, 0x8F, 0xA2], Ghostscript, &[], ALL_DISTROS)
        },
        row(&[0xC3, 0xA4, 0xC3, 0xBC, 0xC3, 0xB6, 0xC3, 0x9F], LibreOffice, &[Os::Linux], &[]),
        row(&[0xC4, 0xE5, 0xF2, 0xE5, 0xEB, 0xA7, 0xF3, 0xA0, 0xD0, 0xC4, 0xC6], MacOSXQuartz, &[Os::MacOS], &[]),
        row(&[0xB5, 0xED, 0xAE, 0xFB], Cairo, &[], &[]),
        row(&[0xD3, 0xEB, 0xE9, 0xE1], SkiaPDF, &[], &[]),
        MagicNumberEntry {
            note: Some("seen from an online service; OS unknown"),
            ..row(&[0xF6, 0xE4, 0xFC, 0xDF], PDFLaTeX, &[], &[])
        },
    ]
}

/// How the trailer carrying a key sequence is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrailerForm {
    /// `trailer << ... >>` after a classic xref table.
    Keyword,
    /// The dictionary of a `/Type /XRef` stream object.
    XrefStream,
}

/// One row of the trailer key-order catalogue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailerKeySignature {
    pub producer: ProducerId,
    pub form: TrailerForm,
    /// Name tokens in source order, nested keys and name values included,
    /// spelled exactly as catalogued.
    pub key_sequence: &'static [&'static str],
    /// Other producers whose row has the identical sequence.
    pub shared_with: Vec<ProducerId>,
    pub distro: &'static [Distro],
}

const TEXLIVE_XREF: &[&str] =
    &["/Type", "/XRef", "/Index", "/Size", "/W", "/Root", "/Info", "/ID", "/Length", "/Filter", "/FlateDecode"];
const FOUR_KEYS: &[&str] = &["/Size", "/Root", "/Info", "/ID"];
const THREE_KEYS: &[&str] = &["/Size", "/Root", "/Info"];

pub fn trailer_signatures() -> Vec<TrailerKeySignature> {
    use TrailerForm::*;
    fn sig(
        producer: ProducerId,
        form: TrailerForm,
        key_sequence: &'static [&'static str],
        shared_with: &[ProducerId],
        distro: &'static [Distro],
    ) -> TrailerKeySignature {
        TrailerKeySignature { producer, form, key_sequence, shared_with: shared_with.to_vec(), distro }
    }
    vec![
        sig(
            AcrobatDistiller,
            XrefStream,
            &["/DecodeParms", "/Columns", "/Predictor", "/Filter", "/FlateDecode", "/ID", "/Info", "/Length", "/Root", "/Size", "/Type", "/XRef", "/W"],
            &[],
            &[],
        ),
        sig(LuaTeX, XrefStream, TEXLIVE_XREF, &[PdfTeX], &[Distro::TeXLive]),
        sig(PdfTeX, XrefStream, TEXLIVE_XREF, &[LuaTeX], &[Distro::TeXLive]),
        sig(LuaTeX, Keyword, FOUR_KEYS, &[PdfTeX, Ghostscript, MacOSXQuartz], &[Distro::MikTeX]),
        sig(PdfTeX, Keyword, FOUR_KEYS, &[LuaTeX, Ghostscript, MacOSXQuartz], &[Distro::MikTeX]),
        sig(Ghostscript, Keyword, FOUR_KEYS, &[LuaTeX, PdfTeX, MacOSXQuartz], &[]),
        sig(
            XdviPDFmx,
            XrefStream,
            &["/Type", "/XRef", "/Root", "/Info", "/ID", "/Size", "/W", "/Filter", "/FlateDecode", "/Length"],
            &[],
            &[],
        ),
        sig(MicrosoftOfficeWord, Keyword, &["/Size", "/Root", "/Info", "/ID", "/Prev", "/XRefStm"], &[], &[]),
        sig(LibreOffice, Keyword, &["/Size", "/Root", "/Info", "/ID", "/DocChecksum"], &[], &[]),
        sig(MacOSXQuartz, Keyword, FOUR_KEYS, &[LuaTeX, PdfTeX, Ghostscript], &[]),
        sig(Cairo, Keyword, THREE_KEYS, &[SkiaPDF], &[]),
        sig(SkiaPDF, Keyword, THREE_KEYS, &[Cairo], &[]),
        sig(PDFLaTeX, Keyword, &["/Root", "/info", "/ID", "/Size"], &[], &[]),
    ]
}

/// A body or trailer template written as a pattern directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub producer: ProducerId,
    pub pattern: &'static str,
    pub os: &'static [Os],
    pub note: &'static str,
}

pub fn body_templates() -> Vec<Template> {
    vec![
        Template {
            producer: MicrosoftOfficeWord,
            pattern: r"4 0 obj\r\n<</Filter/FlateDecode/Length [0-9]*>>\r\nstream\r\n",
            os: &[Os::Windows],
            note: "stream object present in every file",
        },
        Template {
            producer: PdfTeX,
            pattern: r"obj\n<</Length [0-9]+ +/Filter/FlateDecode>>\nstream\n",
            os: &[],
            note: "keys on one line, length padded with spaces",
        },
        Template {
            producer: LuaTeX,
            pattern: r"obj\n<<\n/Length [0-9]+ *\n/Filter /FlateDecode\n>>\nstream\n",
            os: &[],
            note: "one key per line",
        },
    ]
}

pub fn trailer_templates() -> Vec<Template> {
    vec![Template {
        producer: MicrosoftOfficeWord,
        pattern: r"trailer\r?\n<</Size [0-9]+/Root [0-9]+ 0 R/Info [0-9]+ 0 R/ID\[<[0-9A-F]+><[0-9A-F]+>\] /Prev [0-9]+/XRefStm [0-9]+>>",
        os: &[],
        note: "second trailer of the two-trailer layout",
    }]
}

/// Whether a producer writes a classic xref table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresenceEntry {
    pub producer: ProducerId,
    pub table_present: bool,
    pub distro: &'static [Distro],
}

pub fn presence_facts() -> Vec<PresenceEntry> {
    fn present(producer: ProducerId, distro: &'static [Distro]) -> PresenceEntry {
        PresenceEntry { producer, table_present: true, distro }
    }
    fn absent(producer: ProducerId, distro: &'static [Distro]) -> PresenceEntry {
        PresenceEntry { producer, table_present: false, distro }
    }
    vec![
        absent(AcrobatDistiller, &[]),
        present(MicrosoftOfficeWord, &[]),
        present(LibreOffice, &[]),
        present(Ghostscript, &[]),
        present(MacOSXQuartz, &[]),
        present(PdfTeX, &[Distro::MikTeX]),
        absent(PdfTeX, &[Distro::TeXLive]),
        present(SkiaPDF, &[]),
        present(Cairo, &[]),
        absent(XdviPDFmx, &[]),
        present(LuaTeX, &[]),
        present(PDFLaTeX, &[]),
    ]
}

/// Size of each producer's complete reference rule set, of which the
/// builtin pack encodes only the known part.
pub fn reference_rule_counts() -> Vec<(ProducerId, usize)> {
    vec![
        (AcrobatDistiller, 13),
        (MicrosoftOfficeWord, 16),
        (LibreOffice, 15),
        (Ghostscript, 15),
        (MacOSXQuartz, 30),
        (PdfTeX, 31),
        (SkiaPDF, 12),
        (Cairo, 16),
        (XdviPDFmx, 13),
        (LuaTeX, 22),
        (PDFLaTeX, 9),
    ]
}
