//! Producer, operating-system, distribution and section vocabularies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The software that serialized a PDF file.
///
/// The eleven named variants are the tools the builtin rulepack knows
/// about. Extension packs may name other tools; those parse to
/// [`ProducerId::Unknown`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProducerId {
    AcrobatDistiller,
    MicrosoftOfficeWord,
    LibreOffice,
    Ghostscript,
    MacOSXQuartz,
    PdfTeX,
    SkiaPDF,
    Cairo,
    XdviPDFmx,
    LuaTeX,
    PDFLaTeX,
    Unknown(String),
}

impl ProducerId {
    /// All named producers, in declaration order.
    pub const KNOWN: [ProducerId; 11] = [
        ProducerId::AcrobatDistiller,
        ProducerId::MicrosoftOfficeWord,
        ProducerId::LibreOffice,
        ProducerId::Ghostscript,
        ProducerId::MacOSXQuartz,
        ProducerId::PdfTeX,
        ProducerId::SkiaPDF,
        ProducerId::Cairo,
        ProducerId::XdviPDFmx,
        ProducerId::LuaTeX,
        ProducerId::PDFLaTeX,
    ];

    /// Canonical identifier used in rule files, manifests and reports.
    pub fn canonical_name(&self) -> &str {
        match self {
            ProducerId::AcrobatDistiller => "AcrobatDistiller",
            ProducerId::MicrosoftOfficeWord => "MicrosoftOfficeWord",
            ProducerId::LibreOffice => "LibreOffice",
            ProducerId::Ghostscript => "Ghostscript",
            ProducerId::MacOSXQuartz => "MacOSXQuartz",
            ProducerId::PdfTeX => "PdfTeX",
            ProducerId::SkiaPDF => "SkiaPDF",
            ProducerId::Cairo => "Cairo",
            ProducerId::XdviPDFmx => "XdviPDFmx",
            ProducerId::LuaTeX => "LuaTeX",
            ProducerId::PDFLaTeX => "PDFLaTeX",
            ProducerId::Unknown(name) => name,
        }
    }

    /// Human-facing product name, the way the tool usually spells itself.
    pub fn display_name(&self) -> &str {
        match self {
            ProducerId::AcrobatDistiller => "Acrobat Distiller",
            ProducerId::MicrosoftOfficeWord => "Microsoft Office Word",
            ProducerId::LibreOffice => "LibreOffice",
            ProducerId::Ghostscript => "Ghostscript",
            ProducerId::MacOSXQuartz => "Mac OS X Quartz",
            ProducerId::PdfTeX => "pdfTeX",
            ProducerId::SkiaPDF => "Skia/PDF",
            ProducerId::Cairo => "Cairo",
            ProducerId::XdviPDFmx => "xdvipdfmx",
            ProducerId::LuaTeX => "LuaTeX",
            ProducerId::PDFLaTeX => "PDFLaTeX",
            ProducerId::Unknown(name) => name,
        }
    }

    /// Short lowercase tag used to derive rule ids (`word-body-0`).
    pub fn slug(&self) -> String {
        match self {
            ProducerId::AcrobatDistiller => "acrobat".into(),
            ProducerId::MicrosoftOfficeWord => "word".into(),
            ProducerId::LibreOffice => "libreoffice".into(),
            ProducerId::Ghostscript => "ghostscript".into(),
            ProducerId::MacOSXQuartz => "quartz".into(),
            ProducerId::PdfTeX => "pdftex".into(),
            ProducerId::SkiaPDF => "skia".into(),
            ProducerId::Cairo => "cairo".into(),
            ProducerId::XdviPDFmx => "xdvipdfmx".into(),
            ProducerId::LuaTeX => "luatex".into(),
            ProducerId::PDFLaTeX => "pdflatex".into(),
            ProducerId::Unknown(name) => name
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
                .collect(),
        }
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, ProducerId::Unknown(_))
    }
}

impl fmt::Display for ProducerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical_name())
    }
}

impl FromStr for ProducerId {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(ProducerId::KNOWN
            .iter()
            .find(|p| p.canonical_name() == s)
            .cloned()
            .unwrap_or_else(|| ProducerId::Unknown(s.to_string())))
    }
}

impl Serialize for ProducerId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.canonical_name())
    }
}

impl<'de> Deserialize<'de> for ProducerId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(s.parse().unwrap_or_else(|never: std::convert::Infallible| match never {}))
    }
}

/// Operating system a producer ran on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Os {
    Windows,
    Linux,
    MacOS,
}

impl Os {
    pub const ALL: [Os; 3] = [Os::Windows, Os::Linux, Os::MacOS];

    pub fn keyword(self) -> &'static str {
        match self {
            Os::Windows => "windows",
            Os::Linux => "linux",
            Os::MacOS => "macos",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Os> {
        Os::ALL.into_iter().find(|o| o.keyword().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Os {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// TeX distribution, for the LaTeX tool chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distro {
    TeXLive,
    MikTeX,
}

impl Distro {
    pub const ALL: [Distro; 2] = [Distro::TeXLive, Distro::MikTeX];

    pub fn keyword(self) -> &'static str {
        match self {
            Distro::TeXLive => "texlive",
            Distro::MikTeX => "miktex",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Distro> {
        Distro::ALL.into_iter().find(|d| d.keyword().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Distro {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// The four structural sections of a PDF file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    Header,
    Body,
    Xref,
    Trailer,
}

impl SectionKind {
    pub const ALL: [SectionKind; 4] = [
        SectionKind::Header,
        SectionKind::Body,
        SectionKind::Xref,
        SectionKind::Trailer,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            SectionKind::Header => "header",
            SectionKind::Body => "body",
            SectionKind::Xref => "xref",
            SectionKind::Trailer => "trailer",
        }
    }

    pub fn from_keyword(s: &str) -> Option<SectionKind> {
        SectionKind::ALL
            .into_iter()
            .find(|k| k.keyword().eq_ignore_ascii_case(s))
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_names_round_trip() {
        for p in ProducerId::KNOWN {
            assert_eq!(p.canonical_name().parse::<ProducerId>().unwrap(), p);
        }
        assert_eq!(
            "qpdf".parse::<ProducerId>().unwrap(),
            ProducerId::Unknown("qpdf".into())
        );
    }

    #[test]
    fn unknown_slug_is_lowercase_dashed() {
        assert_eq!(ProducerId::Unknown("Apache FOP".into()).slug(), "apache-fop");
    }

    #[test]
    fn serde_uses_canonical_name() {
        let json = serde_json::to_string(&ProducerId::MacOSXQuartz).unwrap();
        assert_eq!(json, "\"MacOSXQuartz\"");
        let back: ProducerId = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ProducerId::MacOSXQuartz);
    }
}
