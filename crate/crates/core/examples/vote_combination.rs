//! The vote over hand-made section candidate sets.

use pdfstyle::{majority_vote, ProducerId, SectionKind, SectionVerdict};
use ProducerId::*;

fn sections(sets: [&[ProducerId]; 4]) -> Vec<SectionVerdict> {
    SectionKind::ALL
        .into_iter()
        .zip(sets)
        .map(|(section, s)| SectionVerdict { section, candidates: s.iter().cloned().collect(), supporting_matches: vec![] })
        .collect()
}

fn main() {
    let cases: [(&str, [&[ProducerId]; 4]); 4] = [
        ("unique maximum", [&[PdfTeX, LuaTeX], &[PdfTeX], &[], &[PdfTeX]]),
        ("tie", [&[Cairo], &[SkiaPDF], &[], &[]]),
        ("one voter", [&[], &[], &[], &[XdviPDFmx]]),
        ("silence", [&[], &[], &[], &[]]),
    ];
    for (name, sets) in cases {
        let v = majority_vote(&sections(sets));
        println!("{name:<16} {:?}  votes {:?}", v.outcome, v.votes);
    }
}
