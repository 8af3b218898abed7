//! Detect the producer of a PDF given on the command line, or of a
//! generated Word-style file when none is given.
//!
//!     cargo run --example scan_file -- some.pdf

use pdfstyle::builtin::builtin;
use pdfstyle::{detect, fixtures, Outcome, ProducerId};

fn main() {
    let bytes = match std::env::args_os().nth(1) {
        Some(p) => std::fs::read(&p).expect("readable file"),
        None => fixtures::generate(&fixtures::profile(&ProducerId::MicrosoftOfficeWord).unwrap(), 7),
    };
    let verdict = match detect(builtin(), &bytes) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    match &verdict.outcome {
        Outcome::Producer(p) => println!("producer  {}", p.display_name()),
        Outcome::Ambiguous(c) => println!("ambiguous {c:?}"),
        Outcome::NoResult => println!("no result"),
    }
    for (section, rules) in verdict.evidence() {
        println!("  {:<8} {}", section.keyword(), rules.join(" "));
    }
    for (os, distro) in &verdict.os_candidates {
        println!("  os       {}{}", os.keyword(), distro.map(|d| format!(" ({})", d.keyword())).unwrap_or_default());
    }
}
