//! Write a synthetic corpus and its manifest.
//!
//!     cargo run --example generate_fixtures -- /tmp/corpus 5

use std::path::PathBuf;

use pdfstyle::fixtures;

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("pdfstyle-fixtures"));
    let n: u64 = args.next().map(|s| s.parse().expect("a count")).unwrap_or(3);
    for p in fixtures::profiles() {
        println!("{:<20} {:<16} {:?}", p.producer.to_string(), fixtures::fixture_name(&p, 0), p.trailer_form);
    }
    let manifest = fixtures::emit(&dir, 0..n).expect("writable directory");
    println!("manifest {}", manifest.display());
}
