//! Compare declared and detected producers, including a forged declaration.

use pdfstyle::builtin::builtin;
use pdfstyle::fixtures::{self, FixtureOptions};
use pdfstyle::{consistency_check, ProducerId};

fn main() {
    let word = fixtures::profile(&ProducerId::MicrosoftOfficeWord).unwrap();
    let honest = FixtureOptions::for_profile(&word);
    let forged = FixtureOptions { declared_producer: Some("VeryPDF Tools".into()), ..honest.clone() };
    let stripped = FixtureOptions { declared_producer: None, ..honest.clone() };
    for (name, opts) in [("honest", honest), ("forged", forged), ("stripped", stripped)] {
        let r = consistency_check(&fixtures::generate_with(&word, 4, &opts), builtin()).unwrap();
        println!("{name:<9} declared {:<24} detected {:?} -> {:?}", format!("{:?}", r.declared.producer), r.detected.outcome, r.status);
    }
}
