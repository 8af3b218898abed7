//! Mine a rule file from a synthetic labelled corpus and check it on
//! files the miner never saw.

use pdfstyle::miner::{emit_rulepack, mine_sections, LabeledCorpus, MineOptions};
use pdfstyle::{detect, fixtures, load_rulepack, SectionKind};

fn main() {
    let mut corpus = LabeledCorpus::new();
    for f in fixtures::corpus(0..6) {
        corpus.add(f.name, f.producer, f.os, f.distro, &f.bytes).unwrap();
    }
    let mined = mine_sections(&corpus, &SectionKind::ALL, &MineOptions::default()).unwrap();
    let text = emit_rulepack(&mined, "mined");
    let pack = load_rulepack(&text).unwrap();
    println!("{} rules from {} files", pack.len(), corpus.len());
    for (p, n) in pack.counts_by_producer() {
        println!("  {:<20} {n}", p.to_string());
    }
    let held_out = fixtures::corpus(500..503);
    let right = held_out.iter().filter(|f| detect(&pack, &f.bytes).unwrap().outcome.producer() == Some(&f.producer)).count();
    println!("held out: {right}/{}", held_out.len());
}
