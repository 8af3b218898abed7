//! One PASS or FAIL line per acceptance criterion. Exits non-zero when
//! any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pdfstyle::builtin::builtin;
use pdfstyle::builtin::tables::{magic_numbers, trailer_signatures};
use pdfstyle::cli::{run, Cli};
use pdfstyle::detector::detect_sections;
use pdfstyle::fixtures::{self, FixtureOptions};
use pdfstyle::miner::{emit_rulepack, mine, mine_sections, LabeledCorpus, MineOptions};
use pdfstyle::segmenter::{parse_xref, render_entry, XrefKind};
use pdfstyle::{
    consistency_check, detect, load_rulepack, majority_vote, segment, ConsistencyStatus, Outcome, ProducerId, SectionKind,
    SectionVerdict,
};

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn header_magic() -> Check {
    let start = Instant::now();
    let rows = magic_numbers();
    let mut expected: BTreeMap<&[u8], BTreeSet<ProducerId>> = BTreeMap::new();
    for r in &rows {
        expected.entry(r.bytes).or_default().insert(r.producer.clone());
    }
    let mut bad = Vec::new();
    for r in &rows {
        let s = segment(&fixtures::header_only_file(r.bytes)).map_err(|e| e.to_string())?;
        let (v, _) = detect_sections(builtin(), &s);
        let got = &v.section(SectionKind::Header).candidates;
        if got != &expected[r.bytes] {
            bad.push(format!("{:02X?} gave {got:?}", r.bytes));
        }
    }
    let elapsed = start.elapsed();
    if !bad.is_empty() {
        return Err(bad.join("; "));
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!("{}/{} exact, {}", rows.len(), rows.len(), secs(elapsed)))
}

fn trailer_keys() -> Check {
    let sigs = trailer_signatures();
    let mut bad = Vec::new();
    for sig in &sigs {
        let s = segment(&fixtures::trailer_only_file(sig.key_sequence, sig.form)).map_err(|e| e.to_string())?;
        let (v, _) = detect_sections(builtin(), &s);
        let got = &v.section(SectionKind::Trailer).candidates;
        let mut want: BTreeSet<ProducerId> = sig.shared_with.iter().cloned().collect();
        want.insert(sig.producer.clone());
        if got != &want {
            bad.push(format!("{} {:?} gave {got:?}", sig.producer, sig.key_sequence));
        }
    }
    if bad.is_empty() {
        Ok(format!("{}/{} exact", sigs.len(), sigs.len()))
    } else {
        Err(bad.join("; "))
    }
}

const XREF_BYTES: &[u8] =
    b"xref\n0 5\n0000000010 65535 f \n0000000017 00000 n \n0000000166 00000 n \n0000000222 00000 n \n0000000486 00000 n \ntrailer\n";

fn xref_grammar() -> Check {
    let tables = parse_xref(XREF_BYTES);
    let t = tables.first().ok_or("no table parsed")?;
    let sub = t.subsections.first().ok_or("no subsection")?;
    if (sub.first_obj, sub.count) != (0, 5) || sub.entries.len() != 5 {
        return Err(format!("subsection ({}, {}) with {} entries", sub.first_obj, sub.count, sub.entries.len()));
    }
    let e = &sub.entries[0];
    if (e.offset, e.generation, e.kind) != (10, 65535, XrefKind::Free) {
        return Err(format!("first entry {e:?}"));
    }
    let rendered = render_entry(e);
    if rendered != "0000000010 65535 f" {
        return Err(format!("rendered {rendered:?}"));
    }
    for (i, e) in sub.entries.iter().enumerate() {
        let line = &XREF_BYTES[9 + 20 * i..9 + 20 * i + 18];
        if render_entry(e).as_bytes() != line {
            return Err(format!("entry {i} re-rendered as {:?}", render_entry(e)));
        }
    }
    Ok("subsection (0, 5), entry 10/65535/free, 10+5 digits".into())
}

fn self_detection() -> Check {
    let start = Instant::now();
    let corpus = fixtures::corpus(0..10);
    let mut wrong = Vec::new();
    for f in &corpus {
        let v = detect(builtin(), &f.bytes).map_err(|e| format!("{}: {e}", f.name))?;
        if v.outcome != Outcome::Producer(f.producer.clone()) {
            wrong.push(format!("{} gave {:?}", f.name, v.outcome));
        }
    }
    let elapsed = start.elapsed();
    if !wrong.is_empty() {
        return Err(wrong.join("; "));
    }
    if corpus.len() < 110 || elapsed >= Duration::from_secs(5) {
        return Err(format!("{} files in {}", corpus.len(), secs(elapsed)));
    }
    Ok(format!("{}/{} correct, {}", corpus.len(), corpus.len(), secs(elapsed)))
}

/// Positions strictly between `obj` and `endobj` of every metadata object.
fn metadata_interiors(bytes: &[u8]) -> Result<Vec<std::ops::Range<usize>>, String> {
    let s = segment(bytes).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for o in s.metadata_objects() {
        let open = o.raw.windows(3).position(|w| w == b"obj").ok_or("object without obj keyword")? + 3;
        let close = o.raw.windows(6).rposition(|w| w == b"endobj").ok_or("object without endobj")?;
        out.push(o.span.offset + open..o.span.offset + close);
    }
    if out.is_empty() {
        return Err("no metadata objects".into());
    }
    Ok(out)
}

fn metadata_robustness() -> Check {
    let mut files: Vec<(String, Vec<u8>)> = fixtures::corpus(0..10).into_iter().map(|f| (f.name, f.bytes)).collect();
    for p in fixtures::profiles() {
        let opts = FixtureOptions { xmp: true, ..FixtureOptions::for_profile(&p) };
        files.push((format!("{}+xmp", fixtures::fixture_name(&p, 1)), fixtures::generate_with(&p, 1, &opts)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = Vec::new();
    for (name, bytes) in &files {
        let base = detect_sections(builtin(), &segment(bytes).map_err(|e| e.to_string())?);
        let ranges = metadata_interiors(bytes)?;
        let mut zeroed = bytes.clone();
        let mut rewritten = bytes.clone();
        for r in &ranges {
            zeroed[r.clone()].fill(0);
            for b in &mut rewritten[r.clone()] {
                *b = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ ()<>"[rng.gen_range(0..31)];
            }
        }
        for (how, altered) in [("zeroed", &zeroed), ("rewritten", &rewritten)] {
            let s = segment(altered).map_err(|e| format!("{name} {how}: {e}"))?;
            if detect_sections(builtin(), &s) != base {
                bad.push(format!("{name} {how}"));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{}/{} fixtures unchanged", files.len(), files.len()))
    } else {
        Err(bad.join("; "))
    }
}

/// Independent tally: the arg max of per-producer counts.
fn oracle(config: &[Vec<usize>; 4]) -> Option<Vec<usize>> {
    let mut count = [0u32; 3];
    for set in config {
        for &p in set {
            count[p] += 1;
        }
    }
    let top = *count.iter().max().unwrap();
    if top == 0 {
        return None;
    }
    Some((0..3).filter(|&p| count[p] == top).collect())
}

fn vote_semantics() -> Check {
    let alphabet = [ProducerId::Cairo, ProducerId::SkiaPDF, ProducerId::Ghostscript];
    let sets: Vec<Vec<usize>> = vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]];
    let mut checked = 0;
    let mut tie_seen = false;
    for a in &sets {
        for b in &sets {
            for c in &sets {
                for d in &sets {
                    let config = [a.clone(), b.clone(), c.clone(), d.clone()];
                    let svs: Vec<SectionVerdict> = SectionKind::ALL
                        .into_iter()
                        .zip(&config)
                        .map(|(section, s)| SectionVerdict {
                            section,
                            candidates: s.iter().map(|&i| alphabet[i].clone()).collect(),
                            supporting_matches: vec![],
                        })
                        .collect();
                    let want = match oracle(&config) {
                        None => Outcome::NoResult,
                        Some(l) if l.len() == 1 => Outcome::Producer(alphabet[l[0]].clone()),
                        Some(l) => Outcome::Ambiguous(l.iter().map(|&i| alphabet[i].clone()).collect()),
                    };
                    let got = majority_vote(&svs).outcome;
                    if got != want {
                        return Err(format!("{config:?}: got {got:?}, oracle {want:?}"));
                    }
                    if config == [vec![0], vec![1], vec![0], vec![1]] {
                        tie_seen = matches!(got, Outcome::Ambiguous(_));
                    }
                    checked += 1;
                }
            }
        }
    }
    if !tie_seen {
        return Err("2-2 split was not ambiguous".into());
    }
    Ok(format!("{checked}/{checked} configurations agree"))
}

const WORD_BODY: &str = r"4 0 obj\r\n<</Filter/FlateDecode/Length [0-9]*>>\r\nstream\r\n";

fn miner_rediscovery() -> Check {
    let mut corpus = LabeledCorpus::new();
    for f in fixtures::corpus(0..10) {
        corpus.add(f.name, f.producer, f.os, f.distro, &f.bytes).map_err(|e| e.to_string())?;
    }
    let opts = MineOptions::default();
    let body = mine(&corpus, SectionKind::Body, &opts).map_err(|e| e.to_string())?;
    let word = body.get(&ProducerId::MicrosoftOfficeWord).ok_or("no Word candidates")?;
    if !word.iter().any(|c| c.template == WORD_BODY) {
        return Err(format!("templates {:?}", word.iter().map(|c| &c.template).collect::<Vec<_>>()));
    }
    let mined = mine_sections(&corpus, &SectionKind::ALL, &opts).map_err(|e| e.to_string())?;
    let pack = load_rulepack(&emit_rulepack(&mined, "mined")).map_err(|e| e.to_string())?;
    let held_out = fixtures::corpus(100..110);
    let wrong: Vec<String> = held_out
        .iter()
        .filter_map(|f| {
            let v = detect(&pack, &f.bytes).ok()?;
            (v.outcome != Outcome::Producer(f.producer.clone())).then(|| format!("{} gave {:?}", f.name, v.outcome))
        })
        .collect();
    if !wrong.is_empty() {
        return Err(wrong.join("; "));
    }
    Ok(format!("template found, held-out {}/{} correct", held_out.len(), held_out.len()))
}

fn audit_semantics() -> Check {
    let p = fixtures::profile(&ProducerId::LibreOffice).ok_or("no profile")?;
    let honest = FixtureOptions::for_profile(&p);
    let cases = [
        (honest.clone(), ConsistencyStatus::Consistent),
        (FixtureOptions { declared_producer: Some("VeryPDF PDF Editor".into()), ..honest.clone() }, ConsistencyStatus::Inconsistent),
        (FixtureOptions { declared_producer: None, ..honest.clone() }, ConsistencyStatus::Unverifiable),
    ];
    for (opts, want) in cases {
        let r = consistency_check(&fixtures::generate_with(&p, 3, &opts), builtin()).map_err(|e| e.to_string())?;
        if r.status != want {
            return Err(format!("declared {:?}: got {:?}, want {want:?}", r.declared.producer, r.status));
        }
    }
    Ok("consistent, inconsistent, unverifiable".into())
}

fn batch_csv(dir: &std::path::Path, jobs: &str) -> Result<Vec<u8>, String> {
    let cli = Cli::try_parse_from(["pdfstyle", "batch", dir.to_str().unwrap(), "--format", "csv", "--jobs", jobs])
        .map_err(|e| e.to_string())?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&cli, &mut out, &mut err);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    Ok(out)
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    fixtures::emit(dir.path(), 0..10).map_err(|e| e.to_string())?;
    let one = batch_csv(dir.path(), "1")?;
    let eight = batch_csv(dir.path(), "8")?;
    if one != eight {
        return Err("outputs differ".into());
    }
    Ok(format!("{} bytes identical", one.len()))
}

fn main() {
    let checks: [Criterion; 9] = [
        ("AC1", "header magic numbers", header_magic),
        ("AC2", "trailer key sequences", trailer_keys),
        ("AC3", "xref grammar", xref_grammar),
        ("AC4", "fixture self-detection", self_detection),
        ("AC5", "metadata robustness", metadata_robustness),
        ("AC6", "vote semantics", vote_semantics),
        ("AC7", "miner rediscovery", miner_rediscovery),
        ("AC8", "consistency audit", audit_semantics),
        ("AC9", "batch determinism", determinism),
    ];
    let mut failed = 0;
    for (id, name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
