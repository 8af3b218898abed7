//! Load a hand-written rule file and run it next to the builtin pack.

use pdfstyle::builtin::builtin;
use pdfstyle::{detect, fixtures, load_rulepack, ProducerId};

const PACK: &str = r#"# name: house
# version: 1

rule house-trailer-0 {
  producer = Ghostscript
  section  = trailer
  kind     = keyorder
  pattern  = "/Info [0-9]+ 0 R /ID \[<"
}
"#;

fn main() {
    let pack = load_rulepack(PACK).expect("valid rule file");
    println!("{} v{}: {} rule(s)", pack.name, pack.version, pack.len());
    for p in [ProducerId::Ghostscript, ProducerId::Cairo] {
        let bytes = fixtures::generate(&fixtures::profile(&p).unwrap(), 3);
        let own = detect(&pack, &bytes).unwrap();
        let all = detect(builtin(), &bytes).unwrap();
        println!("{:<14} house {:?}  builtin {:?}", p.to_string(), own.outcome, all.outcome);
    }
}
