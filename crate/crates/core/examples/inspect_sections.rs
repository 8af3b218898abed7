//! Print the four sections a file is cut into.

use pdfstyle::fixtures;
use pdfstyle::segmenter::render_entry;
use pdfstyle::{segment, ProducerId};

fn main() {
    let bytes = match std::env::args_os().nth(1) {
        Some(p) => std::fs::read(&p).expect("readable file"),
        None => fixtures::generate(&fixtures::profile(&ProducerId::Ghostscript).unwrap(), 1),
    };
    let s = segment(&bytes).expect("a PDF");
    println!("header   PDF-{} binary comment {:?}", s.header.version, s.header.binary_comment.as_deref().map(String::from_utf8_lossy));
    for o in &s.objects {
        let tag = if o.is_metadata { " metadata" } else { "" };
        println!("object   {} {} at {} keys {:?}{tag}", o.obj_num, o.gen_num, o.span.offset, o.dict_keys);
    }
    if s.classic_xref_absent {
        println!("xref     none");
    }
    for t in &s.xref_tables {
        for sub in &t.subsections {
            println!("xref     {} {}", sub.first_obj, sub.count);
            for e in &sub.entries {
                println!("         {}", render_entry(e));
            }
        }
    }
    for t in &s.trailers {
        println!("trailer  {:?} keys {:?} startxref {:?}", t.source, t.keys, t.startxref_value);
    }
    for d in &s.diagnostics {
        println!("note     {:?} at {}: {}", d.kind, d.offset, d.message);
    }
}
