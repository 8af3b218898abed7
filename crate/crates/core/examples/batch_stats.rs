//! Batch detection over a generated corpus with the statistics tables.

use pdfstyle::builtin::builtin;
use pdfstyle::cli::{batch_items, batch_stats, run_batch, Truth};
use pdfstyle::fixtures;

fn main() {
    let dir = tempfile_dir();
    fixtures::emit(&dir, 0..4).expect("writable directory");
    let files = run_batch(batch_items(&dir).unwrap(), builtin(), Truth::Manifest, 0).unwrap();
    print!("{}", batch_stats(&files, Truth::Manifest).render_tables());
    let _ = std::fs::remove_dir_all(&dir);
}

fn tempfile_dir() -> std::path::PathBuf {
    std::env::temp_dir().join(format!("pdfstyle-batch-{}", std::process::id()))
}
