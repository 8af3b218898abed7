//! Token sequences and their maximal common substrings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::rules::escape_pattern_literal;

/// Shortest hex run inside `<...>` treated as volatile.
pub const HEX_RUN_MIN: usize = 16;

pub const DIGITS_CLASS: &str = "[0-9]*";
pub const HEX_CLASS: &str = "[0-9A-F]*";

/// A byte, or a volatile run that compares equal to any run of its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tok {
    Byte(u8),
    Digits,
    Hex,
}

impl Tok {
    pub fn is_class(self) -> bool {
        !matches!(self, Tok::Byte(_))
    }
}

pub fn tokenize(bytes: &[u8]) -> Vec<Tok> {
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'<' {
            let run = bytes[i + 1..].iter().take_while(|c| c.is_ascii_hexdigit()).count();
            if run >= HEX_RUN_MIN && bytes.get(i + 1 + run) == Some(&b'>') {
                out.extend([Tok::Byte(b'<'), Tok::Hex, Tok::Byte(b'>')]);
                i += run + 2;
                continue;
            }
        }
        if b.is_ascii_digit() {
            out.push(Tok::Digits);
            i += bytes[i..].iter().take_while(|c| c.is_ascii_digit()).count();
            continue;
        }
        out.push(Tok::Byte(b));
        i += 1;
    }
    out
}

/// Every common substring of `a` and `b` that cannot be extended on
/// either side, of at least `min_len` tokens.
pub fn maximal_common(a: &[Tok], b: &[Tok], min_len: usize) -> BTreeSet<Vec<Tok>> {
    let mut out = BTreeSet::new();
    if a.is_empty() || b.is_empty() {
        return out;
    }
    // prev[j] = length of the common suffix of a[..i] and b[..j]
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            cur[j] = if a[i - 1] == b[j - 1] { prev[j - 1] + 1 } else { 0 };
        }
        // a run ending at (i, j) is right-maximal when it stops extending at (i + 1, j + 1)
        for j in 1..=b.len() {
            let len = cur[j];
            if len >= min_len && (i == a.len() || j == b.len() || a[i] != b[j]) {
                out.insert(a[i - len..i].to_vec());
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    out
}

fn contains(hay: &[Tok], needle: &[Tok]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Drops every sequence that is a proper substring of another.
pub fn prune(set: BTreeSet<Vec<Tok>>) -> BTreeSet<Vec<Tok>> {
    let all: Vec<&Vec<Tok>> = set.iter().collect();
    set.iter()
        .filter(|s| !all.iter().any(|o| o.len() > s.len() && contains(o, s)))
        .cloned()
        .collect()
}

/// Substrings of at least `min_len` tokens common to every member of
/// `files`, where a file is a list of elements and a substring has to lie
/// within one element. The result is the set of maximal such substrings,
/// independent of file order.
pub fn common_to_all(files: &[Vec<Vec<Tok>>], min_len: usize) -> BTreeSet<Vec<Tok>> {
    let Some((first, rest)) = files.split_first() else { return BTreeSet::new() };
    let mut cands: BTreeSet<Vec<Tok>> = first.iter().filter(|e| e.len() >= min_len).cloned().collect();
    for file in rest {
        let mut next = BTreeSet::new();
        for c in &cands {
            for e in file {
                next.extend(maximal_common(c, e, min_len));
            }
        }
        cands = prune(next);
        if cands.is_empty() {
            break;
        }
    }
    prune(cands)
}

/// How each class token of a sequence is written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Class,
    Literal(Vec<u8>),
    Capture,
}

/// Regex source for `toks`; `slots` gives one entry per class token.
pub fn render(toks: &[Tok], slots: &[Slot]) -> String {
    let mut out = String::new();
    let mut run = Vec::new();
    let mut k = 0;
    for &t in toks {
        match t {
            Tok::Byte(b) => run.push(b),
            Tok::Digits | Tok::Hex => {
                out.push_str(&escape_pattern_literal(&run));
                run.clear();
                let class = if t == Tok::Digits { DIGITS_CLASS } else { HEX_CLASS };
                match slots.get(k).unwrap_or(&Slot::Class) {
                    Slot::Class => out.push_str(class),
                    Slot::Literal(v) => out.push_str(&escape_pattern_literal(v)),
                    Slot::Capture => {
                        let _ = write!(out, "({class})");
                    }
                }
                k += 1;
            }
        }
    }
    out.push_str(&escape_pattern_literal(&run));
    out
}
