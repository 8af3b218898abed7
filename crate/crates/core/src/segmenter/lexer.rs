//! Minimal PDF token and dictionary reader.
//!
//! Only what segmentation needs: dictionaries with their key order,
//! references, names, numbers, strings and arrays. No streams are decoded.

const MAX_DEPTH: usize = 64;

pub(crate) fn is_whitespace(b: u8) -> bool {
    matches!(b, 0x00 | 0x09 | 0x0A | 0x0C | 0x0D | 0x20)
}

pub(crate) fn is_delimiter(b: u8) -> bool {
    matches!(b, b'(' | b')' | b'<' | b'>' | b'[' | b']' | b'{' | b'}' | b'/' | b'%')
}

fn is_regular(b: u8) -> bool {
    !is_whitespace(b) && !is_delimiter(b)
}

/// A parsed PDF value.
#[derive(Debug, Clone, PartialEq)]
pub enum PdfValue {
    /// Name token as written, including the leading slash.
    Name(String),
    Number(String),
    Ref(u32, u16),
    /// Decoded bytes of a literal `( ... )` string.
    Literal(Vec<u8>),
    /// Decoded bytes of a hex `< ... >` string.
    Hex(Vec<u8>),
    Array(Vec<PdfValue>),
    Dict(Dict),
    Keyword(String),
}

impl PdfValue {
    pub fn as_name(&self) -> Option<&str> {
        match self {
            PdfValue::Name(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_ref(&self) -> Option<(u32, u16)> {
        match self {
            PdfValue::Ref(n, g) => Some((*n, *g)),
            _ => None,
        }
    }

    pub fn as_string_bytes(&self) -> Option<&[u8]> {
        match self {
            PdfValue::Literal(b) | PdfValue::Hex(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<u64> {
        match self {
            PdfValue::Number(n) => n.parse().ok(),
            _ => None,
        }
    }
}

/// A dictionary with its entries in source order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dict {
    pub entries: Vec<(String, PdfValue)>,
}

impl Dict {
    pub fn keys(&self) -> Vec<String> {
        self.entries.iter().map(|(k, _)| k.clone()).collect()
    }

    /// Last value bound to `key` (later duplicates win, like most readers).
    pub fn get(&self, key: &str) -> Option<&PdfValue> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn name_is(&self, key: &str, name: &str) -> bool {
        self.get(key).and_then(PdfValue::as_name) == Some(name)
    }
}

pub(crate) fn skip_ws(data: &[u8], mut pos: usize) -> usize {
    while pos < data.len() {
        let b = data[pos];
        if is_whitespace(b) {
            pos += 1;
        } else if b == b'%' {
            while pos < data.len() && data[pos] != b'\n' && data[pos] != b'\r' {
                pos += 1;
            }
        } else {
            break;
        }
    }
    pos
}

/// True when `data[pos..]` starts with the keyword `word` delimited on the right.
pub(crate) fn keyword_at(data: &[u8], pos: usize, word: &[u8]) -> bool {
    data[pos.min(data.len())..].starts_with(word)
        && data.get(pos + word.len()).is_none_or(|&b| !is_regular(b))
}

fn parse_integer(data: &[u8], pos: usize) -> Option<(u64, usize)> {
    let mut end = pos;
    while end < data.len() && data[end].is_ascii_digit() {
        end += 1;
    }
    if end == pos || data.get(end).is_some_and(|&b| is_regular(b)) {
        return None;
    }
    std::str::from_utf8(&data[pos..end])
        .ok()?
        .parse()
        .ok()
        .map(|v| (v, end))
}

/// Parses a dictionary starting at `<<`. Returns the dictionary and the
/// offset just past the closing `>>`.
pub fn parse_dict(data: &[u8], pos: usize) -> Option<(Dict, usize)> {
    parse_dict_depth(data, pos, 0)
}

fn parse_dict_depth(data: &[u8], pos: usize, depth: usize) -> Option<(Dict, usize)> {
    if depth > MAX_DEPTH || !data[pos.min(data.len())..].starts_with(b"<<") {
        return None;
    }
    let mut dict = Dict::default();
    let mut pos = pos + 2;
    loop {
        pos = skip_ws(data, pos);
        if pos >= data.len() {
            return None;
        }
        if data[pos..].starts_with(b">>") {
            return Some((dict, pos + 2));
        }
        if data[pos] != b'/' {
            return None;
        }
        let (key, after_key) = parse_name(data, pos);
        let value_pos = skip_ws(data, after_key);
        let (value, after_value) = parse_value(data, value_pos, depth + 1)?;
        dict.entries.push((key, value));
        pos = after_value;
    }
}

fn parse_name(data: &[u8], pos: usize) -> (String, usize) {
    let mut end = pos + 1;
    while end < data.len() && is_regular(data[end]) {
        end += 1;
    }
    (String::from_utf8_lossy(&data[pos..end]).into_owned(), end)
}

/// Parses any value at `pos` (no leading whitespace expected).
pub fn parse_value(data: &[u8], pos: usize, depth: usize) -> Option<(PdfValue, usize)> {
    if depth > MAX_DEPTH || pos >= data.len() {
        return None;
    }
    match data[pos] {
        b'/' => {
            let (name, end) = parse_name(data, pos);
            Some((PdfValue::Name(name), end))
        }
        b'<' if data[pos..].starts_with(b"<<") => {
            let (dict, end) = parse_dict_depth(data, pos, depth)?;
            Some((PdfValue::Dict(dict), end))
        }
        b'<' => parse_hex_string(data, pos),
        b'(' => parse_literal_string(data, pos),
        b'[' => {
            let mut items = Vec::new();
            let mut p = pos + 1;
            loop {
                p = skip_ws(data, p);
                if p >= data.len() {
                    return None;
                }
                if data[p] == b']' {
                    return Some((PdfValue::Array(items), p + 1));
                }
                let (v, end) = parse_value(data, p, depth + 1)?;
                items.push(v);
                p = end;
            }
        }
        b'0'..=b'9' => {
            if let Some(r) = parse_reference(data, pos) {
                return Some(r);
            }
            parse_number(data, pos)
        }
        b'+' | b'-' | b'.' => parse_number(data, pos),
        b if is_regular(b) => {
            let mut end = pos;
            while end < data.len() && is_regular(data[end]) {
                end += 1;
            }
            let word = String::from_utf8_lossy(&data[pos..end]).into_owned();
            Some((PdfValue::Keyword(word), end))
        }
        _ => None,
    }
}

fn parse_reference(data: &[u8], pos: usize) -> Option<(PdfValue, usize)> {
    let (num, p) = parse_integer(data, pos)?;
    let p = skip_ws(data, p);
    let (gen, p) = parse_integer(data, p)?;
    let p = skip_ws(data, p);
    if keyword_at(data, p, b"R") {
        Some((PdfValue::Ref(u32::try_from(num).ok()?, u16::try_from(gen).ok()?), p + 1))
    } else {
        None
    }
}

fn parse_number(data: &[u8], pos: usize) -> Option<(PdfValue, usize)> {
    let mut end = pos;
    while end < data.len() && matches!(data[end], b'0'..=b'9' | b'+' | b'-' | b'.') {
        end += 1;
    }
    if end == pos {
        return None;
    }
    Some((
        PdfValue::Number(String::from_utf8_lossy(&data[pos..end]).into_owned()),
        end,
    ))
}

fn hex_val(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'a'..=b'f' => Some(b - b'a' + 10),
        b'A'..=b'F' => Some(b - b'A' + 10),
        _ => None,
    }
}

fn parse_hex_string(data: &[u8], pos: usize) -> Option<(PdfValue, usize)> {
    let mut digits = Vec::new();
    let mut p = pos + 1;
    while p < data.len() && data[p] != b'>' {
        let b = data[p];
        if let Some(v) = hex_val(b) {
            digits.push(v);
        } else if !is_whitespace(b) {
            return None;
        }
        p += 1;
    }
    if p >= data.len() {
        return None;
    }
    if digits.len() % 2 == 1 {
        digits.push(0);
    }
    let bytes = digits.chunks(2).map(|c| (c[0] << 4) | c[1]).collect();
    Some((PdfValue::Hex(bytes), p + 1))
}

fn parse_literal_string(data: &[u8], pos: usize) -> Option<(PdfValue, usize)> {
    let mut out = Vec::new();
    let mut depth = 1usize;
    let mut p = pos + 1;
    while p < data.len() {
        let b = data[p];
        match b {
            b'\\' => {
                p += 1;
                let e = *data.get(p)?;
                match e {
                    b'n' => out.push(b'\n'),
                    b'r' => out.push(b'\r'),
                    b't' => out.push(b'\t'),
                    b'b' => out.push(0x08),
                    b'f' => out.push(0x0C),
                    b'(' | b')' | b'\\' => out.push(e),
                    b'\r' => {
                        if data.get(p + 1) == Some(&b'\n') {
                            p += 1;
                        }
                    }
                    b'\n' => {}
                    b'0'..=b'7' => {
                        let mut v: u32 = 0;
                        let mut n = 0;
                        while n < 3 && p < data.len() && (b'0'..=b'7').contains(&data[p]) {
                            v = v * 8 + u32::from(data[p] - b'0');
                            p += 1;
                            n += 1;
                        }
                        out.push((v & 0xFF) as u8);
                        continue;
                    }
                    other => out.push(other),
                }
            }
            b'(' => {
                depth += 1;
                out.push(b);
            }
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return Some((PdfValue::Literal(out), p + 1));
                }
                out.push(b);
            }
            _ => out.push(b),
        }
        p += 1;
    }
    None
}

/// Decodes PDF text-string bytes: UTF-16BE with a byte-order mark, UTF-8
/// with its mark, otherwise each byte is taken as a Latin-1 code point.
pub fn decode_text_string(bytes: &[u8]) -> String {
    if let Some(rest) = bytes.strip_prefix(&[0xFE, 0xFF]) {
        let units: Vec<u16> = rest
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect();
        return String::from_utf16_lossy(&units);
    }
    if let Some(rest) = bytes.strip_prefix(&[0xEF, 0xBB, 0xBF]) {
        return String::from_utf8_lossy(rest).into_owned();
    }
    bytes.iter().map(|&b| char::from(b)).collect()
}
