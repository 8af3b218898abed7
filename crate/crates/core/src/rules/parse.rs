//! The line-oriented rule-file format.
//!
//! ```text
//! # name: builtin
//! # version: 1
//! rule word-body-0 {
//!   producer = MicrosoftOfficeWord
//!   section  = body
//!   kind     = template
//!   os       = [windows]
//!   pattern  = "4 0 obj\r\n<</Filter/FlateDecode/Length [0-9]*>>\r\nstream\r\n"
//! }
//! ```
//!
//! `#` starts a comment outside a quoted pattern. The `# name:` and
//! `# version:` comments before the first rule name the pack. Inside a
//! pattern only `\"` is special to the file format; every other escape is
//! handed to the regex compiler untouched.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Rule, RuleId, RuleKind, Rulepack, RulepackError};
use crate::producer::{Distro, Os, ProducerId, SectionKind};

fn err(line: usize, reason: impl Into<String>) -> RulepackError {
    RulepackError::RuleParse { line, reason: reason.into() }
}

/// Cuts a trailing comment, ignoring `#` inside a quoted pattern.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if quoted => escaped = true,
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_pattern(v: &str, line: usize) -> Result<String, RulepackError> {
    let inner = v
        .strip_prefix('"')
        .ok_or_else(|| err(line, "pattern must be a quoted string"))?;
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '"' => {
                if !chars.as_str().trim().is_empty() {
                    return Err(err(line, "text after closing quote"));
                }
                return Ok(out);
            }
            '\\' => match chars.next() {
                Some('"') => out.push('"'),
                Some(n) => {
                    out.push('\\');
                    out.push(n);
                }
                None => return Err(err(line, "unterminated pattern")),
            },
            _ => out.push(c),
        }
    }
    Err(err(line, "unterminated pattern"))
}

fn parse_list<T>(v: &str, line: usize, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<BTreeSet<T>, RulepackError>
where
    T: Ord,
{
    let inner = v
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("{what} must be a [list]")))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| f(s).ok_or_else(|| err(line, format!("unknown {what} {s:?}"))))
        .collect()
}

#[derive(Default)]
struct Draft {
    id: String,
    line: usize,
    producer: Option<ProducerId>,
    section: Option<SectionKind>,
    kind: Option<RuleKind>,
    os: Option<BTreeSet<Os>>,
    distro: Option<BTreeSet<Distro>>,
    pattern: Option<String>,
}

impl Draft {
    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), RulepackError> {
        fn once<T>(slot: &mut Option<T>, v: T, key: &str, line: usize) -> Result<(), RulepackError> {
            if slot.is_some() {
                return Err(err(line, format!("field {key} given twice")));
            }
            *slot = Some(v);
            Ok(())
        }
        match key {
            "producer" => {
                if value.is_empty() {
                    return Err(err(line, "empty producer"));
                }
                let p = value.parse::<ProducerId>().unwrap_or_else(|never| match never {});
                once(&mut self.producer, p, key, line)
            }
            "section" => {
                let s = SectionKind::from_keyword(value).ok_or_else(|| err(line, format!("unknown section {value:?}")))?;
                once(&mut self.section, s, key, line)
            }
            "kind" => {
                let k = RuleKind::from_keyword(value).ok_or_else(|| err(line, format!("unknown kind {value:?}")))?;
                once(&mut self.kind, k, key, line)
            }
            "os" => once(&mut self.os, parse_list(value, line, "os", Os::from_keyword)?, key, line),
            "distro" => once(&mut self.distro, parse_list(value, line, "distro", Distro::from_keyword)?, key, line),
            "pattern" => once(&mut self.pattern, parse_pattern(value, line)?, key, line),
            _ => Err(err(line, format!("unknown field {key:?}"))),
        }
    }

    fn finish(self) -> Result<Rule, RulepackError> {
        let missing = |f: &str| err(self.line, format!("rule {} lacks {f}", self.id));
        let producer = self.producer.clone().ok_or_else(|| missing("producer"))?;
        let section = self.section.ok_or_else(|| missing("section"))?;
        let kind = self.kind.ok_or_else(|| missing("kind"))?;
        let pattern = self.pattern.clone().ok_or_else(|| missing("pattern"))?;
        Ok(Rule::new(self.id, producer, section, kind, pattern)?
            .with_os(self.os.unwrap_or_default())
            .with_distro(self.distro.unwrap_or_default()))
    }
}

/// Parses and compiles a rule file.
pub fn load_rulepack(source: &str) -> Result<Rulepack, RulepackError> {
    let mut pack = Rulepack::new("", "");
    let mut draft: Option<Draft> = None;
    let mut seen_rule = false;
    for (i, raw_line) in source.lines().enumerate() {
        let line = i + 1;
        if !seen_rule {
            if let Some(c) = raw_line.trim_start().strip_prefix('#') {
                let c = c.trim();
                if let Some(v) = c.strip_prefix("name:") {
                    pack.name = v.trim().to_string();
                } else if let Some(v) = c.strip_prefix("version:") {
                    pack.version = v.trim().to_string();
                }
            }
        }
        let text = strip_comment(raw_line).trim();
        if text.is_empty() {
            continue;
        }
        match draft.as_mut() {
            None => {
                let rest = text
                    .strip_prefix("rule ")
                    .and_then(|r| r.strip_suffix('{'))
                    .ok_or_else(|| err(line, "expected `rule <id> {`"))?;
                let id = rest.trim();
                if !RuleId::is_valid(id) {
                    return Err(err(line, format!("invalid rule id {id:?}")));
                }
                if pack.get(id).is_some() {
                    return Err(err(line, format!("duplicate rule id {id}")));
                }
                seen_rule = true;
                draft = Some(Draft { id: id.to_string(), line, ..Draft::default() });
            }
            Some(d) => {
                if text == "}" {
                    let rule = draft.take().expect("open rule").finish()?;
                    if pack.get(rule.id.as_str()).is_some() {
                        return Err(err(line, format!("duplicate rule id {}", rule.id)));
                    }
                    pack.push(rule)?;
                    continue;
                }
                let (k, v) = text.split_once('=').ok_or_else(|| err(line, "expected `key = value`"))?;
                d.set(k.trim(), v.trim(), line)?;
            }
        }
    }
    if let Some(d) = draft {
        return Err(err(d.line, format!("rule {} is not closed", d.id)));
    }
    Ok(pack)
}

fn quote(pattern: &str) -> String {
    let mut out = String::with_capacity(pattern.len() + 2);
    out.push('"');
    let mut chars = pattern.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                out.push('\\');
                if let Some(n) = chars.next() {
                    out.push(n);
                }
            }
            '"' => out.push_str("\\\""),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn list<T: Copy>(items: &BTreeSet<T>, kw: impl Fn(T) -> &'static str) -> String {
    let v: Vec<&str> = items.iter().map(|t| kw(*t)).collect();
    format!("[{}]", v.join(", "))
}

/// Renders a pack so that `load_rulepack` reads it back unchanged.
pub fn render_rulepack(pack: &Rulepack) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# name: {}", pack.name);
    let _ = writeln!(out, "# version: {}", pack.version);
    for r in pack.rules() {
        out.push('\n');
        render_rule(&mut out, r, &[]);
    }
    out
}

/// Writes one rule block, preceded by `comments` as `#` lines.
pub(crate) fn render_rule(out: &mut String, r: &Rule, comments: &[String]) {
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "rule {} {{", r.id);
    let _ = writeln!(out, "  producer = {}", r.producer.canonical_name());
    let _ = writeln!(out, "  section  = {}", r.section.keyword());
    let _ = writeln!(out, "  kind     = {}", r.kind.keyword());
    if !r.os_tags.is_empty() {
        let _ = writeln!(out, "  os       = {}", list(&r.os_tags, Os::keyword));
    }
    if !r.distro_tags.is_empty() {
        let _ = writeln!(out, "  distro   = {}", list(&r.distro_tags, Distro::keyword));
    }
    let _ = writeln!(out, "  pattern  = {}", quote(&r.pattern));
    out.push_str("}\n");
}

/// Regex source matching exactly `bytes`.
pub fn escape_pattern_literal(bytes: &[u8]) -> String {
    let mut s = String::new();
    for &b in bytes {
        match b {
            b'\r' => s.push_str(r"\r"),
            b'\n' => s.push_str(r"\n"),
            b'\t' => s.push_str(r"\t"),
            b'\\' | b'.' | b'+' | b'*' | b'?' | b'(' | b')' | b'|' | b'[' | b']' | b'{' | b'}' | b'^' | b'$' | b'#'
            | b'&' | b'-' | b'~' => {
                s.push('\\');
                s.push(b as char);
            }
            0x20..=0x7E => s.push(b as char),
            _ => {
                let _ = write!(s, "\\x{b:02X}");
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE4: &str = r#"
rule word-body-1 {
  producer = MicrosoftOfficeWord
  section  = body
  kind     = template
  os       = [windows]
  pattern  = "4 0 obj\r\n<</Filter/FlateDecode/Length [0-9]*>>\r\nstream\r\n"
}
"#;

    #[test]
    fn single_body_rule() {
        let p = load_rulepack(TABLE4).unwrap();
        assert_eq!(p.len(), 1);
        let r = &p.rules()[0];
        assert_eq!(r.producer, ProducerId::MicrosoftOfficeWord);
        assert_eq!(r.section, SectionKind::Body);
        assert_eq!(r.pattern, r"4 0 obj\r\n<</Filter/FlateDecode/Length [0-9]*>>\r\nstream\r\n");
        assert!(r.is_match(b"4 0 obj\r\n<</Filter/FlateDecode/Length 2413>>\r\nstream\r\n"));
    }

    #[test]
    fn empty_file_is_an_empty_pack() {
        let p = load_rulepack("").unwrap();
        assert!(p.is_empty());
        let p = load_rulepack("# only a comment\n\n").unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn duplicate_ids_rejected_with_line() {
        let src = format!("{TABLE4}{TABLE4}");
        match load_rulepack(&src) {
            Err(RulepackError::RuleParse { line, reason }) => {
                assert_eq!(line, 10);
                assert!(reason.contains("duplicate"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pack_name_and_version_from_comments() {
        let p = load_rulepack("# name: mined\n# version: 3\n").unwrap();
        assert_eq!((p.name.as_str(), p.version.as_str()), ("mined", "3"));
    }

    #[test]
    fn hash_inside_pattern_is_not_a_comment() {
        let p = load_rulepack("rule a {\nproducer = Cairo\nsection = body\nkind = template\npattern = \"a#b\" # note\n}\n").unwrap();
        assert_eq!(p.rules()[0].pattern, "a#b");
    }

    #[test]
    fn quoted_quote() {
        let p = load_rulepack("rule a {\nproducer = Cairo\nsection = body\nkind = template\npattern = \"x\\\"y\"\n}\n").unwrap();
        assert_eq!(p.rules()[0].pattern, "x\"y");
        assert!(p.rules()[0].is_match(b"x\"y"));
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            "rule a {\nproducer = Cairo\n",
            "rule a {\nsection = nowhere\n}\n",
            "rule a {\nproducer = Cairo\nsection = body\nkind = template\n}\n",
            "rule a {\nos = [beos]\n}\n",
            "garbage\n",
            "rule bad id {\n}\n",
            "rule a {\npattern = \"open\n}\n",
            "rule a {\ncolour = red\n}\n",
        ];
        for c in cases {
            assert!(matches!(load_rulepack(c), Err(RulepackError::RuleParse { .. })), "{c:?}");
        }
    }

    #[test]
    fn compile_error_reports_rule() {
        let e = load_rulepack("rule z {\nproducer = Cairo\nsection = body\nkind = template\npattern = \"[\"\n}\n").unwrap_err();
        assert!(matches!(e, RulepackError::PatternCompile { rule_id, .. } if rule_id == "z"));
    }

    #[test]
    fn render_round_trip() {
        let mut p = load_rulepack(TABLE4).unwrap();
        p.name = "x".into();
        p.version = "2".into();
        p.push(
            Rule::new("q", ProducerId::LuaTeX, SectionKind::Header, RuleKind::MagicNumber, "a\"b")
                .unwrap()
                .with_os([Os::Linux])
                .with_distro([Distro::MikTeX, Distro::TeXLive]),
        )
        .unwrap();
        let back = load_rulepack(&render_rulepack(&p)).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn literal_escape_matches_exactly() {
        let bytes: Vec<u8> = (0u8..=255).collect();
        let re = super::super::compile(&format!("^{}$", escape_pattern_literal(&bytes))).unwrap();
        assert!(re.is_match(&bytes));
        assert_eq!(escape_pattern_literal(b"<</Length 5>>\r\n"), r"<</Length 5>>\r\n");
    }
}
