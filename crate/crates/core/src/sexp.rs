//! S-expression reader and canonical printer shared by every file format.
//!
//! Grammar: a document is a sequence of data. A datum is an atom, a
//! double-quoted string, or a parenthesised list. `;` starts a comment that
//! runs to the end of the line. Whitespace is insignificant.

use std::fmt;

use crate::error::{Error, Result};

/// 1-based source position of a datum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub enum SexpKind {
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone)]
pub struct Sexp {
    pub kind: SexpKind,
    pub pos: Pos,
}

// Structural equality ignores positions.
impl PartialEq for Sexp {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (SexpKind::Atom(a), SexpKind::Atom(b)) => a == b,
            (SexpKind::Str(a), SexpKind::Str(b)) => a == b,
            (SexpKind::List(a), SexpKind::List(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Sexp {}

impl Sexp {
    pub fn atom(s: impl Into<String>) -> Self {
        Sexp { kind: SexpKind::Atom(s.into()), pos: Pos::default() }
    }

    pub fn string(s: impl Into<String>) -> Self {
        Sexp { kind: SexpKind::Str(s.into()), pos: Pos::default() }
    }

    pub fn list(items: Vec<Sexp>) -> Self {
        Sexp { kind: SexpKind::List(items), pos: Pos::default() }
    }

    /// `(head items...)`
    pub fn tagged(head: &str, items: Vec<Sexp>) -> Self {
        let mut all = Vec::with_capacity(items.len() + 1);
        all.push(Sexp::atom(head));
        all.extend(items);
        Sexp::list(all)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Atom(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::List(items) => Some(items),
            _ => None,
        }
    }

    /// The leading atom of a list, if any.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|l| l.first()).and_then(|h| h.as_atom())
    }

    /// Items after the head of a list.
    pub fn tail(&self) -> &[Sexp] {
        match self.as_list() {
            Some(items) if !items.is_empty() => &items[1..],
            _ => &[],
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.pos.line, col: self.pos.col, msg: msg.into() }
    }

    pub fn expect_atom(&self, what: &str) -> Result<&str> {
        match &self.kind {
            SexpKind::Atom(s) => Ok(s),
            SexpKind::Str(s) => Ok(s),
            SexpKind::List(_) => Err(self.error(format!("expected {what}, found a list"))),
        }
    }

    pub fn expect_list(&self, what: &str) -> Result<&[Sexp]> {
        self.as_list().ok_or_else(|| self.error(format!("expected {what}, found an atom")))
    }

    pub fn expect_usize(&self, what: &str) -> Result<usize> {
        let s = self.expect_atom(what)?;
        s.parse().map_err(|_| self.error(format!("expected {what} (non-negative integer), found {s:?}")))
    }

    pub fn expect_i64(&self, what: &str) -> Result<i64> {
        let s = self.expect_atom(what)?;
        s.parse().map_err(|_| self.error(format!("expected {what} (integer), found {s:?}")))
    }

    /// Finds the first child list of `self` whose head is `key`.
    pub fn field(&self, key: &str) -> Option<&Sexp> {
        self.tail().iter().find(|s| s.head() == Some(key))
    }

    pub fn expect_field(&self, key: &str) -> Result<&Sexp> {
        self.field(key).ok_or_else(|| self.error(format!("missing ({key} ...) clause")))
    }

    /// Single-line rendering with one space between items.
    pub fn to_compact(&self) -> String {
        let mut out = String::new();
        write_compact(self, &mut out);
        out
    }

    /// Deterministic multi-line rendering: a list that fits in `width`
    /// columns is printed compactly, otherwise its head stays on the first
    /// line and each remaining child goes on its own indented line.
    pub fn to_pretty(&self, width: usize) -> String {
        let mut out = String::new();
        write_pretty(self, 0, width, &mut out);
        out
    }
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty() || s.chars().any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';'))
}

fn write_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn write_compact(s: &Sexp, out: &mut String) {
    match &s.kind {
        SexpKind::Atom(a) if needs_quotes(a) => write_string(a, out),
        SexpKind::Atom(a) => out.push_str(a),
        SexpKind::Str(a) => write_string(a, out),
        SexpKind::List(items) => {
            out.push('(');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_compact(item, out);
            }
            out.push(')');
        }
    }
}

fn write_pretty(s: &Sexp, indent: usize, width: usize, out: &mut String) {
    let compact = s.to_compact();
    let items = match &s.kind {
        SexpKind::List(items) if indent + compact.len() > width && items.len() > 1 => items,
        _ => {
            out.push_str(&compact);
            return;
        }
    };
    out.push('(');
    write_compact(&items[0], out);
    for item in &items[1..] {
        out.push('\n');
        out.extend(std::iter::repeat_n(' ', indent + 2));
        write_pretty(item, indent + 2, width, out);
    }
    out.push(')');
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Reader<'_> {
    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn datum(&mut self) -> Result<Sexp> {
        self.skip_trivia();
        let pos = self.pos();
        match self.chars.peek().copied() {
            None => Err(self.err("unexpected end of input")),
            Some(')') => Err(self.err("unexpected ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(Error::Parse { line: pos.line, col: pos.col, msg: "unclosed '('".into() }),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.datum()?),
                    }
                }
                Ok(Sexp { kind: SexpKind::List(items), pos })
            }
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err("unterminated string")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some(c) => s.push(c),
                            None => return Err(self.err("unterminated escape")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Ok(Sexp { kind: SexpKind::Str(s), pos })
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp { kind: SexpKind::Atom(s), pos })
            }
        }
    }
}

/// Parses every datum in `text`.
pub fn parse_all(text: &str) -> Result<Vec<Sexp>> {
    let mut r = Reader { chars: text.chars().peekable(), line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.datum()?);
    }
}

/// Parses exactly one datum.
pub fn parse_one(text: &str) -> Result<Sexp> {
    let mut all = parse_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(Error::Parse { line: 1, col: 1, msg: "empty document".into() }),
        _ => {
            let p = all[1].pos;
            Err(Error::Parse { line: p.line, col: p.col, msg: "trailing data after the first form".into() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let s = parse_one("(a (b c)\n  \"x y\" ; comment\n d)").unwrap();
        let items = s.as_list().unwrap();
        assert_eq!(items.len(), 4);
        assert_eq!(items[1].to_compact(), "(b c)");
        assert_eq!(items[2], Sexp::string("x y"));
        assert_eq!(items[3].pos, Pos { line: 3, col: 2 });
    }

    #[test]
    fn reports_unbalanced_input() {
        let e = parse_one("(a (b c)").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 1, .. }), "{e:?}");
        let e = parse_all("a )").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 3, .. }), "{e:?}");
    }

    #[test]
    fn pretty_breaks_long_lists() {
        let s = parse_one("(and (= (var x) 0) (= (var y) 1))").unwrap();
        assert_eq!(s.to_pretty(80), s.to_compact());
        assert_eq!(s.to_pretty(20), "(and\n  (= (var x) 0)\n  (= (var y) 1))");
        assert_eq!(parse_one(&s.to_pretty(10)).unwrap(), s);
    }

    fn arb_sexp() -> impl Strategy<Value = Sexp> {
        let leaf = prop_oneof!["[a-z0-9.+*=/-]{1,6}".prop_map(Sexp::atom), "[ a-z()\"]{0,5}".prop_map(Sexp::string),];
        leaf.prop_recursive(4, 32, 5, |inner| prop::collection::vec(inner, 0..5).prop_map(Sexp::list))
    }

    proptest! {
        #[test]
        fn printers_round_trip(s in arb_sexp(), width in 0usize..60) {
            prop_assert_eq!(&parse_one(&s.to_compact()).unwrap(), &s);
            prop_assert_eq!(&parse_one(&s.to_pretty(width)).unwrap(), &s);
        }
    }
}
