//! The line-oriented algebra file format.
//!
//! ```text
//! field 32003
//! vertices 1 2 3
//! arrow a 1 2
//! rel g*d*b
//! rel g*a - g*b*a
//! ```
//!
//! Paths are written in function order: `g*d*b` applies `b` first.

use std::sync::Arc;

use crate::algebra::{Arrow, Path, PathAlgebra, Quiver, Relation};
use crate::error::{Error, Result};
use crate::field::is_prime;

/// Parsed algebra file, names unresolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub prime: u32,
    pub vertex_count: usize,
    /// `(name, source, target)`, vertices 1-based.
    pub arrows: Vec<(String, usize, usize)>,
    /// Terms `(coefficient, arrow names in function order)`.
    pub relations: Vec<Vec<(i64, Vec<String>)>>,
}

pub(crate) struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pub(crate) pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(line: usize, text: &'a str) -> Self {
        Cursor { line, text, pos: 0 }
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' || c == '\r' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    pub(crate) fn error(&self, expected: &str) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            expected: expected.to_string(),
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let mut chars = self.text[start..].char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let mut end = self.text.len();
        for (i, c) in chars {
            if !(c.is_ascii_alphanumeric() || c == '_') {
                end = start + i;
                break;
            }
        }
        self.pos = end;
        Some(&self.text[start..end])
    }

    pub(crate) fn int(&mut self) -> Option<u64> {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..].chars().take_while(|c| c.is_ascii_digit()).count();
        if len == 0 {
            return None;
        }
        self.pos += len;
        self.text[start..start + len].parse().ok().or_else(|| {
            self.pos = start;
            None
        })
    }

    pub(crate) fn keyword(&mut self, word: &str) -> Result<()> {
        let save = self.pos;
        match self.ident() {
            Some(w) if w == word => Ok(()),
            _ => {
                self.pos = save;
                self.skip_ws();
                Err(self.error(&format!("`{word}`")))
            }
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("end of line"))
        }
    }
}

fn parse_path(cur: &mut Cursor<'_>) -> Result<Vec<String>> {
    let mut names = vec![cur.ident().ok_or_else(|| cur.error("arrow name"))?.to_string()];
    while cur.eat('*') {
        names.push(cur.ident().ok_or_else(|| cur.error("arrow name"))?.to_string());
    }
    if names.len() < 2 {
        return Err(cur.error("`*` and a second arrow (relations need length at least 2)"));
    }
    Ok(names)
}

fn parse_term(cur: &mut Cursor<'_>, sign: i64) -> Result<(i64, Vec<String>)> {
    cur.skip_ws();
    if let Some(c) = cur.int() {
        if !cur.eat('*') {
            return Err(cur.error("`*` after coefficient"));
        }
        let c = i64::try_from(c).map_err(|_| cur.error("coefficient below 2^63"))?;
        Ok((sign * c, parse_path(cur)?))
    } else {
        Ok((sign, parse_path(cur)?))
    }
}

fn parse_relation(cur: &mut Cursor<'_>) -> Result<Vec<(i64, Vec<String>)>> {
    let first_sign = if cur.eat('-') { -1 } else { 1 };
    let mut terms = vec![parse_term(cur, first_sign)?];
    loop {
        if cur.eat('+') {
            terms.push(parse_term(cur, 1)?);
        } else if cur.eat('-') {
            terms.push(parse_term(cur, -1)?);
        } else {
            break;
        }
    }
    cur.finish()?;
    Ok(terms)
}

/// Parses the text of an algebra file.
pub fn parse_algebra_file(text: &str) -> Result<AlgebraSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let eof = |expected: &str| Error::Syntax {
        line: text.lines().count() + 1,
        column: 1,
        expected: expected.to_string(),
    };

    let (ln, l) = lines.next().ok_or_else(|| eof("`field`"))?;
    let mut cur = Cursor::new(ln, l);
    cur.keyword("field")?;
    let p = cur.int().ok_or_else(|| cur.error("prime"))?;
    cur.finish()?;
    if p > u32::MAX as u64 || !is_prime(p) || p >= 1 << 31 {
        return Err(Error::NotPrime(p));
    }

    let (ln, l) = lines.next().ok_or_else(|| eof("`vertices`"))?;
    let mut cur = Cursor::new(ln, l);
    cur.keyword("vertices")?;
    let mut n = 0usize;
    while !cur.at_end() {
        let start = cur.pos;
        let v = cur.int().ok_or_else(|| cur.error("vertex number"))?;
        if v != n as u64 + 1 {
            cur.pos = start;
            return Err(cur.error(&format!("vertex {}", n + 1)));
        }
        n += 1;
    }
    if n == 0 {
        return Err(cur.error("at least one vertex"));
    }

    let mut arrows = Vec::new();
    let mut relations = Vec::new();
    for (ln, l) in lines {
        let mut cur = Cursor::new(ln, l);
        let save = cur.pos;
        match cur.ident() {
            Some("arrow") if relations.is_empty() => {
                let name = cur.ident().ok_or_else(|| cur.error("arrow name"))?.to_string();
                let mut ends = [0usize; 2];
                for e in ends.iter_mut() {
                    let v = cur.int().ok_or_else(|| cur.error("vertex number"))?;
                    if v == 0 || v > n as u64 {
                        return Err(cur.error(&format!("vertex in 1..={n}")));
                    }
                    *e = v as usize;
                }
                cur.finish()?;
                arrows.push((name, ends[0], ends[1]));
            }
            Some("rel") => relations.push(parse_relation(&mut cur)?),
            _ => {
                cur.pos = save;
                cur.skip_ws();
                let expected = if relations.is_empty() { "`arrow` or `rel`" } else { "`rel`" };
                return Err(cur.error(expected));
            }
        }
    }
    Ok(AlgebraSpec {
        prime: p as u32,
        vertex_count: n,
        arrows,
        relations,
    })
}

impl AlgebraSpec {
    /// Canonical text; parsing it gives back `self`.
    pub fn render(&self) -> String {
        let mut out = format!("field {}\nvertices", self.prime);
        for v in 1..=self.vertex_count {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
        for (name, s, t) in &self.arrows {
            out.push_str(&format!("arrow {name} {s} {t}\n"));
        }
        for rel in &self.relations {
            out.push_str("rel ");
            for (k, (c, path)) in rel.iter().enumerate() {
                let (sign, mag) = if *c < 0 { ("-", c.unsigned_abs()) } else { ("+", *c as u64) };
                if k == 0 {
                    if sign == "-" {
                        out.push('-');
                    }
                } else {
                    out.push_str(&format!(" {sign} "));
                }
                if mag != 1 {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(&path.join("*"));
            }
            out.push('\n');
        }
        out
    }

    /// Builds the algebra over `prime` (the file's prime when `None`).
    pub fn build(&self, prime: Option<u32>, depth_cap: usize) -> Result<Arc<PathAlgebra>> {
        let arrows = self
            .arrows
            .iter()
            .map(|(name, s, t)| Arrow {
                name: name.clone(),
                source: s - 1,
                target: t - 1,
            })
            .collect();
        let quiver = Quiver::new(self.vertex_count, arrows)?;
        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut terms = Vec::new();
            for (c, names) in rel {
                let mut idx = Vec::with_capacity(names.len());
                for name in names.iter().rev() {
                    idx.push(quiver.arrow_index(name).ok_or_else(|| Error::UnknownArrow(name.clone()))?);
                }
                let path = Path::from_arrows(&quiver, idx)
                    .ok_or_else(|| Error::BadRelation(format!("`{}` is not a path", names.join("*"))))?;
                terms.push((*c, path));
            }
            relations.push(Relation::new(terms));
        }
        PathAlgebra::build(quiver, relations, prime.unwrap_or(self.prime), depth_cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders() {
        let text = "# comment\nfield 7\nvertices 1 2\narrow a 1 2\narrow b 2 2\nrel b*b  # loop\nrel -2*b*a + 3*a*b*b\n";
        let spec = parse_algebra_file(text).unwrap();
        assert_eq!(spec.prime, 7);
        assert_eq!(spec.relations[1], vec![(-2, vec!["b".into(), "a".into()]), (3, vec!["a".into(), "b".into(), "b".into()])]);
        assert_eq!(parse_algebra_file(&spec.render()).unwrap(), spec);
    }

    #[test]
    fn syntax_errors_located() {
        let err = parse_algebra_file("field 7\nvertices 1 2\narrow a 1 2\nrel a\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 4, column: 6, .. }), "{err:?}");
        let err = parse_algebra_file("field 8\nvertices 1\n").unwrap_err();
        assert_eq!(err, Error::NotPrime(8));
        let err = parse_algebra_file("field 7\nvertices 1 3\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 12, .. }), "{err:?}");
        let err = parse_algebra_file("field 7\nvertices 1\narrow x 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
    }

    #[test]
    fn unknown_arrow_and_bad_path() {
        let spec = parse_algebra_file("field 7\nvertices 1 2\narrow a 1 2\nrel a*z\n").unwrap();
        assert_eq!(spec.build(None, 8).unwrap_err(), Error::UnknownArrow("z".into()));
        let spec = parse_algebra_file("field 7\nvertices 1 2\narrow a 1 2\nrel a*a\n").unwrap();
        assert!(matches!(spec.build(None, 8), Err(Error::BadRelation(_))));
    }
}
