//! Text formats for the core carriers.
//!
//! `H3` holds a triple system: a header `h3 <n> <m> [multi]` followed by one
//! line per triple, `u v w [mult]`. `G2` is the analogous pair-graph format
//! with `g2 <n> <m>` and `u v` lines. `W3` holds an exact-rational weight
//! function: `w3 <n> <m>` and `u v w p/q` lines. Blank lines are skipped and
//! `#` starts a comment anywhere on a line.

use std::fmt::Write as _;
use std::path::Path;

use num::BigRational;
use thiserror::Error;

use crate::fractional::WeightFn;
use crate::hypercore::{PairGraph, TripleSystem};

/// Errors from parsing or writing the text formats.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn malformed(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        msg: msg.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    /// Next line with comments stripped, skipping blanks; 1-based line number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if !body.is_empty() {
                return Some((i + 1, body));
            }
        }
        None
    }
}

fn parse_u32(tok: &str, line: usize, what: &str) -> Result<u32, FormatError> {
    tok.parse::<u32>()
        .map_err(|_| malformed(line, format!("expected {what}, found {tok:?}")))
}

fn parse_u64(tok: &str, line: usize, what: &str) -> Result<u64, FormatError> {
    tok.parse::<u64>()
        .map_err(|_| malformed(line, format!("expected {what}, found {tok:?}")))
}

/// Parses the H3 format into a triple system.
pub fn parse_h3(text: &str) -> Result<TripleSystem, FormatError> {
    let mut lines = Lines::new(text);
    let (hline, header) = lines
        .next_content()
        .ok_or_else(|| malformed(0, "empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.is_empty() || toks[0] != "h3" {
        return Err(malformed(hline, "expected header starting with 'h3'"));
    }
    if toks.len() < 3 || toks.len() > 4 {
        return Err(malformed(hline, "expected 'h3 <n> <m> [multi]'"));
    }
    let n = parse_u32(toks[1], hline, "vertex count")?;
    let m = parse_u64(toks[2], hline, "triple count")?;
    let multi = match toks.get(3) {
        None => false,
        Some(&"multi") => true,
        Some(other) => return Err(malformed(hline, format!("unexpected token {other:?}"))),
    };
    if n > crate::hypercore::VERTEX_LIMIT {
        return Err(malformed(hline, format!("vertex count {n} over the limit")));
    }
    let mut h = TripleSystem::new(n);
    let mut seen = 0u64;
    while let Some((lno, body)) = lines.next_content() {
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() < 3 || toks.len() > 4 || (toks.len() == 4 && !multi) {
            return Err(malformed(lno, "expected 'u v w' or 'u v w mult'"));
        }
        let t = [
            parse_u32(toks[0], lno, "vertex")?,
            parse_u32(toks[1], lno, "vertex")?,
            parse_u32(toks[2], lno, "vertex")?,
        ];
        if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
            return Err(malformed(lno, format!("repeated vertex in triple {t:?}")));
        }
        if t.iter().any(|&v| v >= n) {
            return Err(malformed(lno, format!("vertex out of range in {t:?}")));
        }
        let mult = match toks.get(3) {
            Some(tok) => {
                let m = parse_u32(tok, lno, "multiplicity")?;
                if m == 0 {
                    return Err(malformed(lno, "multiplicity must be at least 1"));
                }
                m
            }
            None => 1,
        };
        h.insert_with_multiplicity(t, mult);
        seen += mult as u64;
    }
    if seen != m {
        return Err(malformed(
            0,
            format!("header declared {m} triples but {seen} were listed"),
        ));
    }
    Ok(h)
}

/// Serializes a triple system in the H3 format.
pub fn format_h3(h: &TripleSystem) -> String {
    let multi = !h.is_simple();
    let mut out = String::new();
    if multi {
        let _ = writeln!(out, "h3 {} {} multi", h.n(), h.total_len());
    } else {
        let _ = writeln!(out, "h3 {} {}", h.n(), h.total_len());
    }
    for (t, m) in h.iter() {
        if multi {
            let _ = writeln!(out, "{} {} {} {}", t[0], t[1], t[2], m);
        } else {
            let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
        }
    }
    out
}

/// Parses the G2 format into a pair graph.
pub fn parse_g2(text: &str) -> Result<PairGraph, FormatError> {
    let mut lines = Lines::new(text);
    let (hline, header) = lines
        .next_content()
        .ok_or_else(|| malformed(0, "empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "g2" {
        return Err(malformed(hline, "expected 'g2 <n> <m>'"));
    }
    let n = parse_u32(toks[1], hline, "vertex count")?;
    let m = parse_u64(toks[2], hline, "edge count")?;
    if n > crate::hypercore::PAIR_VERTEX_LIMIT {
        return Err(malformed(hline, format!("vertex count {n} over the limit")));
    }
    let mut g = PairGraph::new(n);
    while let Some((lno, body)) = lines.next_content() {
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(malformed(lno, "expected 'u v'"));
        }
        let u = parse_u32(toks[0], lno, "vertex")?;
        let v = parse_u32(toks[1], lno, "vertex")?;
        if u == v {
            return Err(malformed(lno, format!("self-loop at {u}")));
        }
        if u >= n || v >= n {
            return Err(malformed(lno, format!("edge ({u},{v}) out of range")));
        }
        if !g.insert(u, v) {
            return Err(malformed(lno, format!("duplicate edge ({u},{v})")));
        }
    }
    if g.m() != m {
        return Err(malformed(
            0,
            format!("header declared {m} edges but {} were listed", g.m()),
        ));
    }
    Ok(g)
}

/// Serializes a pair graph in the G2 format.
pub fn format_g2(g: &PairGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "g2 {} {}", g.n(), g.m());
    for [u, v] in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses a rational written as `p/q` or a bare integer.
pub fn parse_rational(tok: &str, line: usize) -> Result<BigRational, FormatError> {
    let parse_int = |s: &str| -> Result<num::BigInt, FormatError> {
        s.parse::<num::BigInt>()
            .map_err(|_| malformed(line, format!("expected integer, found {s:?}")))
    };
    match tok.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(tok)?)),
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den == num::BigInt::from(0) {
                return Err(malformed(line, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

/// Formats a rational as `p/q` (or a bare integer when the denominator is 1).
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the W3 format into a weight function.
pub fn parse_w3(text: &str) -> Result<WeightFn, FormatError> {
    let mut lines = Lines::new(text);
    let (hline, header) = lines
        .next_content()
        .ok_or_else(|| malformed(0, "empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "w3" {
        return Err(malformed(hline, "expected 'w3 <n> <m>'"));
    }
    let n = parse_u32(toks[1], hline, "vertex count")?;
    let m = parse_u64(toks[2], hline, "entry count")?;
    let mut w = WeightFn::new(n);
    let mut seen = 0u64;
    while let Some((lno, body)) = lines.next_content() {
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(malformed(lno, "expected 'u v w p/q'"));
        }
        let t = [
            parse_u32(toks[0], lno, "vertex")?,
            parse_u32(toks[1], lno, "vertex")?,
            parse_u32(toks[2], lno, "vertex")?,
        ];
        if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
            return Err(malformed(lno, format!("repeated vertex in triple {t:?}")));
        }
        if t.iter().any(|&v| v >= n) {
            return Err(malformed(lno, format!("vertex out of range in {t:?}")));
        }
        let val = parse_rational(toks[3], lno)?;
        w.set(t, val);
        seen += 1;
    }
    if seen != m {
        return Err(malformed(
            0,
            format!("header declared {m} entries but {seen} were listed"),
        ));
    }
    Ok(w)
}

/// Serializes a weight function in the W3 format.
pub fn format_w3(w: &WeightFn) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "w3 {} {}", w.n(), w.support_len());
    for (t, val) in w.iter() {
        let _ = writeln!(out, "{} {} {} {}", t[0], t[1], t[2], format_rational(&val));
    }
    out
}

/// Reads and parses an H3 file.
pub fn read_h3(path: &Path) -> Result<TripleSystem, FormatError> {
    parse_h3(&std::fs::read_to_string(path)?)
}

/// Writes a triple system to an H3 file.
pub fn write_h3(path: &Path, h: &TripleSystem) -> Result<(), FormatError> {
    Ok(std::fs::write(path, format_h3(h))?)
}

/// Reads and parses a G2 file.
pub fn read_g2(path: &Path) -> Result<PairGraph, FormatError> {
    parse_g2(&std::fs::read_to_string(path)?)
}

/// Writes a pair graph to a G2 file.
pub fn write_g2(path: &Path, g: &PairGraph) -> Result<(), FormatError> {
    Ok(std::fs::write(path, format_g2(g))?)
}

/// Reads and parses a W3 file.
pub fn read_w3(path: &Path) -> Result<WeightFn, FormatError> {
    parse_w3(&std::fs::read_to_string(path)?)
}

/// Writes a weight function to a W3 file.
pub fn write_w3(path: &Path, w: &WeightFn) -> Result<(), FormatError> {
    Ok(std::fs::write(path, format_w3(w))?)
}
