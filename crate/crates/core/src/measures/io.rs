//! Text formats for measures and point sets.
//!
//! ```text
//! q 3
//! d 2
//! mode exact
//! 1/9
//! ...
//! ```
//!
//! Measures list `q^d` weights in point encoding order (`num/den` in exact
//! mode, shortest round-trip decimal in float mode). Point sets list member
//! indices, ascending.

use std::io::{self, BufRead, Write};

use num_bigint::BigInt;

use super::{MeasureTable, PointSet, Weights};
use crate::arith::{format_rational, parse_rational, Mode, Modulus};
use crate::error::{Error, Result};

pub fn write_measure<W: Write>(mu: &MeasureTable, mut out: W) -> io::Result<()> {
    writeln!(out, "q {}", mu.modulus())?;
    writeln!(out, "d {}", mu.level())?;
    writeln!(out, "mode {}", mu.mode())?;
    match mu.weights() {
        Weights::Exact(v) => {
            for w in v {
                writeln!(out, "{}", format_rational(w))?;
            }
        }
        Weights::Float(v) => {
            for w in v {
                writeln!(out, "{w:?}")?;
            }
        }
    }
    Ok(())
}

pub fn write_point_set<W: Write>(set: &PointSet, mut out: W) -> io::Result<()> {
    writeln!(out, "q {}", set.modulus())?;
    writeln!(out, "d {}", set.level())?;
    writeln!(out, "mode exact")?;
    for i in set.indices() {
        writeln!(out, "{i}")?;
    }
    Ok(())
}

struct Lines<R> {
    inner: io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next(&mut self) -> Result<Option<String>> {
        loop {
            match self.inner.next() {
                None => return Ok(None),
                Some(Err(e)) => return Err(self.err(e.to_string())),
                Some(Ok(s)) => {
                    self.line += 1;
                    let s = s.trim();
                    if !s.is_empty() {
                        return Ok(Some(s.to_string()));
                    }
                }
            }
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn header(&mut self, key: &str) -> Result<String> {
        let s = self.next()?.ok_or_else(|| self.err(format!("missing `{key}` line")))?;
        match s.split_once(char::is_whitespace) {
            Some((k, v)) if k == key => Ok(v.trim().to_string()),
            _ => Err(self.err(format!("expected `{key} <value>`, got `{s}`"))),
        }
    }
}

fn read_header<R: BufRead>(lines: &mut Lines<R>) -> Result<(Modulus, usize, Mode)> {
    let q: u32 = lines
        .header("q")?
        .parse()
        .map_err(|e| lines.err(format!("bad q: {e}")))?;
    let q = Modulus::new(q).map_err(|e| lines.err(e.to_string()))?;
    let d: usize = lines
        .header("d")?
        .parse()
        .map_err(|e| lines.err(format!("bad d: {e}")))?;
    q.checked_size(d).ok_or_else(|| lines.err("q^d overflows"))?;
    let mode: Mode = lines
        .header("mode")?
        .parse()
        .map_err(|e: Error| lines.err(e.to_string()))?;
    Ok((q, d, mode))
}

pub fn read_measure<R: BufRead>(input: R) -> Result<MeasureTable> {
    let mut lines = Lines {
        inner: input.lines(),
        line: 0,
    };
    let (q, d, mode) = read_header(&mut lines)?;
    let n = q.size(d);
    let weights = match mode {
        Mode::Exact => {
            let mut v = Vec::with_capacity(n);
            while let Some(s) = lines.next()? {
                v.push(parse_rational(&s).map_err(|e| lines.err(e.to_string()))?);
            }
            Weights::Exact(v)
        }
        Mode::Float => {
            let mut v = Vec::with_capacity(n);
            while let Some(s) = lines.next()? {
                v.push(s.parse::<f64>().map_err(|e| lines.err(format!("bad weight `{s}`: {e}")))?);
            }
            Weights::Float(v)
        }
    };
    if weights.len() != n {
        return Err(lines.err(format!("expected {n} weights, found {}", weights.len())));
    }
    MeasureTable::new(q, d, weights).map_err(|e| lines.err(e.to_string()))
}

pub fn read_point_set<R: BufRead>(input: R) -> Result<PointSet> {
    let mut lines = Lines {
        inner: input.lines(),
        line: 0,
    };
    let (q, d, _) = read_header(&mut lines)?;
    let mut set = PointSet::empty(q, d);
    let mut last: Option<usize> = None;
    while let Some(s) = lines.next()? {
        let i: usize = s
            .parse::<BigInt>()
            .ok()
            .and_then(|b| usize::try_from(b).ok())
            .ok_or_else(|| lines.err(format!("bad index `{s}`")))?;
        if last.is_some_and(|l| i <= l) {
            return Err(lines.err("indices must be strictly ascending"));
        }
        set.insert(i).map_err(|e| lines.err(e.to_string()))?;
        last = Some(i);
    }
    Ok(set)
}
