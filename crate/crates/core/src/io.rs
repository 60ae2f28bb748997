//! Plain-text instance files.
//!
//! ```text
//! lines 2 points 1
//! 1/3 2
//! vertical 5
//! 0 1
//! ```
//!
//! The header is followed by one row per line (`a b` for `y = a x + b`, or
//! `vertical c` for `x = c`) and one row per point (`x y`). Numbers are
//! integers, `p/q` or decimals. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::{Line, Point, RawInstance, RawLine};
use crate::num::Coord;

fn num(tok: &str, line: usize) -> Result<Coord> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad number {tok:?}"),
    })
}

fn pair(toks: &[&str], line: usize) -> Result<(Coord, Coord)> {
    match toks {
        [a, b] => Ok((num(a, line)?, num(b, line)?)),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected two numbers, found {} fields", toks.len()),
        }),
    }
}

pub fn parse_instance_str(text: &str) -> Result<RawInstance> {
    let mut rows = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    });
    let (hl, header) = rows.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let count = |t: &str| {
        t.parse::<usize>().map_err(|_| Error::Parse {
            line: hl,
            msg: format!("bad count {t:?}"),
        })
    };
    let (n, m) = match h.as_slice() {
        ["lines", n, "points", m] => (count(n)?, count(m)?),
        _ => {
            return Err(Error::Parse {
                line: hl,
                msg: "expected `lines N points M`".into(),
            })
        }
    };
    let body: Vec<(usize, &str)> = rows.collect();
    if body.len() < n {
        return Err(Error::CountMismatch {
            what: "lines",
            expected: n,
            found: body.len(),
        });
    }
    if body.len() != n + m {
        return Err(Error::CountMismatch {
            what: "points",
            expected: m,
            found: body.len() - n,
        });
    }
    let mut inst = RawInstance::default();
    for &(ln, row) in &body[..n] {
        let toks: Vec<&str> = row.split_whitespace().collect();
        inst.lines.push(match toks.as_slice() {
            ["vertical", c] => RawLine::Vertical(num(c, ln)?),
            _ => {
                let (a, b) = pair(&toks, ln)?;
                RawLine::NonVertical(Line { a, b })
            }
        });
    }
    for &(ln, row) in &body[n..] {
        let toks: Vec<&str> = row.split_whitespace().collect();
        let (x, y) = pair(&toks, ln)?;
        inst.points.push(Point { x, y });
    }
    Ok(inst)
}

pub fn parse_instance(path: impl AsRef<Path>) -> Result<RawInstance> {
    parse_instance_str(&std::fs::read_to_string(path)?)
}

pub fn write_instance(inst: &RawInstance) -> String {
    let mut s = format!("lines {} points {}\n", inst.lines.len(), inst.points.len());
    for l in &inst.lines {
        match l {
            RawLine::NonVertical(l) => writeln!(s, "{} {}", l.a, l.b),
            RawLine::Vertical(c) => writeln!(s, "vertical {c}"),
        }
        .unwrap();
    }
    for p in &inst.points {
        writeln!(s, "{} {}", p.x, p.y).unwrap();
    }
    s
}
