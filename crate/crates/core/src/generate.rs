//! Seeded instance generators.
//!
//! All generators avoid incidences by construction instead of by checking:
//! lines have integer slope and intercept (or intercept offset by `±1/3`)
//! while points sit on a lattice that such lines cannot pass through.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::geom::{Instance, Line, Point};
use crate::num::Coord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Uniform,
    Grid,
    Clustered,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Uniform => "uniform",
            Kind::Grid => "grid",
            Kind::Clustered => "clustered",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind, Error> {
        match s {
            "uniform" => Ok(Kind::Uniform),
            "grid" => Ok(Kind::Grid),
            "clustered" => Ok(Kind::Clustered),
            _ => Err(Error::PreconditionViolated(format!(
                "unknown generator {s:?}"
            ))),
        }
    }
}

pub fn generate_instance(kind: Kind, n: usize, m: usize, seed: u64) -> Instance {
    match kind {
        Kind::Uniform => uniform(n, m, seed),
        Kind::Grid => grid(n, m, seed),
        Kind::Clustered => clustered(n, m, seed),
    }
}

fn extent(n: usize, m: usize) -> i64 {
    (4 * (n + m) as i64).max(64)
}

/// `n` distinct lines with integer slope in `[-c, c]` and intercept in
/// `[-c*c, c*c]`.
fn random_lines(rng: &mut ChaCha8Rng, n: usize, c: i64) -> Vec<Line> {
    let mut seen = HashSet::with_capacity(n);
    let mut lines = Vec::with_capacity(n);
    while lines.len() < n {
        let a = rng.gen_range(-c..=c);
        let b = rng.gen_range(-c * c..=c * c);
        if seen.insert((a, b)) {
            lines.push(Line::new(a, b));
        }
    }
    lines
}

/// `(x + 1/3, y + 1/2)`: never on a line with integer slope and intercept.
fn off_lattice(x: i64, y: i64) -> Point {
    Point::new(Coord::new(3 * x + 1, 3), Coord::new(2 * y + 1, 2))
}

pub fn uniform(n: usize, m: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = extent(n, m);
    let lines = random_lines(&mut rng, n, c);
    let points = (0..m)
        .map(|_| off_lattice(rng.gen_range(-c..c), rng.gen_range(-c * c..c * c)))
        .collect();
    Instance::new(points, lines)
}

pub fn clustered(n: usize, m: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = extent(n, m);
    let lines = random_lines(&mut rng, n, c);
    let k = ((m as f64).sqrt().ceil() as usize).clamp(1, 8);
    let centers: Vec<(i64, i64)> = (0..k)
        .map(|_| (rng.gen_range(-c..c), rng.gen_range(-c * c..c * c)))
        .collect();
    let (rx, ry) = ((c / 16).max(1), (c * c / 256).max(1));
    let points = (0..m)
        .map(|_| {
            let (cx, cy) = centers[rng.gen_range(0..k)];
            off_lattice(cx + rng.gen_range(-rx..=rx), cy + rng.gen_range(-ry..=ry))
        })
        .collect();
    Instance::new(points, lines)
}

/// Many-incidence lattice: base lines `y = a x + b` with small positive
/// slopes over a `k`-column point grid, each doubled into the two parallels
/// at `b ± 1/3`. A grid point on `d` base lines then sits in a small face
/// bounded by up to `2d` lines.
pub fn grid(n: usize, m: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = n.div_ceil(2);
    let k = ((base.min(m / 2).max(1) as f64).cbrt().round() as i64).max(1);
    let bs = (base.div_ceil(k as usize) as i64).max(1);
    let mut cand: Vec<(i64, i64)> = (1..=k).flat_map(|a| (0..bs).map(move |b| (a, b))).collect();
    cand.shuffle(&mut rng);
    cand.truncate(base);
    cand.sort();
    let mut lines = Vec::with_capacity(n);
    for &(a, b) in &cand {
        for d in [-1, 1] {
            if lines.len() < n {
                lines.push(Line::new(a, Coord::new(3 * b + d, 3)));
            }
        }
    }
    let rows = (m.div_ceil(k as usize) as i64).max(1) + k * k;
    let cols = k.max(1);
    let total = (rows * cols) as usize;
    let mut cells: Vec<usize> = if total <= 4 * m.max(1) {
        let mut v: Vec<usize> = (0..total).collect();
        v.shuffle(&mut rng);
        v
    } else {
        let mut seen = HashSet::new();
        let mut v = Vec::new();
        while v.len() < m {
            let c = rng.gen_range(0..total);
            if seen.insert(c) {
                v.push(c);
            }
        }
        v
    };
    // more points than lattice cells: spill over into further columns
    let mut extra = total;
    while cells.len() < m {
        cells.push(extra);
        extra += 1;
    }
    cells.truncate(m);
    let points = cells
        .into_iter()
        .map(|c| {
            let c = c as i64;
            Point::new(
                c % cols + (c / total as i64) * cols,
                (c % total as i64) / cols,
            )
        })
        .collect();
    Instance::new(points, lines)
}
