//! Random inputs and slow reference answers shared by the test targets.
#![allow(dead_code)]

use linefaces::generate::{generate_instance, Kind};
use linefaces::geom::side_of_line;
use linefaces::hull::{HullChain, Orientation, Vertex};
use linefaces::segments::Segment;
use linefaces::{Coord, Instance, Line, Point, Side};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn orient_i(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> i128 {
    let (px, py, qx, qy, rx, ry) = (
        p.0 as i128,
        p.1 as i128,
        q.0 as i128,
        q.1 as i128,
        r.0 as i128,
        r.1 as i128,
    );
    (qx - px) * (ry - py) - (qy - py) * (rx - px)
}

fn pt(p: (i64, i64)) -> Point {
    Point::new(p.0, p.1)
}

/// Integer points with distinct x in `[x0, x1)`, either scattered or close to
/// a parabola (which yields long chains).
pub fn random_points(rng: &mut ChaCha8Rng, x0: i64, x1: i64, k: usize) -> Vec<(i64, i64)> {
    let k = k.min((x1 - x0) as usize);
    let mut xs: Vec<i64> = (x0..x1).collect::<Vec<_>>();
    xs.shuffle(rng);
    xs.truncate(k);
    xs.sort();
    let mid = (x0 + x1) / 2;
    let bowl = rng.gen_bool(0.5);
    xs.into_iter()
        .map(|x| {
            let y = if bowl {
                (x - mid) * (x - mid) / 8 + rng.gen_range(-2..=2)
            } else {
                rng.gen_range(-4000..4000)
            };
            (x, y)
        })
        .collect()
}

/// Brute-force hull chain: a vertex survives when no segment between two
/// other points passes strictly on the chain side of it.
pub fn brute_chain(pts: &[(i64, i64)], orient: Orientation) -> Vec<(i64, i64)> {
    let s = orient.sign() as i128;
    pts.iter()
        .copied()
        .filter(|&p| {
            !pts.iter().any(|&a| {
                pts.iter()
                    .any(|&b| a.0 < p.0 && p.0 < b.0 && orient_i(a, b, p) * s >= 0)
            })
        })
        .collect()
}

pub fn chain_of(pts: &[(i64, i64)], orient: Orientation, id0: u32) -> HullChain {
    let vs = pts
        .iter()
        .enumerate()
        .map(|(i, &p)| Vertex::new(pt(p), id0 + i as u32))
        .collect();
    HullChain::from_sorted_dedup(vs, orient)
}

pub fn ip(p: &Point) -> (i64, i64) {
    (p.x.as_int().unwrap(), p.y.as_int().unwrap())
}

pub fn as_pairs(c: &HullChain) -> Vec<(i64, i64)> {
    c.points().iter().map(ip).collect()
}

/// All vertex pairs whose line keeps both chains on the chain side, then the
/// outermost such pair (leftmost in `c1`, rightmost in `c2`).
pub fn brute_tangent(
    c1: &[(i64, i64)],
    c2: &[(i64, i64)],
    orient: Orientation,
) -> ((i64, i64), (i64, i64)) {
    let s = orient.sign() as i128;
    let mut best = None;
    for &a in c1 {
        for &b in c2 {
            let ok = c1.iter().chain(c2).all(|&q| orient_i(a, b, q) * s >= 0);
            if ok && best.is_none() {
                best = Some((a, b));
            }
            if ok {
                if let Some((ba, bb)) = best {
                    best = Some((std::cmp::min(ba, a), std::cmp::max(bb, b)));
                }
            }
        }
    }
    best.expect("a tangent always exists")
}

/// `k` pairwise disjoint closed segments with integer endpoints, some of
/// them single points.
pub fn random_disjoint_segments(rng: &mut ChaCha8Rng, k: usize) -> Vec<Segment> {
    let mut out: Vec<((i64, i64), (i64, i64))> = Vec::new();
    let span = 40 * k as i64 + 40;
    while out.len() < k {
        let a = (rng.gen_range(0..span), rng.gen_range(0..span));
        let b = if rng.gen_bool(0.1) {
            a
        } else {
            (a.0 + rng.gen_range(1..span / 3 + 2), rng.gen_range(0..span))
        };
        if out.iter().all(|&(c, d)| !closed_segments_meet(a, b, c, d)) {
            out.push((a, b));
        }
    }
    out.into_iter()
        .map(|(a, b)| Segment::new(pt(a), pt(b)))
        .collect()
}

fn closed_segments_meet(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> bool {
    let within = |p: (i64, i64), q: (i64, i64), r: (i64, i64)| {
        p.0.min(q.0) <= r.0 && r.0 <= p.0.max(q.0) && p.1.min(q.1) <= r.1 && r.1 <= p.1.max(q.1)
    };
    let (d1, d2) = (orient_i(c, d, a).signum(), orient_i(c, d, b).signum());
    let (d3, d4) = (orient_i(a, b, c).signum(), orient_i(a, b, d).signum());
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && within(c, d, a))
        || (d2 == 0 && within(c, d, b))
        || (d3 == 0 && within(a, b, c))
        || (d4 == 0 && within(a, b, d))
}

/// Lowest y among the segments covering `x`, if any.
pub fn brute_min_at(segs: &[Segment], x: &Coord) -> Option<Coord> {
    segs.iter().filter(|s| s.covers(x)).map(|s| s.y_at(x)).min()
}

/// Instances that stress ties: parallel families, concurrent families and
/// points close to vertices, with incidences filtered out.
pub fn edge_case_instance(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Instance {
    let mut lines: Vec<Line> = Vec::new();
    let mode = rng.gen_range(0..3);
    while lines.len() < n {
        let l = match mode {
            0 => Line::new(rng.gen_range(-2..=2), rng.gen_range(-20..=20)),
            1 => {
                let a = rng.gen_range(-30..=30);
                Line::new(a, -a * rng.gen_range(-1..=1))
            }
            _ => Line::new(
                Coord::new(rng.gen_range(-9..=9), rng.gen_range(1..=3)),
                rng.gen_range(-6..=6),
            ),
        };
        if !lines.contains(&l) {
            lines.push(l);
        }
    }
    let mut points: Vec<Point> = Vec::new();
    let mut tries = 0;
    while points.len() < m && tries < 100 * (m + 1) {
        tries += 1;
        let eps = Coord::new(rng.gen_range(-3..=3), 1000);
        let p = if rng.gen_bool(0.5) && lines.len() >= 2 {
            let i = rng.gen_range(0..lines.len());
            let j = rng.gen_range(0..lines.len());
            match linefaces::geom::line_intersection(&lines[i], &lines[j]) {
                Some(v) => Point {
                    x: &v.x + &eps,
                    y: &v.y + &Coord::new(rng.gen_range(-3..=3), 1000),
                },
                None => continue,
            }
        } else {
            Point::new(
                Coord::new(rng.gen_range(-300..300), 10),
                Coord::new(rng.gen_range(-300..300), 10),
            )
        };
        if lines.iter().all(|l| side_of_line(&p, l) != Side::On) {
            points.push(p);
        }
    }
    Instance::new(points, lines)
}

/// The seeded corpus: `count` instances with `n, m` in `[1, max]`, cycling
/// through the generators and the edge-case family.
pub fn corpus(count: usize, max: usize, seed: u64) -> Vec<(String, Instance)> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.gen_range(1..=max);
            let m = r.gen_range(1..=max);
            let s = r.gen();
            let (name, inst) = match i % 4 {
                0 => ("uniform", generate_instance(Kind::Uniform, n, m, s)),
                1 => ("grid", generate_instance(Kind::Grid, n, m, s)),
                2 => ("clustered", generate_instance(Kind::Clustered, n, m, s)),
                _ => ("edge", edge_case_instance(&mut rng(s), n, m)),
            };
            (format!("{name} n={n} m={m} seed={s}"), inst)
        })
        .collect()
}
