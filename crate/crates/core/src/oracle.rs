//! Brute-force arrangement: a boxed DCEL with sign-vector point location.
//!
//! Quadratic in the number of lines and meant only as ground truth.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::face::{dedup_faces, Face, FaceSet};
use crate::geom::{line_intersection, side_sign, Instance, Line, Point, Side};
use crate::num::Coord;

/// Edge owner: an input line, or one of the four box sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Owner {
    Line(u32),
    Box,
}

#[derive(Debug, Clone)]
struct HalfEdge {
    origin: usize,
    twin: usize,
    next: usize,
    face: usize,
    owner: Owner,
}

/// Doubly connected edge list of the arrangement clipped to a box that
/// strictly contains every crossing and every input point.
#[derive(Debug, Clone)]
pub struct ArrangementDcel {
    pub vertices: Vec<Point>,
    half_edges: Vec<HalfEdge>,
    /// One half-edge per face; index `outer` is the unbounded outside.
    face_edge: Vec<usize>,
    outer: usize,
    lines: Vec<Line>,
    sign_index: HashMap<Vec<u64>, usize>,
}

pub type FaceId = usize;

fn angle_cmp(a: &(Coord, Coord), b: &(Coord, Coord)) -> Ordering {
    let half = |d: &(Coord, Coord)| {
        let (dx, dy) = (d.0.signum(), d.1.signum());
        if dy > 0 || (dy == 0 && dx > 0) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &(&a.0 * &b.1) - &(&a.1 * &b.0);
        0.cmp(&cross.signum())
    })
}

fn bits_of(p: &Point, lines: &[Line]) -> Vec<u64> {
    let mut bits = vec![0u64; lines.len().div_ceil(64)];
    for (i, l) in lines.iter().enumerate() {
        if side_sign(p, l) > 0 {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

pub fn build_arrangement(lines: &[Line]) -> Result<ArrangementDcel> {
    build_with_points(lines, &[])
}

/// Like `build_arrangement`, with the box also enclosing `points`.
pub fn build_with_points(lines: &[Line], points: &[Point]) -> Result<ArrangementDcel> {
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = lines.len();
    let mut crossings: Vec<Vec<Point>> = vec![Vec::new(); n];
    let mut extent = Coord::ONE;
    for i in 0..n {
        for j in i + 1..n {
            if let Some(x) = line_intersection(&lines[i], &lines[j]) {
                extent = Coord::max_of(&extent, &x.x.abs()).clone();
                extent = Coord::max_of(&extent, &x.y.abs()).clone();
                crossings[i].push(x.clone());
                crossings[j].push(x);
            }
        }
    }
    for p in points {
        extent = Coord::max_of(&extent, &p.x.abs()).clone();
        extent = Coord::max_of(&extent, &p.y.abs()).clone();
    }
    for l in lines {
        extent = Coord::max_of(&extent, &l.b.abs()).clone();
    }
    let big = Coord::from_bigint(extent.ceil()) + Coord::ONE;
    let nbig = -&big;

    let mut vid: HashMap<Point, usize> = HashMap::new();
    let mut vertices: Vec<Point> = Vec::new();
    let mut intern = |p: Point, vertices: &mut Vec<Point>| -> usize {
        *vid.entry(p.clone()).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };
    // undirected edges (u, v, owner)
    let mut edges: Vec<(usize, usize, Owner)> = Vec::new();
    // points on each box side: bottom, right, top, left
    let mut side_pts: [Vec<Point>; 4] = Default::default();
    for (i, l) in lines.iter().enumerate() {
        // clip against the box; lines are not vertical so they enter on the
        // left or bottom/top and leave on the right or top/bottom
        let mut ends: Vec<(Point, usize)> = Vec::new();
        for (x, side) in [(&nbig, 3usize), (&big, 1usize)] {
            let y = l.eval(x);
            if y >= nbig && y <= big {
                ends.push((Point { x: x.clone(), y }, side));
            }
        }
        if !l.a.is_zero() {
            for (y, side) in [(&nbig, 0usize), (&big, 2usize)] {
                let x = &(y - &l.b) / &l.a;
                if x > nbig && x < big {
                    ends.push((Point { x, y: y.clone() }, side));
                }
            }
        }
        ends.sort_by(|a, b| a.0.cmp(&b.0));
        ends.dedup_by(|a, b| a.0 == b.0);
        debug_assert_eq!(ends.len(), 2);
        for (p, s) in &ends {
            side_pts[*s].push(p.clone());
        }
        let mut pts = std::mem::take(&mut crossings[i]);
        pts.push(ends[0].0.clone());
        pts.push(ends[1].0.clone());
        pts.sort();
        pts.dedup();
        let ids: Vec<usize> = pts.into_iter().map(|p| intern(p, &mut vertices)).collect();
        for w in ids.windows(2) {
            edges.push((w[0], w[1], Owner::Line(i as u32)));
        }
    }
    let corners = [
        Point {
            x: nbig.clone(),
            y: nbig.clone(),
        },
        Point {
            x: big.clone(),
            y: nbig.clone(),
        },
        Point {
            x: big.clone(),
            y: big.clone(),
        },
        Point {
            x: nbig.clone(),
            y: big.clone(),
        },
    ];
    for s in 0..4 {
        let mut pts = std::mem::take(&mut side_pts[s]);
        pts.push(corners[s].clone());
        pts.push(corners[(s + 1) % 4].clone());
        pts.sort();
        pts.dedup();
        let ids: Vec<usize> = pts.into_iter().map(|p| intern(p, &mut vertices)).collect();
        for w in ids.windows(2) {
            edges.push((w[0], w[1], Owner::Box));
        }
    }

    let mut half_edges: Vec<HalfEdge> = Vec::with_capacity(edges.len() * 2);
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for &(u, v, owner) in &edges {
        let h = half_edges.len();
        half_edges.push(HalfEdge {
            origin: u,
            twin: h + 1,
            next: usize::MAX,
            face: usize::MAX,
            owner,
        });
        half_edges.push(HalfEdge {
            origin: v,
            twin: h,
            next: usize::MAX,
            face: usize::MAX,
            owner,
        });
        out[u].push(h);
        out[v].push(h + 1);
    }
    let dir = |h: usize, half_edges: &[HalfEdge]| {
        let a = &vertices[half_edges[h].origin];
        let b = &vertices[half_edges[half_edges[h].twin].origin];
        (&b.x - &a.x, &b.y - &a.y)
    };
    // position of each outgoing half-edge in its vertex's ccw order
    let mut pos = vec![0usize; half_edges.len()];
    for list in out.iter_mut() {
        let dirs: Vec<_> = list.iter().map(|&h| dir(h, &half_edges)).collect();
        let mut idx: Vec<usize> = (0..list.len()).collect();
        idx.sort_by(|&a, &b| angle_cmp(&dirs[a], &dirs[b]));
        *list = idx.into_iter().map(|k| list[k]).collect();
        for (k, &h) in list.iter().enumerate() {
            pos[h] = k;
        }
    }
    for h in 0..half_edges.len() {
        let t = half_edges[h].twin;
        let v = half_edges[t].origin;
        let list = &out[v];
        let k = pos[t];
        half_edges[h].next = list[(k + list.len() - 1) % list.len()];
    }
    let mut face_edge = Vec::new();
    for h in 0..half_edges.len() {
        if half_edges[h].face != usize::MAX {
            continue;
        }
        let f = face_edge.len();
        face_edge.push(h);
        let mut e = h;
        loop {
            half_edges[e].face = f;
            e = half_edges[e].next;
            if e == h {
                break;
            }
        }
    }
    let mut dcel = ArrangementDcel {
        vertices,
        half_edges,
        face_edge,
        outer: usize::MAX,
        lines: lines.to_vec(),
        sign_index: HashMap::new(),
    };
    dcel.outer = (0..dcel.face_edge.len())
        .find(|&f| dcel.signed_area2(f).signum() < 0)
        .expect("outer face");
    dcel.index_sign_vectors();
    Ok(dcel)
}

impl ArrangementDcel {
    fn cycle(&self, f: FaceId) -> Vec<usize> {
        let start = self.face_edge[f];
        let mut out = vec![start];
        let mut e = self.half_edges[start].next;
        while e != start {
            out.push(e);
            e = self.half_edges[e].next;
        }
        out
    }

    fn signed_area2(&self, f: FaceId) -> Coord {
        let mut acc = Coord::ZERO;
        for h in self.cycle(f) {
            let a = &self.vertices[self.half_edges[h].origin];
            let b = &self.vertices[self.half_edges[self.half_edges[h].twin].origin];
            acc = acc + (&(&a.x * &b.y) - &(&a.y * &b.x));
        }
        acc
    }

    fn index_sign_vectors(&mut self) {
        let nf = self.face_edge.len();
        let mut signs: Vec<Option<Vec<u64>>> = vec![None; nf];
        let start = (0..nf).find(|&f| f != self.outer).unwrap();
        signs[start] = Some(bits_of(&self.interior_point(start), &self.lines));
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let sv = signs[f].clone().unwrap();
            for h in self.cycle(f) {
                let Owner::Line(l) = self.half_edges[h].owner else {
                    continue;
                };
                let g = self.half_edges[self.half_edges[h].twin].face;
                if g == self.outer || signs[g].is_some() {
                    continue;
                }
                let mut s = sv.clone();
                s[l as usize / 64] ^= 1 << (l % 64);
                signs[g] = Some(s);
                queue.push_back(g);
            }
        }
        self.sign_index = signs
            .into_iter()
            .enumerate()
            .filter_map(|(f, s)| s.map(|s| (s, f)))
            .collect();
    }

    /// Average of the face polygon's corners.
    fn interior_point(&self, f: FaceId) -> Point {
        let cyc = self.cycle(f);
        let k = Coord::from_int(cyc.len() as i64);
        let (mut sx, mut sy) = (Coord::ZERO, Coord::ZERO);
        for h in &cyc {
            let v = &self.vertices[self.half_edges[*h].origin];
            sx = sx + &v.x;
            sy = sy + &v.y;
        }
        Point {
            x: &sx / &k,
            y: &sy / &k,
        }
    }

    /// Arrangement faces, excluding the outside of the box.
    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.face_edge.len()).filter(move |&f| f != self.outer)
    }

    pub fn num_faces(&self) -> usize {
        self.face_edge.len() - 1
    }

    /// (V, E, F) of the boxed planar graph, F counting the outside.
    pub fn euler_counts(&self) -> (usize, usize, usize) {
        (
            self.vertices.len(),
            self.half_edges.len() / 2,
            self.face_edge.len(),
        )
    }

    /// Twin and face-cycle consistency.
    pub fn check_consistency(&self) -> bool {
        let (v, e, f) = self.euler_counts();
        let euler = v + f == e + 2;
        let twins = self
            .half_edges
            .iter()
            .enumerate()
            .all(|(h, he)| self.half_edges[he.twin].twin == h);
        let faces = self
            .half_edges
            .iter()
            .all(|he| self.half_edges[he.next].face == he.face);
        euler && twins && faces
    }

    pub fn locate_face(&self, p: &Point) -> Result<FaceId> {
        if self.lines.iter().any(|l| side_sign(p, l) == 0) {
            return Err(Error::OnBoundary(0));
        }
        Ok(*self
            .sign_index
            .get(&bits_of(p, &self.lines))
            .expect("every sign vector of a point names a face"))
    }

    /// The face in canonical form; box edges become unbounded gaps.
    pub fn face(&self, f: FaceId) -> Face {
        let cyc = self.cycle(f);
        // start right after a box edge so that gaps never wrap around
        let start = cyc
            .iter()
            .position(|&h| self.half_edges[h].owner == Owner::Box)
            .map_or(0, |k| (k + 1) % cyc.len());
        let mut edges = Vec::new();
        let mut verts: Vec<Option<Point>> = Vec::new();
        for k in 0..cyc.len() {
            let h = cyc[(start + k) % cyc.len()];
            let he = &self.half_edges[h];
            match he.owner {
                Owner::Line(l) => {
                    let a = &self.vertices[he.origin];
                    let b = &self.vertices[self.half_edges[he.twin].origin];
                    let side = if b.x > a.x { Side::Above } else { Side::Below };
                    edges.push((l, side));
                    verts.push(Some(b.clone()));
                }
                Owner::Box => {
                    if let Some(last) = verts.last_mut() {
                        *last = None;
                    }
                }
            }
        }
        if !cyc.is_empty()
            && self.half_edges[cyc[(start + cyc.len() - 1) % cyc.len()]].owner == Owner::Box
        {
            if let Some(last) = verts.last_mut() {
                *last = None;
            }
        }
        Face::from_cycle(edges, verts)
    }
}

/// Faces containing at least one point, found by locating every point in the
/// full arrangement.
pub fn non_empty_faces_naive(inst: &Instance) -> Result<FaceSet> {
    if inst.lines.is_empty() {
        return Ok(dedup_faces(
            (0..inst.points.len()).map(|i| (i, Face::plane())),
        ));
    }
    let dcel = build_with_points(&inst.lines, &inst.points)?;
    let mut cache: HashMap<FaceId, Face> = HashMap::new();
    let mut per_point = Vec::with_capacity(inst.points.len());
    for (i, p) in inst.points.iter().enumerate() {
        let f = dcel.locate_face(p).map_err(|_| Error::OnBoundary(i))?;
        let face = cache.entry(f).or_insert_with(|| dcel.face(f)).clone();
        per_point.push((i, face));
    }
    Ok(dedup_faces(per_point))
}
