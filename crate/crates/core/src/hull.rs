//! Persistent x-monotone convex chains.
//!
//! A chain is a treap keyed by x with path-copying updates, so every handle
//! stays valid after splits and joins of chains derived from it. Each node
//! caches the extreme vertices of its subtree; that makes the neighbor of a
//! node available during a descent and keeps tangent searches logarithmic.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{dualize_point, line_intersection, orient, Line, Point};
use crate::num::Coord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Lower,
    Upper,
}

impl Orientation {
    /// `+1` for lower chains; flipping y turns an upper chain into a lower one.
    #[inline]
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Lower => 1,
            Orientation::Upper => -1,
        }
    }

    pub fn flip(self) -> Orientation {
        match self {
            Orientation::Lower => Orientation::Upper,
            Orientation::Upper => Orientation::Lower,
        }
    }
}

/// A chain vertex: a point plus the id of whatever it stands for (usually
/// the index of the primal line it is dual to).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub p: Point,
    pub id: u32,
}

impl Vertex {
    pub fn new(p: Point, id: u32) -> Vertex {
        Vertex { p, id }
    }
}

type Tree = Option<Arc<Node>>;

struct Node {
    v: Vertex,
    pri: u64,
    size: u32,
    lo: Vertex,
    hi: Vertex,
    left: Tree,
    right: Tree,
}

fn priority(p: &Point) -> u64 {
    let mut h = DefaultHasher::new();
    p.hash(&mut h);
    // splitmix64 finalizer
    let mut z = h.finish().wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn size(t: &Tree) -> usize {
    t.as_ref().map_or(0, |n| n.size as usize)
}

fn mk(v: Vertex, pri: u64, left: Tree, right: Tree) -> Arc<Node> {
    let lo = left.as_ref().map_or_else(|| v.clone(), |n| n.lo.clone());
    let hi = right.as_ref().map_or_else(|| v.clone(), |n| n.hi.clone());
    let size = (1 + size(&left) + size(&right)) as u32;
    Arc::new(Node {
        v,
        pri,
        size,
        lo,
        hi,
        left,
        right,
    })
}

fn join(a: Tree, b: Tree) -> Tree {
    match (a, b) {
        (None, t) | (t, None) => t,
        (Some(a), Some(b)) => {
            if a.pri >= b.pri {
                let right = join(a.right.clone(), Some(b));
                Some(mk(a.v.clone(), a.pri, a.left.clone(), right))
            } else {
                let left = join(Some(a), b.left.clone());
                Some(mk(b.v.clone(), b.pri, left, b.right.clone()))
            }
        }
    }
}

/// Splits into (prefix where `goes_left` holds, rest). `goes_left` must be
/// monotone along the in-order sequence.
fn split_by(t: &Tree, goes_left: &impl Fn(&Vertex) -> bool) -> (Tree, Tree) {
    match t {
        None => (None, None),
        Some(n) => {
            if goes_left(&n.v) {
                let (l, r) = split_by(&n.right, goes_left);
                (Some(mk(n.v.clone(), n.pri, n.left.clone(), l)), r)
            } else {
                let (l, r) = split_by(&n.left, goes_left);
                (l, Some(mk(n.v.clone(), n.pri, r, n.right.clone())))
            }
        }
    }
}

fn split_rank(t: &Tree, k: usize) -> (Tree, Tree) {
    match t {
        None => (None, None),
        Some(n) => {
            let ls = size(&n.left);
            if k <= ls {
                let (l, r) = split_rank(&n.left, k);
                (l, Some(mk(n.v.clone(), n.pri, r, n.right.clone())))
            } else {
                let (l, r) = split_rank(&n.right, k - ls - 1);
                (Some(mk(n.v.clone(), n.pri, n.left.clone(), l)), r)
            }
        }
    }
}

/// Cartesian tree over an x-sorted vertex list, linear time.
fn build(vs: Vec<Vertex>) -> Tree {
    let n = vs.len();
    if n == 0 {
        return None;
    }
    let pri: Vec<u64> = vs.iter().map(|v| priority(&v.p)).collect();
    let mut left = vec![usize::MAX; n];
    let mut right = vec![usize::MAX; n];
    let mut stack: Vec<usize> = Vec::with_capacity(64);
    for i in 0..n {
        let mut last = usize::MAX;
        while let Some(&top) = stack.last() {
            if pri[top] < pri[i] {
                last = top;
                stack.pop();
            } else {
                break;
            }
        }
        left[i] = last;
        if let Some(&top) = stack.last() {
            right[top] = i;
        }
        stack.push(i);
    }
    let root = stack[0];
    let mut slots: Vec<Option<Vertex>> = vs.into_iter().map(Some).collect();
    fn rec(
        i: usize,
        left: &[usize],
        right: &[usize],
        pri: &[u64],
        slots: &mut [Option<Vertex>],
    ) -> Tree {
        if i == usize::MAX {
            return None;
        }
        let l = rec(left[i], left, right, pri, slots);
        let r = rec(right[i], left, right, pri, slots);
        Some(mk(slots[i].take().unwrap(), pri[i], l, r))
    }
    rec(root, &left, &right, &pri, &mut slots)
}

/// First in-order vertex `v` for which `go_right(v, successor)` is false,
/// with its rank; the last vertex if the predicate holds everywhere.
/// `go_right` must be true on a prefix and false after it.
fn search(
    t: &Tree,
    mut go_right: impl FnMut(&Vertex, &Vertex) -> bool,
) -> Option<(usize, &Vertex)> {
    let mut cur = t.as_deref();
    let mut bound: Option<&Vertex> = None;
    let mut best = None;
    let mut base = 0;
    while let Some(n) = cur {
        let next = match &n.right {
            Some(r) => Some(&r.lo),
            None => bound,
        };
        let rank = base + size(&n.left);
        let right = next.is_some_and(|nx| go_right(&n.v, nx));
        if right {
            base = rank + 1;
            cur = n.right.as_deref();
        } else {
            best = Some((rank, &n.v));
            bound = Some(&n.v);
            cur = n.left.as_deref();
        }
    }
    best
}

fn get(t: &Tree, mut k: usize) -> Option<&Vertex> {
    let mut cur = t.as_deref();
    while let Some(n) = cur {
        let ls = size(&n.left);
        if k < ls {
            cur = n.left.as_deref();
        } else if k == ls {
            return Some(&n.v);
        } else {
            k -= ls + 1;
            cur = n.right.as_deref();
        }
    }
    None
}

pub struct Iter<'a> {
    stack: Vec<&'a Node>,
}

impl<'a> Iter<'a> {
    fn new(t: &'a Tree) -> Self {
        let mut it = Iter { stack: Vec::new() };
        it.push_left(t.as_deref());
        it
    }

    fn push_left(&mut self, mut cur: Option<&'a Node>) {
        while let Some(n) = cur {
            self.stack.push(n);
            cur = n.left.as_deref();
        }
    }
}

impl<'a> Iterator for Iter<'a> {
    type Item = &'a Vertex;

    fn next(&mut self) -> Option<&'a Vertex> {
        let n = self.stack.pop()?;
        self.push_left(n.right.as_deref());
        Some(&n.v)
    }
}

/// Persistent x-monotone, strictly convex chain.
#[derive(Clone)]
pub struct HullChain {
    orient: Orientation,
    root: Tree,
}

impl std::fmt::Debug for HullChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HullChain")
            .field("orient", &self.orient)
            .field("vertices", &self.iter().map(|v| &v.p).collect::<Vec<_>>())
            .finish()
    }
}

impl PartialEq for HullChain {
    fn eq(&self, other: &Self) -> bool {
        self.orient == other.orient
            && self.len() == other.len()
            && self.iter().zip(other.iter()).all(|(a, b)| a == b)
    }
}

impl Eq for HullChain {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentKind {
    LowerCommon,
    UpperCommon,
    InnerPair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentPair {
    pub t1: Vertex,
    pub t2: Vertex,
    pub kind: TangentKind,
}

static MAX_CROSSINGS: AtomicUsize = AtomicUsize::new(0);
static MERGES: AtomicUsize = AtomicUsize::new(0);

/// Largest crossing count seen by any bounded-crossing merge in this process.
pub fn max_crossings_observed() -> usize {
    MAX_CROSSINGS.load(AtomicOrdering::Relaxed)
}

/// Number of bounded-crossing merges with two non-empty inputs so far.
pub fn merges_performed() -> usize {
    MERGES.load(AtomicOrdering::Relaxed)
}

pub fn chain_from_sorted(points: &[Point], orient: Orientation) -> Result<HullChain> {
    HullChain::from_sorted(
        points
            .iter()
            .enumerate()
            .map(|(i, p)| Vertex::new(p.clone(), i as u32))
            .collect(),
        orient,
    )
}

impl HullChain {
    pub fn empty(orient: Orientation) -> HullChain {
        HullChain { orient, root: None }
    }

    pub fn singleton(v: Vertex, orient: Orientation) -> HullChain {
        HullChain {
            orient,
            root: Some(mk(v.clone(), priority(&v.p), None, None)),
        }
    }

    /// Hull of vertices given in strictly increasing x order.
    pub fn from_sorted(vs: Vec<Vertex>, orient: Orientation) -> Result<HullChain> {
        for w in vs.windows(2) {
            if w[0].p.x >= w[1].p.x {
                if w[0].p.x == w[1].p.x {
                    return Err(Error::DuplicateX(w[0].p.x.to_string()));
                }
                return Err(Error::PreconditionViolated("vertices not x-sorted".into()));
            }
        }
        Ok(Self::hull_of_sorted(vs, orient))
    }

    /// Like `from_sorted`, but the input is sorted by (x, y) and may repeat x;
    /// of equal-x vertices only the extreme one in the chain's direction is
    /// kept (the lowest for lower chains).
    pub fn from_sorted_dedup(vs: Vec<Vertex>, orient: Orientation) -> HullChain {
        let mut out: Vec<Vertex> = Vec::with_capacity(vs.len());
        for v in vs {
            if let Some(last) = out.last_mut() {
                if last.p.x == v.p.x {
                    let better = match orient {
                        Orientation::Lower => v.p.y < last.p.y,
                        Orientation::Upper => v.p.y > last.p.y,
                    };
                    if better {
                        *last = v;
                    }
                    continue;
                }
            }
            out.push(v);
        }
        Self::hull_of_sorted(out, orient)
    }

    fn hull_of_sorted(vs: Vec<Vertex>, orient: Orientation) -> HullChain {
        let s = orient.sign();
        let mut h: Vec<Vertex> = Vec::with_capacity(vs.len());
        for v in vs {
            while h.len() >= 2 && orient_s(&h[h.len() - 2].p, &h[h.len() - 1].p, &v.p, s) <= 0 {
                h.pop();
            }
            h.push(v);
        }
        HullChain {
            orient,
            root: build(h),
        }
    }

    /// Wraps vertices that already form a strictly convex chain.
    pub fn from_convex_unchecked(vs: Vec<Vertex>, orient: Orientation) -> HullChain {
        HullChain {
            orient,
            root: build(vs),
        }
    }

    pub fn orientation(&self) -> Orientation {
        self.orient
    }

    pub fn len(&self) -> usize {
        size(&self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn first(&self) -> Option<&Vertex> {
        self.root.as_ref().map(|n| &n.lo)
    }

    pub fn last(&self) -> Option<&Vertex> {
        self.root.as_ref().map(|n| &n.hi)
    }

    pub fn get(&self, k: usize) -> Option<&Vertex> {
        get(&self.root, k)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter::new(&self.root)
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.iter().cloned().collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.iter().map(|v| v.p.clone()).collect()
    }

    /// Identity of the underlying tree; equal handles share all structure.
    pub fn ptr_eq(&self, other: &HullChain) -> bool {
        match (&self.root, &other.root) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    /// (vertices with x <= x0, vertices with x > x0)
    pub fn split_at_x(&self, x0: &Coord) -> (HullChain, HullChain) {
        let (l, r) = split_by(&self.root, &|v: &Vertex| v.p.x <= *x0);
        (self.wrap(l), self.wrap(r))
    }

    /// (vertices with x < x0, vertices with x >= x0)
    pub fn split_before_x(&self, x0: &Coord) -> (HullChain, HullChain) {
        let (l, r) = split_by(&self.root, &|v: &Vertex| v.p.x < *x0);
        (self.wrap(l), self.wrap(r))
    }

    pub fn split_at_rank(&self, k: usize) -> (HullChain, HullChain) {
        let (l, r) = split_rank(&self.root, k);
        (self.wrap(l), self.wrap(r))
    }

    /// Vertices with `lo < x < hi`.
    pub fn slice_open(&self, lo: &Coord, hi: &Coord) -> HullChain {
        let (_, r) = self.split_at_x(lo);
        r.split_before_x(hi).0
    }

    /// Vertices with ranks in `lo..hi`.
    pub fn slice_rank(&self, lo: usize, hi: usize) -> HullChain {
        let (l, _) = self.split_at_rank(hi);
        l.split_at_rank(lo).1
    }

    fn wrap(&self, root: Tree) -> HullChain {
        HullChain {
            orient: self.orient,
            root,
        }
    }

    /// Concatenation without any hull computation; every vertex of `self`
    /// must lie left of every vertex of `other`.
    pub fn concat_unchecked(&self, other: &HullChain) -> HullChain {
        self.wrap(join(self.root.clone(), other.root.clone()))
    }

    /// (last vertex with x <= x0, first vertex with x > x0)
    pub fn straddle(&self, x0: &Coord) -> (Option<&Vertex>, Option<&Vertex>) {
        let mut cur = self.root.as_deref();
        let (mut below, mut above) = (None, None);
        while let Some(n) = cur {
            if n.v.p.x <= *x0 {
                below = Some(&n.v);
                cur = n.right.as_deref();
            } else {
                above = Some(&n.v);
                cur = n.left.as_deref();
            }
        }
        (below, above)
    }

    /// Vertex with exactly this x, if any.
    pub fn vertex_at_x(&self, x0: &Coord) -> Option<&Vertex> {
        match self.straddle(x0).0 {
            Some(v) if v.p.x == *x0 => Some(v),
            _ => None,
        }
    }

    /// The chain as a piecewise linear function of x; `None` outside its
    /// x-range.
    pub fn eval_at(&self, x0: &Coord) -> Option<Coord> {
        match self.straddle(x0) {
            (Some(a), _) if a.p.x == *x0 => Some(a.p.y.clone()),
            (Some(a), Some(b)) => {
                let t = (x0 - &a.p.x) / (&b.p.x - &a.p.x);
                Some(&a.p.y + &(&t * &(&b.p.y - &a.p.y)))
            }
            _ => None,
        }
    }

    /// Full walk: strictly increasing x and strict convexity.
    pub fn check_invariants(&self) -> Result<()> {
        let vs = self.vertices();
        let s = self.orient.sign();
        for w in vs.windows(2) {
            if w[0].p.x >= w[1].p.x {
                return Err(Error::PreconditionViolated(format!(
                    "chain not strictly x-monotone at {:?}",
                    w[1].p
                )));
            }
        }
        for w in vs.windows(3) {
            if orient_s(&w[0].p, &w[1].p, &w[2].p, s) <= 0 {
                return Err(Error::PreconditionViolated(format!(
                    "chain not strictly convex at {:?}",
                    w[1].p
                )));
            }
        }
        if let Some(root) = &self.root {
            let ok = root.lo == vs[0] && root.hi == vs[vs.len() - 1];
            if !ok || root.size as usize != vs.len() {
                return Err(Error::PreconditionViolated("stale node cache".into()));
            }
        }
        Ok(())
    }
}

#[inline]
fn orient_s(p: &Point, q: &Point, r: &Point, s: i32) -> i32 {
    orient(p, q, r) * s
}

/// Tangent vertex of `c` as seen from `q`, which lies strictly right of `c`:
/// every vertex of `c` is on the chain's side of the line through it and `q`.
/// Among collinear candidates the one with smaller x wins.
fn tangent_from_right<'a>(c: &'a HullChain, q: &Point) -> (usize, &'a Vertex) {
    let s = c.orient.sign();
    search(&c.root, |v, next| orient_s(&v.p, q, &next.p, s) < 0).expect("non-empty chain")
}

/// Bridge of two x-separated chains: (rank in c1, rank in c2).
fn bridge(c1: &HullChain, c2: &HullChain) -> (usize, usize) {
    let s = c1.orient.sign();
    let (j, u) = search(&c2.root, |u, next| {
        let (_, t) = tangent_from_right(c1, &u.p);
        orient_s(&t.p, &u.p, &next.p, s) <= 0
    })
    .expect("non-empty chain");
    let (i, _) = tangent_from_right(c1, &u.p);
    (i, j)
}

fn check_pair(c1: &HullChain, c2: &HullChain) -> Result<()> {
    if c1.orient != c2.orient {
        return Err(Error::PreconditionViolated("orientation mismatch".into()));
    }
    if let (Some(a), Some(b)) = (c1.last(), c2.first()) {
        if a.p.x >= b.p.x {
            return Err(Error::PreconditionViolated(
                "chains are not separated by a vertical line".into(),
            ));
        }
    }
    Ok(())
}

/// Common tangent of two chains separated by a vertical line, c1 on the left.
pub fn common_tangent_separated(c1: &HullChain, c2: &HullChain) -> Result<TangentPair> {
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::EmptyChain);
    }
    check_pair(c1, c2)?;
    let (i, j) = bridge(c1, c2);
    Ok(TangentPair {
        t1: c1.get(i).unwrap().clone(),
        t2: c2.get(j).unwrap().clone(),
        kind: match c1.orient {
            Orientation::Lower => TangentKind::LowerCommon,
            Orientation::Upper => TangentKind::UpperCommon,
        },
    })
}

/// Hull of the union of two x-separated chains.
pub fn join_separated(c1: &HullChain, c2: &HullChain) -> Result<HullChain> {
    check_pair(c1, c2)?;
    if c1.is_empty() {
        return Ok(c2.clone());
    }
    if c2.is_empty() {
        return Ok(c1.clone());
    }
    let (i, j) = bridge(c1, c2);
    let left = split_rank(&c1.root, i + 1).0;
    let right = split_rank(&c2.root, j).1;
    Ok(c1.wrap(join(left, right)))
}

/// Envelope of the separator lines on the chain's side: the upper envelope
/// for lower chains, the lower one for upper chains. Returns its vertices.
fn separator_vertices(sep: &[Line], s: i32) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for (i, l1) in sep.iter().enumerate() {
        for l2 in &sep[i + 1..] {
            let Some(x) = line_intersection(l1, l2) else {
                continue;
            };
            let on_env = sep.iter().all(|l| (l.eval(&x.x).cmp(&x.y) as i32) * s <= 0);
            if on_env && !out.iter().any(|q| q.x == x.x) {
                out.push(x);
            }
        }
    }
    out.sort();
    out
}

fn envelope_of(sep: &[Line], x: &Coord, s: i32) -> Coord {
    let vals = sep.iter().map(|l| l.eval(x));
    if s > 0 {
        vals.max().unwrap()
    } else {
        vals.min().unwrap()
    }
}

/// Verifies the bounded-crossing merge precondition by a full walk: `a` on or
/// beyond the separator envelope, `b` strictly inside it.
pub fn check_merge_precondition(a: &HullChain, b: &HullChain, sep: &[Line]) -> Result<()> {
    if a.orient != b.orient {
        return Err(Error::PreconditionViolated("orientation mismatch".into()));
    }
    if sep.is_empty() {
        if !a.is_empty() && !b.is_empty() {
            return Err(Error::PreconditionViolated(
                "merge without separator needs an empty side".into(),
            ));
        }
        return Ok(());
    }
    let s = a.orient.sign();
    for v in a.iter() {
        if (v.p.y.cmp(&envelope_of(sep, &v.p.x, s)) as i32) * s < 0 {
            return Err(Error::PreconditionViolated(format!(
                "vertex {:?} of the outer chain is on the wrong side of the separator",
                v.p
            )));
        }
    }
    for v in b.iter() {
        if (v.p.y.cmp(&envelope_of(sep, &v.p.x, s)) as i32) * s >= 0 {
            return Err(Error::PreconditionViolated(format!(
                "vertex {:?} of the inner chain is on the wrong side of the separator",
                v.p
            )));
        }
    }
    Ok(())
}

/// Abscissae where the line `l` meets chain `c` (at most two, since the
/// difference of a convex chain and a line is convex).
fn line_chain_roots(c: &HullChain, l: &Line) -> Vec<Coord> {
    let s = c.orient.sign();
    // g(v) = s * (v.y - l(v.x)), convex along the chain
    let g = |v: &Vertex| (v.p.y.cmp(&l.eval(&v.p.x)) as i32) * s;
    let (rmin, vmin) = search(&c.root, |v, next| {
        let d = crate::geom::slope(&v.p, &next.p);
        (d.cmp(&l.a) as i32) * s < 0
    })
    .expect("non-empty chain");
    if g(vmin) >= 0 {
        return Vec::new();
    }
    let (left, right) = c.split_at_rank(rmin + 1);
    let mut out = Vec::with_capacity(2);
    // left part: g non-increasing; find the edge where it drops below zero
    if let Some((_, v)) = search(&left.root, |_, next| g(next) >= 0) {
        if g(v) >= 0 {
            let nx = left.straddle(&v.p.x).1.expect("successor exists");
            out.push(edge_line_cross(&v.p, &nx.p, l));
        }
    }
    // right part, prefixed with the minimum: g non-decreasing
    let right = HullChain::singleton(vmin.clone(), c.orient).concat_unchecked(&right);
    if let Some((_, v)) = search(&right.root, |_, next| g(next) < 0) {
        if let Some(nx) = right.straddle(&v.p.x).1 {
            out.push(edge_line_cross(&v.p, &nx.p, l));
        }
    }
    out
}

fn edge_line_cross(p: &Point, q: &Point, l: &Line) -> Coord {
    let e = crate::geom::line_through(p, q);
    line_intersection(&e, l)
        .expect("edge not parallel to a crossing line")
        .x
}

/// Result of a bounded-crossing merge.
#[derive(Debug, Clone)]
pub struct Merged {
    pub chain: HullChain,
    pub crossings: usize,
}

/// Hull of the union of `a` and `b`, where the separator envelope has `a`
/// on its outer side and `b` strictly on its inner side (see
/// `check_merge_precondition`, which this function does not run).
///
/// Only edges of `b` straddling a separator vertex can reach `a`, so the two
/// chains cross a bounded number of times. Between consecutive crossings one
/// chain is on the hull side of the other and the other's vertices can be
/// dropped; the surviving pieces are x-separated and folded with
/// `join_separated`.
pub fn merge_bounded_crossings(a: &HullChain, b: &HullChain, sep: &[Line]) -> Result<Merged> {
    if a.orient != b.orient {
        return Err(Error::PreconditionViolated("orientation mismatch".into()));
    }
    if a.is_empty() || b.is_empty() {
        let chain = if a.is_empty() { b.clone() } else { a.clone() };
        return Ok(Merged {
            chain,
            crossings: 0,
        });
    }
    if sep.is_empty() {
        return Err(Error::PreconditionViolated(
            "merge without separator needs an empty side".into(),
        ));
    }
    MERGES.fetch_add(1, AtomicOrdering::Relaxed);
    let s = a.orient.sign();

    let (a_lo, a_hi) = (&a.first().unwrap().p.x, &a.last().unwrap().p.x);
    let (b_lo, b_hi) = (&b.first().unwrap().p.x, &b.last().unwrap().p.x);
    let mut breaks: Vec<Coord> = vec![a_lo.clone(), a_hi.clone(), b_lo.clone(), b_hi.clone()];
    let mut crossings = 0;
    for w in separator_vertices(sep, s) {
        let (Some(l), Some(r)) = b.straddle(&w.x) else {
            continue;
        };
        if l.p.x == w.x {
            continue;
        }
        let edge = crate::geom::line_through(&l.p, &r.p);
        for x in line_chain_roots(a, &edge) {
            if x > l.p.x && x < r.p.x {
                crossings += 1;
            }
            breaks.push(x);
        }
    }
    MAX_CROSSINGS.fetch_max(crossings, AtomicOrdering::Relaxed);
    breaks.sort();
    breaks.dedup();

    let lower_of = |fa: &Option<Coord>, fb: &Option<Coord>| -> Option<bool> {
        // Some(true): a is on the hull side (or tied), Some(false): b is
        match (fa, fb) {
            (Some(ya), Some(yb)) => Some((ya.cmp(yb) as i32) * s <= 0),
            (Some(_), None) => Some(true),
            (None, Some(_)) => Some(false),
            (None, None) => None,
        }
    };

    let mut acc = HullChain::empty(a.orient);
    let push = |piece: HullChain, acc: &mut HullChain| -> Result<()> {
        if !piece.is_empty() {
            *acc = join_separated(acc, &piece)?;
        }
        Ok(())
    };
    let two = Coord::from_int(2);
    for (k, x) in breaks.iter().enumerate() {
        let (fa, fb) = (a.eval_at(x), b.eval_at(x));
        let (va, vb) = (a.vertex_at_x(x), b.vertex_at_x(x));
        let pick = match lower_of(&fa, &fb) {
            Some(true) => {
                if va.is_some() || fa != fb {
                    va
                } else {
                    vb
                }
            }
            Some(false) => vb,
            None => None,
        };
        if let Some(v) = pick {
            push(HullChain::singleton(v.clone(), a.orient), &mut acc)?;
        }
        if let Some(nx) = breaks.get(k + 1) {
            let mid = &(x + nx) / &two;
            match lower_of(&a.eval_at(&mid), &b.eval_at(&mid)) {
                Some(true) => push(a.slice_open(x, nx), &mut acc)?,
                Some(false) => push(b.slice_open(x, nx), &mut acc)?,
                None => {}
            }
        }
    }
    Ok(Merged {
        chain: acc,
        crossings,
    })
}

/// Value at `x` of the envelope of the lines dual to the chain's vertices:
/// the upper envelope for a lower chain, the lower envelope for an upper one.
pub fn envelope_eval(c: &HullChain, x: &Coord) -> Result<Coord> {
    let s = c.orient.sign();
    let (_, v) = search(&c.root, |v, next| {
        let d = crate::geom::slope(&v.p, &next.p);
        (x.cmp(&d) as i32) * s > 0
    })
    .ok_or(Error::EmptyChain)?;
    Ok(dualize_point(&v.p).eval(x))
}

/// Face of a point seen through its two dual hulls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualFace {
    /// Ranks `i1..=i2` of the `lower` chain that bound the face from below.
    pub lower_range: Option<(usize, usize)>,
    /// Ranks `j2..=j1` of the `upper` chain that bound the face from above.
    pub upper_range: Option<(usize, usize)>,
    /// Tangent pair at the left end of the face; present when both chains are
    /// non-empty, even if the face is unbounded there.
    pub left: Option<TangentPair>,
    pub right: Option<TangentPair>,
    /// Primal face corners at the two ends, `None` when unbounded.
    pub left_vertex: Option<Point>,
    pub right_vertex: Option<Point>,
}

/// Inner common tangents of `lower` (vertices above `pstar`) and `upper`
/// (vertices below it).
///
/// In the primal, the face of the point dual to `pstar` is the region between
/// `f`, the upper envelope of the lines dual to `lower`, and `g`, the lower
/// envelope of those dual to `upper`. `g - f` is concave and positive at the
/// point; its two roots are the face's ends and the inner tangents are the
/// dual lines of those corners. Each root is found by a descent over the
/// chain edges, which are exactly the envelope breakpoints.
pub fn inner_common_tangents(upper: &HullChain, lower: &HullChain, pstar: &Line) -> DualFace {
    let px = &pstar.a;
    let f = |x: &Coord| envelope_eval(lower, x).ok();
    let g = |x: &Coord| envelope_eval(upper, x).ok();
    // h(x) > 0 with empty sides treated as +/- infinity
    let h_pos = |x: &Coord| match (f(x), g(x)) {
        (Some(fv), Some(gv)) => gv > fv,
        _ => true,
    };
    let brk = |v: &Vertex, next: &Vertex| crate::geom::slope(&v.p, &next.p);

    let i2 = search(&lower.root, |v, n| {
        let b = brk(v, n);
        b < *px || h_pos(&b)
    });
    let i1 = search(&lower.root, |v, n| {
        let b = brk(v, n);
        b < *px && !h_pos(&b)
    });
    let j2 = search(&upper.root, |v, n| {
        let b = brk(v, n);
        b > *px && !h_pos(&b)
    });
    let j1 = search(&upper.root, |v, n| {
        let b = brk(v, n);
        !(b < *px && !h_pos(&b))
    });

    let mut out = DualFace {
        lower_range: i1.zip(i2).map(|((a, _), (b, _))| (a, b)),
        upper_range: j2.zip(j1).map(|((a, _), (b, _))| (a, b)),
        left: None,
        right: None,
        left_vertex: None,
        right_vertex: None,
    };
    if let (Some((_, fl)), Some((_, gl)), Some((_, fr)), Some((_, gr))) = (i1, j1, i2, j2) {
        out.right = Some(TangentPair {
            t1: fr.clone(),
            t2: gr.clone(),
            kind: TangentKind::InnerPair,
        });
        out.left = Some(TangentPair {
            t1: fl.clone(),
            t2: gl.clone(),
            kind: TangentKind::InnerPair,
        });
        // a root exists iff h is decreasing (right) / increasing (left) there
        if gr.p.x < fr.p.x {
            out.right_vertex = line_intersection(&dualize_point(&fr.p), &dualize_point(&gr.p));
        }
        if gl.p.x > fl.p.x {
            out.left_vertex = line_intersection(&dualize_point(&fl.p), &dualize_point(&gl.p));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    fn lower(pts: &[(i64, i64)]) -> HullChain {
        let v: Vec<Point> = pts.iter().map(|&(x, y)| p(x, y)).collect();
        chain_from_sorted(&v, Orientation::Lower).unwrap()
    }

    fn pts(c: &HullChain) -> Vec<Point> {
        c.points()
    }

    #[test]
    fn from_sorted_examples() {
        assert_eq!(
            pts(&lower(&[(0, 0), (1, 1), (2, 2)])),
            vec![p(0, 0), p(2, 2)]
        );
        assert_eq!(
            pts(&lower(&[(0, 0), (1, -1), (2, 0)])),
            vec![p(0, 0), p(1, -1), p(2, 0)]
        );
        assert_eq!(lower(&[(3, 4)]).len(), 1);
        assert!(matches!(
            chain_from_sorted(&[p(0, 0), p(0, 1)], Orientation::Lower),
            Err(Error::DuplicateX(_))
        ));
    }

    #[test]
    fn split_examples() {
        let c = lower(&[(0, 0), (2, 2)]);
        let (l, r) = c.split_at_x(&Coord::from_int(1));
        assert_eq!(pts(&l), vec![p(0, 0)]);
        assert_eq!(pts(&r), vec![p(2, 2)]);
        let (l, r) = c.split_at_x(&Coord::from_int(-5));
        assert!(l.is_empty());
        assert_eq!(r.len(), 2);
        assert_eq!(pts(&c), vec![p(0, 0), p(2, 2)]);
        assert_eq!(c.eval_at(&Coord::from_int(1)), Some(Coord::ONE));
    }

    #[test]
    fn tangent_examples() {
        let t = common_tangent_separated(&lower(&[(0, 0)]), &lower(&[(1, 1)])).unwrap();
        assert_eq!((t.t1.p, t.t2.p), (p(0, 0), p(1, 1)));
        let c1 = lower(&[(0, 0), (1, -1), (2, 0)]);
        let c2 = lower(&[(3, 5), (4, 4), (5, 5)]);
        let t = common_tangent_separated(&c1, &c2).unwrap();
        // (4,4) lies above the line through (2,0) and (5,5)
        assert_eq!((t.t1.p, t.t2.p), (p(2, 0), p(5, 5)));
        let j = join_separated(&c1, &c2).unwrap();
        assert_eq!(pts(&j), vec![p(0, 0), p(1, -1), p(2, 0), p(5, 5)]);
        j.check_invariants().unwrap();
        assert_eq!(
            join_separated(&c1, &HullChain::empty(Orientation::Lower)).unwrap(),
            c1
        );
    }

    #[test]
    fn tangent_collinear_tie_break() {
        let c1 = lower(&[(0, 1), (1, 0)]);
        let c2 = lower(&[(2, 0), (3, 1)]);
        let t = common_tangent_separated(&c1, &c2).unwrap();
        assert_eq!((t.t1.p, t.t2.p), (p(1, 0), p(2, 0)));
        let c1 = lower(&[(0, 0), (1, 0)]);
        let c2 = lower(&[(2, 0), (3, 0)]);
        let t = common_tangent_separated(&c1, &c2).unwrap();
        assert_eq!((t.t1.p, t.t2.p), (p(0, 0), p(3, 0)));
        let j = join_separated(&c1, &c2).unwrap();
        assert_eq!(pts(&j), vec![p(0, 0), p(3, 0)]);
    }

    #[test]
    fn envelope_eval_examples() {
        let c = chain_from_sorted(&[p(2, -3)], Orientation::Lower).unwrap();
        assert_eq!(envelope_eval(&c, &Coord::ONE).unwrap(), Coord::from_int(5));
        let c = lower(&[(-1, 0), (1, 0)]);
        assert_eq!(envelope_eval(&c, &Coord::ZERO).unwrap(), Coord::ZERO);
        assert!(envelope_eval(&HullChain::empty(Orientation::Lower), &Coord::ZERO).is_err());
    }

    #[test]
    fn merge_single_vertex_below() {
        // separator y = 0; a above it, b a single vertex below
        let sep = [Line::new(0, 0), Line::new(1, 0)];
        let a = lower(&[(-2, 3), (0, 1), (2, 4)]);
        let b = lower(&[(-1, -1)]);
        check_merge_precondition(&a, &b, &sep).unwrap();
        let m = merge_bounded_crossings(&a, &b, &sep).unwrap();
        assert_eq!(m.crossings, 0);
        assert_eq!(pts(&m.chain), vec![p(-2, 3), p(-1, -1), p(2, 4)]);
    }

    #[test]
    fn merge_two_crossings() {
        // separator envelope max(-x, x) has its vertex at the origin; the
        // edge of b over x = 0 pokes above a twice
        let sep = [Line::new(-1, 0), Line::new(1, 0)];
        let a = lower(&[(-6, 7), (0, 1), (6, 7)]);
        let b = lower(&[(-3, 2), (3, 2)]);
        check_merge_precondition(&a, &b, &sep).unwrap();
        let m = merge_bounded_crossings(&a, &b, &sep).unwrap();
        assert_eq!(m.crossings, 2);
        assert_eq!(
            pts(&m.chain),
            vec![p(-6, 7), p(-3, 2), p(0, 1), p(3, 2), p(6, 7)]
        );
    }

    #[test]
    fn inner_tangent_singletons() {
        let lo = lower(&[(1, 1)]);
        let up = chain_from_sorted(&[p(1, -1)], Orientation::Upper).unwrap();
        let f = inner_common_tangents(&up, &lo, &Line::new(0, 0));
        let r = f.right.unwrap();
        assert_eq!((r.t1.p, r.t2.p), (p(1, 1), p(1, -1)));
        assert_eq!(f.left.unwrap().t1.p, p(1, 1));
        assert_eq!(f.left_vertex, None);
        assert_eq!(f.right_vertex, None);
    }

    #[test]
    fn inner_tangent_triangle() {
        // lines y=x (0), y=-x (1), y=3 (2); p = (0,1)
        let lines = [Line::new(1, 0), Line::new(-1, 0), Line::new(0, 3)];
        let q = p(0, 1);
        let mut below = Vec::new();
        let mut above = Vec::new();
        for (i, l) in lines.iter().enumerate() {
            let v = Vertex::new(crate::geom::dualize_line(l), i as u32);
            if crate::geom::side_sign(&q, l) > 0 {
                below.push(v);
            } else {
                above.push(v);
            }
        }
        below.sort_by(|a, b| a.p.cmp(&b.p));
        let lo = HullChain::from_sorted(below, Orientation::Lower).unwrap();
        let up = HullChain::from_sorted(above, Orientation::Upper).unwrap();
        let f = inner_common_tangents(&up, &lo, &crate::geom::dualize_point(&q));
        assert_eq!(f.lower_range, Some((0, 1)));
        assert_eq!(f.upper_range, Some((0, 0)));
        assert_eq!(f.right_vertex, Some(p(3, 3)));
        assert_eq!(f.left_vertex, Some(p(-3, 3)));
    }

    #[test]
    fn inner_tangent_one_side_empty() {
        let lo = lower(&[(-1, 0), (1, 0)]);
        let up = HullChain::empty(Orientation::Upper);
        let f = inner_common_tangents(&up, &lo, &Line::new(0, -5));
        assert_eq!(f.lower_range, Some((0, 1)));
        assert_eq!(f.upper_range, None);
        assert!(f.left.is_none() && f.right.is_none());
    }

    #[test]
    fn persistence_after_split_and_join() {
        let c = lower(&[(0, 4), (1, 1), (2, 0), (3, 1), (4, 4)]);
        let before = c.vertices();
        let (l, r) = c.split_at_x(&Coord::from_int(2));
        let _ = join_separated(&r, &lower(&[(10, -50)]));
        let _ = l.split_at_rank(1);
        assert_eq!(c.vertices(), before);
        c.check_invariants().unwrap();
    }
}
