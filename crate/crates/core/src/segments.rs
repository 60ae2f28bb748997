//! Lower envelope of pairwise disjoint segments and hull assembly from it.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geom::{orient, Point};
use crate::hull::{join_separated, HullChain, Orientation, Vertex};
use crate::num::Coord;

/// Closed segment with `a.x <= b.x`; `a == b` is a single point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(p: Point, q: Point) -> Segment {
        if q < p {
            Segment { a: q, b: p }
        } else {
            Segment { a: p, b: q }
        }
    }

    /// y at `x`, for `a.x <= x <= b.x`.
    pub fn y_at(&self, x: &Coord) -> Coord {
        if self.a.x == self.b.x {
            return self.a.y.clone();
        }
        let t = &(x - &self.a.x) / &(&self.b.x - &self.a.x);
        &self.a.y + &(&t * &(&self.b.y - &self.a.y))
    }

    pub fn covers(&self, x: &Coord) -> bool {
        self.a.x <= *x && *x <= self.b.x
    }
}

fn on_segment(p: &Point, q: &Point, r: &Point) -> bool {
    // r collinear with p,q: inside their bounding box?
    let (lx, hx) = if p.x <= q.x {
        (&p.x, &q.x)
    } else {
        (&q.x, &p.x)
    };
    let (ly, hy) = if p.y <= q.y {
        (&p.y, &q.y)
    } else {
        (&q.y, &p.y)
    };
    *lx <= r.x && r.x <= *hx && *ly <= r.y && r.y <= *hy
}

/// Closed segments share a point.
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    let d1 = orient(&s.a, &s.b, &t.a);
    let d2 = orient(&s.a, &s.b, &t.b);
    let d3 = orient(&t.a, &t.b, &s.a);
    let d4 = orient(&t.a, &t.b, &s.b);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(&s.a, &s.b, &t.a))
        || (d2 == 0 && on_segment(&s.a, &s.b, &t.b))
        || (d3 == 0 && on_segment(&t.a, &t.b, &s.a))
        || (d4 == 0 && on_segment(&t.a, &t.b, &s.b))
}

/// Maximal x-interval on which one segment is the lowest (for `Lower`) or
/// highest (for `Upper`). Intervals are closed; neighbors share endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopePiece {
    pub seg: usize,
    pub from: Coord,
    pub to: Coord,
}

/// Heights of two segments at the larger of their left ends, by one
/// orientation test.
fn height_cmp(s: &Segment, t: &Segment) -> Ordering {
    // the segment starting later is `u`; compare its left end with `w`
    let (u, w, flip) = if s.a.x >= t.a.x {
        (s, t, false)
    } else {
        (t, s, true)
    };
    let o = if w.a.x == w.b.x {
        u.a.y.cmp(&w.a.y)
    } else {
        orient(&w.a, &w.b, &u.a).cmp(&0)
    };
    if flip {
        o.reverse()
    } else {
        o
    }
}

/// Status-structure entry: segments are ordered by height at the larger of
/// their left ends, which is consistent for disjoint segments.
struct Key<'a> {
    seg: &'a Segment,
    id: usize,
    s: i32,
}

impl Ord for Key<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.id == other.id {
            return Ordering::Equal;
        }
        let o = height_cmp(self.seg, other.seg);
        let o = if self.s < 0 { o.reverse() } else { o };
        o.then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for Key<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Key<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Key<'_> {}

pub fn disjoint_segment_lower_envelope(segs: &[Segment]) -> Result<Vec<EnvelopePiece>> {
    segment_envelope(segs, Orientation::Lower)
}

pub fn segment_envelope(segs: &[Segment], orient: Orientation) -> Result<Vec<EnvelopePiece>> {
    sweep(segs, orient, true)
}

/// Sweep from left to right keeping the segments that meet the sweep line
/// ordered by height. Newly adjacent pairs are tested for contact, so any
/// violation of disjointness is reported when `check` is set.
fn sweep(segs: &[Segment], orient: Orientation, check: bool) -> Result<Vec<EnvelopePiece>> {
    let s = orient.sign();
    let mut xs: Vec<&Coord> = segs.iter().flat_map(|g| [&g.a.x, &g.b.x]).collect();
    xs.sort();
    xs.dedup();
    let mut starts: Vec<usize> = (0..segs.len()).collect();
    starts.sort_by(|&i, &j| segs[i].a.x.cmp(&segs[j].a.x));
    let mut ends: Vec<usize> = (0..segs.len()).collect();
    ends.sort_by(|&i, &j| segs[i].b.x.cmp(&segs[j].b.x));
    let (mut si, mut ei) = (0, 0);

    let key = |i: usize| Key {
        seg: &segs[i],
        id: i,
        s,
    };
    let check = |a: Option<&Key>, b: Option<&Key>| -> Result<()> {
        if !check {
            return Ok(());
        }
        if let (Some(a), Some(b)) = (a, b) {
            if segments_intersect(a.seg, b.seg) {
                return Err(Error::SegmentsCross(a.id.min(b.id), a.id.max(b.id)));
            }
        }
        Ok(())
    };
    let mut status: BTreeSet<Key> = BTreeSet::new();
    let mut raw: Vec<(usize, &Coord, &Coord)> = Vec::new();
    for (k, x) in xs.iter().enumerate() {
        while si < starts.len() && segs[starts[si]].a.x == **x {
            let i = starts[si];
            si += 1;
            let kk = key(i);
            check(status.range(..&kk).next_back(), Some(&kk))?;
            check(Some(&kk), status.range(&kk..).next())?;
            status.insert(kk);
        }
        if let Some(low) = status.first() {
            raw.push((low.id, x, x));
        }
        while ei < ends.len() && segs[ends[ei]].b.x == **x {
            let i = ends[ei];
            ei += 1;
            let kk = key(i);
            status.remove(&kk);
            check(status.range(..&kk).next_back(), status.range(&kk..).next())?;
        }
        if let (Some(low), Some(nx)) = (status.first(), xs.get(k + 1)) {
            raw.push((low.id, x, nx));
        }
    }
    let mut out: Vec<EnvelopePiece> = Vec::new();
    for (seg, from, to) in raw {
        match out.last_mut() {
            Some(last) if last.seg == seg && last.to == *from => last.to = to.clone(),
            _ => out.push(EnvelopePiece {
                seg,
                from: from.clone(),
                to: to.clone(),
            }),
        }
    }
    Ok(out)
}

/// The chord from the first to the last vertex of a chain.
pub fn representative_segment(c: &HullChain) -> Option<Segment> {
    Some(Segment::new(c.first()?.p.clone(), c.last()?.p.clone()))
}

/// Appends `piece` to `acc`; the two may share one abscissa, in which case the
/// vertex farther from the hull side is dropped.
pub fn join_touching(acc: &HullChain, piece: &HullChain) -> Result<HullChain> {
    if acc.is_empty() {
        return Ok(piece.clone());
    }
    if piece.is_empty() {
        return Ok(acc.clone());
    }
    let (l, f) = (acc.last().unwrap(), piece.first().unwrap());
    if l.p.x == f.p.x {
        let s = acc.orientation().sign();
        if (l.p.y.cmp(&f.p.y) as i32) * s <= 0 {
            return join_separated(acc, &piece.split_at_rank(1).1);
        }
        return join_separated(&acc.split_at_rank(acc.len() - 1).0, piece);
    }
    join_separated(acc, piece)
}

/// Hull of the union of pairwise disjoint chains: each chain is clipped to
/// the envelope pieces it owns and the clipped parts are joined left to
/// right.
pub fn assemble_hull(
    hulls: &[HullChain],
    pieces: &[EnvelopePiece],
    orient: Orientation,
) -> Result<HullChain> {
    let mut acc = HullChain::empty(orient);
    for pc in pieces {
        let part = hulls[pc.seg]
            .split_before_x(&pc.from)
            .1
            .split_at_x(&pc.to)
            .0;
        acc = join_touching(&acc, &part)?;
    }
    Ok(acc)
}

/// Envelope plus assembly; returns the hull and the piece count.
pub fn merge_disjoint_hulls(
    hulls: &[HullChain],
    orient: Orientation,
) -> Result<(HullChain, usize)> {
    let (h, k) = merge_disjoint_hulls_with(hulls, orient, true, 0)?;
    Ok((h, k.expect("envelope path")))
}

/// Like `merge_disjoint_hulls`, but when the chains hold at most
/// `direct_factor` vertices per chain on average the hull is recomputed from
/// all vertices with one monotone-chain pass (`O(K log K)` in that regime);
/// the piece count is then `None`.
pub(crate) fn merge_disjoint_hulls_with(
    hulls: &[HullChain],
    orient: Orientation,
    check: bool,
    direct_factor: usize,
) -> Result<(HullChain, Option<usize>)> {
    let hulls: Vec<&HullChain> = hulls.iter().filter(|h| !h.is_empty()).collect();
    match hulls.len() {
        0 => return Ok((HullChain::empty(orient), Some(0))),
        1 => return Ok((hulls[0].clone(), Some(1))),
        _ => {}
    }
    let v: usize = hulls.iter().map(|h| h.len()).sum();
    if v <= direct_factor * hulls.len() {
        let mut vs: Vec<Vertex> = Vec::with_capacity(v);
        for h in &hulls {
            vs.extend(h.iter().cloned());
        }
        vs.sort_unstable_by(|a, b| a.p.cmp(&b.p));
        return Ok((HullChain::from_sorted_dedup(vs, orient), None));
    }
    let segs: Vec<Segment> = hulls
        .iter()
        .map(|h| representative_segment(h).unwrap())
        .collect();
    let pieces = sweep(&segs, orient, check)?;
    let owned: Vec<HullChain> = hulls.into_iter().cloned().collect();
    Ok((assemble_hull(&owned, &pieces, orient)?, Some(pieces.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(Point::new(a.0, a.1), Point::new(b.0, b.1))
    }

    #[test]
    fn one_segment() {
        let p = disjoint_segment_lower_envelope(&[seg((0, 0), (5, 1))]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(
            (p[0].from.clone(), p[0].to.clone()),
            (Coord::ZERO, Coord::from_int(5))
        );
    }

    #[test]
    fn nested_gives_three_pieces() {
        let p =
            disjoint_segment_lower_envelope(&[seg((0, 5), (10, 5)), seg((3, 1), (6, 2))]).unwrap();
        let owners: Vec<usize> = p.iter().map(|q| q.seg).collect();
        assert_eq!(owners, vec![0, 1, 0]);
    }

    #[test]
    fn crossing_is_reported() {
        let r = disjoint_segment_lower_envelope(&[seg((0, 0), (4, 4)), seg((0, 4), (4, 0))]);
        assert!(matches!(r, Err(Error::SegmentsCross(0, 1))));
    }

    #[test]
    fn point_segments() {
        let p =
            disjoint_segment_lower_envelope(&[seg((0, 5), (10, 5)), seg((4, 0), (4, 0))]).unwrap();
        let owners: Vec<usize> = p.iter().map(|q| q.seg).collect();
        assert_eq!(owners, vec![0, 1, 0]);
    }

    #[test]
    fn assemble_two_singletons() {
        let a = HullChain::singleton(
            crate::hull::Vertex::new(Point::new(0, 3), 0),
            Orientation::Lower,
        );
        let b = HullChain::singleton(
            crate::hull::Vertex::new(Point::new(2, 1), 1),
            Orientation::Lower,
        );
        let (h, k) = merge_disjoint_hulls(&[a.clone(), b], Orientation::Lower).unwrap();
        assert_eq!(k, 2);
        assert_eq!(h.len(), 2);
        let (h, _) = merge_disjoint_hulls(std::slice::from_ref(&a), Orientation::Lower).unwrap();
        assert_eq!(h, a);
    }
}
