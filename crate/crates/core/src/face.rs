//! Arrangement faces, canonical keys and deduplicated face sets.

use std::collections::BTreeMap;
use std::fmt;

use crate::geom::{dualize_point, line_intersection, side_sign, Line, Point, Side};
use crate::hull::{inner_common_tangents, HullChain, Vertex};

/// A convex face of the arrangement.
///
/// `edges` lists the bounding lines in counterclockwise order together with
/// the side of each line the face lies on. `vertices[i]` is the corner where
/// `edges[i]` ends and `edges[i + 1]` begins, or `None` when the boundary
/// runs off to infinity between them. The cycle is rotated so that it starts
/// at its smallest token, which makes the representation canonical. An empty
/// boundary is the whole plane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub edges: Vec<(u32, Side)>,
    pub vertices: Vec<Option<Point>>,
}

/// Rotation-minimal cycle of `(line, face is above the line)` tokens.
///
/// A bare cycle of line indices is not enough: the two opposite wedges of two
/// crossing lines are both bounded by the cycle `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceKey(pub Vec<(u32, bool)>);

impl fmt::Display for FaceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "plane");
        }
        for (i, (l, above)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}{}", if *above { '+' } else { '-' }, l)?;
        }
        Ok(())
    }
}

fn token(e: &(u32, Side)) -> (u32, bool) {
    (e.0, e.1 == Side::Above)
}

impl Face {
    pub fn plane() -> Face {
        Face {
            edges: Vec::new(),
            vertices: Vec::new(),
        }
    }

    /// Builds a face from a counterclockwise cycle, rotating it into
    /// canonical position.
    pub fn from_cycle(edges: Vec<(u32, Side)>, vertices: Vec<Option<Point>>) -> Face {
        assert_eq!(edges.len(), vertices.len());
        let mut f = Face { edges, vertices };
        if let Some(start) = (0..f.edges.len()).min_by_key(|&i| token(&f.edges[i])) {
            f.edges.rotate_left(start);
            f.vertices.rotate_left(start);
        }
        f
    }

    pub fn key(&self) -> FaceKey {
        canonical_face_key(self)
    }

    /// Number of bounding edges.
    pub fn complexity(&self) -> usize {
        self.edges.len()
    }

    pub fn is_bounded(&self) -> bool {
        !self.edges.is_empty() && self.vertices.iter().all(Option::is_some)
    }

    /// Strict containment, judged only by the bounding lines.
    pub fn contains(&self, p: &Point, lines: &[Line]) -> bool {
        self.edges.iter().all(|&(l, side)| {
            let s = side_sign(p, &lines[l as usize]);
            match side {
                Side::Above => s > 0,
                Side::Below => s < 0,
                Side::On => false,
            }
        })
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Face[")?;
        for (i, (e, v)) in self.edges.iter().zip(&self.vertices).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let s = if e.1 == Side::Above { '+' } else { '-' };
            match v {
                Some(v) => write!(f, "{s}{} {:?}", e.0, v)?,
                None => write!(f, "{s}{} ~", e.0)?,
            }
        }
        write!(f, "]")
    }
}

pub fn canonical_face_key(face: &Face) -> FaceKey {
    let mut toks: Vec<(u32, bool)> = face.edges.iter().map(token).collect();
    if let Some(start) = (0..toks.len()).min_by_key(|&i| toks[i]) {
        toks.rotate_left(start);
    }
    FaceKey(toks)
}

/// The face of a point from its two dual hulls: `below` is the lower hull of
/// the duals of the lines below the point, `above` the upper hull of the
/// duals of the lines above it. Vertex ids must be line indices.
pub fn face_from_envelopes(below: &HullChain, above: &HullChain, p: &Point) -> Face {
    let pstar = dualize_point(p);
    let df = inner_common_tangents(above, below, &pstar);
    let mut edges = Vec::new();
    let mut vertices = Vec::new();
    let mut walk = |vs: Vec<Vertex>, side: Side, end: Option<Point>| {
        let n = vs.len();
        for (k, v) in vs.iter().enumerate() {
            edges.push((v.id, side));
            if k + 1 < n {
                let a = dualize_point(&v.p);
                let b = dualize_point(&vs[k + 1].p);
                vertices.push(line_intersection(&a, &b));
            } else {
                vertices.push(end.clone());
            }
        }
    };
    if let Some((i1, i2)) = df.lower_range {
        walk(
            below.slice_rank(i1, i2 + 1).vertices(),
            Side::Above,
            df.right_vertex.clone(),
        );
    }
    if let Some((j2, j1)) = df.upper_range {
        walk(
            above.slice_rank(j2, j1 + 1).vertices(),
            Side::Below,
            df.left_vertex.clone(),
        );
    }
    Face::from_cycle(edges, vertices)
}

/// Deduplicated faces with the input points they contain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaceSet {
    faces: BTreeMap<FaceKey, (Face, Vec<usize>)>,
}

impl FaceSet {
    pub fn new() -> FaceSet {
        FaceSet::default()
    }

    pub fn insert(&mut self, face: Face, witness: usize) {
        let e = self
            .faces
            .entry(face.key())
            .or_insert_with(|| (face, Vec::new()));
        e.1.push(witness);
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Faces in key order, each with its sorted witness list.
    pub fn iter(&self) -> impl Iterator<Item = (&FaceKey, &Face, &[usize])> {
        self.faces.iter().map(|(k, (f, w))| (k, f, w.as_slice()))
    }

    pub fn keys(&self) -> Vec<FaceKey> {
        self.faces.keys().cloned().collect()
    }

    pub fn get(&self, key: &FaceKey) -> Option<(&Face, &[usize])> {
        self.faces.get(key).map(|(f, w)| (f, w.as_slice()))
    }

    /// Witness lists in key order.
    pub fn witness_partition(&self) -> Vec<Vec<usize>> {
        self.faces.values().map(|(_, w)| w.clone()).collect()
    }

    /// Sum of the edge counts of all faces.
    pub fn total_complexity(&self) -> usize {
        self.faces.values().map(|(f, _)| f.complexity()).sum()
    }

    fn finish(&mut self) {
        for (_, w) in self.faces.values_mut() {
            w.sort_unstable();
            w.dedup();
        }
    }
}

/// Collapses per-point faces to one entry per key; witnesses aggregated and
/// sorted.
pub fn dedup_faces(per_point: impl IntoIterator<Item = (usize, Face)>) -> FaceSet {
    let mut fs = FaceSet::new();
    for (w, f) in per_point {
        fs.insert(f, w);
    }
    fs.finish();
    fs
}
