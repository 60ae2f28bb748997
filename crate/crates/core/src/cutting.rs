//! Hierarchical cuttings made of vertical trapezoids.
//!
//! Level 0 is a box that contains every line's y-intercept (so every line
//! crosses it) and any extra points the caller needs located. Each cell at
//! level `i` is refined into children whose conflict lists have at most
//! `n / 2^(i+1)` lines: a random sample of the cell's conflict list is drawn,
//! the sample's vertical decomposition inside the cell is computed, and the
//! sample is enlarged until every piece meets the bound. Sampling the whole
//! conflict list always succeeds, so the loop terminates.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{line_intersection, side_sign, Line, Point};
use crate::num::Coord;

#[derive(Debug, Clone)]
pub struct Cell {
    pub id: usize,
    pub level: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub xl: Coord,
    pub xr: Coord,
    pub bottom: Line,
    pub top: Line,
    /// Input line ids of the floor and ceiling; `None` for the box.
    pub bottom_id: Option<u32>,
    pub top_id: Option<u32>,
    /// Lines crossing the open interior, in the order of the input id list.
    pub conflicts: Vec<u32>,
    /// Lines of the parent's conflict list lying wholly below / above this
    /// cell, in the same order.
    pub below: Vec<u32>,
    pub above: Vec<u32>,
    cs: [Point; 4],
}

impl Cell {
    /// Corners counterclockwise from bottom-left.
    pub fn corners(&self) -> &[Point; 4] {
        &self.cs
    }

    fn corners_of(xl: &Coord, xr: &Coord, bottom: &Line, top: &Line) -> [Point; 4] {
        [
            Point {
                x: xl.clone(),
                y: bottom.eval(xl),
            },
            Point {
                x: xr.clone(),
                y: bottom.eval(xr),
            },
            Point {
                x: xr.clone(),
                y: top.eval(xr),
            },
            Point {
                x: xl.clone(),
                y: top.eval(xl),
            },
        ]
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.xl
            && p.x <= self.xr
            && side_sign(p, &self.bottom) >= 0
            && side_sign(p, &self.top) <= 0
    }

    /// Open containment.
    pub fn contains_strictly(&self, p: &Point) -> bool {
        p.x > self.xl
            && p.x < self.xr
            && side_sign(p, &self.bottom) > 0
            && side_sign(p, &self.top) < 0
    }

    pub fn classify(&self, l: &Line) -> Relation {
        classify_corners(&self.cs, l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Crosses,
    /// the line is on or below every corner
    Below,
    Above,
}

fn classify_corners(cs: &[Point; 4], l: &Line) -> Relation {
    let mut lo = 1;
    let mut hi = -1;
    for c in cs {
        let s = side_sign(c, l);
        lo = lo.min(s);
        hi = hi.max(s);
    }
    if lo >= 0 {
        Relation::Below
    } else if hi <= 0 {
        Relation::Above
    } else {
        Relation::Crosses
    }
}

#[derive(Debug, Clone)]
pub struct CuttingParams {
    pub seed: u64,
    /// Sample size is `c0 * |conflicts| / bound`.
    pub c0: f64,
}

impl Default for CuttingParams {
    fn default() -> Self {
        CuttingParams {
            seed: 0x5eed,
            c0: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CuttingStats {
    pub attempts: usize,
    /// decompositions of pieces that were still over the bound
    pub resamples: usize,
    pub max_fanout: usize,
}

#[derive(Debug, Clone)]
pub struct HierarchicalCutting {
    pub cells: Vec<Cell>,
    /// Cell ids per level; `levels[0] == [0]`.
    pub levels: Vec<Vec<usize>>,
    pub r: usize,
    pub n: usize,
    pub rho: usize,
    pub stats: CuttingStats,
}

/// `ceil(log2 r)`
pub fn level_count(r: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < r {
        k += 1;
    }
    k
}

pub fn build_hierarchical(lines: &[Line], r: usize) -> Result<HierarchicalCutting> {
    let ids: Vec<u32> = (0..lines.len() as u32).collect();
    HierarchicalCutting::build(lines, &ids, r, &[], &CuttingParams::default())
}

impl HierarchicalCutting {
    /// Cutting of the lines `ids` (indices into `lines`); the root box also
    /// encloses `extra`.
    pub fn build(
        lines: &[Line],
        ids: &[u32],
        r: usize,
        extra: &[Point],
        params: &CuttingParams,
    ) -> Result<HierarchicalCutting> {
        let n = ids.len();
        if r == 0 || (n > 0 && r > n) {
            return Err(Error::PreconditionViolated(format!(
                "cutting parameter r={r} outside [1, {n}]"
            )));
        }
        // coincident lines can never be separated, refinement would not end
        let mut sorted: Vec<&Line> = ids.iter().map(|&i| &lines[i as usize]).collect();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::PreconditionViolated(
                "duplicate line in cutting".into(),
            ));
        }
        let mut extent = Coord::ONE;
        for &i in ids {
            let b = lines[i as usize].b.abs();
            if b > extent {
                extent = b;
            }
        }
        for p in extra {
            for c in [p.x.abs(), p.y.abs()] {
                if c > extent {
                    extent = c;
                }
            }
        }
        let big = Coord::from_bigint(extent.ceil()) + Coord::ONE;
        let bottom = Line {
            a: Coord::ZERO,
            b: -&big,
        };
        let top = Line {
            a: Coord::ZERO,
            b: big.clone(),
        };
        let root = Cell {
            id: 0,
            level: 0,
            parent: None,
            children: Vec::new(),
            cs: Cell::corners_of(&-&big, &big, &bottom, &top),
            xl: -&big,
            xr: big,
            bottom,
            top,
            bottom_id: None,
            top_id: None,
            conflicts: ids.to_vec(),
            below: Vec::new(),
            above: Vec::new(),
        };
        let mut hc = HierarchicalCutting {
            cells: vec![root],
            levels: vec![vec![0]],
            r,
            n,
            rho: 2,
            stats: CuttingStats::default(),
        };
        let k = if n == 0 { 0 } else { level_count(r) };
        for i in 1..=k {
            let bound = n >> i;
            let parents = hc.levels[i - 1].clone();
            let mut level = Vec::new();
            for pid in parents {
                let kids = hc.refine(lines, pid, bound, params)?;
                hc.stats.max_fanout = hc.stats.max_fanout.max(kids.len());
                level.extend(kids);
            }
            hc.levels.push(level);
        }
        Ok(hc)
    }

    fn refine(
        &mut self,
        lines: &[Line],
        pid: usize,
        bound: usize,
        params: &CuttingParams,
    ) -> Result<Vec<usize>> {
        let parent = &self.cells[pid];
        let mut rng = ChaCha8Rng::seed_from_u64(
            params.seed ^ (pid as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
        );
        // pieces still over the bound are decomposed again with a fresh
        // sample of their own conflict list
        let mut done: Vec<Region> = Vec::new();
        let mut todo = vec![(Region::of_cell(parent), parent.conflicts.clone(), true)];
        while let Some((reg, conf, first)) = todo.pop() {
            let c = conf.len();
            if c <= bound {
                done.push(reg);
                continue;
            }
            self.stats.attempts += 1;
            if !first {
                self.stats.resamples += 1;
            }
            let s = ((params.c0 * c as f64) / bound.max(1) as f64).ceil() as usize;
            let sample: Vec<u32> = if s >= c {
                conf.clone()
            } else {
                conf.choose_multiple(&mut rng, s.max(1)).copied().collect()
            };
            for sub in decompose(lines, &reg, &sample).into_iter().rev() {
                let cs = sub.corners();
                let sc: Vec<u32> = conf
                    .iter()
                    .copied()
                    .filter(|&l| classify_corners(&cs, &lines[l as usize]) == Relation::Crosses)
                    .collect();
                todo.push((sub, sc, false));
            }
        }
        let level = parent.level + 1;
        let mut out = Vec::with_capacity(done.len());
        for reg in done {
            let parent = &self.cells[pid];
            let mut cell = Cell {
                id: self.cells.len(),
                cs: reg.corners(),
                level,
                parent: Some(pid),
                children: Vec::new(),
                xl: reg.xl,
                xr: reg.xr,
                bottom: reg.bottom,
                top: reg.top,
                bottom_id: reg.bottom_id,
                top_id: reg.top_id,
                conflicts: Vec::new(),
                below: Vec::new(),
                above: Vec::new(),
            };
            for &l in &parent.conflicts {
                match classify_corners(&cell.cs, &lines[l as usize]) {
                    Relation::Crosses => cell.conflicts.push(l),
                    Relation::Below => cell.below.push(l),
                    Relation::Above => cell.above.push(l),
                }
            }
            out.push(cell.id);
            self.cells.push(cell);
        }
        self.cells[pid].children = out.clone();
        Ok(out)
    }

    pub fn leaves(&self) -> &[usize] {
        self.levels.last().unwrap()
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn total_conflicts(&self) -> usize {
        self.cells.iter().map(|c| c.conflicts.len()).sum()
    }

    /// Containing cell per level, root first. Ties on shared boundaries go
    /// to the child with the smallest id.
    pub fn locate_cell_path(&self, p: &Point) -> Vec<usize> {
        let mut path = vec![0];
        let mut cur = 0;
        while !self.cells[cur].children.is_empty() {
            let next = self.cells[cur]
                .children
                .iter()
                .copied()
                .find(|&c| self.cells[c].contains(p))
                .expect("children cover their parent");
            path.push(next);
            cur = next;
        }
        path
    }

    pub fn locate_leaf(&self, p: &Point) -> usize {
        *self.locate_cell_path(p).last().unwrap()
    }

    /// Like `locate_cell_path`, but a point on a vertical wall goes to the
    /// cell on its right, as if nudged by an infinitesimal `+x`. Every point
    /// strictly inside the root and off all cutting lines then has exactly
    /// one cell per level, and all points translate together, so the hulls
    /// of different cells' point sets stay disjoint.
    pub fn locate_cell_path_right(&self, p: &Point) -> Vec<usize> {
        let mut path = vec![0];
        let mut cur = 0;
        while !self.cells[cur].children.is_empty() {
            let next = self.cells[cur]
                .children
                .iter()
                .copied()
                .find(|&c| {
                    let c = &self.cells[c];
                    c.contains(p) && p.x < c.xr
                })
                .expect("children cover their parent");
            path.push(next);
            cur = next;
        }
        path
    }

    /// One cell per line: `level id parent` followed by the four half-plane
    /// constraints `a b c` (meaning `a*x + b*y <= c`) and the conflict count.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            let parent = c.parent.map_or_else(|| "-".to_string(), |p| p.to_string());
            let _ = write!(out, "{} {} {}", c.level, c.id, parent);
            let cons = [
                (-Coord::ONE, Coord::ZERO, -&c.xl),
                (Coord::ONE, Coord::ZERO, c.xr.clone()),
                (c.bottom.a.clone(), -Coord::ONE, -&c.bottom.b),
                (-&c.top.a, Coord::ONE, c.top.b.clone()),
            ];
            for (a, b, k) in cons {
                let _ = write!(out, " {a} {b} {k}");
            }
            let _ = writeln!(out, " {}", c.conflicts.len());
        }
        out
    }
}

/// A trapezoid under construction.
#[derive(Debug, Clone)]
struct Region {
    xl: Coord,
    xr: Coord,
    bottom: Line,
    top: Line,
    bottom_id: Option<u32>,
    top_id: Option<u32>,
}

impl Region {
    fn of_cell(c: &Cell) -> Region {
        Region {
            xl: c.xl.clone(),
            xr: c.xr.clone(),
            bottom: c.bottom.clone(),
            top: c.top.clone(),
            bottom_id: c.bottom_id,
            top_id: c.top_id,
        }
    }

    fn corners(&self) -> [Point; 4] {
        Cell::corners_of(&self.xl, &self.xr, &self.bottom, &self.top)
    }
}

/// Vertical decomposition of the sample inside `reg`.
fn decompose(lines: &[Line], reg: &Region, sample: &[u32]) -> Vec<Region> {
    // bounding lines: 0 is the floor, 1 the ceiling, then the sample
    let mut bounds: Vec<(Line, Option<u32>)> = vec![
        (reg.bottom.clone(), reg.bottom_id),
        (reg.top.clone(), reg.top_id),
    ];
    bounds.extend(sample.iter().map(|&l| (lines[l as usize].clone(), Some(l))));
    let mut xs = vec![reg.xl.clone(), reg.xr.clone()];
    for i in 0..bounds.len() {
        for j in i + 1..bounds.len() {
            if let Some(p) = line_intersection(&bounds[i].0, &bounds[j].0) {
                if p.x > reg.xl
                    && p.x < reg.xr
                    && side_sign(&p, &reg.bottom) >= 0
                    && side_sign(&p, &reg.top) <= 0
                {
                    xs.push(p.x);
                }
            }
        }
    }
    xs.sort();
    xs.dedup();
    let two = Coord::from_int(2);
    let mut out = Vec::new();
    let mut emit = |b: usize, t: usize, xl: Coord, xr: Coord| {
        out.push(Region {
            xl,
            xr,
            bottom: bounds[b].0.clone(),
            top: bounds[t].0.clone(),
            bottom_id: bounds[b].1,
            top_id: bounds[t].1,
        });
    };
    // pieces still open at the current slab: (floor, ceiling, left x)
    let mut open: Vec<(usize, usize, Coord)> = Vec::new();
    for w in xs.windows(2) {
        let xm = &(&w[0] + &w[1]) / &two;
        let lo = reg.bottom.eval(&xm);
        let hi = reg.top.eval(&xm);
        let mut inside: Vec<(Coord, usize)> = (2..bounds.len())
            .map(|k| (bounds[k].0.eval(&xm), k))
            .filter(|(y, _)| *y > lo && *y < hi)
            .collect();
        inside.sort_by(|a, b| a.0.cmp(&b.0));
        let mut seq = vec![0];
        seq.extend(inside.into_iter().map(|(_, k)| k));
        seq.push(1);
        let mut next_open = Vec::with_capacity(seq.len() - 1);
        for pair in seq.windows(2) {
            let (b, t) = (pair[0], pair[1]);
            let xl = match open.iter().position(|o| o.0 == b && o.1 == t) {
                Some(k) => open.swap_remove(k).2,
                None => w[0].clone(),
            };
            next_open.push((b, t, xl));
        }
        for (b, t, xl) in open.drain(..) {
            emit(b, t, xl, w[0].clone());
        }
        open = next_open;
    }
    let xr = xs.last().unwrap().clone();
    for (b, t, xl) in open {
        emit(b, t, xl, xr.clone());
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct CuttingReport {
    pub ok: bool,
    pub failures: Vec<String>,
    pub cells_per_level: Vec<usize>,
    pub total_cells: usize,
    pub total_conflicts: usize,
    pub max_leaf_conflict: usize,
    /// leaves / r^2
    pub size_constant: f64,
    /// total conflicts over all levels / (n r)
    pub conflict_constant: f64,
}

/// Recomputes conflict lists by brute force and checks refinement, coverage
/// on random probes and the per-level conflict bounds.
pub fn verify_cutting(hc: &HierarchicalCutting, lines: &[Line], ids: &[u32]) -> CuttingReport {
    let mut rep = CuttingReport {
        ok: true,
        cells_per_level: hc.levels.iter().map(Vec::len).collect(),
        total_cells: hc.cells.len(),
        total_conflicts: hc.total_conflicts(),
        ..Default::default()
    };
    let n = hc.n;
    for c in &hc.cells {
        let cs = c.corners();
        let expect: Vec<u32> = match c.parent {
            None => ids.to_vec(),
            Some(p) => hc.cells[p]
                .conflicts
                .iter()
                .copied()
                .filter(|&l| classify_corners(cs, &lines[l as usize]) == Relation::Crosses)
                .collect(),
        };
        let direct: Vec<u32> = ids
            .iter()
            .copied()
            .filter(|&l| classify_corners(cs, &lines[l as usize]) == Relation::Crosses)
            .collect();
        if c.conflicts != expect || c.conflicts != direct {
            rep.failures.push(format!(
                "cell {}: conflict list differs from brute force",
                c.id
            ));
        }
        if c.level > 0 && c.conflicts.len() > n >> c.level {
            rep.failures.push(format!(
                "cell {}: {} conflicts exceed bound {}",
                c.id,
                c.conflicts.len(),
                n >> c.level
            ));
        }
        if let Some(p) = c.parent {
            let par = &hc.cells[p];
            let inside = c.xl >= par.xl && c.xr <= par.xr && cs.iter().all(|q| par.contains(q));
            if !inside {
                rep.failures
                    .push(format!("cell {}: not inside parent {}", c.id, p));
            }
        }
        if c.xl >= c.xr {
            rep.failures.push(format!("cell {}: empty x-range", c.id));
        }
    }
    for &leaf in hc.leaves() {
        rep.max_leaf_conflict = rep.max_leaf_conflict.max(hc.cells[leaf].conflicts.len());
    }
    // coverage probes inside the root box
    let root = &hc.cells[0];
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let span = &root.xr - &root.xl;
    for _ in 0..200 {
        use rand::Rng;
        let fx = Coord::new(rng.gen_range(1..1_000_000), 1_000_000);
        let fy = Coord::new(rng.gen_range(1..1_000_000), 1_000_000);
        let p = Point {
            x: &root.xl + &(&fx * &span),
            y: &root.xl + &(&fy * &span),
        };
        for (lvl, cells) in hc.levels.iter().enumerate() {
            let closed = cells.iter().filter(|&&c| hc.cells[c].contains(&p)).count();
            let open = cells
                .iter()
                .filter(|&&c| hc.cells[c].contains_strictly(&p))
                .count();
            if closed == 0 || open > 1 {
                rep.failures
                    .push(format!("probe {:?}: bad coverage at level {lvl}", p));
            }
        }
    }
    let r = hc.r.max(1) as f64;
    rep.size_constant = hc.leaves().len() as f64 / (r * r);
    rep.conflict_constant = rep.total_conflicts as f64 / (n.max(1) as f64 * r);
    rep.ok = rep.failures.is_empty();
    rep
}
