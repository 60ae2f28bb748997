//! The dual step: cut the dual lines of the points, bucket the dual points
//! of the lines into cells, and assemble each point's two chains from whole
//! cell hulls plus recursively solved leaf groups.
//!
//! For a point `p` with dual line `p*`, every cell not crossed by `p*` whose
//! parent is crossed lies entirely on one side of `p*`; its hull contributes
//! directly. Crossed leaves are split into groups of consecutive dual points
//! and handled by the recursion. The contributing hulls are pairwise
//! disjoint, so the hull of their union is found from the envelope of their
//! chords.

use std::ops::Range;

use crate::cutting::{CuttingParams, HierarchicalCutting, Relation};
use crate::error::Result;
use crate::face::FaceSet;
use crate::geom::{dualize_point, Instance, Line, Point};
use crate::hull::{HullChain, Orientation, Vertex};
use crate::primal::Recurse;
use crate::segments::merge_disjoint_hulls_with;
use crate::solver::{self, Backend, Ctx, PointEnvelopes, SolverConfig};

#[derive(Debug, Clone)]
pub struct CellHull {
    pub lower: HullChain,
    pub upper: HullChain,
}

/// Cutting of the points' dual lines with the lines' dual points bucketed.
#[derive(Debug, Clone)]
pub struct DualStructure {
    pub hc: HierarchicalCutting,
    /// Dual line of each point, indexed like the point list.
    pub pstar: Vec<Line>,
    /// Line ids whose dual points fall in each cell, sorted by dual point.
    pub cell_lines: Vec<Vec<u32>>,
    pub hulls: Vec<CellHull>,
    /// `(leaf, range into cell_lines[leaf])`, in leaf order.
    pub groups: Vec<(usize, Range<usize>)>,
    /// Group indices of each cell (empty for inner cells).
    pub leaf_groups: Vec<Range<usize>>,
}

/// Hulls gathered for one point.
#[derive(Debug, Clone, Default)]
pub struct HullSet {
    /// Lower chains of whole cells above the dual line.
    pub plus: Vec<HullChain>,
    /// Upper chains of whole cells below it.
    pub minus: Vec<HullChain>,
    /// Groups of crossed leaves, still to be solved.
    pub groups: Vec<usize>,
}

/// Consecutive runs of at most `g` ids, except that ids with the same dual
/// x are never split (so group hulls are x-separated).
fn split_groups(ids: &[u32], duals: &[Point], g: usize) -> Vec<Range<usize>> {
    let g = g.max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while start < ids.len() {
        let mut end = (start + g).min(ids.len());
        while end < ids.len() && duals[ids[end] as usize].x == duals[ids[end - 1] as usize].x {
            end += 1;
        }
        out.push(start..end);
        start = end;
    }
    out
}

pub(crate) fn preprocess(ctx: &Ctx, pts: &[Point], ids: &[u32], r: usize) -> Result<DualStructure> {
    let pstar: Vec<Line> = pts.iter().map(dualize_point).collect();
    let pids: Vec<u32> = (0..pts.len() as u32).collect();
    let extra: Vec<Point> = ids.iter().map(|&i| ctx.duals[i as usize].clone()).collect();
    let params = CuttingParams {
        seed: ctx.cfg.seed ^ 0xd0a1 ^ (ids.len() as u64) << 32 ^ pts.len() as u64,
        c0: ctx.cfg.c0,
    };
    let hc = HierarchicalCutting::build(&pstar, &pids, r, &extra, &params)?;
    ctx.counters.cells(hc.cells.len());

    let paths = ctx.par_map(&extra, |q| hc.locate_cell_path_right(q));
    let mut cell_lines: Vec<Vec<u32>> = vec![Vec::new(); hc.cells.len()];
    for (&id, path) in ids.iter().zip(&paths) {
        for &c in path {
            cell_lines[c].push(id);
        }
    }
    let cells: Vec<usize> = (0..hc.cells.len()).collect();
    let hulls = ctx.par_map(&cells, |&c| {
        let vs: Vec<Vertex> = cell_lines[c].iter().map(|&i| ctx.vertex(i)).collect();
        CellHull {
            lower: HullChain::from_sorted_dedup(vs.clone(), Orientation::Lower),
            upper: HullChain::from_sorted_dedup(vs, Orientation::Upper),
        }
    });
    let g = ids.len().div_ceil(r * r);
    let mut groups = Vec::new();
    let mut leaf_groups = vec![0..0; hc.cells.len()];
    for &leaf in hc.leaves() {
        let start = groups.len();
        for rg in split_groups(&cell_lines[leaf], &ctx.duals, g) {
            groups.push((leaf, rg));
        }
        leaf_groups[leaf] = start..groups.len();
    }
    Ok(DualStructure {
        hc,
        pstar,
        cell_lines,
        hulls,
        groups,
        leaf_groups,
    })
}

/// Builds the structure for a whole instance with parameter `r`.
pub fn dual_preprocess(inst: &Instance, r: usize) -> Result<DualStructure> {
    let cfg = SolverConfig {
        parallel: false,
        ..SolverConfig::default()
    };
    let ctx = Ctx::new(&inst.lines, &cfg);
    let ids = ctx.sorted_ids();
    preprocess(&ctx, &inst.points, &ids, r)
}

/// Whole-cell hulls on either side of the dual line of point `j`, plus the
/// groups of the leaves it crosses.
pub fn gather_hull_set(ds: &DualStructure, j: usize) -> HullSet {
    let l = &ds.pstar[j];
    let mut hs = HullSet::default();
    let mut stack = vec![0usize];
    while let Some(c) = stack.pop() {
        let cell = &ds.hc.cells[c];
        if cell.children.is_empty() {
            hs.groups.extend(ds.leaf_groups[c].clone());
            continue;
        }
        for &k in cell.children.iter().rev() {
            if ds.cell_lines[k].is_empty() {
                continue;
            }
            match ds.hc.cells[k].classify(l) {
                Relation::Crosses => stack.push(k),
                Relation::Below => hs.plus.push(ds.hulls[k].lower.clone()),
                Relation::Above => hs.minus.push(ds.hulls[k].upper.clone()),
            }
        }
    }
    hs
}

/// Directional extremes are only needed when hulls are viewed in the frame
/// of a rotated line. Lines are never rotated here, so the extremes of every
/// chain are its first and last vertex.
pub fn rotational_extremes(c: &HullChain) -> Option<(&Vertex, &Vertex)> {
    Some((c.first()?, c.last()?))
}

pub(crate) fn dual_step(
    ctx: &Ctx,
    pts: &[Point],
    ids: &[u32],
    r: usize,
    recurse: &Recurse,
) -> Result<Vec<PointEnvelopes>> {
    let ds = preprocess(ctx, pts, ids, r)?;
    let solved = ctx.try_par_map(&ds.groups, |(leaf, rg)| {
        let conf = &ds.hc.cells[*leaf].conflicts;
        let sub_pts: Vec<Point> = conf.iter().map(|&j| pts[j as usize].clone()).collect();
        recurse(&sub_pts, &ds.cell_lines[*leaf][rg.clone()])
    })?;
    let idx: Vec<usize> = (0..pts.len()).collect();
    ctx.try_par_map(&idx, |&j| {
        let mut hs = gather_hull_set(&ds, j);
        for &g in &hs.groups {
            let conf = &ds.hc.cells[ds.groups[g].0].conflicts;
            let pos = conf
                .binary_search(&(j as u32))
                .expect("a crossed leaf lists the line");
            hs.plus.push(solved[g][pos].below.clone());
            hs.minus.push(solved[g][pos].above.clone());
        }
        let check = ctx.cfg.check_invariants;
        let f = ctx.cfg.direct_hull_factor;
        let (below, kp) = merge_disjoint_hulls_with(&hs.plus, Orientation::Lower, check, f)?;
        let (above, km) = merge_disjoint_hulls_with(&hs.minus, Orientation::Upper, check, f)?;
        let v: usize = hs.plus.iter().chain(&hs.minus).map(|h| h.len()).sum();
        ctx.counters.hull_vertices(v);
        let k = |v: &[HullChain]| v.iter().filter(|h| !h.is_empty()).count();
        ctx.counters.hull_set(k(&hs.plus), kp);
        ctx.counters.hull_set(k(&hs.minus), km);
        if ctx.cfg.check_invariants {
            below.check_invariants()?;
            above.check_invariants()?;
        }
        Ok(PointEnvelopes { below, above })
    })
}

/// Faces via the dual recursion.
pub fn dual_solve(inst: &Instance, cfg: &SolverConfig) -> Result<FaceSet> {
    let cfg = SolverConfig {
        backend: Backend::Dual,
        ..cfg.clone()
    };
    solver::solve_instance(inst, &cfg)
}
