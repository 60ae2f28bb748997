//! The primal step: cut the lines, build each cell's chains top-down, and
//! finish every point from its leaf's chains and a recursive subproblem.
//!
//! For a cell `σ` with parent `π`, the lines wholly below `σ` are those wholly
//! below `π` plus the lines of `π`'s conflict list that pass below `σ`. The
//! first set is dual to the parent's chain, which lies on or above the upper
//! envelope of the duals of `π`'s bottom corners; the second set's duals lie
//! strictly below it. That is exactly the bounded-crossing merge setup.

use crate::cutting::{CuttingParams, HierarchicalCutting};
use crate::error::Result;
use crate::face::FaceSet;
use crate::geom::{dualize_line, dualize_point, Instance, Line, Point};
use crate::hull::{
    check_merge_precondition, merge_bounded_crossings, HullChain, Orientation, Vertex,
};
use crate::solver::{self, Backend, Ctx, PointEnvelopes, SolverConfig};

/// Chains of a cell: duals of every line wholly below it (lower hull) and
/// wholly above it (upper hull).
#[derive(Debug, Clone)]
pub struct CellEnvelopes {
    pub below: HullChain,
    pub above: HullChain,
}

/// Separator lines for merges into `cell`'s children: the duals of its two
/// bottom corners (for the below side) or its two top corners.
fn separators(hc: &HierarchicalCutting, cell: usize) -> ([Line; 2], [Line; 2]) {
    let [bl, br, tr, tl] = hc.cells[cell].corners();
    (
        [dualize_point(bl), dualize_point(br)],
        [dualize_point(tl), dualize_point(tr)],
    )
}

/// The lines of each cell's parent conflict list lying wholly below the
/// cell, in the order of the cutting's id list.
pub fn compute_below_sets(hc: &HierarchicalCutting) -> Vec<&[u32]> {
    hc.cells.iter().map(|c| c.below.as_slice()).collect()
}

fn merge_checked(
    a: &HullChain,
    b: &HullChain,
    sep: &[Line],
    check: bool,
    on_merge: &dyn Fn(usize),
) -> Result<HullChain> {
    if check {
        check_merge_precondition(a, b, sep)?;
    }
    let m = merge_bounded_crossings(a, b, sep)?;
    if !a.is_empty() && !b.is_empty() {
        on_merge(m.crossings);
    }
    if check {
        m.chain.check_invariants()?;
    }
    Ok(m.chain)
}

/// Chains of every cell, parents before children. The cutting's id list must
/// be sorted by dual point so the below/above lists come out sorted.
pub fn cell_envelopes_topdown(
    hc: &HierarchicalCutting,
    lines: &[Line],
    check: bool,
) -> Result<Vec<CellEnvelopes>> {
    topdown(
        hc,
        &|id| Vertex::new(dualize_line(&lines[id as usize]), id),
        check,
        &|_| {},
    )
}

fn topdown(
    hc: &HierarchicalCutting,
    vertex: &dyn Fn(u32) -> Vertex,
    check: bool,
    on_merge: &dyn Fn(usize),
) -> Result<Vec<CellEnvelopes>> {
    let mut env: Vec<Option<CellEnvelopes>> = vec![None; hc.cells.len()];
    env[0] = Some(CellEnvelopes {
        below: HullChain::empty(Orientation::Lower),
        above: HullChain::empty(Orientation::Upper),
    });
    for level in &hc.levels[1..] {
        for &c in level {
            let cell = &hc.cells[c];
            let pid = cell.parent.expect("non-root cell");
            let parent = env[pid].clone().expect("parents come first");
            if cell.below.is_empty() && cell.above.is_empty() {
                env[c] = Some(parent);
                continue;
            }
            let (sep_lo, sep_hi) = separators(hc, pid);
            let hb = HullChain::from_sorted_dedup(
                cell.below.iter().map(|&i| vertex(i)).collect(),
                Orientation::Lower,
            );
            let ha = HullChain::from_sorted_dedup(
                cell.above.iter().map(|&i| vertex(i)).collect(),
                Orientation::Upper,
            );
            env[c] = Some(CellEnvelopes {
                below: merge_checked(&parent.below, &hb, &sep_lo, check, on_merge)?,
                above: merge_checked(&parent.above, &ha, &sep_hi, check, on_merge)?,
            });
        }
    }
    Ok(env
        .into_iter()
        .map(|e| e.expect("every cell is on a level"))
        .collect())
}

/// Point indices grouped by leaf, each leaf's list cut into runs of at most
/// `group` points. Groups are ordered by leaf id.
pub fn assign_points(
    hc: &HierarchicalCutting,
    pts: &[Point],
    group: usize,
) -> Vec<(usize, Vec<usize>)> {
    let mut by_leaf: Vec<Vec<usize>> = vec![Vec::new(); hc.cells.len()];
    for (i, p) in pts.iter().enumerate() {
        by_leaf[hc.locate_leaf(p)].push(i);
    }
    let group = group.max(1);
    let mut out = Vec::new();
    for (leaf, list) in by_leaf.into_iter().enumerate() {
        for chunk in list.chunks(group) {
            out.push((leaf, chunk.to_vec()));
        }
    }
    out
}

/// Both chains of a point in `leaf`, given the chains of the leaf's
/// conflict lines computed for that point.
pub fn point_envelopes(
    hc: &HierarchicalCutting,
    leaf: usize,
    cell_env: &CellEnvelopes,
    local: &PointEnvelopes,
    check: bool,
) -> Result<PointEnvelopes> {
    let (sep_lo, sep_hi) = separators(hc, leaf);
    Ok(PointEnvelopes {
        below: merge_checked(&cell_env.below, &local.below, &sep_lo, check, &|_| {})?,
        above: merge_checked(&cell_env.above, &local.above, &sep_hi, check, &|_| {})?,
    })
}

pub(crate) type Recurse<'a> = dyn Fn(&[Point], &[u32]) -> Result<Vec<PointEnvelopes>> + Sync + 'a;

pub(crate) fn primal_step(
    ctx: &Ctx,
    pts: &[Point],
    ids: &[u32],
    r: usize,
    recurse: &Recurse,
) -> Result<Vec<PointEnvelopes>> {
    let check = ctx.cfg.check_invariants;
    let params = CuttingParams {
        seed: ctx.cfg.seed ^ (ids.len() as u64) << 32 ^ pts.len() as u64,
        c0: ctx.cfg.c0,
    };
    let hc = HierarchicalCutting::build(ctx.lines, ids, r, pts, &params)?;
    ctx.counters.cells(hc.cells.len());
    let on_merge = |c: usize| ctx.counters.merge_done(c);
    let env = topdown(&hc, &|i| ctx.vertex(i), check, &on_merge)?;

    let group = pts.len().div_ceil(r * r);
    let groups = assign_points(&hc, pts, group);
    let solved = ctx.try_par_map(&groups, |(leaf, members)| {
        let cell = &hc.cells[*leaf];
        debug_assert!(cell.conflicts.len() <= ids.len() / r.max(1) + 1);
        let sub_pts: Vec<Point> = members.iter().map(|&i| pts[i].clone()).collect();
        let local = recurse(&sub_pts, &cell.conflicts)?;
        let (sep_lo, sep_hi) = separators(&hc, *leaf);
        let mut out = Vec::with_capacity(members.len());
        for (&i, loc) in members.iter().zip(&local) {
            let pe = PointEnvelopes {
                below: merge_checked(&env[*leaf].below, &loc.below, &sep_lo, check, &on_merge)?,
                above: merge_checked(&env[*leaf].above, &loc.above, &sep_hi, check, &on_merge)?,
            };
            out.push((i, pe));
        }
        Ok(out)
    })?;
    let mut result: Vec<Option<PointEnvelopes>> = vec![None; pts.len()];
    for (i, pe) in solved.into_iter().flatten() {
        result[i] = Some(pe);
    }
    Ok(result
        .into_iter()
        .map(|p| p.expect("every point is in a leaf"))
        .collect())
}

/// Faces via the primal recursion.
pub fn primal_solve(inst: &Instance, cfg: &SolverConfig) -> Result<FaceSet> {
    let cfg = SolverConfig {
        backend: Backend::Primal,
        ..cfg.clone()
    };
    solver::solve_instance(inst, &cfg)
}
