//! Backend selection, the shared recursion and the naive base case.
//!
//! Every backend computes, for each point `p`, the lower hull of the duals of
//! the lines below `p` and the upper hull of the duals of the lines above it.
//! The face of `p` is read off those two chains. A primal or dual step splits
//! the problem into smaller ones of the same shape and merges their chains.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::face::{dedup_faces, face_from_envelopes, FaceSet};
use crate::geom::{
    dualize_line, normalize_instance, side_sign, Instance, Line, NormalizationReport, Point,
    Policy, RawInstance,
};
use crate::hull::{HullChain, Orientation, Vertex};
use crate::{dual, oracle, primal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    /// Per-point brute force, `O(mn)` side tests plus hull scans.
    Naive,
    Primal,
    Dual,
    Combined,
    /// The arrangement-walking reference implementation.
    Oracle,
}

impl Backend {
    pub const ALL: [Backend; 5] = [
        Backend::Naive,
        Backend::Primal,
        Backend::Dual,
        Backend::Combined,
        Backend::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Naive => "naive",
            Backend::Primal => "primal",
            Backend::Dual => "dual",
            Backend::Combined => "combined",
            Backend::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Backend> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::PreconditionViolated(format!("unknown backend {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub backend: Backend,
    /// Subproblems with at most this many lines go to the naive base case.
    pub base_n: usize,
    /// Same for points.
    pub base_m: usize,
    /// Cutting parameter of the top-level step.
    pub r_override: Option<usize>,
    /// Run the full precondition and hull checks at every merge.
    pub check_invariants: bool,
    /// Use the thread pool (only with the `parallel` feature).
    pub parallel: bool,
    pub seed: u64,
    /// Sample-size factor of the cuttings.
    pub c0: f64,
    /// Hull sets averaging at most this many vertices per hull are merged by
    /// recomputing the hull of all their vertices; 0 always uses the chord
    /// envelope.
    pub direct_hull_factor: usize,
    pub policy: Policy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            backend: Backend::Combined,
            base_n: 32,
            base_m: 32,
            r_override: None,
            check_invariants: false,
            parallel: true,
            seed: 0x5eed,
            c0: 1.0,
            direct_hull_factor: 8,
            policy: Policy::Reject,
        }
    }
}

impl SolverConfig {
    pub fn with_backend(backend: Backend) -> SolverConfig {
        SolverConfig {
            backend,
            ..SolverConfig::default()
        }
    }
}

/// What one level of the recursion does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Path {
    Naive,
    Primal {
        r: usize,
    },
    Dual {
        r: usize,
    },
    /// Dual step, then a primal step with the same `r` on each subproblem.
    Symmetric {
        r: usize,
    },
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Naive => write!(f, "naive"),
            Path::Primal { r } => write!(f, "primal(r={r})"),
            Path::Dual { r } => write!(f, "dual(r={r})"),
            Path::Symmetric { r } => write!(f, "symmetric(r={r})"),
        }
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b.max(1))
}

/// `ceil(n^(1/3))`
pub fn cube_root_ceil(n: usize) -> usize {
    let mut r = (n as f64).cbrt().round() as usize;
    while r.pow(3) < n {
        r += 1;
    }
    while r > 0 && (r - 1).pow(3) >= n {
        r -= 1;
    }
    r
}

/// The four-way case split on the sizes of the two inputs.
pub fn dispatch(m: usize, n: usize) -> Path {
    if m == 0 || n == 0 || m >= n.saturating_mul(n) {
        return Path::Naive;
    }
    if m > n {
        return Path::Primal { r: ceil_div(m, n) };
    }
    if n >= m.saturating_mul(m) {
        return Path::Dual { r: m };
    }
    if n > m {
        return Path::Dual { r: ceil_div(n, m) };
    }
    Path::Symmetric {
        r: cube_root_ceil(n),
    }
}

fn primal_r(m: usize, n: usize) -> usize {
    if m > n {
        ceil_div(m, n)
    } else {
        cube_root_ceil(n)
    }
}

fn dual_r(m: usize, n: usize) -> usize {
    if n >= m.saturating_mul(m) {
        m
    } else if n > m {
        ceil_div(n, m)
    } else {
        cube_root_ceil(m)
    }
}

/// The two dual chains of one point.
#[derive(Debug, Clone)]
pub struct PointEnvelopes {
    /// Lower hull of the duals of the lines below the point.
    pub below: HullChain,
    /// Upper hull of the duals of the lines above the point.
    pub above: HullChain,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub merges: usize,
    pub max_crossings: usize,
    /// Sum over dual-step points of the number of hulls gathered.
    pub total_k: usize,
    pub max_k: usize,
    /// Sum over dual-step points of the vertex counts of the gathered hulls.
    pub hull_vertices: usize,
    /// How far the largest envelope piece count exceeded `2K - 1`; zero
    /// when the bound held everywhere.
    pub piece_slack: i64,
    pub cutting_cells: usize,
    pub naive_pairs: usize,
    pub subproblems: usize,
}

/// Paths taken by the recursion: the top-level decision and a count per
/// `(depth, path)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub top: Option<Path>,
    pub counts: BTreeMap<(usize, Path), usize>,
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = self.top {
            writeln!(f, "top: {t}")?;
        }
        for ((d, p), c) in &self.counts {
            writeln!(f, "depth {d}: {p} x{c}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
pub(crate) struct Counters {
    merges: AtomicUsize,
    max_crossings: AtomicUsize,
    total_k: AtomicUsize,
    max_k: AtomicUsize,
    hull_vertices: AtomicUsize,
    piece_slack: Mutex<i64>,
    cells: AtomicUsize,
    naive_pairs: AtomicUsize,
    subproblems: AtomicUsize,
    trace: Mutex<Trace>,
}

impl Counters {
    pub(crate) fn merge_done(&self, crossings: usize) {
        self.merges.fetch_add(1, Ordering::Relaxed);
        self.max_crossings.fetch_max(crossings, Ordering::Relaxed);
    }

    pub(crate) fn hull_set(&self, k: usize, pieces: Option<usize>) {
        self.total_k.fetch_add(k, Ordering::Relaxed);
        self.max_k.fetch_max(k, Ordering::Relaxed);
        if let (true, Some(pieces)) = (k > 0, pieces) {
            let slack = pieces as i64 - (2 * k as i64 - 1);
            let mut s = self.piece_slack.lock().unwrap();
            *s = (*s).max(slack);
        }
    }

    pub(crate) fn hull_vertices(&self, v: usize) {
        self.hull_vertices.fetch_add(v, Ordering::Relaxed);
    }

    pub(crate) fn cells(&self, c: usize) {
        self.cells.fetch_add(c, Ordering::Relaxed);
    }

    fn snapshot(&self) -> (SolveStats, Trace) {
        let stats = SolveStats {
            merges: self.merges.load(Ordering::Relaxed),
            max_crossings: self.max_crossings.load(Ordering::Relaxed),
            total_k: self.total_k.load(Ordering::Relaxed),
            max_k: self.max_k.load(Ordering::Relaxed),
            hull_vertices: self.hull_vertices.load(Ordering::Relaxed),
            piece_slack: *self.piece_slack.lock().unwrap(),
            cutting_cells: self.cells.load(Ordering::Relaxed),
            naive_pairs: self.naive_pairs.load(Ordering::Relaxed),
            subproblems: self.subproblems.load(Ordering::Relaxed),
        };
        (stats, self.trace.lock().unwrap().clone())
    }
}

/// Read-only state shared by the whole recursion.
pub(crate) struct Ctx<'a> {
    pub lines: &'a [Line],
    /// `duals[i]` is the dual point of `lines[i]`.
    pub duals: Vec<Point>,
    pub cfg: &'a SolverConfig,
    pub counters: Counters,
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(lines: &'a [Line], cfg: &'a SolverConfig) -> Ctx<'a> {
        Ctx {
            lines,
            duals: lines.iter().map(dualize_line).collect(),
            cfg,
            counters: Counters::default(),
        }
    }

    pub(crate) fn vertex(&self, id: u32) -> Vertex {
        Vertex::new(self.duals[id as usize].clone(), id)
    }

    /// Line ids ordered by their dual points.
    pub(crate) fn sorted_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = (0..self.lines.len() as u32).collect();
        ids.sort_by(|&i, &j| self.duals[i as usize].cmp(&self.duals[j as usize]));
        ids
    }

    pub(crate) fn par_map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.cfg.parallel && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub(crate) fn try_par_map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        self.par_map(items, f).into_iter().collect()
    }
}

/// Both chains of every point by brute force. `ids` must be sorted by dual
/// point.
pub(crate) fn naive_envelopes(ctx: &Ctx, pts: &[Point], ids: &[u32]) -> Vec<PointEnvelopes> {
    ctx.counters
        .naive_pairs
        .fetch_add(pts.len() * ids.len(), Ordering::Relaxed);
    ctx.par_map(pts, |p| {
        let mut below = Vec::new();
        let mut above = Vec::new();
        for &id in ids {
            if side_sign(p, &ctx.lines[id as usize]) > 0 {
                below.push(ctx.vertex(id));
            } else {
                above.push(ctx.vertex(id));
            }
        }
        PointEnvelopes {
            below: HullChain::from_sorted_dedup(below, Orientation::Lower),
            above: HullChain::from_sorted_dedup(above, Orientation::Upper),
        }
    })
}

/// What the level after a step should do.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Next {
    Choose,
    Primal(usize),
}

fn choose(ctx: &Ctx, m: usize, n: usize, depth: usize, hint: Next) -> Path {
    let cfg = ctx.cfg;
    if cfg.backend == Backend::Naive {
        return Path::Naive;
    }
    if depth > 0 && (n <= cfg.base_n || m <= cfg.base_m) {
        return Path::Naive;
    }
    let top_r = if depth == 0 { cfg.r_override } else { None };
    let path = match (cfg.backend, hint) {
        (_, Next::Primal(r)) => Path::Primal { r },
        (Backend::Primal, _) => Path::Primal {
            r: top_r.unwrap_or_else(|| primal_r(m, n)),
        },
        (Backend::Dual, _) => Path::Dual {
            r: top_r.unwrap_or_else(|| dual_r(m, n)),
        },
        _ => match (dispatch(m, n), top_r) {
            (Path::Naive, _) => Path::Naive,
            (Path::Primal { .. }, Some(r)) => Path::Primal { r },
            (Path::Dual { .. }, Some(r)) => Path::Dual { r },
            (Path::Symmetric { .. }, Some(r)) => Path::Symmetric { r },
            (p, None) => p,
        },
    };
    // a step needs r >= 2 and at least two lines / points to cut
    match path {
        Path::Primal { r } if n >= 2 => Path::Primal { r: r.clamp(2, n) },
        Path::Dual { r } | Path::Symmetric { r } if m >= 2 => {
            let r = r.clamp(2, m);
            if matches!(path, Path::Dual { .. }) {
                Path::Dual { r }
            } else {
                Path::Symmetric { r }
            }
        }
        _ => Path::Naive,
    }
}

/// Both chains for every point of `pts` with respect to the lines `ids`
/// (sorted by dual point).
pub(crate) fn envelopes(
    ctx: &Ctx,
    pts: &[Point],
    ids: &[u32],
    depth: usize,
    hint: Next,
) -> Result<Vec<PointEnvelopes>> {
    let path = choose(ctx, pts.len(), ids.len(), depth, hint);
    {
        let mut t = ctx.counters.trace.lock().unwrap();
        if depth == 0 {
            t.top = Some(path);
        }
        *t.counts.entry((depth, path)).or_insert(0) += 1;
    }
    ctx.counters.subproblems.fetch_add(1, Ordering::Relaxed);
    let recurse = |next: Next| move |p: &[Point], l: &[u32]| envelopes(ctx, p, l, depth + 1, next);
    match path {
        Path::Naive => Ok(naive_envelopes(ctx, pts, ids)),
        Path::Primal { r } => primal::primal_step(ctx, pts, ids, r, &recurse(Next::Choose)),
        Path::Dual { r } => dual::dual_step(ctx, pts, ids, r, &recurse(Next::Choose)),
        Path::Symmetric { r } => dual::dual_step(ctx, pts, ids, r, &recurse(Next::Primal(r))),
    }
}

/// Result of a solve.
#[derive(Debug, Clone)]
pub struct Solution {
    pub faces: FaceSet,
    /// Faces use indices of the normalized line list; see
    /// `report.line_origin` for the input indices.
    pub instance: Instance,
    pub report: NormalizationReport,
    pub stats: SolveStats,
    pub trace: Trace,
}

/// Normalizes `raw` according to `cfg.policy` and solves it.
pub fn solve(raw: &RawInstance, cfg: &SolverConfig) -> Result<Solution> {
    let (inst, report) = normalize_instance(raw, cfg.policy)?;
    let (faces, stats, trace) = solve_normalized(&inst, cfg)?;
    Ok(Solution {
        faces,
        instance: inst,
        report,
        stats,
        trace,
    })
}

/// Solves an instance that already satisfies the normalization invariants.
pub fn solve_instance(inst: &Instance, cfg: &SolverConfig) -> Result<FaceSet> {
    Ok(solve_normalized(inst, cfg)?.0)
}

pub fn solve_normalized(
    inst: &Instance,
    cfg: &SolverConfig,
) -> Result<(FaceSet, SolveStats, Trace)> {
    if cfg.base_n == 0 || cfg.base_m == 0 {
        return Err(Error::PreconditionViolated(
            "base thresholds must be >= 1".into(),
        ));
    }
    if cfg.backend == Backend::Oracle {
        let fs = oracle::non_empty_faces_naive(inst)?;
        return Ok((fs, SolveStats::default(), Trace::default()));
    }
    if cfg.check_invariants {
        inst.validate()?;
    }
    let ctx = Ctx::new(&inst.lines, cfg);
    let ids = ctx.sorted_ids();
    // equal points share a face; the dual step needs distinct dual lines
    let mut order: Vec<usize> = (0..inst.points.len()).collect();
    order.sort_by(|&i, &j| inst.points[i].cmp(&inst.points[j]));
    let mut uniq: Vec<Point> = Vec::with_capacity(order.len());
    let mut slot = vec![0; order.len()];
    for &i in &order {
        if uniq.last() != Some(&inst.points[i]) {
            uniq.push(inst.points[i].clone());
        }
        slot[i] = uniq.len() - 1;
    }
    let envs = envelopes(&ctx, &uniq, &ids, 0, Next::Choose)?;
    let faces: Vec<_> = ctx.par_map(&(0..uniq.len()).collect::<Vec<_>>(), |&u| {
        face_from_envelopes(&envs[u].below, &envs[u].above, &uniq[u])
    });
    let faces = (0..inst.points.len()).map(|i| (i, faces[slot[i]].clone()));
    let fs = dedup_faces(faces);
    let (stats, trace) = ctx.counters.snapshot();
    Ok((fs, stats, trace))
}
