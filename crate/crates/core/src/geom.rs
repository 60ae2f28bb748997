//! Exact planar primitives, predicates, duality and input normalization.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::num::{checked_sign, Coord};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: impl Into<Coord>, y: impl Into<Coord>) -> Point {
        Point {
            x: x.into(),
            y: y.into(),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Non-vertical line `y = a*x + b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: Coord,
    pub b: Coord,
}

impl Line {
    pub fn new(a: impl Into<Coord>, b: impl Into<Coord>) -> Line {
        Line {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn eval(&self, x: &Coord) -> Coord {
        &(&self.a * x) + &self.b
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y={}x+{}", self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Above,
    On,
    Below,
}

impl Side {
    fn from_sign(s: i32) -> Side {
        match s.cmp(&0) {
            Ordering::Greater => Side::Above,
            Ordering::Equal => Side::On,
            Ordering::Less => Side::Below,
        }
    }
}

#[inline]
fn mul_chain(fs: &[i64]) -> Option<i128> {
    let mut acc: i128 = 1;
    for &f in fs {
        acc = acc.checked_mul(f as i128)?;
    }
    Some(acc)
}

/// Unit roundoff of `f64`.
const U: f64 = f64::EPSILON / 2.0;

#[inline]
fn approx(c: &Coord) -> Option<f64> {
    c.as_small().map(|(n, d)| n as f64 / d as f64)
}

/// Floating-point evaluation of `orient` whose sign is trusted only when it
/// clears a forward error bound.
#[inline]
fn orient_filter(p: &Point, q: &Point, r: &Point) -> Option<i32> {
    let (px, py) = (approx(&p.x)?, approx(&p.y)?);
    let (qx, qy) = (approx(&q.x)?, approx(&q.y)?);
    let (rx, ry) = (approx(&r.x)?, approx(&r.y)?);
    let det = (qx - px) * (ry - py) - (qy - py) * (rx - px);
    let mag = (qx.abs() + px.abs()) * (ry.abs() + py.abs())
        + (qy.abs() + py.abs()) * (rx.abs() + px.abs());
    let bound = 32.0 * U * mag;
    if det > bound {
        Some(1)
    } else if det < -bound {
        Some(-1)
    } else {
        None
    }
}

/// Sign of the signed area of `(p, q, r)`; `+1` is counterclockwise.
pub fn orient(p: &Point, q: &Point, r: &Point) -> i32 {
    if let Some(s) = orient_filter(p, q, r) {
        return s;
    }
    if let (Some(px), Some(py), Some(qx), Some(qy), Some(rx), Some(ry)) = (
        p.x.as_int(),
        p.y.as_int(),
        q.x.as_int(),
        q.y.as_int(),
        r.x.as_int(),
        r.y.as_int(),
    ) {
        let (ux, uy) = (qx as i128 - px as i128, qy as i128 - py as i128);
        let (vx, vy) = (rx as i128 - px as i128, ry as i128 - py as i128);
        if let Some(s) = checked_sign(&[(ux, vy), (-uy, vx)]) {
            return s;
        }
    }
    let ux = &q.x - &p.x;
    let uy = &q.y - &p.y;
    let vx = &r.x - &p.x;
    let vy = &r.y - &p.y;
    (&ux * &vy).cmp(&(&uy * &vx)) as i32
}

/// Exact sign of `p.y - (l.a * p.x + l.b)` as an `i32`.
pub(crate) fn side_sign(p: &Point, l: &Line) -> i32 {
    if let (Some(x), Some(y), Some(a), Some(b)) =
        (approx(&p.x), approx(&p.y), approx(&l.a), approx(&l.b))
    {
        let ax = a * x;
        let v = y - ax - b;
        let bound = 16.0 * U * (y.abs() + ax.abs() + b.abs());
        if v > bound {
            return 1;
        } else if v < -bound {
            return -1;
        }
    }
    if let (Some((xn, xd)), Some((yn, yd)), Some((an, ad)), Some((bn, bd))) = (
        p.x.as_small(),
        p.y.as_small(),
        l.a.as_small(),
        l.b.as_small(),
    ) {
        let t = (|| {
            let t1 = mul_chain(&[yn, ad, xd, bd])?;
            let t2 = mul_chain(&[an, xn, yd, bd])?;
            let t3 = mul_chain(&[bn, yd, ad, xd])?;
            t1.checked_sub(t2)?.checked_sub(t3)
        })();
        if let Some(v) = t {
            return v.signum() as i32;
        }
    }
    p.y.cmp(&l.eval(&p.x)) as i32
}

pub fn side_of_line(p: &Point, l: &Line) -> Side {
    Side::from_sign(side_sign(p, l))
}

/// Intersection of two lines, `None` when they are parallel.
pub fn line_intersection(l1: &Line, l2: &Line) -> Option<Point> {
    if l1.a == l2.a {
        return None;
    }
    let x = (&l2.b - &l1.b) / (&l1.a - &l2.a);
    let y = l1.eval(&x);
    Some(Point { x, y })
}

/// `y = a*x + b  ↦  (a, -b)`.
pub fn dualize_line(l: &Line) -> Point {
    Point {
        x: l.a.clone(),
        y: -&l.b,
    }
}

/// `(px, py)  ↦  y = px*x - py`.
pub fn dualize_point(p: &Point) -> Line {
    Line {
        a: p.x.clone(),
        b: -&p.y,
    }
}

/// Slope of the segment `p -> q`; `p.x != q.x`.
pub fn slope(p: &Point, q: &Point) -> Coord {
    (&q.y - &p.y) / (&q.x - &p.x)
}

/// Line through two points with distinct x.
pub fn line_through(p: &Point, q: &Point) -> Line {
    let a = slope(p, q);
    let b = &p.y - &(&a * &p.x);
    Line { a, b }
}

/// A normalized problem instance: no vertical lines, no duplicate lines and
/// no point lying on a line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Instance {
    pub points: Vec<Point>,
    pub lines: Vec<Line>,
}

impl Instance {
    pub fn new(points: Vec<Point>, lines: Vec<Line>) -> Instance {
        Instance { points, lines }
    }

    /// First violation of the instance invariants, if any.
    pub fn validate(&self) -> Result<()> {
        let mut sorted: Vec<&Line> = self.lines.iter().collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::PreconditionViolated(format!(
                    "duplicate line {:?}",
                    w[0]
                )));
            }
        }
        for (i, p) in self.points.iter().enumerate() {
            for (j, l) in self.lines.iter().enumerate() {
                if side_sign(p, l) == 0 {
                    return Err(Error::PointOnLine { point: i, line: j });
                }
            }
        }
        Ok(())
    }
}

/// Input line before normalization; vertical lines are allowed here only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawLine {
    NonVertical(Line),
    /// `x = c`
    Vertical(Coord),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub points: Vec<Point>,
    pub lines: Vec<RawLine>,
}

impl From<Instance> for RawInstance {
    fn from(inst: Instance) -> Self {
        RawInstance {
            points: inst.points,
            lines: inst.lines.into_iter().map(RawLine::NonVertical).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    #[default]
    Reject,
    Perturb,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizationReport {
    /// Original index of every kept line, in output order.
    pub line_origin: Vec<usize>,
    /// Original indices of dropped duplicate lines.
    pub duplicates: Vec<usize>,
    /// Shear `x' = x + delta*y` applied to remove vertical lines.
    pub shear: Option<Coord>,
    /// Points moved off a line, and the displacement parameter used.
    pub perturbed: Vec<usize>,
    pub epsilon: Option<Coord>,
}

impl NormalizationReport {
    pub fn is_clean(&self) -> bool {
        self.duplicates.is_empty() && self.shear.is_none() && self.perturbed.is_empty()
    }
}

pub fn normalize_instance(
    raw: &RawInstance,
    policy: Policy,
) -> Result<(Instance, NormalizationReport)> {
    if raw.points.is_empty() && raw.lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut report = NormalizationReport::default();

    let has_vertical = raw.lines.iter().any(|l| matches!(l, RawLine::Vertical(_)));
    let mut points = raw.points.clone();
    let mut lines: Vec<Line> = Vec::with_capacity(raw.lines.len());
    if has_vertical {
        // delta = 1/(1 + ceil(max |a|)) keeps 1 + a*delta > 0 for every slope,
        // and the sheared slopes a/(1+a*delta) never equal 1/delta.
        let max_a = raw
            .lines
            .iter()
            .filter_map(|l| match l {
                RawLine::NonVertical(l) => Some(l.a.abs()),
                RawLine::Vertical(_) => None,
            })
            .max()
            .unwrap_or(Coord::ZERO);
        let delta = (Coord::ONE + Coord::from_bigint(max_a.ceil())).recip();
        for l in &raw.lines {
            lines.push(match l {
                RawLine::NonVertical(l) => {
                    let k = Coord::ONE + &l.a * &delta;
                    Line {
                        a: &l.a / &k,
                        b: &l.b / &k,
                    }
                }
                RawLine::Vertical(c) => Line {
                    a: delta.recip(),
                    b: -(c / &delta),
                },
            });
        }
        for p in &mut points {
            p.x = &p.x + &(&delta * &p.y);
        }
        report.shear = Some(delta);
    } else {
        lines.extend(raw.lines.iter().map(|l| match l {
            RawLine::NonVertical(l) => l.clone(),
            RawLine::Vertical(_) => unreachable!(),
        }));
    }

    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| lines[i].cmp(&lines[j]).then(i.cmp(&j)));
    let mut keep = vec![true; lines.len()];
    for w in order.windows(2) {
        if lines[w[0]] == lines[w[1]] {
            // keep the lower original index, drop the later copy
            let drop = w[0].max(w[1]);
            keep[drop] = false;
        }
    }
    let mut kept = Vec::with_capacity(lines.len());
    for (i, l) in lines.into_iter().enumerate() {
        if keep[i] {
            report.line_origin.push(i);
            kept.push(l);
        } else {
            report.duplicates.push(i);
        }
    }
    let lines = kept;

    let on_line: Vec<(usize, usize)> = points
        .iter()
        .enumerate()
        .flat_map(|(i, p)| {
            lines
                .iter()
                .enumerate()
                .filter(move |(_, l)| side_sign(p, l) == 0)
                .map(move |(j, _)| (i, j))
        })
        .collect();
    if let Some(&(point, line)) = on_line.first() {
        match policy {
            Policy::Reject => return Err(Error::PointOnLine { point, line }),
            Policy::Perturb => {
                let eps = perturbation_epsilon(&points, &lines);
                let mut moved: Vec<usize> = on_line.iter().map(|&(i, _)| i).collect();
                moved.dedup();
                let mut eps = eps;
                loop {
                    let eps2 = &eps * &eps;
                    let trial: Vec<Point> = moved
                        .iter()
                        .map(|&i| Point {
                            x: &points[i].x + &eps,
                            y: &points[i].y + &eps2,
                        })
                        .collect();
                    let clean = trial
                        .iter()
                        .all(|p| lines.iter().all(|l| side_sign(p, l) != 0));
                    if clean {
                        for (&i, p) in moved.iter().zip(trial) {
                            points[i] = p;
                        }
                        break;
                    }
                    eps = &eps / &Coord::from_int(2);
                }
                report.perturbed = moved;
                report.epsilon = Some(eps);
            }
        }
    }

    let inst = Instance { points, lines };
    debug_assert!(inst.validate().is_ok());
    Ok((inst, report))
}

/// A power of two `eps <= 1/2` below half of every positive point-to-line
/// distance, and below `|a|` for every nonzero slope.
fn perturbation_epsilon(points: &[Point], lines: &[Line]) -> Coord {
    let mut bound = Coord::new(1, 2);
    for p in points {
        for l in lines {
            let d = (&p.y - &l.eval(&p.x)).abs();
            if d.is_zero() {
                if !l.a.is_zero() && l.a.abs() < bound {
                    bound = l.a.abs();
                }
                continue;
            }
            // vertical distance / (1 + |a|) never exceeds the Euclidean one
            let e = &d / &(Coord::from_int(2) * (Coord::ONE + l.a.abs()));
            if e < bound {
                bound = e;
            }
        }
    }
    let two = Coord::from_int(2);
    let mut eps = Coord::new(1, 2);
    while eps >= bound {
        eps = &eps / &two;
    }
    eps
}
