//! Deterministic SVG pictures of an instance and its non-empty faces.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::face::FaceSet;
use crate::geom::{line_intersection, Instance, Side};

const SIZE: f64 = 800.0;

/// World-coordinate box `(x0, y0, x1, y1)` around the points and, for small
/// inputs, all arrangement vertices.
fn viewport(inst: &Instance) -> (f64, f64, f64, f64) {
    let mut xs: Vec<f64> = inst.points.iter().map(|p| p.x.to_f64()).collect();
    let mut ys: Vec<f64> = inst.points.iter().map(|p| p.y.to_f64()).collect();
    if inst.lines.len() <= 64 {
        for (i, l) in inst.lines.iter().enumerate() {
            for k in &inst.lines[i + 1..] {
                if let Some(v) = line_intersection(l, k) {
                    xs.push(v.x.to_f64());
                    ys.push(v.y.to_f64());
                }
            }
        }
    }
    for l in &inst.lines {
        xs.push(0.0);
        ys.push(l.b.to_f64());
    }
    let lo = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut x0, mut x1, mut y0, mut y1) = (lo(&xs), hi(&xs), lo(&ys), hi(&ys));
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let (mx, my) = (((x1 - x0) * 0.1).max(1.0), ((y1 - y0) * 0.1).max(1.0));
    (x0 - mx, y0 - my, x1 + mx, y1 + my)
}

/// Keeps the part of `poly` where `s * (y - a x - b) >= 0`.
fn clip(poly: &[(f64, f64)], a: f64, b: f64, s: f64) -> Vec<(f64, f64)> {
    let f = |p: &(f64, f64)| s * (p.1 - a * p.0 - b);
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fq) = (f(&p), f(&q));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

pub fn render_svg(inst: &Instance, faces: &FaceSet) -> String {
    let (x0, y0, x1, y1) = viewport(inst);
    let sx = SIZE / (x1 - x0);
    let sy = SIZE / (y1 - y0);
    let px = |x: f64| (x - x0) * sx;
    let py = |y: f64| (y1 - y) * sy;
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    )
    .unwrap();
    writeln!(
        s,
        "<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>"
    )
    .unwrap();
    let frame = vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)];
    for (_, face, _) in faces.iter() {
        let mut poly = frame.clone();
        for &(l, side) in &face.edges {
            let l = &inst.lines[l as usize];
            let sign = if side == Side::Above { 1.0 } else { -1.0 };
            poly = clip(&poly, l.a.to_f64(), l.b.to_f64(), sign);
        }
        if poly.len() < 3 {
            continue;
        }
        let pts: Vec<String> = poly
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y)))
            .collect();
        writeln!(
            s,
            "<polygon points=\"{}\" fill=\"#c8d8f0\" stroke=\"none\"/>",
            pts.join(" ")
        )
        .unwrap();
    }
    for l in &inst.lines {
        let (a, b) = (l.a.to_f64(), l.b.to_f64());
        writeln!(
            s,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\" stroke-width=\"1\"/>",
            px(x0),
            py(a * x0 + b),
            px(x1),
            py(a * x1 + b)
        )
        .unwrap();
    }
    for p in &inst.points {
        writeln!(
            s,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"#c03030\"/>",
            px(p.x.to_f64()),
            py(p.y.to_f64())
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(inst: &Instance, faces: &FaceSet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_svg(inst, faces))?;
    Ok(())
}
