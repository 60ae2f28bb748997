//! Timing runs and log-log slope fits.

use std::fmt;
use std::time::Instant;

use crate::error::Result;
use crate::generate::{generate_instance, Kind};
use crate::solver::{solve_normalized, Backend, SolverConfig};

/// One timed solve. Everything except `ms` is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub backend: Backend,
    pub n: usize,
    pub m: usize,
    pub ms: f64,
    pub max_crossings: usize,
    pub total_k: usize,
    pub face_complexity: usize,
    pub seed: u64,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str = "backend,n,m,ms,maxcross,totalK,faceComplexity,seed";
}

impl fmt::Display for BenchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{:.3},{},{},{},{}",
            self.backend,
            self.n,
            self.m,
            self.ms,
            self.max_crossings,
            self.total_k,
            self.face_complexity,
            self.seed
        )
    }
}

pub fn time_one(
    kind: Kind,
    n: usize,
    m: usize,
    seed: u64,
    cfg: &SolverConfig,
) -> Result<BenchRecord> {
    let inst = generate_instance(kind, n, m, seed);
    let t = Instant::now();
    let (faces, stats, _) = solve_normalized(&inst, cfg)?;
    let ms = t.elapsed().as_secs_f64() * 1e3;
    Ok(BenchRecord {
        backend: cfg.backend,
        n,
        m,
        ms,
        max_crossings: stats.max_crossings,
        total_k: stats.total_k,
        face_complexity: faces.total_complexity(),
        seed,
    })
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Slope of wall time against `n` over the records of one backend.
pub fn time_slope(records: &[BenchRecord], backend: Backend) -> Option<f64> {
    let rs: Vec<&BenchRecord> = records.iter().filter(|r| r.backend == backend).collect();
    if rs.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = rs.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rs.iter().map(|r| r.ms.max(1e-3)).collect();
    Some(loglog_slope(&xs, &ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert!((loglog_slope(&xs, &ys) - 1.5).abs() < 1e-12);
    }
}
