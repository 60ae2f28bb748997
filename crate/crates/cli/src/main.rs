use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linefaces::bench::{time_one, time_slope, BenchRecord};
use linefaces::generate::{generate_instance, Kind};
use linefaces::io::{parse_instance, write_instance};
use linefaces::render::render_svg;
use linefaces::solver::solve_normalized;
use linefaces::{solve, Backend, Policy, RawInstance, Solution, SolverConfig};

#[derive(Parser)]
#[command(
    name = "linefaces",
    version,
    about = "Non-empty faces of a line arrangement"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print every non-empty face, one per line.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Print the recursion paths taken to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Cross-check backends against the oracle on generated instances.
    Verify {
        #[arg(long, default_value_t = 200)]
        seeds: u64,
        /// First seed of the corpus.
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 40)]
        max_n: usize,
        /// Recursion base threshold; small values exercise deep recursion.
        #[arg(long, default_value_t = 3)]
        base: usize,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "naive,primal,dual,combined"
        )]
        backend: Vec<Backend>,
    },
    /// Time backends on generated instances; prints CSV and slope fits.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "combined,naive")]
        backend: Vec<Backend>,
        #[arg(long, value_enum, default_value_t = KindArg::Uniform)]
        kind: KindArg,
        /// Points per line.
        #[arg(long, default_value_t = 1.0)]
        ratio: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the instance and its non-empty faces as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long, value_enum, default_value_t = KindArg::Uniform)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "combined")]
    backend: Backend,
    #[arg(long, value_enum, default_value_t = PolicyArg::Reject)]
    policy: PolicyArg,
    /// Force the cutting parameter of the top level.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 32)]
    base: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long)]
    sequential: bool,
    /// Check internal invariants while solving.
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Reject,
    Perturb,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Uniform,
    Grid,
    Clustered,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Uniform => Kind::Uniform,
            KindArg::Grid => Kind::Grid,
            KindArg::Clustered => Kind::Clustered,
        }
    }
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            backend: self.backend,
            base_n: self.base.max(1),
            base_m: self.base.max(1),
            r_override: self.r,
            check_invariants: self.check,
            parallel: !self.sequential,
            seed: self.seed,
            policy: match self.policy {
                PolicyArg::Reject => Policy::Reject,
                PolicyArg::Perturb => Policy::Perturb,
            },
            ..SolverConfig::default()
        }
    }
}

fn load_and_solve(file: &PathBuf, args: &SolverArgs) -> Result<Solution> {
    let raw = parse_instance(file).with_context(|| format!("reading {}", file.display()))?;
    Ok(solve(&raw, &args.config())?)
}

/// One line per face: boundary tokens (`+i` means the face lies above input
/// line `i`), vertices with `~` for an unbounded stretch, witness points.
fn format_faces(sol: &Solution) -> String {
    let origin = &sol.report.line_origin;
    let mut rows: Vec<(Vec<(usize, bool)>, String)> = sol
        .faces
        .iter()
        .map(|(key, face, wit)| {
            let toks: Vec<(usize, bool)> = key
                .0
                .iter()
                .map(|&(l, up)| (origin[l as usize], up))
                .collect();
            let mut s = String::new();
            if toks.is_empty() {
                s.push_str("plane");
            }
            for (i, (l, up)) in toks.iter().enumerate() {
                let sep = if i > 0 { "," } else { "" };
                write!(s, "{sep}{}{l}", if *up { '+' } else { '-' }).unwrap();
            }
            s.push_str(" |");
            for v in &face.vertices {
                match v {
                    Some(p) => {
                        // undo the shear that removed vertical lines
                        let x = match &sol.report.shear {
                            Some(d) => &p.x - &(d * &p.y),
                            None => p.x.clone(),
                        };
                        write!(s, " ({x} {})", p.y).unwrap()
                    }
                    None => s.push_str(" ~"),
                }
            }
            s.push_str(" |");
            for w in wit {
                write!(s, " {w}").unwrap();
            }
            (toks, s)
        })
        .collect();
    rows.sort();
    rows.into_iter().map(|(_, s)| s + "\n").collect()
}

fn verify(start: u64, seeds: u64, max_n: usize, base: usize, backends: &[Backend]) -> Result<bool> {
    let kinds = [Kind::Uniform, Kind::Grid, Kind::Clustered];
    let oracle = SolverConfig::with_backend(Backend::Oracle);
    let mut bad = 0;
    for seed in start..start + seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = kinds[(seed % 3) as usize];
        let n = rng.gen_range(1..=max_n.max(1));
        let m = rng.gen_range(1..=max_n.max(1));
        log::debug!("generating {kind} n={n} m={m} seed={seed}");
        let inst = generate_instance(kind, n, m, seed);
        let want = solve_normalized(&inst, &oracle)?.0;
        for &b in backends {
            let cfg = SolverConfig {
                backend: b,
                base_n: base.max(1),
                base_m: base.max(1),
                check_invariants: true,
                seed,
                ..SolverConfig::default()
            };
            log::debug!("{b} {kind} n={n} m={m} seed={seed}");
            let ok = match solve_normalized(&inst, &cfg) {
                Ok((got, _, _)) => got == want,
                Err(e) => {
                    eprintln!("{b} {kind} n={n} m={m} seed={seed}: {e}");
                    false
                }
            };
            if !ok {
                bad += 1;
                println!("MISMATCH {b} {kind} n={n} m={m} seed={seed}");
            }
        }
    }
    let runs = seeds as usize * backends.len();
    println!("{} of {runs} runs agree with the oracle", runs - bad);
    Ok(bad == 0)
}

fn bench(
    sizes: &[usize],
    backends: &[Backend],
    kind: Kind,
    ratio: f64,
    seed: u64,
    sequential: bool,
) -> Result<String> {
    let mut out = format!("{}\n", BenchRecord::CSV_HEADER);
    let mut recs = Vec::new();
    for &n in sizes {
        let m = ((n as f64) * ratio).round() as usize;
        for &b in backends {
            let cfg = SolverConfig {
                backend: b,
                parallel: !sequential,
                ..SolverConfig::default()
            };
            let r = time_one(kind, n, m, seed, &cfg)?;
            writeln!(out, "{r}").unwrap();
            recs.push(r);
        }
    }
    for &b in backends {
        if let Some(s) = time_slope(&recs, b) {
            writeln!(out, "# slope {b} {s:.3}").unwrap();
        }
    }
    Ok(out)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Solve {
            file,
            solver,
            trace,
        } => {
            let sol = load_and_solve(&file, &solver)?;
            if !sol.report.is_clean() {
                eprintln!("normalized input: {:?}", sol.report);
            }
            if trace {
                eprint!("{}", sol.trace);
            }
            print!("{}", format_faces(&sol));
        }
        Cmd::Verify {
            start,
            seeds,
            max_n,
            base,
            backend,
        } => {
            if backend.is_empty() {
                bail!("no backends to verify");
            }
            return verify(start, seeds, max_n, base, &backend);
        }
        Cmd::Bench {
            sizes,
            backend,
            kind,
            ratio,
            seed,
            sequential,
            out,
        } => {
            let csv = bench(&sizes, &backend, kind.into(), ratio, seed, sequential)?;
            emit(&csv, out.as_ref())?;
        }
        Cmd::Render { file, out, solver } => {
            let sol = load_and_solve(&file, &solver)?;
            std::fs::write(&out, render_svg(&sol.instance, &sol.faces))
                .with_context(|| format!("writing {}", out.display()))?;
        }
        Cmd::Gen {
            kind,
            n,
            m,
            seed,
            out,
        } => {
            let raw = RawInstance::from(generate_instance(kind.into(), n, m, seed));
            emit(&write_instance(&raw), out.as_ref())?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
