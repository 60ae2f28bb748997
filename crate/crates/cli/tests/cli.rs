use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_linefaces"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().unwrap()
}

fn stdout(cmd: &mut Command) -> String {
    let out = run(cmd);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

const TRIANGLE: &str = "lines 3 points 2\n0 0\n1 2\n-1 2\n0 1\n0 -5\n";

#[test]
fn solve_prints_sorted_faces() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.txt");
    std::fs::write(&f, TRIANGLE).unwrap();
    let out = stdout(bin().arg("solve").arg(&f));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 2);
    // the bounded triangle around (0, 1)
    assert!(rows.iter().any(|r| r.ends_with("| 0") && !r.contains('~')));
    assert!(rows.iter().any(|r| r.ends_with("| 1") && r.contains('~')));
    let mut sorted = rows.clone();
    sorted.sort();
    assert_eq!(rows.len(), sorted.len());
}

#[test]
fn vertical_line_vertices_in_input_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("v.txt");
    std::fs::write(
        &f,
        "lines 3 points 2\n1/3 2\n-1 0.5\nvertical 4\n0 0\n7/2 -1\n",
    )
    .unwrap();
    let out = stdout(bin().arg("solve").arg(&f));
    assert_eq!(
        out,
        "-0,+1,+2 | (-9/8 13/8) (4 -7/2) (4 10/3) | 1\n-0,+2,-1 | ~ (4 -7/2) (-9/8 13/8) | 0\n"
    );
}

#[test]
fn backends_print_the_same_faces() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.txt");
    bin()
        .args([
            "gen",
            "--kind",
            "clustered",
            "--n",
            "30",
            "--m",
            "25",
            "--seed",
            "9",
            "--out",
        ])
        .arg(&f)
        .status()
        .unwrap();
    let want = stdout(bin().arg("solve").arg(&f).args(["--backend", "oracle"]));
    for b in ["naive", "primal", "dual", "combined"] {
        let got =
            stdout(
                bin()
                    .arg("solve")
                    .arg(&f)
                    .args(["--backend", b, "--base", "2", "--check"]),
            );
        assert_eq!(got, want, "{b}");
    }
}

#[test]
fn incidence_rejected_or_perturbed() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("on.txt");
    std::fs::write(&f, "lines 1 points 1\n1 0\n2 2\n").unwrap();
    assert_eq!(run(bin().arg("solve").arg(&f)).status.code(), Some(2));
    let out = stdout(bin().arg("solve").arg(&f).args(["--policy", "perturb"]));
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn verify_small_corpus() {
    let out = stdout(bin().args(["verify", "--seeds", "12", "--max-n", "20"]));
    assert!(out.contains("48 of 48 runs agree"));
}

#[test]
fn bench_csv_shape() {
    let out = stdout(bin().args(["bench", "--sizes", "32,64", "--backend", "naive"]));
    let mut rows = out.lines();
    assert_eq!(
        rows.next().unwrap(),
        "backend,n,m,ms,maxcross,totalK,faceComplexity,seed"
    );
    assert_eq!(rows.clone().filter(|r| r.starts_with("naive,")).count(), 2);
    assert!(out.contains("# slope naive"));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.txt");
    let svg = dir.path().join("t.svg");
    std::fs::write(&f, TRIANGLE).unwrap();
    stdout(bin().arg("render").arg(&f).arg("--out").arg(&svg));
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.starts_with("<svg"));
    assert_eq!(s.matches("<polygon").count(), 2);
}

#[test]
fn gen_writes_instance_format() {
    let out = stdout(bin().args(["gen", "--kind", "grid", "--n", "8", "--m", "6"]));
    assert!(out.starts_with("lines 8 points 6\n"));
    assert_eq!(out.lines().count(), 15);
}

#[test]
fn bad_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    std::fs::write(&f, "lines 2 points 0\n1 1\n").unwrap();
    assert_eq!(run(bin().arg("solve").arg(&f)).status.code(), Some(2));
    assert!(!run(bin().args(["solve", "--backend", "nope", "x"]))
        .status
        .success());
}
