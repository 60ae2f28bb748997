mod common;

use common::*;
use linefaces::face::Face;
use linefaces::geom::Policy;
use linefaces::oracle::non_empty_faces_naive;
use linefaces::{
    solve, solve_instance, Backend, Instance, Line, Point, RawInstance, RawLine, SolverConfig,
};
use proptest::prelude::*;

fn cfg(backend: Backend, base: usize) -> SolverConfig {
    SolverConfig {
        backend,
        base_n: base,
        base_m: base,
        check_invariants: true,
        ..SolverConfig::default()
    }
}

const RECURSIVE: [Backend; 4] = [
    Backend::Naive,
    Backend::Primal,
    Backend::Dual,
    Backend::Combined,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn backends_agree_with_oracle(seed: u64, base in 1usize..6) {
        let (name, inst) = corpus(1, 48, seed).pop().unwrap();
        let want = non_empty_faces_naive(&inst).unwrap();
        for (i, p) in inst.points.iter().enumerate() {
            let (face, wit) = want.iter().find(|(_, _, w)| w.contains(&i)).map(|(_, f, w)| (f, w)).unwrap();
            prop_assert!(face.contains(p, &inst.lines));
            prop_assert!(wit.windows(2).all(|w| w[0] < w[1]));
        }
        for b in RECURSIVE {
            let got = solve_instance(&inst, &cfg(b, base)).unwrap();
            prop_assert_eq!(got.keys(), want.keys(), "{} on {}", b, &name);
            prop_assert_eq!(got.witness_partition(), want.witness_partition());
            prop_assert_eq!(&got, &want);
        }
    }
}

#[test]
fn vertical_and_duplicate_lines() {
    let raw = RawInstance {
        lines: vec![
            RawLine::Vertical(0.into()),
            RawLine::NonVertical(Line::new(1, 0)),
            RawLine::NonVertical(Line::new(-1, 3)),
            RawLine::NonVertical(Line::new(1, 0)),
            RawLine::Vertical(4.into()),
        ],
        points: vec![
            Point::new(1, 3),
            Point::new(-3, 0),
            Point::new(5, 1),
            Point::new(2, -7),
        ],
    };
    let want = solve(&raw, &SolverConfig::with_backend(Backend::Oracle)).unwrap();
    assert_eq!(want.report.duplicates, vec![3]);
    assert!(want.report.shear.is_some());
    for b in RECURSIVE {
        let got = solve(&raw, &cfg(b, 1)).unwrap();
        assert_eq!(got.faces, want.faces, "{b}");
        assert_eq!(got.report.line_origin, vec![0, 1, 2, 4]);
    }
}

#[test]
fn incidences_rejected_unless_perturbed() {
    let raw = RawInstance::from(Instance::new(
        vec![Point::new(1, 1), Point::new(0, 5)],
        vec![Line::new(1, 0), Line::new(0, 2)],
    ));
    assert!(solve(&raw, &SolverConfig::default()).is_err());
    let c = SolverConfig {
        policy: Policy::Perturb,
        ..SolverConfig::default()
    };
    let sol = solve(&raw, &c).unwrap();
    assert_eq!(sol.report.perturbed, vec![0]);
    assert_eq!(sol.faces.witness_partition().concat().len(), 2);
}

#[test]
fn no_lines_is_the_plane() {
    let inst = Instance::new(vec![Point::new(0, 0), Point::new(3, 1)], vec![]);
    for b in RECURSIVE {
        let fs = solve_instance(&inst, &cfg(b, 1)).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs.iter().next().unwrap().1, &Face::plane());
    }
}

#[test]
fn no_points_no_faces() {
    let inst = Instance::new(vec![], vec![Line::new(1, 0), Line::new(2, 1)]);
    for b in RECURSIVE {
        assert!(solve_instance(&inst, &cfg(b, 1)).unwrap().is_empty());
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let inst =
        linefaces::generate::generate_instance(linefaces::generate::Kind::Uniform, 300, 300, 5);
    let par = solve_instance(&inst, &cfg(Backend::Combined, 8)).unwrap();
    let seq = solve_instance(
        &inst,
        &SolverConfig {
            parallel: false,
            ..cfg(Backend::Combined, 8)
        },
    )
    .unwrap();
    assert_eq!(par, seq);
}
