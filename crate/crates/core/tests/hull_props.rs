mod common;

use common::*;
use linefaces::hull::{common_tangent_separated, join_separated, Orientation};
use proptest::prelude::*;

fn orient_of(lower: bool) -> Orientation {
    if lower {
        Orientation::Lower
    } else {
        Orientation::Upper
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn chain_matches_brute_force(seed: u64, k in 1usize..80, lower: bool) {
        let o = orient_of(lower);
        let pts = random_points(&mut rng(seed), 0, 400, k);
        let c = chain_of(&pts, o, 0);
        c.check_invariants().unwrap();
        prop_assert_eq!(as_pairs(&c), brute_chain(&pts, o));
    }

    #[test]
    fn tangent_matches_brute_force(seed: u64, k1 in 1usize..60, k2 in 1usize..60, lower: bool) {
        let o = orient_of(lower);
        let mut r = rng(seed);
        let a = chain_of(&random_points(&mut r, 0, 300, k1), o, 0);
        let b = chain_of(&random_points(&mut r, 300, 600, k2), o, 1000);
        let t = common_tangent_separated(&a, &b).unwrap();
        let want = brute_tangent(&as_pairs(&a), &as_pairs(&b), o);
        prop_assert_eq!((ip(&t.t1.p), ip(&t.t2.p)), want);
    }

    #[test]
    fn join_is_hull_of_union(seed: u64, k1 in 0usize..50, k2 in 0usize..50, lower: bool) {
        let o = orient_of(lower);
        let mut r = rng(seed);
        let p1 = random_points(&mut r, 0, 200, k1);
        let p2 = random_points(&mut r, 200, 400, k2);
        let j = join_separated(&chain_of(&p1, o, 0), &chain_of(&p2, o, 1000)).unwrap();
        j.check_invariants().unwrap();
        let all: Vec<_> = p1.iter().chain(&p2).copied().collect();
        prop_assert_eq!(as_pairs(&j), brute_chain(&all, o));
    }
}

#[test]
fn overlapping_chains_rejected() {
    let o = Orientation::Lower;
    let a = chain_of(&[(0, 0), (5, 1)], o, 0);
    let b = chain_of(&[(5, 3), (9, 0)], o, 2);
    assert!(common_tangent_separated(&a, &b).is_err());
    assert!(join_separated(&b, &a).is_err());
}
