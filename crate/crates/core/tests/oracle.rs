mod support;

use proptest::prelude::*;
use support::{builder_multiplicities, oracle_multiplicities};

#[test]
fn oracle_knows_small_algebras() {
    // sl(3): three positive roots
    let m = oracle_multiplicities(5, &[vec![2, -1], vec![-1, 2]], &[false, false], 8);
    assert_eq!(m.keys().cloned().collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    // brj(2;5): ten positive roots up to height 7
    let m = oracle_multiplicities(5, &[vec![0, -1], vec![-2, 1]], &[true, true], 8);
    assert_eq!(m.len(), 10);
    assert!(m.contains_key(&vec![2, 5]));
    // affine sl(2): imaginary roots k(1,1) all of multiplicity one
    let m = oracle_multiplicities(5, &[vec![2, -2], vec![-2, 2]], &[false, false], 6);
    assert_eq!(m.get(&vec![2, 2]), Some(&1));
    assert_eq!(m.get(&vec![3, 2]), Some(&1));
}

#[test]
fn builder_agrees_on_catalog_rank_two() {
    let a = [vec![0, -1], vec![-2, 1]];
    assert_eq!(builder_multiplicities(5, &a, &[true, true], 8), oracle_multiplicities(5, &a, &[true, true], 8));
    let a = [vec![0, -1], vec![-1, 1]];
    assert_eq!(builder_multiplicities(3, &a, &[true, true], 8), oracle_multiplicities(3, &a, &[true, true], 8));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn builder_matches_oracle(
        p in prop_oneof![Just(3u32), Just(5u32)],
        a in proptest::collection::vec(-2i64..=2, 4),
        par in proptest::collection::vec(any::<bool>(), 2),
    ) {
        let m = [vec![a[0], a[1]], vec![a[2], a[3]]];
        prop_assert_eq!(builder_multiplicities(p, &m, &par, 8), oracle_multiplicities(p, &m, &par, 8));
    }

    #[test]
    fn builder_matches_oracle_rank_three(
        a in proptest::collection::vec(-1i64..=2, 9),
        par in proptest::collection::vec(any::<bool>(), 3),
    ) {
        let m = [vec![a[0], a[1], a[2]], vec![a[3], a[4], a[5]], vec![a[6], a[7], a[8]]];
        prop_assert_eq!(builder_multiplicities(5, &m, &par, 5), oracle_multiplicities(5, &m, &par, 5));
    }
}
