use aritygap::fnalg::{arity_gap, Carrier, FiniteFunction};
use aritygap::harness::enumerate::enumerate_functions;
use aritygap::harness::fixtures;
use aritygap::harness::oracle::oracle_gap;
use aritygap::harness::sweep::{sweep, SweepConfig};
use aritygap::order::{
    classify_monotone_gap, is_order_preserving, median_forms, truncated_median, Lattice, MonotoneGap, Poset,
};
use proptest::prelude::*;

#[test]
fn boolean_exhaustive_counts() {
    assert_eq!(enumerate_functions(&SweepConfig::boolean(2).exhaustive()).unwrap().count(), 16);
    let r = sweep(&SweepConfig::boolean(3).exhaustive().with_parallelism(2)).unwrap();
    assert_eq!(r.generated, 256);
    assert!(r.is_clean(), "{r}");
}

#[test]
fn monotone_chain_two_has_a_single_gap_two_function() {
    let c2 = fixtures::chain(2);
    let r = sweep(&SweepConfig::monotone(c2.clone(), c2, 3).exhaustive()).unwrap();
    assert_eq!(r.generated, 20);
    assert_eq!(r.tally("full_arity_gap2"), 1);
    assert!(r.is_clean(), "{r}");
}

#[test]
fn every_kind_sweeps_cleanly() {
    let c3 = fixtures::chain(3);
    let configs = [
        SweepConfig::pseudo(3).sampled(500, 1),
        SweepConfig::lovasz(2).exhaustive(),
        SweepConfig::lovasz(4).sampled(300, 2),
        SweepConfig::characterization(4, 2, 3).sampled(300, 3),
        SweepConfig::characterization(3, 2, 3).sampled(300, 4).monotone_only(),
        SweepConfig::monotone(c3.clone(), fixtures::diamond().poset().clone(), 2).sampled(300, 5),
        SweepConfig::monotone(c3, fixtures::chain(2), 3).sampled(300, 6),
    ];
    for config in configs {
        let r = sweep(&config.with_parallelism(3)).unwrap();
        assert!(r.is_clean(), "{r}");
        assert_eq!(r.total() + r.skipped, r.generated);
    }
}

/// A bidirected non-lattice domain still admits gap 2: collapse it onto the
/// chain `0 < a < c < 1` and take the median there.
#[test]
fn bidirected_non_lattice_gap_two() {
    let p6 = fixtures::bidirected_non_lattice();
    let collapse = [0usize, 1, 1, 3, 3, 5];
    let rank = |e: usize| [0usize, 1, 1, 2, 2, 3][e];
    let med = |x: &[usize]| {
        let mut r: Vec<usize> = x.iter().map(|&e| collapse[e]).collect();
        r.sort_by_key(|&e| rank(e));
        r[1]
    };
    let c = p6.carrier().clone();
    let f = FiniteFunction::from_fn(c.clone(), c, 3, med).unwrap();
    assert!(is_order_preserving(&f, &p6, &p6).unwrap());
    assert_eq!(oracle_gap(&f), Ok(2));
    match classify_monotone_gap(&f, &p6, &p6).unwrap() {
        MonotoneGap::Gap2(cert) => {
            assert_eq!(cert.h.table(), &collapse);
            assert!(cert.validate(&f, &p6, &p6));
        }
        MonotoneGap::Gap1 => panic!("expected gap 2"),
    }
}

fn chain_lattice() -> impl Strategy<Value = Lattice> {
    (2usize..6).prop_map(fixtures::chain_lattice)
}

/// Products of two chains are distributive.
fn grid_lattice(p: usize, q: usize) -> Lattice {
    let carrier = Carrier::new("G", (0..p * q).map(|k| format!("{}_{}", k / q, k % q)).collect()).unwrap();
    let mut covers = Vec::new();
    for i in 0..p {
        for j in 0..q {
            if i + 1 < p {
                covers.push((i * q + j, (i + 1) * q + j));
            }
            if j + 1 < q {
                covers.push((i * q + j, i * q + j + 1));
            }
        }
    }
    Lattice::from_poset(Poset::from_covers(carrier, &covers).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn median_forms_agree_on_distributive_lattices(p in 1usize..4, q in 2usize..4, x in 0usize..100, y in 0usize..100, z in 0usize..100) {
        let l = grid_lattice(p, q);
        prop_assert!(l.is_distributive());
        let k = l.len();
        let (m, j) = median_forms(&l, x % k, y % k, z % k);
        prop_assert_eq!(m, j);
    }

    #[test]
    fn truncated_medians_have_gap_two(l in chain_lattice(), a in 0usize..6, b in 0usize..6) {
        let (a, b) = (a % l.len(), b % l.len());
        prop_assume!(a < b);
        let t = truncated_median(&l, a, b).unwrap();
        prop_assert_eq!(arity_gap(&t), Ok(2));
        prop_assert_eq!(aritygap::order::classify_latpoly_gap2(&t, &l), Ok(Some((a, b))));
    }

    #[test]
    fn grid_truncated_medians_are_inverted(a in 0usize..6, b in 0usize..6) {
        let l = grid_lattice(2, 3);
        prop_assume!(l.poset().lt(a, b));
        let t = truncated_median(&l, a, b).unwrap();
        prop_assert_eq!(oracle_gap(&t), Ok(2));
        prop_assert_eq!(aritygap::order::classify_latpoly_gap2(&t, &l), Ok(Some((a, b))));
    }
}
