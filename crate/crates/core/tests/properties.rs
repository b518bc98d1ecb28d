//! Property tests for the combinatorial invariants.

use proptest::prelude::*;

use compat_cycles::compat::{cycle_completions, double_factorial, generate, third_matchings};
use compat_cycles::feyn::{partial_amplitude_unsigned, planar_trees, KinematicPoint};
use compat_cycles::graphs::{
    all_two_regular_graphs, hamiltonian_decompositions, is_compatible, CycleOrder,
    PerfectMatching, TwoRegularGraph,
};
use num_rational::BigRational;

fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((1..=n as u32).collect::<Vec<u32>>()).prop_shuffle()
}

fn matching_strategy(n: usize) -> impl Strategy<Value = PerfectMatching> {
    perm_strategy(n).prop_map(move |labels| {
        let pairs: Vec<(u32, u32)> = labels.chunks(2).map(|c| (c[0], c[1])).collect();
        PerfectMatching::from_pairs(n, &pairs).unwrap()
    })
}

fn graph_strategy(n: usize) -> impl Strategy<Value = TwoRegularGraph> {
    let graphs = all_two_regular_graphs(n).unwrap();
    (0..graphs.len()).prop_map(move |i| graphs[i].clone())
}

fn kin_strategy(n: usize) -> impl Strategy<Value = KinematicPoint> {
    let dim = n * (n - 3) / 2;
    proptest::collection::vec(
        (1i64..400).prop_map(|v| if v % 2 == 0 { v } else { -v }),
        dim,
    )
    .prop_filter_map("generic point", move |ints| {
        let free: Vec<BigRational> =
            ints.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        KinematicPoint::from_free_entries(n, &free).ok().filter(|k| k.is_generic())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_constant_on_rotations_and_reflections(
        seq in perm_strategy(7),
        rot in 0usize..7,
        reflect in any::<bool>(),
    ) {
        let canon = CycleOrder::canonical(&seq).unwrap();
        let n = seq.len();
        let mut other: Vec<u32> = (0..n).map(|i| seq[(rot + i) % n]).collect();
        if reflect {
            other.reverse();
        }
        prop_assert_eq!(CycleOrder::canonical(&other).unwrap(), canon.clone());
        // idempotent
        prop_assert_eq!(CycleOrder::canonical(canon.as_slice()).unwrap(), canon);
    }

    #[test]
    fn union_commutes_and_adds_degrees(g in graph_strategy(6), h in graph_strategy(6)) {
        let gm = g.multigraph();
        let hm = h.multigraph();
        let u = gm.union(hm).unwrap();
        prop_assert_eq!(&u, &hm.union(gm).unwrap());
        for v in 1..=6u32 {
            prop_assert_eq!(u.degree(v), gm.degree(v) + hm.degree(v));
        }
    }

    #[test]
    fn decompositions_reunite(g in graph_strategy(6), c in perm_strategy(6)) {
        let cycle = CycleOrder::canonical(&c).unwrap();
        let union = g.multigraph().union(&cycle.to_multigraph()).unwrap();
        for (c1, c2) in hamiltonian_decompositions(&union).unwrap() {
            let reunion = c1.to_multigraph().union(&c2.to_multigraph()).unwrap();
            prop_assert_eq!(&reunion, &union);
        }
    }

    #[test]
    fn compatibility_is_relabel_invariant(
        g in graph_strategy(5),
        c in perm_strategy(5),
        perm in perm_strategy(5),
    ) {
        let cycle = CycleOrder::canonical(&c).unwrap();
        let direct = is_compatible(&g, &cycle).unwrap();
        let moved = is_compatible(
            &g.relabel(&perm).unwrap(),
            &cycle.relabel(&perm).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(direct, moved);
    }

    #[test]
    fn completions_count_is_exact(a in matching_strategy(6)) {
        let mut count = 0u64;
        for p in cycle_completions(&a).unwrap() {
            prop_assert!(p.union_is_hamiltonian(&a));
            count += 1;
        }
        prop_assert_eq!(count, double_factorial(4));
    }

    #[test]
    fn third_matchings_verified_and_bounded(
        b in matching_strategy(6),
        p in matching_strategy(6),
    ) {
        let mut count = 0u64;
        for q in third_matchings(&b, &p).unwrap() {
            prop_assert!(q.union_is_hamiltonian(&b));
            prop_assert!(q.union_is_hamiltonian(&p));
            count += 1;
        }
        prop_assert!(count >= double_factorial(3));
    }

    #[test]
    fn generated_cycles_pass_the_oracle(g in graph_strategy(5)) {
        let set = generate(&g).unwrap();
        prop_assert!(set.meets_bound());
        for c in &set.cycles {
            prop_assert!(is_compatible(&g, c).unwrap());
        }
    }

    #[test]
    fn planar_tree_count_is_catalan(alpha in perm_strategy(6)) {
        let cycle = CycleOrder::canonical(&alpha).unwrap();
        prop_assert_eq!(planar_trees(&cycle).len(), 14);
    }

    #[test]
    fn amplitude_is_symmetric(
        a in perm_strategy(5),
        b in perm_strategy(5),
        kin in kin_strategy(5),
    ) {
        let alpha = CycleOrder::canonical(&a).unwrap();
        let beta = CycleOrder::canonical(&b).unwrap();
        prop_assert_eq!(
            partial_amplitude_unsigned(&alpha, &beta, &kin).unwrap(),
            partial_amplitude_unsigned(&beta, &alpha, &kin).unwrap()
        );
    }

    #[test]
    fn amplitude_is_relabel_covariant(
        a in perm_strategy(5),
        b in perm_strategy(5),
        perm in perm_strategy(5),
        kin in kin_strategy(5),
    ) {
        let alpha = CycleOrder::canonical(&a).unwrap();
        let beta = CycleOrder::canonical(&b).unwrap();
        let direct = partial_amplitude_unsigned(&alpha, &beta, &kin).unwrap();
        let moved = partial_amplitude_unsigned(
            &alpha.relabel(&perm).unwrap(),
            &beta.relabel(&perm).unwrap(),
            &kin.relabel(&perm),
        )
        .unwrap();
        prop_assert_eq!(direct, moved);
    }

    #[test]
    fn notation_round_trips(g in graph_strategy(6)) {
        let text = g.notation();
        let back = TwoRegularGraph::parse(&text, 6).unwrap();
        prop_assert_eq!(back, g);
    }
}
