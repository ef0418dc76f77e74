use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resistweave::generators;
use resistweave::sparsify::{interval_certificate, SparsifierPlan};
use resistweave::spectral::all_resistances;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn samples_are_regular_with_two_weights(m in 6usize..20, d in 2usize..8, seed in any::<u64>()) {
        let g = generators::complete(2 * m + 1);
        let plan = SparsifierPlan::new(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let res = plan.sparsify_to(d, &mut rng).unwrap();
        let big_d = plan.degree() as f64;
        for deg in res.graph.degrees() {
            prop_assert!((deg - big_d).abs() <= 1e-9);
        }
        let s = res.scale;
        prop_assert!(res.graph.edges().all(|e| e.w == s || e.w == 2.0 * s));
        let [ones, twos] = res.weight_histogram;
        prop_assert_eq!(ones + twos, res.graph.edge_count());
        // Every folded matching contributes n half-edges: ones + 2·twos = d·n.
        prop_assert_eq!(ones + 2 * twos, d * g.n());
        prop_assert!(res.edge_count <= d * g.n());
        prop_assert!(res.connected);
        prop_assert!(all_resistances(&res.graph).unwrap().max_triangle_excess() <= 1e-9);
    }

    #[test]
    fn same_seed_same_sparsifier(seed in any::<u64>()) {
        let g = generators::complete(21);
        let plan = SparsifierPlan::new(&g).unwrap();
        let a = plan.sparsify_to(5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = plan.sparsify_to(5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(&a.matchings, &b.matchings);
        prop_assert_eq!(a.graph, b.graph);
    }

    #[test]
    fn emitted_sparsifiers_satisfy_the_interval(seed in any::<u64>(), d in 6usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generators::random_regular(60, 20, &mut rng).unwrap();
        let plan = SparsifierPlan::new(&g).unwrap();
        let res = plan.sparsify_to(d, &mut rng).unwrap();
        prop_assert!(interval_certificate(&res.graph).unwrap().holds);
    }
}
