use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resistweave::decompose::{
    cover_side, dense_set_cover, matching_decomposition, walecki_decomposition, ElementFamily, Side,
};
use resistweave::generators::{random_regular, random_regular_bipartite};
use resistweave::Bisection;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matching_decomposition_partitions_regular_bipartite(half in 2usize..14, d in 1usize..8, seed in any::<u64>()) {
        let d = d.min(half);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_regular_bipartite(half, d, &mut rng).unwrap();
        let dec = matching_decomposition(&g).unwrap();
        prop_assert_eq!(dec.len(), d);
        prop_assert!(dec.audit(&g).passed());
        let all: Vec<usize> = (0..d).collect();
        prop_assert_eq!(dec.union_of(&all), g);
    }

    #[test]
    fn double_cover_decomposes(n in 6usize..24, d in 2usize..6, seed in any::<u64>()) {
        prop_assume!(n * d % 2 == 0 && d < n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_regular(n, d, &mut rng).unwrap();
        let cover = g.double_cover().unwrap();
        let dec = matching_decomposition(&cover).unwrap();
        prop_assert!(dec.audit(&cover).passed());
        prop_assert_eq!(dec.len(), d);
    }

    #[test]
    fn walecki_cycles_are_hamiltonian(m in 1usize..25) {
        let n = 2 * m + 1;
        let dec = walecki_decomposition(n).unwrap();
        prop_assert!(dec.verify());
        for i in 0..dec.len() {
            let c = dec.as_graph(i);
            prop_assert!(c.is_connected());
            prop_assert_eq!(c.regular_unweighted_degree(), Some(2));
        }
    }

    #[test]
    fn set_cover_output_covers(size in 1usize..40, fam in 1usize..30, seed in any::<u64>(), density in 0.2f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let member: Vec<Vec<bool>> = (0..fam)
            .map(|_| (0..size).map(|_| rng.random_bool(density)).collect())
            .collect();
        let coverable = (0..size).all(|i| member.iter().any(|s| s[i]));
        let mu = (0..size)
            .map(|i| member.iter().filter(|s| s[i]).count() as f64 / fam as f64)
            .fold(1.0, f64::min);
        match dense_set_cover(size, |i, s| member[s][i], fam, mu.max(1e-3), &mut rng) {
            Ok(chosen) => {
                prop_assert!(coverable);
                prop_assert!((0..size).all(|i| chosen.iter().any(|&s| member[s][i])));
            }
            Err(_) => prop_assert!(!coverable || mu > 0.0),
        }
    }

    #[test]
    fn cover_side_touches_every_vertex_of_the_side(m in 3usize..12, seed in any::<u64>()) {
        let n = 2 * m + 1;
        let fam = ElementFamily::from_cycles(&walecki_decomposition(n).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let b = Bisection::new(n, &order[..m]).unwrap();
        let chosen = cover_side(&b, Side::S, &fam, 0.05, &mut rng).unwrap();
        let union = fam.union_graph(&chosen);
        for &v in b.side_s() {
            prop_assert!(union.edges().any(|e| (e.u == v || e.v == v) && b.in_s(e.u) != b.in_s(e.v)));
        }
    }
}
