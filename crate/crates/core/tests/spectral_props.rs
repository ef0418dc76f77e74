use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resistweave::generators::random_connected_weighted;
use resistweave::spectral::{all_resistances, hitting_times, lambda2, normalized_laplacian};
use resistweave::WeightedMultigraph;

fn connected(max_n: usize) -> impl Strategy<Value = WeightedMultigraph> {
    (3..=max_n, 0.3f64..0.9, any::<u64>()).prop_map(|(n, p, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_connected_weighted(n, p, 0.5, 3.0, &mut rng).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resistance_is_a_metric(g in connected(14)) {
        let table = all_resistances(&g).unwrap();
        prop_assert!(table.max_triangle_excess() <= 1e-9);
        for u in 0..g.n() {
            prop_assert!(table.get(u, u).abs() < 1e-12);
            for v in 0..g.n() {
                prop_assert!((table.get(u, v) - table.get(v, u)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pseudo_inverse_matches_hitting_times(g in connected(10)) {
        let table = all_resistances(&g).unwrap();
        let h = hitting_times(&g).unwrap();
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                prop_assert!((table.get(u, v) - h.commute_resistance(u, v)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn removing_an_edge_never_lowers_resistance(g in connected(10), pick in any::<prop::sample::Index>()) {
        let edges: Vec<_> = g.edges().collect();
        let e = edges[pick.index(edges.len())];
        let mut h = g.clone();
        h.remove_edge(e.u, e.v, e.w);
        prop_assume!(h.is_connected());
        let before = all_resistances(&g).unwrap();
        let after = all_resistances(&h).unwrap();
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                prop_assert!(after.get(u, v) >= before.get(u, v) - 1e-9);
            }
        }
    }

    /// The cover's normalized spectrum is `σ(G) ∪ (2 − σ(G))`, so its λ2 is
    /// `min(λ2, 2 − λmax)` and equals λ2(G) only when that minimum is λ2.
    #[test]
    fn double_cover_spectrum_is_mirrored(g in connected(12)) {
        let mut ev: Vec<f64> = normalized_laplacian(&g).unwrap().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let mut mirrored: Vec<f64> = ev.iter().chain(ev.iter()).enumerate()
            .map(|(i, &x)| if i < ev.len() { x } else { 2.0 - x })
            .collect();
        mirrored.sort_by(f64::total_cmp);
        let cover = g.double_cover().unwrap();
        let mut cover_ev: Vec<f64> = normalized_laplacian(&cover).unwrap().symmetric_eigenvalues().iter().copied().collect();
        cover_ev.sort_by(f64::total_cmp);
        for (a, b) in mirrored.iter().zip(&cover_ev) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
        let expected = lambda2(&g).unwrap().min(2.0 - ev[ev.len() - 1]);
        prop_assert!((lambda2(&cover).unwrap() - expected).abs() <= 1e-9);
    }
}
