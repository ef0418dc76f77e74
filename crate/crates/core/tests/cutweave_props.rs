use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resistweave::cutweave::{
    build_kstar, build_level_covers, cut_player_bisection, level_partition, play_game_with,
    CoverWeavePlayer, GameState,
};
use resistweave::decompose::{matching_decomposition, walecki_decomposition, ElementFamily};
use resistweave::generators;
use resistweave::{Bisection, Parallelism};

fn walecki_family(m: usize) -> ElementFamily {
    ElementFamily::from_cycles(&walecki_decomposition(2 * m + 1).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn walk_stays_doubly_stochastic_and_potential_falls(m in 5usize..9, seed in any::<u64>()) {
        let fam = walecki_family(m);
        let r = 2 * (fam.len() - 1);
        let player = CoverWeavePlayer::new(&fam, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = GameState::with_parallelism(fam.n(), 50, Parallelism::Sequential);
        for _ in 0..8 {
            let (b, _, _) = cut_player_bisection(&state, &mut rng);
            let weave = player.weave(&b, &mut rng).unwrap();
            prop_assert!(weave.is_weave(&b));
            let rec = state.game_step(&b, &weave, r).unwrap().clone();
            prop_assert!(rec.max_row_sum_error <= 1e-12);
            prop_assert!(rec.max_col_sum_error <= 1e-12);
            prop_assert!(rec.psi_after <= rec.psi_before + 1e-15);
            prop_assert!(rec.half_slack >= -1e-9);
            prop_assert!(rec.identity_residual <= 1e-9);
            let p = state.p();
            for i in 0..fam.n() {
                prop_assert!((p.row(i).sum() - 1.0).abs() <= 1e-12);
                prop_assert!((p.column(i).sum() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn embedded_kstar_is_regular_and_routes_verify(seed in any::<u64>(), k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = generators::random_regular(24, 8, &mut rng).unwrap();
        let g = base.double_cover().unwrap();
        let m = matching_decomposition(&g).unwrap();
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..48).collect();
        order.shuffle(&mut rng);
        let b = Bisection::new(48, &order[..24]).unwrap();
        let Ok(lp) = level_partition(&g, &b, 0.25) else { return Ok(()) };
        let Ok(covers) = build_level_covers(&g, &lp, &m, k, &mut rng) else { return Ok(()) };
        let (kg, emb, ks) = build_kstar(&lp, &covers, k).unwrap();
        prop_assert!(emb.verify());
        prop_assert_eq!(kg.regular_unweighted_degree(), Some(ks.rho_sum()));
        for (i, (&c, &bound)) in ks.measured_congestion.iter().zip(&ks.c_bound).enumerate() {
            prop_assert!(c <= bound, "level {}: {} > {}", i + 1, c, bound);
        }
    }
}

/// Mean per-round ratio Ψ(t+1)/Ψ(t) over many runs stays below
/// `1 − 1/(C·r·ln n)` for the default `C = 10`.
#[test]
fn potential_decays_geometrically_on_average() {
    let fam = walecki_family(6);
    let n = fam.n();
    let r = 4;
    let bound = 1.0 - 1.0 / (10.0 * r as f64 * (n as f64).ln());
    let mut ratios = Vec::new();
    for seed in 0..40 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = play_game_with(&fam, r, 500, Parallelism::Sequential, &mut rng).unwrap();
        ratios.extend(out.state.history().iter().map(|h| h.psi_after / h.psi_before));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!(mean <= bound, "mean ratio {mean} above {bound}");
}
