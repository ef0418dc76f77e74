//! Resistance sparsifiers of dense regular graphs.
//!
//! The double cover of a `D`-regular graph splits into `D` disjoint perfect
//! matchings. A uniformly random subset of `d` of them, folded back onto the
//! base graph, gives a subgraph with weights in `{1, 2}` that is `2d`-regular
//! in weighted degree; rescaled to degree `D`, it approximates every
//! effective resistance of the base graph.

use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::decompose::{matching_decomposition, CycleDecomposition, MatchingDecomposition};
use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedMultigraph};
use crate::par::Parallelism;
use crate::spectral::{laplacian_pinv, lambda2, vlrh_bound_regular, Interval, ResistanceTable};

/// Default `c₀` in `d_target = ⌈c₀/ε⌉`.
pub const DEFAULT_C0: f64 = 3.0;
/// Redraws of a disconnected sample before giving up.
pub const DISCONNECTED_RESAMPLES: usize = 10;
/// All pairs are checked up to this many vertices; above it, pairs are
/// sampled.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 300;
pub const DEFAULT_PAIR_BUDGET: usize = 2000;

/// `⌈c₀/ε⌉` for `ε ∈ (0, 1)`.
pub fn target_degree(epsilon: f64, c0: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} outside (0, 1)")));
    }
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(Error::InvalidParameter(format!("c0 = {c0} must be positive")));
    }
    Ok((c0 / epsilon).ceil() as usize)
}

/// A sampled subgraph together with how it was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct SparsifierResult {
    #[serde(skip)]
    pub graph: WeightedMultigraph,
    /// Indices into the matching decomposition of the double cover; empty
    /// for the independent-sampling baseline.
    pub matchings: Vec<usize>,
    pub d_target: usize,
    /// Factor applied to the folded `{1, 2}` weights.
    pub scale: f64,
    pub lambda2: f64,
    pub edge_count: usize,
    /// Folded edges of weight 1 and 2 before scaling.
    pub weight_histogram: [usize; 2],
    pub connected: bool,
    /// Disconnected draws discarded before this one.
    pub resamples: usize,
}

/// The base graph with its double-cover decomposition, computed once and
/// reused across samples.
#[derive(Debug, Clone)]
pub struct SparsifierPlan {
    base: WeightedMultigraph,
    degree: usize,
    decomposition: MatchingDecomposition,
}

impl SparsifierPlan {
    pub fn new(g: &WeightedMultigraph) -> Result<Self> {
        if let Some(e) = g.edges().find(|e| e.is_loop()) {
            return Err(Error::SelfLoop(e.u));
        }
        if g.edges().any(|e| e.mult != 1) {
            return Err(Error::InvalidParameter("base graph must be simple".into()));
        }
        let degree = g
            .regular_unweighted_degree()
            .ok_or_else(|| Error::NotRegular("base graph".into()))?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let decomposition = matching_decomposition(&g.double_cover()?)?;
        Ok(SparsifierPlan {
            base: g.clone(),
            degree,
            decomposition,
        })
    }

    pub fn base(&self) -> &WeightedMultigraph {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn decomposition(&self) -> &MatchingDecomposition {
        &self.decomposition
    }

    /// Folds the union of the chosen double-cover matchings onto the base
    /// vertex set.
    pub fn fold(&self, matchings: &[usize]) -> Result<WeightedMultigraph> {
        WeightedMultigraph::unfold_double_cover(&self.decomposition.union_of(matchings))
    }

    /// `d_target` matchings drawn uniformly without replacement, folded and
    /// left unscaled. A disconnected draw is redrawn up to 10 times.
    pub fn sample<R: Rng + ?Sized>(&self, d_target: usize, rng: &mut R) -> Result<SparsifierResult> {
        if d_target == 0 || d_target > self.degree {
            return Err(Error::InsufficientElements {
                needed: d_target,
                available: self.degree,
            });
        }
        for resamples in 0..=DISCONNECTED_RESAMPLES {
            let mut chosen = index::sample(rng, self.degree, d_target).into_vec();
            chosen.sort_unstable();
            let h = self.fold(&chosen)?;
            if !h.is_connected() {
                continue;
            }
            let mut histogram = [0usize; 2];
            for e in h.edges() {
                histogram[if e.w > 1.5 { 1 } else { 0 }] += 1;
            }
            return Ok(SparsifierResult {
                lambda2: lambda2(&h)?,
                edge_count: h.edge_count(),
                graph: h,
                matchings: chosen,
                d_target,
                scale: 1.0,
                weight_histogram: histogram,
                connected: true,
                resamples,
            });
        }
        Err(Error::Disconnected)
    }

    /// Sample of `⌈c₀/ε⌉` matchings rescaled to weighted degree `D`.
    pub fn sparsify<R: Rng + ?Sized>(&self, epsilon: f64, c0: f64, rng: &mut R) -> Result<SparsifierResult> {
        let d_target = target_degree(epsilon, c0)?;
        self.sparsify_to(d_target, rng)
    }

    /// Sample of `d_target` matchings rescaled to weighted degree `D`.
    pub fn sparsify_to<R: Rng + ?Sized>(&self, d_target: usize, rng: &mut R) -> Result<SparsifierResult> {
        let mut res = self.sample(d_target, rng)?;
        let unscaled = res.graph.regular_degree(1e-12).ok_or_else(|| {
            Error::NotRegular("folded sample is not regular".into())
        })?;
        let scale = self.degree as f64 / unscaled;
        res.graph = res.graph.scale_weights(scale)?;
        res.scale = scale;
        Ok(res)
    }
}

/// Unscaled folded union of `d_target` random double-cover matchings.
pub fn regular_expander_subgraph<R: Rng + ?Sized>(
    g: &WeightedMultigraph,
    d_target: usize,
    rng: &mut R,
) -> Result<SparsifierResult> {
    SparsifierPlan::new(g)?.sample(d_target, rng)
}

/// `⌈3/ε⌉` random double-cover matchings, folded and rescaled so every
/// weighted degree equals `D`.
pub fn resistance_sparsifier<R: Rng + ?Sized>(
    g: &WeightedMultigraph,
    epsilon: f64,
    rng: &mut R,
) -> Result<SparsifierResult> {
    SparsifierPlan::new(g)?.sparsify(epsilon, DEFAULT_C0, rng)
}

/// Union of `count` random cycles of a Hamiltonian decomposition,
/// `2·count`-regular.
pub fn cycle_union_subgraph<R: Rng + ?Sized>(
    cycles: &CycleDecomposition,
    count: usize,
    rng: &mut R,
) -> Result<WeightedMultigraph> {
    if count > cycles.len() {
        return Err(Error::InsufficientElements {
            needed: count,
            available: cycles.len(),
        });
    }
    let mut chosen = index::sample(rng, cycles.len(), count).into_vec();
    chosen.sort_unstable();
    Ok(cycles.union_of(&chosen))
}

/// Relative resistance error on one vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairError {
    pub u: VertexId,
    pub v: VertexId,
    pub r_g: f64,
    pub r_h: f64,
    pub rel_err: f64,
}

/// Summary of `|R_H/R_G − 1|` over the checked pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub pair_count: usize,
    pub exhaustive: bool,
    pub max: f64,
    pub median: f64,
    pub p95: f64,
    pub mean: f64,
    #[serde(skip)]
    pub pairs: Vec<PairError>,
}

impl ErrorReport {
    fn from_pairs(pairs: Vec<PairError>, exhaustive: bool) -> Self {
        let mut errs: Vec<f64> = pairs.iter().map(|p| p.rel_err).collect();
        errs.sort_by(f64::total_cmp);
        let q = |f: f64| -> f64 {
            if errs.is_empty() {
                return 0.0;
            }
            errs[((errs.len() - 1) as f64 * f).round() as usize]
        };
        let median = if errs.is_empty() {
            0.0
        } else if errs.len() % 2 == 1 {
            errs[errs.len() / 2]
        } else {
            0.5 * (errs[errs.len() / 2 - 1] + errs[errs.len() / 2])
        };
        ErrorReport {
            pair_count: errs.len(),
            exhaustive,
            max: errs.last().copied().unwrap_or(0.0),
            median,
            p95: q(0.95),
            mean: if errs.is_empty() { 0.0 } else { errs.iter().sum::<f64>() / errs.len() as f64 },
            pairs,
        }
    }

    /// Report for a disconnected candidate: every error is infinite.
    pub fn disconnected() -> Self {
        ErrorReport {
            pair_count: 0,
            exhaustive: false,
            max: f64::INFINITY,
            median: f64::INFINITY,
            p95: f64::INFINITY,
            mean: f64::INFINITY,
            pairs: Vec::new(),
        }
    }
}

/// Pairs `u < v` to check: all of them when `n ≤ 300`, otherwise
/// `pair_budget` drawn uniformly without replacement.
pub fn verification_pairs<R: Rng + ?Sized>(
    n: usize,
    pair_budget: usize,
    rng: &mut R,
) -> (Vec<(VertexId, VertexId)>, bool) {
    let total = n * n.saturating_sub(1) / 2;
    if n <= EXHAUSTIVE_PAIR_LIMIT || pair_budget >= total {
        let all = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        return (all, true);
    }
    let mut idx = index::sample(rng, total, pair_budget).into_vec();
    idx.sort_unstable();
    (idx.into_iter().map(|k| pair_from_index(n, k)).collect(), false)
}

/// The `k`-th pair `(u, v)`, `u < v`, in row-major order.
fn pair_from_index(n: usize, mut k: usize) -> (VertexId, VertexId) {
    let mut u = 0;
    while k >= n - 1 - u {
        k -= n - 1 - u;
        u += 1;
    }
    (u, u + 1 + k)
}

pub fn verify_sparsifier<R: Rng + ?Sized>(
    g: &WeightedMultigraph,
    h: &WeightedMultigraph,
    pair_budget: usize,
    rng: &mut R,
) -> Result<ErrorReport> {
    verify_sparsifier_with(g, h, pair_budget, Parallelism::default(), rng)
}

pub fn verify_sparsifier_with<R: Rng + ?Sized>(
    g: &WeightedMultigraph,
    h: &WeightedMultigraph,
    pair_budget: usize,
    par: Parallelism,
    rng: &mut R,
) -> Result<ErrorReport> {
    if g.n() != h.n() {
        return Err(Error::VertexCountMismatch(g.n(), h.n()));
    }
    let (pg, ph) = par.join(|| laplacian_pinv(g), || laplacian_pinv(h));
    let (tg, th) = (ResistanceTable::from_pinv(&pg?), ResistanceTable::from_pinv(&ph?));
    let (pairs, exhaustive) = verification_pairs(g.n(), pair_budget, rng);
    let errors = pairs
        .into_iter()
        .map(|(u, v)| {
            let (r_g, r_h) = (tg.get(u, v), th.get(u, v));
            PairError {
                u,
                v,
                r_g,
                r_h,
                rel_err: (r_h / r_g - 1.0).abs(),
            }
        })
        .collect();
    Ok(ErrorReport::from_pairs(errors, exhaustive))
}

/// Keeps each edge copy independently with `p = edge_budget / m`, reweighted
/// by `1/p`.
pub fn independent_sample_baseline<R: Rng + ?Sized>(
    g: &WeightedMultigraph,
    edge_budget: usize,
    rng: &mut R,
) -> Result<SparsifierResult> {
    let m = g.edge_count();
    let p = if m == 0 { 1.0 } else { (edge_budget as f64 / m as f64).min(1.0) };
    let mut h = WeightedMultigraph::new(g.n());
    for e in g.edges() {
        for _ in 0..e.mult {
            if p >= 1.0 || rng.random_bool(p) {
                h.add_edge(e.u, e.v, e.w / p)?;
            }
        }
    }
    let connected = h.is_connected();
    Ok(SparsifierResult {
        lambda2: if connected { lambda2(&h)? } else { 0.0 },
        edge_count: h.edge_count(),
        graph: h,
        matchings: Vec::new(),
        d_target: 0,
        scale: 1.0 / p,
        weight_histogram: [0, 0],
        connected,
        resamples: 0,
    })
}

/// Containment of every resistance of a weighted-regular graph in
/// `2/d ± 12 (1/λ2 + 2) w_max / d²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalCertificate {
    pub holds: bool,
    /// Smallest `radius − |R − center|` over all pairs.
    pub margin: f64,
    pub interval: Interval,
    pub lambda2: f64,
    pub degree: f64,
    pub w_max: f64,
    pub worst_pair: (VertexId, VertexId),
}

pub fn interval_certificate(h: &WeightedMultigraph) -> Result<IntervalCertificate> {
    let table = ResistanceTable::from_pinv(&laplacian_pinv(h)?);
    interval_certificate_with(h, &table, lambda2(h)?)
}

/// As [`interval_certificate`] with precomputed resistances and `λ2`.
pub fn interval_certificate_with(
    h: &WeightedMultigraph,
    table: &ResistanceTable,
    lambda2: f64,
) -> Result<IntervalCertificate> {
    let degree = h
        .regular_degree(1e-9)
        .ok_or_else(|| Error::NotRegular("weighted degrees differ".into()))?;
    let w_max = h.max_weight();
    let interval = vlrh_bound_regular(degree, lambda2, w_max);
    let n = h.n();
    let mut margin = f64::INFINITY;
    let mut worst_pair = (0, 0);
    for u in 0..n {
        for v in u + 1..n {
            let s = interval.slack(table.get(u, v));
            if s < margin {
                margin = s;
                worst_pair = (u, v);
            }
        }
    }
    Ok(IntervalCertificate {
        holds: margin >= 0.0,
        margin,
        interval,
        lambda2,
        degree,
        w_max,
        worst_pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::walecki_decomposition;
    use crate::generators;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_selection_is_doubled_graph() {
        let g = generators::petersen();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let res = regular_expander_subgraph(&g, 3, &mut rng).unwrap();
        assert_eq!(res.graph, g.scale_weights(2.0).unwrap());
        let res = SparsifierPlan::new(&g).unwrap().sparsify_to(3, &mut rng).unwrap();
        assert_eq!(res.scale, 0.5);
        let report = verify_sparsifier(&g, &res.graph, 100, &mut rng).unwrap();
        assert!(report.max < 1e-12);
    }

    #[test]
    fn folded_degree_is_twice_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = generators::complete(31);
        for d in [2, 5, 11] {
            let res = regular_expander_subgraph(&g, d, &mut rng).unwrap();
            for deg in res.graph.degrees() {
                assert_abs_diff_eq!(deg, 2.0 * d as f64, epsilon = 1e-12);
            }
            let [ones, twos] = res.weight_histogram;
            assert_eq!(ones + 2 * twos, d * 31);
            assert!(res.graph.edges().all(|e| g.multiplicity_between(e.u, e.v) == 1));
        }
    }

    #[test]
    fn rescaled_degree_is_base_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = generators::complete(41);
        let res = resistance_sparsifier(&g, 0.25, &mut rng).unwrap();
        assert_eq!(res.d_target, 12);
        for deg in res.graph.degrees() {
            assert_abs_diff_eq!(deg, 40.0, epsilon = 1e-9);
        }
        assert!(res.graph.edges().all(|e| e.w == res.scale || e.w == 2.0 * res.scale));
        assert!(res.edge_count <= res.d_target * 41);
    }

    #[test]
    fn same_seed_same_sample() {
        let g = generators::complete(21);
        let a = resistance_sparsifier(&g, 0.5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = resistance_sparsifier(&g, 0.5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a.matchings, b.matchings);
        assert_eq!(a.graph, b.graph);
    }

    #[test]
    fn invalid_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = generators::complete(11);
        assert!(resistance_sparsifier(&g, 1.5, &mut rng).is_err());
        assert!(resistance_sparsifier(&g, 0.0, &mut rng).is_err());
        assert!(matches!(
            regular_expander_subgraph(&g, 11, &mut rng),
            Err(Error::InsufficientElements { .. })
        ));
        let path = WeightedMultigraph::from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(SparsifierPlan::new(&path).is_err());
    }

    #[test]
    fn doubled_weights_halve_resistances() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = generators::petersen();
        let h = g.scale_weights(2.0).unwrap();
        let r = verify_sparsifier(&g, &h, 100, &mut rng).unwrap();
        assert_abs_diff_eq!(r.max, 0.5, epsilon = 1e-12);
        let back = verify_sparsifier(&h, &g, 100, &mut rng).unwrap();
        assert_abs_diff_eq!(back.max, 1.0, epsilon = 1e-12);
        // |R_H/R_G − 1| = a and |R_G/R_H − 1| = a / (1 − a) for R_H < R_G.
        assert_abs_diff_eq!(back.max, r.max / (1.0 - r.max), epsilon = 1e-12);
    }

    #[test]
    fn pair_index_enumerates_row_major() {
        let n = 6;
        let all: Vec<_> = (0..15).map(|k| pair_from_index(n, k)).collect();
        let expect: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        assert_eq!(all, expect);
    }

    #[test]
    fn sampled_pairs_are_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (pairs, exhaustive) = verification_pairs(400, 500, &mut rng);
        assert!(!exhaustive);
        let mut sorted = pairs.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 500);
        assert!(pairs.iter().all(|&(u, v)| u < v && v < 400));
    }

    #[test]
    fn baseline_with_full_budget_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = generators::complete(12);
        let res = independent_sample_baseline(&g, 1000, &mut rng).unwrap();
        assert_eq!(res.graph, g);
        let tiny = independent_sample_baseline(&g, 1, &mut rng).unwrap();
        assert!(!tiny.connected);
    }

    #[test]
    fn interval_certificate_on_complete_and_cycle() {
        let c = interval_certificate(&generators::complete(9)).unwrap();
        assert!(c.holds);
        assert_abs_diff_eq!(c.interval.center, 2.0 / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.lambda2, 9.0 / 8.0, epsilon = 1e-12);
        let c6 = interval_certificate(&generators::circulant(6, &[1]).unwrap()).unwrap();
        assert!(c6.holds);
        let scaled = interval_certificate(&generators::circulant(6, &[1]).unwrap().scale_weights(3.5).unwrap()).unwrap();
        assert_eq!(scaled.holds, c6.holds);
        assert_abs_diff_eq!(scaled.margin * 3.5, c6.margin, epsilon = 1e-12);
    }

    #[test]
    fn cycle_union_is_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let d = walecki_decomposition(15).unwrap();
        let h = cycle_union_subgraph(&d, 3, &mut rng).unwrap();
        assert_eq!(h.regular_unweighted_degree(), Some(6));
    }
}
