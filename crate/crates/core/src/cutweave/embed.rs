use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::decompose::{ElementFamily, MatchingDecomposition, COVER_RETRY_CAP};
use crate::error::{Error, Result};
use crate::graph::{Bisection, VertexId, WeightedMultigraph};

/// Levels `S_0 = S̄, S_1, …, S_t` peeled off `S`: each vertex of `S_i` has
/// at least `μD` neighbours in `S_{i−1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelPartition {
    levels: Vec<Vec<VertexId>>,
    level_of: Vec<usize>,
    mu: f64,
    degree: usize,
}

impl LevelPartition {
    pub fn n(&self) -> usize {
        self.level_of.len()
    }

    /// Number of peeled levels, not counting `S_0`.
    pub fn t(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Vec<VertexId>] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &[VertexId] {
        &self.levels[i]
    }

    pub fn level_of(&self, v: VertexId) -> usize {
        self.level_of[v]
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn mask(&self, i: usize) -> Vec<bool> {
        self.level_of.iter().map(|&l| l == i).collect()
    }
}

pub fn level_partition(g: &WeightedMultigraph, b: &Bisection, mu: f64) -> Result<LevelPartition> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidParameter(format!("mu = {mu} outside (0, 1)")));
    }
    if b.n() != g.n() {
        return Err(Error::VertexCountMismatch(b.n(), g.n()));
    }
    let degree = g
        .regular_unweighted_degree()
        .ok_or_else(|| Error::NotRegular("level partition needs a regular graph".into()))?;
    let threshold = mu * degree as f64;
    let nbrs = g.neighbor_copies();
    let mut level_of = vec![usize::MAX; g.n()];
    for &v in b.side_t() {
        level_of[v] = 0;
    }
    let mut levels = vec![b.side_t().to_vec()];
    let mut remaining: Vec<VertexId> = b.side_s().to_vec();
    while !remaining.is_empty() {
        let i = levels.len();
        let (next, rest): (Vec<VertexId>, Vec<VertexId>) = remaining.iter().partition(|&&v| {
            nbrs[v].iter().filter(|&&x| level_of[x] == i - 1).count() as f64 >= threshold
        });
        if next.is_empty() {
            return Err(Error::LevelPartitionStalled { stuck: rest });
        }
        for &v in &next {
            level_of[v] = i;
        }
        levels.push(next);
        remaining = rest;
    }
    Ok(LevelPartition {
        levels,
        level_of,
        mu,
        degree,
    })
}

/// Per-level covers `K_1, …, K_t`, each the union of `k` matchings, drawn
/// without replacement across levels.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelCovers {
    pub k: usize,
    /// `matchings[i - 1]` are the matching indices of `K_i`.
    pub matchings: Vec<Vec<usize>>,
    pub graphs: Vec<WeightedMultigraph>,
    /// `K`, the union over all levels.
    pub union: WeightedMultigraph,
}

/// For each level, samples `k` unused matchings until every vertex of `S_i`
/// has a matching edge into `S_{i−1}`; up to 100 draws per level.
pub fn build_level_covers<R: Rng + ?Sized>(
    g: &WeightedMultigraph,
    lp: &LevelPartition,
    m: &MatchingDecomposition,
    k: usize,
    rng: &mut R,
) -> Result<LevelCovers> {
    if m.n() != g.n() || lp.n() != g.n() {
        return Err(Error::VertexCountMismatch(m.n(), g.n()));
    }
    let family = ElementFamily::from_matchings(m);
    let mut pool: Vec<usize> = (0..family.len()).collect();
    let mut matchings = Vec::with_capacity(lp.t());
    let mut graphs = Vec::with_capacity(lp.t());
    for i in 1..=lp.t() {
        if pool.len() < k {
            return Err(Error::InsufficientElements {
                needed: k,
                available: pool.len(),
            });
        }
        let target = lp.mask(i - 1);
        let universe = lp.level(i);
        let mut found = None;
        for _ in 0..COVER_RETRY_CAP {
            let picks = rand::seq::index::sample(rng, pool.len(), k).into_vec();
            let chosen: Vec<usize> = picks.iter().map(|&p| pool[p]).collect();
            if universe
                .iter()
                .all(|&v| chosen.iter().any(|&e| family.crosses(e, v, &target)))
            {
                found = Some(chosen);
                break;
            }
        }
        let mut chosen = found.ok_or(Error::CoverNotFound {
            attempts: COVER_RETRY_CAP,
        })?;
        chosen.sort_unstable();
        pool.retain(|e| chosen.binary_search(e).is_err());
        graphs.push(family.union_graph(&chosen));
        matchings.push(chosen);
    }
    let all: Vec<usize> = matchings.iter().flatten().copied().collect();
    Ok(LevelCovers {
        k,
        matchings,
        graphs,
        union: family.union_graph(&all),
    })
}

/// One guest edge copy and the host path it is routed along. A self-loop
/// routes along the one-vertex path `[w]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GuestEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub path: Vec<VertexId>,
}

impl GuestEdge {
    pub fn direct(u: VertexId, v: VertexId) -> Self {
        GuestEdge { u, v, path: vec![u, v] }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    fn other(&self, a: VertexId) -> VertexId {
        if self.u == a {
            self.v
        } else {
            self.u
        }
    }

    fn path_from(&self, a: VertexId) -> Vec<VertexId> {
        if self.u == a {
            self.path.clone()
        } else {
            self.path.iter().rev().copied().collect()
        }
    }
}

fn host_key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

/// Cuts every cycle out of a walk, keeping its endpoints.
fn loop_erase(walk: &[VertexId]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::with_capacity(walk.len());
    for &x in walk {
        if let Some(pos) = out.iter().position(|&y| y == x) {
            out.truncate(pos + 1);
        } else {
            out.push(x);
        }
    }
    out
}

/// A guest multigraph routed through a host graph, with per-host-edge load.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    host: WeightedMultigraph,
    guest: Vec<GuestEdge>,
    load: BTreeMap<(VertexId, VertexId), usize>,
}

impl Embedding {
    pub fn new(host: WeightedMultigraph) -> Self {
        Embedding {
            host,
            guest: Vec::new(),
            load: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, e: GuestEdge) {
        for w in e.path.windows(2) {
            *self.load.entry(host_key(w[0], w[1])).or_insert(0) += 1;
        }
        self.guest.push(e);
    }

    pub fn host(&self) -> &WeightedMultigraph {
        &self.host
    }

    pub fn guest_edges(&self) -> &[GuestEdge] {
        &self.guest
    }

    /// Guest edges as a unit-weight multigraph.
    pub fn guest_graph(&self) -> WeightedMultigraph {
        guest_graph(self.host.n(), &self.guest)
    }

    pub fn load(&self, u: VertexId, v: VertexId) -> usize {
        self.load.get(&host_key(u, v)).copied().unwrap_or(0)
    }

    /// Largest number of guest paths through a single host edge.
    pub fn congestion(&self) -> usize {
        self.load.values().copied().max().unwrap_or(0)
    }

    /// Endpoints match, paths are simple and use host edges, and the stored
    /// loads agree with a recount.
    pub fn verify(&self) -> bool {
        let mut recount: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for e in &self.guest {
            let p = &e.path;
            if p.first() != Some(&e.u) || p.last() != Some(&e.v) {
                return false;
            }
            if p.len() == 1 && !e.is_loop() {
                return false;
            }
            let mut seen = std::collections::HashSet::new();
            if !p.iter().all(|&x| x < self.host.n() && seen.insert(x)) {
                return false;
            }
            for w in p.windows(2) {
                if self.host.multiplicity_between(w[0], w[1]) == 0 {
                    return false;
                }
                *recount.entry(host_key(w[0], w[1])).or_insert(0) += 1;
            }
        }
        recount == self.load
    }
}

fn guest_graph(n: usize, edges: &[GuestEdge]) -> WeightedMultigraph {
    let mut g = WeightedMultigraph::new(n);
    for e in edges {
        g.add_edge(e.u, e.v, 1.0).expect("in range");
    }
    g
}

/// `φ(host) ≥ φ(guest) / congestion`.
pub fn embedding_expansion_transfer(emb: &Embedding, phi_guest: f64) -> f64 {
    phi_guest / emb.congestion().max(1) as f64
}

/// The graphs `K_1*, …, K_t*` with their degree and congestion bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct KStar {
    pub levels: Vec<Vec<GuestEdge>>,
    /// `ρ_i = k(1 + ρ_{i−1})`.
    pub rho: Vec<usize>,
    /// `c_i = 1 + k·c_{i−1}`.
    pub c_bound: Vec<usize>,
    pub measured_congestion: Vec<usize>,
}

impl KStar {
    pub fn level_graph(&self, n: usize, i: usize) -> WeightedMultigraph {
        guest_graph(n, &self.levels[i - 1])
    }

    pub fn rho_sum(&self) -> usize {
        self.rho.iter().sum()
    }

    pub fn c_sum(&self) -> usize {
        self.c_bound.iter().sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Origin {
    Previous,
    Cover,
    Crossed,
}

/// Builds `K* = Σ K_i*` from the level covers and routes it into `K`.
///
/// `K_1* = K_1`. For `i > 1`, `K'` holds `k` copies of every edge of
/// `K_{i−1}*` plus `K_i`; each `v ∈ S_i` then trades its cover edge `vw`
/// (`w ∈ S_{i−1}`) and a copy of some `wu` (`u ∈ S_0`) for an edge `vu`,
/// routed along the two paths with cycles cut out, and a self-loop at `w`.
pub fn build_kstar(
    lp: &LevelPartition,
    covers: &LevelCovers,
    k: usize,
) -> Result<(WeightedMultigraph, Embedding, KStar)> {
    let n = lp.n();
    let t = lp.t();
    let mut levels: Vec<Vec<GuestEdge>> = Vec::with_capacity(t);
    let mut rho: Vec<usize> = Vec::with_capacity(t);
    let mut c_bound: Vec<usize> = Vec::with_capacity(t);
    for i in 1..=t {
        let cover_edges = covers.graphs[i - 1]
            .edges()
            .flat_map(|e| std::iter::repeat_n(GuestEdge::direct(e.u, e.v), e.mult as usize));
        let (prev_rho, prev_c) = if i == 1 { (0, 0) } else { (rho[i - 2], c_bound[i - 2]) };
        rho.push(k * (1 + prev_rho));
        c_bound.push(1 + k * prev_c);
        if i == 1 {
            levels.push(cover_edges.collect());
            continue;
        }

        let mut arena: Vec<Option<(GuestEdge, Origin)>> = Vec::new();
        for e in &levels[i - 2] {
            for _ in 0..k {
                arena.push(Some((e.clone(), Origin::Previous)));
            }
        }
        arena.extend(cover_edges.map(|e| Some((e, Origin::Cover))));
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (id, slot) in arena.iter().enumerate() {
            let (e, _) = slot.as_ref().expect("fresh arena");
            incident[e.u].push(id);
            if !e.is_loop() {
                incident[e.v].push(id);
            }
        }

        for &v in lp.level(i) {
            let find = |arena: &[Option<(GuestEdge, Origin)>], at: VertexId, origin: Origin, want: usize| {
                incident[at].iter().copied().find(|&id| match &arena[id] {
                    Some((e, o)) => *o == origin && !e.is_loop() && lp.level_of(e.other(at)) == want,
                    None => false,
                })
            };
            let vw = find(&arena, v, Origin::Cover, i - 1).ok_or(Error::MissingCopy { vertex: v })?;
            let w = arena[vw].as_ref().expect("live").0.other(v);
            let wu = find(&arena, w, Origin::Previous, 0).ok_or(Error::MissingCopy { vertex: w })?;
            let (e_vw, _) = arena[vw].take().expect("live");
            let (e_wu, _) = arena[wu].take().expect("live");
            let u = e_wu.other(w);
            let mut walk = e_vw.path_from(v);
            walk.extend(e_wu.path_from(w).into_iter().skip(1));
            for (a, b, path) in [(v, u, loop_erase(&walk)), (w, w, vec![w])] {
                let id = arena.len();
                arena.push(Some((GuestEdge { u: a, v: b, path }, Origin::Crossed)));
                incident[a].push(id);
                if a != b {
                    incident[b].push(id);
                }
            }
        }
        levels.push(arena.into_iter().flatten().map(|(e, _)| e).collect());
    }

    let mut measured_congestion = Vec::with_capacity(t);
    let mut embedding = Embedding::new(covers.union.clone());
    for (i, edges) in levels.iter().enumerate() {
        let g = guest_graph(n, edges);
        if g.regular_unweighted_degree() != Some(rho[i]) {
            return Err(Error::NotRegular(format!(
                "K_{}* is not {}-regular",
                i + 1,
                rho[i]
            )));
        }
        let s0 = lp.mask(0);
        for &v in lp.level(i + 1) {
            if !edges.iter().any(|e| (e.u == v && s0[e.v]) || (e.v == v && s0[e.u])) {
                return Err(Error::MissingCopy { vertex: v });
            }
        }
        let mut level_emb = Embedding::new(covers.union.clone());
        for e in edges {
            level_emb.push(e.clone());
            embedding.push(e.clone());
        }
        measured_congestion.push(level_emb.congestion());
    }
    let graph = embedding.guest_graph();
    Ok((
        graph,
        embedding,
        KStar {
            levels,
            rho,
            c_bound,
            measured_congestion,
        },
    ))
}

/// Level-partition density and per-level cover size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeaveParams {
    pub mu: f64,
    pub k: usize,
}

/// `K* + K̄*` for a bisection, routed into `K ∪ K̄`.
#[derive(Debug, Clone)]
pub struct EmbeddedWeave {
    pub weave: WeightedMultigraph,
    pub embedding: Embedding,
    /// Regularity, `Σρ_i` over both sides.
    pub r: usize,
    /// Congestion bound, `Σc_i` over both sides.
    pub c: usize,
    pub partitions: [LevelPartition; 2],
    pub covers: [LevelCovers; 2],
    pub kstar: [KStar; 2],
}

pub fn embedded_weave<R: Rng + ?Sized>(
    g: &WeightedMultigraph,
    b: &Bisection,
    m: &MatchingDecomposition,
    params: WeaveParams,
    rng: &mut R,
) -> Result<EmbeddedWeave> {
    let mut side = |bis: &Bisection| -> Result<_> {
        let lp = level_partition(g, bis, params.mu)?;
        let covers = build_level_covers(g, &lp, m, params.k, rng)?;
        let (kg, emb, ks) = build_kstar(&lp, &covers, params.k)?;
        Ok((lp, covers, kg, emb, ks))
    };
    let (lp_s, cov_s, kg_s, emb_s, ks_s) = side(b)?;
    let (lp_t, cov_t, kg_t, emb_t, ks_t) = side(&b.swapped())?;
    let weave = kg_s.sum(&kg_t)?;
    let r = ks_s.rho_sum() + ks_t.rho_sum();
    let c = ks_s.c_sum() + ks_t.c_sum();
    let mut embedding = Embedding::new(cov_s.union.union(&cov_t.union)?);
    for e in emb_s.guest_edges().iter().chain(emb_t.guest_edges()) {
        embedding.push(e.clone());
    }
    if !weave.is_weave(b) {
        return Err(Error::NotAWeave);
    }
    Ok(EmbeddedWeave {
        weave,
        embedding,
        r,
        c,
        partitions: [lp_s, lp_t],
        covers: [cov_s, cov_t],
        kstar: [ks_s, ks_t],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::matching_decomposition;
    use crate::generators;
    use crate::spectral::cheeger_bruteforce;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn half(n: usize) -> Bisection {
        Bisection::new(n, &(0..n / 2).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn complete_graph_has_one_level() {
        let g = generators::complete(10);
        let lp = level_partition(&g, &half(10), 0.25).unwrap();
        assert_eq!(lp.t(), 1);
        assert_eq!(lp.level(1), &[0, 1, 2, 3, 4]);
        assert_eq!(lp.level(0), &[5, 6, 7, 8, 9]);
    }

    #[test]
    fn closed_neighbourhood_inside_s_stalls() {
        // Two disjoint 4-cycles; S contains one of them entirely.
        let g = WeightedMultigraph::from_pairs(
            8,
            [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)],
        )
        .unwrap();
        let b = Bisection::new(8, &[0, 1, 2, 3]).unwrap();
        assert_eq!(
            level_partition(&g, &b, 0.25),
            Err(Error::LevelPartitionStalled { stuck: vec![0, 1, 2, 3] })
        );
    }

    #[test]
    fn cycle_peels_in_layers() {
        // 12-cycle, S = 0..6: ends of the arc peel first, then inward.
        let g = generators::circulant(12, &[1]).unwrap();
        let lp = level_partition(&g, &half(12), 0.5).unwrap();
        assert_eq!(lp.t(), 3);
        assert_eq!(lp.level(1), &[0, 5]);
        assert_eq!(lp.level(2), &[1, 4]);
        assert_eq!(lp.level(3), &[2, 3]);
    }

    #[test]
    fn loop_erase_keeps_endpoints() {
        assert_eq!(loop_erase(&[1, 2, 3, 2, 4]), vec![1, 2, 4]);
        assert_eq!(loop_erase(&[5, 6, 5, 7]), vec![5, 7]);
        assert_eq!(loop_erase(&[1, 2]), vec![1, 2]);
    }

    #[test]
    fn embedding_bookkeeping() {
        let host = generators::circulant(6, &[1]).unwrap();
        let mut emb = Embedding::new(host.clone());
        emb.push(GuestEdge { u: 0, v: 2, path: vec![0, 1, 2] });
        emb.push(GuestEdge { u: 1, v: 3, path: vec![1, 2, 3] });
        emb.push(GuestEdge { u: 4, v: 4, path: vec![4] });
        assert!(emb.verify());
        assert_eq!(emb.congestion(), 2);
        assert_eq!(emb.load(2, 1), 2);
        assert_eq!(embedding_expansion_transfer(&emb, 1.0), 0.5);
        let mut bad = emb.clone();
        bad.push(GuestEdge { u: 0, v: 3, path: vec![0, 3] });
        assert!(!bad.verify());
        let mut identity = Embedding::new(host.clone());
        for e in host.edges() {
            identity.push(GuestEdge::direct(e.u, e.v));
        }
        assert!(identity.verify());
        assert_eq!(embedding_expansion_transfer(&identity, 0.7), 0.7);
    }

    #[test]
    fn single_level_kstar_is_the_cover() {
        let g = generators::complete(8).double_cover().unwrap();
        let m = matching_decomposition(&g).unwrap();
        let b = half(16);
        let lp = level_partition(&g, &b, 0.25).unwrap();
        assert_eq!(lp.t(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let covers = build_level_covers(&g, &lp, &m, 3, &mut rng).unwrap();
        let (kg, emb, ks) = build_kstar(&lp, &covers, 3).unwrap();
        assert_eq!(kg, covers.graphs[0]);
        assert_eq!(emb.congestion(), 1);
        assert_eq!(ks.rho, vec![3]);
    }

    #[test]
    fn recurrences_for_k3() {
        let rho = |t: usize| (0..t).fold(0, |r, _| 3 * (1 + r));
        let c = |t: usize| (0..t).fold(0, |c, _| 1 + 3 * c);
        assert_eq!((rho(1), rho(2), rho(3)), (3, 12, 39));
        assert_eq!((c(1), c(2), c(3)), (1, 4, 13));
    }

    #[test]
    fn two_level_weave_on_a_circulant() {
        // Circulant C_20(1..5) is 10-regular; S = 0..10 peels in two levels
        // at μ = 0.3.
        let base = generators::circulant(20, &[1, 2, 3, 4, 5]).unwrap();
        let g = base.double_cover().unwrap();
        let m = matching_decomposition(&g).unwrap();
        let s: Vec<usize> = (0..10).chain(20..30).collect();
        let b = Bisection::new(40, &s).unwrap();
        let lp = level_partition(&g, &b, 0.3).unwrap();
        assert!(lp.t() >= 2, "t = {}", lp.t());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let params = WeaveParams { mu: 0.3, k: 3 };
        let ew = match embedded_weave(&g, &b, &m, params, &mut rng) {
            Ok(ew) => ew,
            Err(Error::InsufficientElements { .. }) => return,
            Err(e) => panic!("{e}"),
        };
        assert!(ew.weave.is_weave(&b));
        assert_eq!(ew.weave.regular_unweighted_degree(), Some(ew.r));
        assert!(ew.embedding.verify());
        assert!(ew.embedding.congestion() <= ew.c);
        for ks in &ew.kstar {
            for (i, (&mc, &cb)) in ks.measured_congestion.iter().zip(&ks.c_bound).enumerate() {
                assert!(mc <= cb, "level {}: {mc} > {cb}", i + 1);
            }
        }
    }

    #[test]
    fn transfer_holds_on_small_host() {
        let g = generators::complete(6).double_cover().unwrap();
        let m = matching_decomposition(&g).unwrap();
        let b = half(12);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ew = embedded_weave(&g, &b, &m, WeaveParams { mu: 0.2, k: 2 }, &mut rng).unwrap();
        let phi_guest = cheeger_bruteforce(&ew.weave).unwrap().phi;
        let phi_host = cheeger_bruteforce(ew.embedding.host()).unwrap().phi;
        assert!(phi_host + 1e-9 >= embedding_expansion_transfer(&ew.embedding, phi_guest));
    }
}
