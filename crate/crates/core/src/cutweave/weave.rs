use rand::seq::SliceRandom;
use rand::Rng;

use std::collections::VecDeque;

use super::embed::{embedding_expansion_transfer, Embedding, GuestEdge};
use super::game::{cut_player_bisection, Certificate, GameOutcome, GameState};
use crate::decompose::{cover_side, measured_density, ElementFamily, Side, COVER_RETRY_CAP};
use crate::error::{Error, Result};
use crate::graph::{Bisection, VertexId, WeightedMultigraph};
use crate::par::Parallelism;

/// Weave player answering with `r / element_degree` distinct elements of a
/// decomposition: a crossing cover of each side, thinned to fit the budget
/// if needed and padded with random unused elements. Every answer is the same size, so all weaves are `r`-regular.
#[derive(Debug, Clone, Copy)]
pub struct CoverWeavePlayer<'a> {
    family: &'a ElementFamily,
    r: usize,
}

impl<'a> CoverWeavePlayer<'a> {
    pub fn new(family: &'a ElementFamily, r: usize) -> Result<Self> {
        let k = family.element_degree();
        if r == 0 || !r.is_multiple_of(k) || r / k > family.len() {
            return Err(Error::InvalidParameter(format!(
                "r = {r} is not a positive multiple of {k} using at most {} elements",
                family.len()
            )));
        }
        Ok(CoverWeavePlayer { family, r })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Element indices forming the answer to `b`, sorted.
    pub fn answer<R: Rng + ?Sized>(&self, b: &Bisection, rng: &mut R) -> Result<Vec<usize>> {
        let budget = self.r / self.family.element_degree();
        let not_s: Vec<bool> = b.mask().iter().map(|&x| !x).collect();
        let mu_s = measured_density(self.family, b.side_s(), &not_s);
        let mu_t = measured_density(self.family, b.side_t(), b.mask());
        if mu_s == 0.0 || mu_t == 0.0 {
            return Err(Error::WeavePlayer(
                "some vertex has no crossing edge in any element".into(),
            ));
        }
        for _ in 0..COVER_RETRY_CAP {
            let mut chosen = cover_side(b, Side::S, self.family, mu_s, rng)?;
            chosen.extend(cover_side(b, Side::T, self.family, mu_t, rng)?);
            chosen.sort_unstable();
            chosen.dedup();
            if chosen.len() > budget {
                chosen.shuffle(rng);
                chosen = self.prune(b, chosen);
                chosen.sort_unstable();
            }
            if chosen.len() > budget {
                continue;
            }
            let mut unused: Vec<usize> = (0..self.family.len())
                .filter(|e| chosen.binary_search(e).is_err())
                .collect();
            unused.shuffle(rng);
            chosen.extend(unused.into_iter().take(budget - chosen.len()));
            chosen.sort_unstable();
            return Ok(chosen);
        }
        Err(Error::WeavePlayer(format!(
            "no crossing cover within {budget} elements after {COVER_RETRY_CAP} attempts"
        )))
    }

    /// Drops elements, in the given order, whose removal keeps every vertex
    /// crossing.
    fn prune(&self, b: &Bisection, chosen: Vec<usize>) -> Vec<usize> {
        let n = self.family.n();
        let crossing = |e: usize, v: usize| {
            self.family.partners(e, v).iter().filter(|&&x| b.in_s(x) != b.in_s(v)).count()
        };
        let mut count = vec![0usize; n];
        for &e in &chosen {
            for (v, c) in count.iter_mut().enumerate() {
                *c += crossing(e, v);
            }
        }
        let mut kept = Vec::with_capacity(chosen.len());
        for e in chosen {
            if (0..n).all(|v| count[v] > crossing(e, v)) {
                for (v, c) in count.iter_mut().enumerate() {
                    *c -= crossing(e, v);
                }
            } else {
                kept.push(e);
            }
        }
        kept
    }

    pub fn weave<R: Rng + ?Sized>(&self, b: &Bisection, rng: &mut R) -> Result<WeightedMultigraph> {
        let g = self.family.union_graph(&self.answer(b, rng)?);
        if !g.is_weave(b) {
            return Err(Error::NotAWeave);
        }
        Ok(g)
    }
}

/// Plays the cut-weave game with the random-projection cut player and the
/// cover weave player until `Ψ < 1/(4n²)` or `round_cap` rounds.
/// Exhausting the cap is not an error; the outcome then has no certificate.
pub fn play_game<R: Rng + ?Sized>(
    family: &ElementFamily,
    r: usize,
    round_cap: usize,
    rng: &mut R,
) -> Result<GameOutcome> {
    play_game_with(family, r, round_cap, Parallelism::default(), rng)
}

pub fn play_game_with<R: Rng + ?Sized>(
    family: &ElementFamily,
    r: usize,
    round_cap: usize,
    par: Parallelism,
    rng: &mut R,
) -> Result<GameOutcome> {
    let player = CoverWeavePlayer::new(family, r)?;
    let mut state = GameState::with_parallelism(family.n(), round_cap, par);
    while !state.reached_threshold() && state.round() < round_cap {
        let (b, _, _) = cut_player_bisection(&state, rng);
        let weave = player.weave(&b, rng)?;
        state.game_step(&b, &weave, r)?;
    }
    let certificate = Certificate::from_state(&state);
    Ok(GameOutcome { state, certificate })
}

/// Weave player that ignores any decomposition and answers with `r`
/// perfect matchings between the two sides, each pair routed along a
/// shortest path of `host`. Every vertex of `S` is matched, in random order,
/// to the nearest unmatched vertex of `T`.
#[derive(Debug, Clone)]
pub struct RoutedMatchingPlayer<'a> {
    host: &'a WeightedMultigraph,
    adj: Vec<Vec<VertexId>>,
    r: usize,
}

impl<'a> RoutedMatchingPlayer<'a> {
    pub fn new(host: &'a WeightedMultigraph, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("r must be positive".into()));
        }
        if !host.n().is_multiple_of(2) {
            return Err(Error::InvalidBisection(format!("odd vertex count {}", host.n())));
        }
        if !host.is_connected() {
            return Err(Error::Disconnected);
        }
        let adj = host
            .adjacency()
            .into_iter()
            .map(|row| row.into_iter().map(|(v, _)| v).collect())
            .collect();
        Ok(RoutedMatchingPlayer { host, adj, r })
    }

    pub fn host(&self) -> &WeightedMultigraph {
        self.host
    }

    /// The `r`-regular weave and the host routes of its edges.
    pub fn answer<R: Rng + ?Sized>(
        &self,
        b: &Bisection,
        rng: &mut R,
    ) -> Result<(WeightedMultigraph, Vec<GuestEdge>)> {
        let n = self.host.n();
        if b.n() != n {
            return Err(Error::VertexCountMismatch(b.n(), n));
        }
        let mut weave = WeightedMultigraph::new(n);
        let mut routes = Vec::with_capacity(self.r * n / 2);
        for _ in 0..self.r {
            let mut taken = vec![false; n];
            let mut order: Vec<VertexId> = b.side_s().to_vec();
            order.shuffle(rng);
            for s in order {
                let path = self.nearest_free(s, b, &taken);
                let t = *path.last().expect("path ends at a vertex of T");
                taken[t] = true;
                weave.add_edge(s, t, 1.0)?;
                routes.push(GuestEdge { u: s, v: t, path });
            }
        }
        Ok((weave, routes))
    }

    /// Shortest path from `s` to the closest vertex of `T` not yet taken.
    fn nearest_free(&self, s: VertexId, b: &Bisection, taken: &[bool]) -> Vec<VertexId> {
        let n = self.host.n();
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if !b.in_s(x) && !taken[x] {
                let mut path = vec![x];
                let mut y = x;
                while y != s {
                    y = parent[y];
                    path.push(y);
                }
                path.reverse();
                return path;
            }
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        unreachable!("connected host with a free vertex in T")
    }
}

/// Outcome of a game whose weaves were routed through a host graph.
#[derive(Debug, Clone)]
pub struct RoutedOutcome {
    pub game: GameOutcome,
    /// Every weave edge of every round, routed in the host.
    pub embedding: Embedding,
    /// Lower bound on the host's expansion: certified expansion of the sum
    /// graph, divided by congestion, times the lightest host weight.
    pub host_bound: Option<f64>,
}

/// Plays the game with [`RoutedMatchingPlayer`], so a certificate for the
/// sum of the weaves transfers to `host` through the recorded routes.
pub fn play_routed_game<R: Rng + ?Sized>(
    host: &WeightedMultigraph,
    r: usize,
    round_cap: usize,
    par: Parallelism,
    rng: &mut R,
) -> Result<RoutedOutcome> {
    let player = RoutedMatchingPlayer::new(host, r)?;
    let mut state = GameState::with_parallelism(host.n(), round_cap, par);
    let mut embedding = Embedding::new(host.clone());
    while !state.reached_threshold() && state.round() < round_cap {
        let (b, _, _) = cut_player_bisection(&state, rng);
        let (weave, routes) = player.answer(&b, rng)?;
        state.game_step(&b, &weave, r)?;
        routes.into_iter().for_each(|e| embedding.push(e));
    }
    let certificate = Certificate::from_state(&state);
    let w_min = host.edges().map(|e| e.w).fold(f64::INFINITY, f64::min);
    let host_bound = certificate
        .as_ref()
        .map(|c| w_min * embedding_expansion_transfer(&embedding, c.sum_bound));
    Ok(RoutedOutcome {
        game: GameOutcome { state, certificate },
        embedding,
        host_bound,
    })
}
