use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CycleDecomposition, MatchingDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Bisection, VertexId, WeightedMultigraph};

/// Independent sampling attempts before a cover search gives up.
pub const COVER_RETRY_CAP: usize = 100;

/// One of the two sides of a bisection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    S,
    T,
}

/// Regular spanning subgraphs with a common degree (1 for matchings, 2 for
/// Hamiltonian cycles), stored as partner lists.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementFamily {
    n: usize,
    element_degree: usize,
    /// `partners[e][v * element_degree + j]`.
    partners: Vec<Vec<VertexId>>,
}

impl ElementFamily {
    pub fn from_matchings(d: &MatchingDecomposition) -> Self {
        Self::from_edge_lists(d.n(), 1, d.matchings().iter().cloned())
    }

    pub fn from_cycles(d: &CycleDecomposition) -> Self {
        Self::from_edge_lists(d.n(), 2, (0..d.len()).map(|i| d.cycle_edges(i)))
    }

    fn from_edge_lists<I>(n: usize, element_degree: usize, lists: I) -> Self
    where
        I: IntoIterator<Item = Vec<(VertexId, VertexId)>>,
    {
        let partners = lists
            .into_iter()
            .map(|edges| {
                let mut fill = vec![0usize; n];
                let mut p = vec![usize::MAX; n * element_degree];
                for (u, v) in edges {
                    for (a, b) in [(u, v), (v, u)] {
                        p[a * element_degree + fill[a]] = b;
                        fill[a] += 1;
                    }
                }
                debug_assert!(fill.iter().all(|&f| f == element_degree));
                p
            })
            .collect();
        ElementFamily {
            n,
            element_degree,
            partners,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.partners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partners.is_empty()
    }

    pub fn element_degree(&self) -> usize {
        self.element_degree
    }

    pub fn partners(&self, e: usize, v: VertexId) -> &[VertexId] {
        let k = self.element_degree;
        &self.partners[e][v * k..(v + 1) * k]
    }

    /// Edges of element `e`, each listed once.
    pub fn edges(&self, e: usize) -> Vec<(VertexId, VertexId)> {
        (0..self.n)
            .flat_map(|v| self.partners(e, v).iter().map(move |&x| (v, x)))
            .filter(|&(v, x)| v < x)
            .collect()
    }

    /// Sum of the chosen elements, `element_degree · indices.len()`-regular.
    /// Distinct elements are edge-disjoint, so for distinct indices this is
    /// also their union.
    pub fn union_graph(&self, indices: &[usize]) -> WeightedMultigraph {
        let mut g = WeightedMultigraph::new(self.n);
        for &e in indices {
            for (u, v) in self.edges(e) {
                g.add_edge(u, v, 1.0).expect("in range");
            }
        }
        g
    }

    /// Whether element `e` has an edge from `v` into `target`.
    pub fn crosses(&self, e: usize, v: VertexId, target: &[bool]) -> bool {
        self.partners(e, v).iter().any(|&x| target[x])
    }
}

/// `membership[e][i]`: element `e` has an edge from `universe[i]` into
/// `target`.
pub fn crossing_membership(
    family: &ElementFamily,
    universe: &[VertexId],
    target: &[bool],
) -> Vec<Vec<bool>> {
    (0..family.len())
        .map(|e| universe.iter().map(|&v| family.crosses(e, v, target)).collect())
        .collect()
}

/// Smallest fraction of the family covering any single universe vertex.
pub fn measured_density(family: &ElementFamily, universe: &[VertexId], target: &[bool]) -> f64 {
    if family.is_empty() {
        return 0.0;
    }
    universe
        .iter()
        .map(|&v| (0..family.len()).filter(|&e| family.crosses(e, v, target)).count())
        .min()
        .map_or(1.0, |c| c as f64 / family.len() as f64)
}

/// `⌈(1.1/μ)·ln n⌉`, at least 1.
pub fn set_cover_sample_size(n: usize, mu: f64) -> usize {
    let q = (1.1 / mu * (n.max(1) as f64).ln()).ceil();
    (q as usize).max(1)
}

/// Random cover of `universe_size` items by sets `0..family_size`, where
/// `membership(item, set)` says whether `set` contains `item`.
///
/// Each attempt draws `set_cover_sample_size(universe_size, mu)` indices
/// with replacement and keeps the distinct ones; an attempt counts only if
/// the check over every item passes. Returns sorted indices.
pub fn dense_set_cover<R, F>(
    universe_size: usize,
    membership: F,
    family_size: usize,
    mu: f64,
    rng: &mut R,
) -> Result<Vec<usize>>
where
    R: Rng + ?Sized,
    F: Fn(usize, usize) -> bool,
{
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::InvalidParameter(format!("density {mu} outside (0, 1]")));
    }
    if universe_size == 0 {
        return Ok(Vec::new());
    }
    if family_size == 0 {
        return Err(Error::CoverNotFound { attempts: 0 });
    }
    let q = set_cover_sample_size(universe_size, mu);
    for _ in 0..COVER_RETRY_CAP {
        let mut picked: Vec<usize> = (0..q).map(|_| rng.random_range(0..family_size)).collect();
        picked.sort_unstable();
        picked.dedup();
        if (0..universe_size).all(|i| picked.iter().any(|&s| membership(i, s))) {
            return Ok(picked);
        }
    }
    Err(Error::CoverNotFound {
        attempts: COVER_RETRY_CAP,
    })
}

/// Elements giving every vertex of `universe` an edge into `target`.
pub fn cover_vertices<R: Rng + ?Sized>(
    universe: &[VertexId],
    target: &[bool],
    family: &ElementFamily,
    mu: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let membership = crossing_membership(family, universe, target);
    dense_set_cover(universe.len(), |i, e| membership[e][i], family.len(), mu, rng)
}

/// Elements giving every vertex on `side` of `b` an edge to the other side.
pub fn cover_side<R: Rng + ?Sized>(
    b: &Bisection,
    side: Side,
    family: &ElementFamily,
    mu: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if b.n() != family.n() {
        return Err(Error::VertexCountMismatch(b.n(), family.n()));
    }
    let (universe, target): (Vec<VertexId>, Vec<bool>) = match side {
        Side::S => (b.side_s().to_vec(), (0..b.n()).map(|v| !b.in_s(v)).collect()),
        Side::T => (b.side_t().to_vec(), (0..b.n()).map(|v| b.in_s(v)).collect()),
    };
    cover_vertices(&universe, &target, family, mu, rng)
}
