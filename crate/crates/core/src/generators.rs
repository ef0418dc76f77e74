//! Graph families used by the pipelines, tests and CLI.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedMultigraph};

const RESAMPLE_CAP: usize = 100;

pub fn complete(n: usize) -> WeightedMultigraph {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    WeightedMultigraph::from_pairs(n, pairs).expect("vertices in range")
}

/// Circulant graph: `i ~ i ± o (mod n)` for each offset `o`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<WeightedMultigraph> {
    let mut pairs = HashSet::new();
    for &o in offsets {
        if o == 0 || o >= n {
            return Err(Error::InvalidParameter(format!(
                "circulant offset {o} out of range for n = {n}"
            )));
        }
        for i in 0..n {
            let j = (i + o) % n;
            pairs.insert((i.min(j), i.max(j)));
        }
    }
    let mut pairs: Vec<_> = pairs.into_iter().collect();
    pairs.sort_unstable();
    WeightedMultigraph::from_pairs(n, pairs)
}

pub fn hypercube(dim: u32) -> WeightedMultigraph {
    let n = 1usize << dim;
    let pairs = (0..n).flat_map(|u| (0..dim).map(move |b| (u, u ^ (1 << b))).filter(|(u, v)| u < v));
    WeightedMultigraph::from_pairs(n, pairs).expect("vertices in range")
}

pub fn petersen() -> WeightedMultigraph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    WeightedMultigraph::from_pairs(10, outer.chain(spokes).chain(inner)).expect("vertices in range")
}

/// Simple `d`-regular graph on `n` vertices.
///
/// Built from `⌊d/2⌋` random permutations, each contributing the edges
/// `{x, σ(x)}`, plus one random perfect matching when `d` is odd. A
/// permutation whose edges collide with earlier ones (or with each other) is
/// repaired by random transpositions; if repair stalls it is redrawn, up to
/// 100 times. When `d > (n - 1) / 2` the result is the complement of a
/// random `(n - 1 - d)`-regular graph built the same way.
pub fn random_regular<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<WeightedMultigraph> {
    if d >= n || !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "no simple {d}-regular graph on {n} vertices"
        )));
    }
    if 2 * d > n - 1 {
        let sparse = random_regular(n, n - 1 - d, rng)?;
        let pairs = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| sparse.multiplicity_between(u, v) == 0);
        return WeightedMultigraph::from_pairs(n, pairs);
    }
    for _ in 0..RESAMPLE_CAP {
        if let Some(g) = try_random_regular(n, d, rng) {
            debug_assert_eq!(g.regular_unweighted_degree(), Some(d));
            return Ok(g);
        }
    }
    Err(Error::InvalidParameter(format!(
        "random {d}-regular graph on {n} vertices not found after {RESAMPLE_CAP} attempts"
    )))
}

fn try_random_regular<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Option<WeightedMultigraph> {
    let mut used: HashSet<(VertexId, VertexId)> = HashSet::new();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    for _ in 0..d / 2 {
        let sigma = repaired_permutation(n, rng, |sigma: &[usize], x: usize| {
            let y = sigma[x];
            y == x || sigma[y] == x || used.contains(&key(x, y))
        })?;
        for (x, &y) in sigma.iter().enumerate() {
            used.insert(key(x, y));
        }
    }
    if d % 2 == 1 {
        // Pair positions (2i, 2i+1) of a shuffled vertex order.
        let order = repaired_permutation(n, rng, |order: &[usize], pos: usize| {
            let mate = pos ^ 1;
            used.contains(&key(order[pos], order[mate]))
        })?;
        for pair in order.chunks(2) {
            used.insert(key(pair[0], pair[1]));
        }
    }
    let mut pairs: Vec<_> = used.into_iter().collect();
    pairs.sort_unstable();
    WeightedMultigraph::from_pairs(n, pairs).ok()
}

/// Random permutation with no position flagged by `bad`, found by repeated
/// random transpositions at flagged positions.
fn repaired_permutation<R, F>(n: usize, rng: &mut R, bad: F) -> Option<Vec<usize>>
where
    R: Rng + ?Sized,
    F: Fn(&[usize], usize) -> bool,
{
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.shuffle(rng);
    let budget = 200 * n + 1000;
    for _ in 0..budget {
        let conflicts: Vec<usize> = (0..n).filter(|&x| bad(&sigma, x)).collect();
        let Some(&x) = conflicts.get(rng.random_range(0..conflicts.len().max(1))) else {
            return Some(sigma);
        };
        let y = rng.random_range(0..n);
        sigma.swap(x, y);
    }
    None
}

/// Simple `d`-regular bipartite graph with sides `0..n` and `n..2n`, as the
/// union of `d` edge-disjoint random perfect matchings.
pub fn random_regular_bipartite<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    rng: &mut R,
) -> Result<WeightedMultigraph> {
    Ok(random_bipartite_matchings(n, d, rng)?
        .into_iter()
        .fold(WeightedMultigraph::new(2 * n), |mut g, m| {
            for (i, j) in m {
                g.add_edge(i, j, 1.0).expect("in range");
            }
            g
        }))
}

/// `d` pairwise edge-disjoint perfect matchings between `0..n` and `n..2n`.
pub fn random_bipartite_matchings<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    rng: &mut R,
) -> Result<Vec<Vec<(VertexId, VertexId)>>> {
    if d > n {
        return Err(Error::InvalidParameter(format!(
            "no simple {d}-regular bipartite graph with sides of size {n}"
        )));
    }
    'attempt: for _ in 0..RESAMPLE_CAP {
        let mut used: HashSet<(VertexId, VertexId)> = HashSet::new();
        let mut matchings = Vec::with_capacity(d);
        for _ in 0..d {
            let Some(sigma) =
                repaired_permutation(n, rng, |s: &[usize], x: usize| used.contains(&(x, s[x])))
            else {
                continue 'attempt;
            };
            let m: Vec<_> = sigma.iter().enumerate().map(|(i, &j)| (i, j)).collect();
            used.extend(m.iter().copied());
            matchings.push(m.into_iter().map(|(i, j)| (i, n + j)).collect());
        }
        return Ok(matchings);
    }
    Err(Error::InvalidParameter(format!(
        "random {d}-regular bipartite graph not found after {RESAMPLE_CAP} attempts"
    )))
}

/// Connected Erdős–Rényi graph with weights uniform in `[w_lo, w_hi)`,
/// redrawn until connected.
pub fn random_connected_weighted<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    w_lo: f64,
    w_hi: f64,
    rng: &mut R,
) -> Result<WeightedMultigraph> {
    for _ in 0..10 * RESAMPLE_CAP {
        let mut g = WeightedMultigraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    g.add_edge(u, v, rng.random_range(w_lo..w_hi))?;
                }
            }
        }
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::InvalidParameter(format!(
        "G({n}, {p}) stayed disconnected"
    )))
}
