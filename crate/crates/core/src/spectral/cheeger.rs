use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedMultigraph};
use crate::par::Parallelism;

pub const CHEEGER_MAX_N: usize = 22;

/// Exact edge expansion and a set attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cheeger {
    pub phi: f64,
    pub witness: Vec<VertexId>,
}

pub fn cheeger_bruteforce(g: &WeightedMultigraph) -> Result<Cheeger> {
    cheeger_bruteforce_with(g, Parallelism::default())
}

/// `min w(S, S̄)/|S|` over `0 < |S| <= n/2`, by enumerating every subset.
///
/// The subsets are split into chunks on the high bits; each chunk walks its
/// low bits in Gray-code order, updating the cut in `O(n)` per flip. The
/// chunking is the same in sequential and parallel mode.
pub fn cheeger_bruteforce_with(g: &WeightedMultigraph, par: Parallelism) -> Result<Cheeger> {
    let n = g.n();
    if n > CHEEGER_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: CHEEGER_MAX_N,
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter(
            "edge expansion needs at least two vertices".into(),
        ));
    }
    let mut w = vec![0.0; n * n];
    for e in g.edges().filter(|e| !e.is_loop()) {
        w[e.u * n + e.v] += e.total();
        w[e.v * n + e.u] += e.total();
    }
    let deg: Vec<f64> = (0..n).map(|x| w[x * n..(x + 1) * n].iter().sum()).collect();
    let high_bits = n.min(6);
    let low_bits = n - high_bits;
    let half = n / 2;

    let best = par.map_range(1 << high_bits, |chunk| {
        let base = (chunk as u64) << low_bits;
        let mut mask = base;
        // Weight from each vertex into the current set.
        let mut into = vec![0.0; n];
        let mut size = 0usize;
        let mut cut = 0.0;
        for x in (0..n).filter(|&x| mask >> x & 1 == 1) {
            cut += deg[x] - 2.0 * into[x];
            for y in 0..n {
                into[y] += w[y * n + x];
            }
            size += 1;
        }
        let mut best = (f64::INFINITY, u64::MAX);
        let mut consider = |cut: f64, size: usize, mask: u64| {
            if size > 0 && size <= half {
                let ratio = cut / size as f64;
                if ratio < best.0 || (ratio == best.0 && mask < best.1) {
                    best = (ratio, mask);
                }
            }
        };
        consider(cut, size, mask);
        for step in 1u64..(1u64 << low_bits) {
            let x = step.trailing_zeros() as usize;
            if mask >> x & 1 == 0 {
                cut += deg[x] - 2.0 * into[x];
                mask |= 1 << x;
                size += 1;
                for y in 0..n {
                    into[y] += w[y * n + x];
                }
            } else {
                mask &= !(1 << x);
                size -= 1;
                for y in 0..n {
                    into[y] -= w[y * n + x];
                }
                cut -= deg[x] - 2.0 * into[x];
            }
            consider(cut, size, mask);
        }
        best
    });

    let (_, mask) = best
        .into_iter()
        .fold((f64::INFINITY, u64::MAX), |a, b| {
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        });
    let witness: Vec<VertexId> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
    let phi = g.cut_weight(&witness)? / witness.len() as f64;
    Ok(Cheeger { phi, witness })
}
