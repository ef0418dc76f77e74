use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedMultigraph};

/// Edge-disjoint Hamiltonian cycles covering `K_n` for odd `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    n: usize,
    cycles: Vec<Vec<VertexId>>,
}

impl CycleDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Vertex order of each cycle; the closing edge back to the first
    /// vertex is implied.
    pub fn cycles(&self) -> &[Vec<VertexId>] {
        &self.cycles
    }

    pub fn cycle_edges(&self, i: usize) -> Vec<(VertexId, VertexId)> {
        let c = &self.cycles[i];
        (0..c.len()).map(|k| (c[k], c[(k + 1) % c.len()])).collect()
    }

    pub fn as_graph(&self, i: usize) -> WeightedMultigraph {
        WeightedMultigraph::from_pairs(self.n, self.cycle_edges(i)).expect("in range")
    }

    pub fn union_of(&self, indices: &[usize]) -> WeightedMultigraph {
        let mut g = WeightedMultigraph::new(self.n);
        for &i in indices {
            for (u, v) in self.cycle_edges(i) {
                g.add_edge(u, v, 1.0).expect("in range");
            }
        }
        g
    }

    /// True when every cycle is Hamiltonian and together they use each edge
    /// of `K_n` exactly once.
    pub fn verify(&self) -> bool {
        let n = self.n;
        let mut used = vec![false; n * n];
        for c in &self.cycles {
            let mut seen = vec![false; n];
            if c.len() != n || c.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
                return false;
            }
        }
        for i in 0..self.cycles.len() {
            for (u, v) in self.cycle_edges(i) {
                let k = u.min(v) * n + u.max(v);
                if std::mem::replace(&mut used[k], true) {
                    return false;
                }
            }
        }
        self.cycles.len() == (n - 1) / 2
    }

    pub fn to_blocks(&self) -> String {
        let graphs: Vec<_> = (0..self.len()).map(|i| self.as_graph(i)).collect();
        crate::io::write_blocks(&graphs)
    }
}

/// Walecki's construction. With `n = 2m + 1`, vertex `n - 1` is the hub and
/// the rest sit on a circle `Z_{2m}`; cycle `i` runs
/// `hub, i, i+1, i-1, i+2, i-2, ..., i+m` and back to the hub.
pub fn walecki_decomposition(n: usize) -> Result<CycleDecomposition> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::EvenOrder(n));
    }
    let m = (n - 1) / 2;
    let ring = 2 * m;
    let hub = n - 1;
    let cycles = (0..m)
        .map(|i| {
            let mut c = Vec::with_capacity(n);
            c.push(hub);
            c.push(i);
            for k in 1..m {
                c.push((i + k) % ring);
                c.push((i + ring - k) % ring);
            }
            c.push((i + m) % ring);
            c
        })
        .collect();
    Ok(CycleDecomposition { n, cycles })
}
