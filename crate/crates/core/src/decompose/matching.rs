use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedMultigraph};

/// Maximum-cardinality matching state over local indices: left `0..nl`,
/// right `0..nr`, `adj[l]` lists right neighbours (one entry per edge copy).
struct Matcher<'a> {
    adj: &'a [Vec<usize>],
    mate_l: Vec<Option<usize>>,
    mate_r: Vec<Option<usize>>,
}

impl<'a> Matcher<'a> {
    fn new(adj: &'a [Vec<usize>], nr: usize) -> Self {
        Matcher {
            adj,
            mate_l: vec![None; adj.len()],
            mate_r: vec![None; nr],
        }
    }

    /// Greedy pass in vertex order, then one breadth-first augmenting-path
    /// search per free left vertex, again in vertex order. On failure
    /// returns the left vertices reachable from the stuck vertex by
    /// alternating paths; their neighbourhood is strictly smaller than they
    /// are.
    fn run(mut self) -> std::result::Result<Vec<usize>, Vec<usize>> {
        for l in 0..self.adj.len() {
            if let Some(&r) = self.adj[l].iter().find(|&&r| self.mate_r[r].is_none()) {
                self.mate_l[l] = Some(r);
                self.mate_r[r] = Some(l);
            }
        }
        let mut parent = vec![usize::MAX; self.mate_r.len()];
        let mut seen_left = vec![false; self.adj.len()];
        for l in 0..self.adj.len() {
            if self.mate_l[l].is_none() {
                self.augment(l, &mut parent, &mut seen_left)?;
            }
        }
        Ok(self.mate_l.into_iter().map(|m| m.expect("perfect")).collect())
    }

    fn augment(
        &mut self,
        root: usize,
        parent: &mut [usize],
        seen_left: &mut [bool],
    ) -> std::result::Result<(), Vec<usize>> {
        parent.fill(usize::MAX);
        seen_left.fill(false);
        seen_left[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &r in &self.adj[x] {
                if parent[r] != usize::MAX {
                    continue;
                }
                parent[r] = x;
                match self.mate_r[r] {
                    None => {
                        let mut r = r;
                        loop {
                            let l = parent[r];
                            let prev = self.mate_l[l];
                            self.mate_l[l] = Some(r);
                            self.mate_r[r] = Some(l);
                            match prev {
                                Some(p) => r = p,
                                None => return Ok(()),
                            }
                        }
                    }
                    Some(y) => {
                        if !seen_left[y] {
                            seen_left[y] = true;
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
        Err((0..self.adj.len()).filter(|&l| seen_left[l]).collect())
    }
}

struct BipartiteSides {
    left: Vec<VertexId>,
    right: Vec<VertexId>,
    local: Vec<usize>,
}

fn sides(g: &WeightedMultigraph, left: &[VertexId]) -> Result<BipartiteSides> {
    let n = g.n();
    let mut is_left = vec![false; n];
    for &v in left {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        is_left[v] = true;
    }
    let left: Vec<VertexId> = (0..n).filter(|&v| is_left[v]).collect();
    let right: Vec<VertexId> = (0..n).filter(|&v| !is_left[v]).collect();
    if left.len() != right.len() {
        return Err(Error::InvalidParameter(format!(
            "sides of size {} and {} cannot be perfectly matched",
            left.len(),
            right.len()
        )));
    }
    if g.edges().any(|e| is_left[e.u] == is_left[e.v]) {
        return Err(Error::NotBipartite);
    }
    let mut local = vec![0; n];
    for (i, &v) in left.iter().enumerate() {
        local[v] = i;
    }
    for (i, &v) in right.iter().enumerate() {
        local[v] = i;
    }
    Ok(BipartiteSides { left, right, local })
}

fn left_adjacency(g: &WeightedMultigraph, s: &BipartiteSides) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut is_left = vec![false; n];
    for &v in &s.left {
        is_left[v] = true;
    }
    let mut adj = vec![Vec::new(); s.left.len()];
    for e in g.edges() {
        let (l, r) = if is_left[e.u] { (e.u, e.v) } else { (e.v, e.u) };
        for _ in 0..e.mult {
            adj[s.local[l]].push(s.local[r]);
        }
    }
    adj
}

/// A perfect matching of the bipartite graph `g` with parts `left` and its
/// complement, as `(left, right)` pairs sorted by left vertex.
pub fn perfect_matching(
    g: &WeightedMultigraph,
    left: &[VertexId],
) -> Result<Vec<(VertexId, VertexId)>> {
    let s = sides(g, left)?;
    let adj = left_adjacency(g, &s);
    match Matcher::new(&adj, s.right.len()).run() {
        Ok(mate) => Ok(mate
            .into_iter()
            .enumerate()
            .map(|(l, r)| (s.left[l], s.right[r]))
            .collect()),
        Err(witness) => Err(Error::HallViolation {
            witness: witness.into_iter().map(|l| s.left[l]).collect(),
        }),
    }
}

/// Disjoint perfect matchings partitioning the edges of a regular bipartite
/// graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchingDecomposition {
    n: usize,
    left: Vec<VertexId>,
    matchings: Vec<Vec<(VertexId, VertexId)>>,
}

/// Result of checking a decomposition against its base graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecompositionAudit {
    pub count: usize,
    pub expected_count: usize,
    pub all_perfect: bool,
    pub pairwise_disjoint: bool,
    pub exact_cover: bool,
}

impl DecompositionAudit {
    pub fn passed(&self) -> bool {
        self.count == self.expected_count && self.all_perfect && self.pairwise_disjoint && self.exact_cover
    }
}

impl MatchingDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    pub fn left(&self) -> &[VertexId] {
        &self.left
    }

    pub fn matchings(&self) -> &[Vec<(VertexId, VertexId)>] {
        &self.matchings
    }

    pub fn matching(&self, i: usize) -> &[(VertexId, VertexId)] {
        &self.matchings[i]
    }

    pub fn as_graph(&self, i: usize) -> WeightedMultigraph {
        WeightedMultigraph::from_pairs(self.n, self.matchings[i].iter().copied()).expect("in range")
    }

    /// Sum of the chosen matchings; with distinct indices this is also
    /// their union.
    pub fn union_of(&self, indices: &[usize]) -> WeightedMultigraph {
        let mut g = WeightedMultigraph::new(self.n);
        for &i in indices {
            for &(u, v) in &self.matchings[i] {
                g.add_edge(u, v, 1.0).expect("in range");
            }
        }
        g
    }

    pub fn audit(&self, g: &WeightedMultigraph) -> DecompositionAudit {
        let expected_count = g.regular_unweighted_degree().unwrap_or(usize::MAX);
        let half = self.n / 2;
        let all_perfect = self.n == g.n()
            && self.matchings.iter().all(|m| {
                let mut hit = vec![false; self.n];
                m.len() == half
                    && m.iter().all(|&(u, v)| {
                        let fresh = u != v && !hit[u] && !hit[v];
                        hit[u] = true;
                        hit[v] = true;
                        fresh
                    })
            });
        let mut multiset: std::collections::BTreeMap<(VertexId, VertexId), u32> = Default::default();
        for m in &self.matchings {
            for &(u, v) in m {
                *multiset.entry((u.min(v), u.max(v))).or_insert(0) += 1;
            }
        }
        let pairwise_disjoint = multiset
            .iter()
            .all(|(&(u, v), &c)| c <= g.multiplicity_between(u, v).max(1));
        let exact_cover = multiset.len() == g.pair_count()
            && multiset
                .iter()
                .all(|(&(u, v), &c)| c == g.multiplicity_between(u, v));
        DecompositionAudit {
            count: self.matchings.len(),
            expected_count,
            all_perfect,
            pairwise_disjoint,
            exact_cover,
        }
    }

    pub fn to_blocks(&self) -> String {
        let graphs: Vec<_> = (0..self.len()).map(|i| self.as_graph(i)).collect();
        crate::io::write_blocks(&graphs)
    }
}

/// Splits a `D`-regular bipartite unit-weight graph into `D` disjoint
/// perfect matchings by extracting one matching at a time; removing a
/// perfect matching leaves a `(D-1)`-regular bipartite graph, which again
/// has one.
pub fn matching_decomposition(g: &WeightedMultigraph) -> Result<MatchingDecomposition> {
    if let Some(e) = g.edges().find(|e| e.w != 1.0) {
        return Err(Error::InvalidWeight(e.w));
    }
    let degree = g
        .regular_unweighted_degree()
        .ok_or_else(|| Error::NotRegular("unweighted degrees differ".into()))?;
    let coloring = g.two_coloring().ok_or(Error::NotBipartite)?;
    let left: Vec<VertexId> = (0..g.n()).filter(|&v| coloring[v] == 0).collect();
    let s = sides(g, &left)?;
    let mut adj = left_adjacency(g, &s);
    let mut matchings = Vec::with_capacity(degree);
    for _ in 0..degree {
        let mate = Matcher::new(&adj, s.right.len())
            .run()
            .map_err(|w| Error::HallViolation {
                witness: w.into_iter().map(|l| s.left[l]).collect(),
            })?;
        for (l, &r) in mate.iter().enumerate() {
            let pos = adj[l].iter().position(|&x| x == r).expect("matched edge exists");
            adj[l].swap_remove(pos);
        }
        matchings.push(
            mate.into_iter()
                .enumerate()
                .map(|(l, r)| (s.left[l], s.right[r]))
                .collect(),
        );
    }
    Ok(MatchingDecomposition {
        n: g.n(),
        left: s.left,
        matchings,
    })
}
