//! Weighted undirected multigraphs and the structural operations on them.
//!
//! Edges are stored as multiplicity counters keyed by canonical
//! `(min, max, weight)` triples, so parallel edges of equal weight collapse
//! into one record. A self-loop of weight `w` contributes `2w` to the degree
//! of its vertex.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct EdgeKey {
    u: VertexId,
    v: VertexId,
    // Positive finite f64 bit patterns order like the values they encode.
    w: u64,
}

impl EdgeKey {
    fn new(a: VertexId, b: VertexId, w: f64) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        EdgeKey { u, v, w: w.to_bits() }
    }
}

/// One edge record: endpoints in canonical order, weight, multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: f64,
    pub mult: u32,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// Weight times multiplicity.
    pub fn total(&self) -> f64 {
        self.w * self.mult as f64
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedMultigraph {
    n: usize,
    edges: BTreeMap<EdgeKey, u32>,
}

impl WeightedMultigraph {
    pub fn new(n: usize) -> Self {
        WeightedMultigraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    /// Builds a graph from `(u, v, w)` triples, each with multiplicity one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let mut g = WeightedMultigraph::new(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Unit-weight graph from vertex pairs.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        Self::from_edges(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, w: f64) -> Result<()> {
        self.add_edge_mult(u, v, w, 1)
    }

    pub fn add_edge_mult(&mut self, u: VertexId, v: VertexId, w: f64, mult: u32) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::InvalidWeight(w));
        }
        // Zero-weight edges are absent by definition.
        if w == 0.0 || mult == 0 {
            return Ok(());
        }
        *self.edges.entry(EdgeKey::new(u, v, w)).or_insert(0) += mult;
        Ok(())
    }

    /// Removes one copy of the edge `(u, v)` with weight `w`. Returns whether
    /// a copy was present.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId, w: f64) -> bool {
        let key = EdgeKey::new(u, v, w);
        match self.edges.get_mut(&key) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.edges.remove(&key);
                true
            }
            None => false,
        }
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|(k, &mult)| Edge {
            u: k.u,
            v: k.v,
            w: f64::from_bits(k.w),
            mult,
        })
    }

    /// Number of distinct edge records.
    pub fn record_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges counting multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|&m| m as usize).sum()
    }

    /// Number of distinct vertex pairs carrying at least one edge.
    pub fn pair_count(&self) -> usize {
        let mut last = None;
        let mut count = 0;
        for k in self.edges.keys() {
            if last != Some((k.u, k.v)) {
                count += 1;
                last = Some((k.u, k.v));
            }
        }
        count
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Sum of all edge weights with multiplicity; self-loops counted once.
    pub fn total_weight(&self) -> f64 {
        self.edges().map(|e| e.total()).sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.edges().map(|e| e.w).fold(0.0, f64::max)
    }

    /// Total weight (with multiplicity) of edges between `u` and `v`.
    pub fn weight_between(&self, u: VertexId, v: VertexId) -> f64 {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        let lo = EdgeKey { u: a, v: b, w: 0 };
        let hi = EdgeKey {
            u: a,
            v: b,
            w: u64::MAX,
        };
        self.edges
            .range(lo..=hi)
            .map(|(k, &m)| f64::from_bits(k.w) * m as f64)
            .sum()
    }

    pub fn multiplicity_between(&self, u: VertexId, v: VertexId) -> u32 {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        let lo = EdgeKey { u: a, v: b, w: 0 };
        let hi = EdgeKey {
            u: a,
            v: b,
            w: u64::MAX,
        };
        self.edges.range(lo..=hi).map(|(_, &m)| m).sum()
    }

    pub fn weighted_degree(&self, v: VertexId) -> f64 {
        self.degrees()[v]
    }

    /// Weighted degrees; a self-loop adds twice its weight.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for e in self.edges() {
            let t = e.total();
            d[e.u] += t;
            d[e.v] += t;
        }
        d
    }

    /// Degrees counting edge copies rather than weight; loops count twice.
    pub fn unweighted_degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for e in self.edges() {
            d[e.u] += e.mult as usize;
            d[e.v] += e.mult as usize;
        }
        d
    }

    /// Common weighted degree if all degrees agree within `tol`.
    pub fn regular_degree(&self, tol: f64) -> Option<f64> {
        let d = self.degrees();
        let first = *d.first()?;
        d.iter()
            .all(|&x| (x - first).abs() <= tol * first.abs().max(1.0))
            .then_some(first)
    }

    /// Common unweighted degree, if the graph is regular in edge copies.
    pub fn regular_unweighted_degree(&self) -> Option<usize> {
        let d = self.unweighted_degrees();
        let first = *d.first()?;
        d.iter().all(|&x| x == first).then_some(first)
    }

    pub fn min_degree(&self) -> f64 {
        self.degrees().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges.keys().any(|k| k.u == k.v)
    }

    /// Neighbour lists with the total non-loop weight to each neighbour.
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, f64)>> {
        let mut adj: Vec<Vec<(VertexId, f64)>> = vec![Vec::new(); self.n];
        for e in self.edges().filter(|e| !e.is_loop()) {
            let t = e.total();
            push_merge(&mut adj[e.u], e.v, t);
            push_merge(&mut adj[e.v], e.u, t);
        }
        adj
    }

    /// Neighbour lists with one entry per edge copy (loops excluded).
    pub fn neighbor_copies(&self) -> Vec<Vec<VertexId>> {
        let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); self.n];
        for e in self.edges().filter(|e| !e.is_loop()) {
            for _ in 0..e.mult {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
        }
        adj
    }

    /// Connected component label for each vertex, labels in order of first
    /// appearance.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_count() == 1
    }

    /// Proper 2-colouring if one exists. Each component's smallest vertex
    /// gets colour 0. Self-loops make a graph non-bipartite.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        if self.has_self_loops() {
            return None;
        }
        let adj = self.adjacency();
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &adj[x] {
                    if color[y] == u8::MAX {
                        color[y] = 1 - color[x];
                        queue.push_back(y);
                    } else if color[y] == color[x] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Set union: an edge record is present iff present in either input;
    /// shared records keep the larger multiplicity.
    pub fn union(&self, other: &WeightedMultigraph) -> Result<WeightedMultigraph> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (k, &m) in &other.edges {
            let e = out.edges.entry(*k).or_insert(0);
            *e = (*e).max(m);
        }
        Ok(out)
    }

    /// Multiset sum: multiplicities add.
    pub fn sum(&self, other: &WeightedMultigraph) -> Result<WeightedMultigraph> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (k, &m) in &other.edges {
            *out.edges.entry(*k).or_insert(0) += m;
        }
        Ok(out)
    }

    /// Every edge copy repeated `times` times.
    pub fn repeated(&self, times: u32) -> WeightedMultigraph {
        let mut out = WeightedMultigraph::new(self.n);
        if times > 0 {
            for (k, &m) in &self.edges {
                out.edges.insert(*k, m * times);
            }
        }
        out
    }

    /// Total weight of edges with exactly one endpoint in `s`.
    pub fn cut_weight(&self, s: &[VertexId]) -> Result<f64> {
        let mut mask = vec![false; self.n];
        for &v in s {
            self.check_vertex(v)?;
            mask[v] = true;
        }
        self.cut_weight_mask(&mask)
    }

    pub fn cut_weight_mask(&self, mask: &[bool]) -> Result<f64> {
        if mask.len() != self.n {
            return Err(Error::VertexCountMismatch(mask.len(), self.n));
        }
        let size = mask.iter().filter(|&&b| b).count();
        if size == 0 || size == self.n {
            return Err(Error::DegenerateCut);
        }
        Ok(self
            .edges()
            .filter(|e| mask[e.u] != mask[e.v])
            .map(|e| e.total())
            .sum())
    }

    /// Bipartite double cover on `2n` vertices: `(v, 0) -> v`, `(v, 1) -> v + n`.
    pub fn double_cover(&self) -> Result<WeightedMultigraph> {
        let n = self.n;
        let mut out = WeightedMultigraph::new(2 * n);
        for e in self.edges() {
            if e.is_loop() {
                return Err(Error::SelfLoop(e.u));
            }
            out.add_edge_mult(e.u, e.v + n, e.w, e.mult)?;
            out.add_edge_mult(e.v, e.u + n, e.w, e.mult)?;
        }
        Ok(out)
    }

    /// Folds a subgraph of a double cover back onto `n = h2.n() / 2`
    /// vertices. The edge `uv` receives the total weight of whichever of
    /// `(u,0)(v,1)` and `(v,0)(u,1)` are present, so degrees add across the
    /// two copies of each vertex.
    pub fn unfold_double_cover(h2: &WeightedMultigraph) -> Result<WeightedMultigraph> {
        if !h2.n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "double cover must have an even vertex count, got {}",
                h2.n
            )));
        }
        let n = h2.n / 2;
        let mut weight: BTreeMap<(VertexId, VertexId), f64> = BTreeMap::new();
        for e in h2.edges() {
            // Canonical order puts the side-0 endpoint first.
            if e.u >= n || e.v < n {
                return Err(Error::NotDoubleCoverSubgraph(e.u, e.v));
            }
            let (a, b) = (e.u, e.v - n);
            let key = if a <= b { (a, b) } else { (b, a) };
            *weight.entry(key).or_insert(0.0) += e.total();
        }
        let mut out = WeightedMultigraph::new(n);
        for ((a, b), w) in weight {
            // (v,0)(v,1) folds to a loop at v, whose degree contribution 2w
            // matches the cover edge counted at both copies of v.
            out.add_edge(a, b, w)?;
        }
        Ok(out)
    }

    /// Whether every vertex has an incident edge crossing the bisection.
    pub fn is_weave(&self, b: &Bisection) -> bool {
        if b.n() != self.n {
            return false;
        }
        let mut crossing = vec![false; self.n];
        for e in self.edges() {
            if b.in_s(e.u) != b.in_s(e.v) {
                crossing[e.u] = true;
                crossing[e.v] = true;
            }
        }
        crossing.into_iter().all(|c| c)
    }

    pub fn scale_weights(&self, factor: f64) -> Result<WeightedMultigraph> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidScale(factor));
        }
        let mut out = WeightedMultigraph::new(self.n);
        for e in self.edges() {
            out.add_edge_mult(e.u, e.v, e.w * factor, e.mult)?;
        }
        Ok(out)
    }
}

fn push_merge(list: &mut Vec<(VertexId, f64)>, v: VertexId, w: f64) {
    match list.iter_mut().find(|(x, _)| *x == v) {
        Some(entry) => entry.1 += w,
        None => list.push((v, w)),
    }
}

/// A partition `(S, S̄)` with `|S| ∈ {⌊n/2⌋, ⌈n/2⌉}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisection {
    side_s: Vec<VertexId>,
    side_t: Vec<VertexId>,
    mask: Vec<bool>,
}

impl Bisection {
    pub fn new(n: usize, side_s: &[VertexId]) -> Result<Self> {
        let mut mask = vec![false; n];
        for &v in side_s {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if mask[v] {
                return Err(Error::InvalidBisection(format!("vertex {v} listed twice")));
            }
            mask[v] = true;
        }
        Self::from_mask(mask)
    }

    pub fn from_mask(mask: Vec<bool>) -> Result<Self> {
        let n = mask.len();
        let side_s: Vec<VertexId> = (0..n).filter(|&v| mask[v]).collect();
        let side_t: Vec<VertexId> = (0..n).filter(|&v| !mask[v]).collect();
        if side_s.len() != n / 2 && side_s.len() != n.div_ceil(2) {
            return Err(Error::InvalidBisection(format!(
                "side of size {} in a vertex set of size {n}",
                side_s.len()
            )));
        }
        Ok(Bisection {
            side_s,
            side_t,
            mask,
        })
    }

    pub fn n(&self) -> usize {
        self.mask.len()
    }

    pub fn side_s(&self) -> &[VertexId] {
        &self.side_s
    }

    pub fn side_t(&self) -> &[VertexId] {
        &self.side_t
    }

    pub fn in_s(&self, v: VertexId) -> bool {
        self.mask[v]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// The same partition with the roles of the two sides exchanged.
    pub fn swapped(&self) -> Bisection {
        Bisection {
            side_s: self.side_t.clone(),
            side_t: self.side_s.clone(),
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    /// FNV-1a over the sorted `S` side, for transcripts.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &v in &self.side_s {
            for byte in (v as u64).to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }
}
