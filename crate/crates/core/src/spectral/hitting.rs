use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedMultigraph};
use crate::par::Parallelism;
use crate::spectral::laplacian;

/// Expected hitting times `H(u, v)` of the weighted random walk, together
/// with the total edge weight `W` used for the normalized form
/// `h(u, v) = H(u, v) / 2W`.
#[derive(Debug, Clone)]
pub struct HittingTimes {
    raw: DMatrix<f64>,
    total_weight: f64,
}

impl HittingTimes {
    pub fn raw(&self, u: VertexId, v: VertexId) -> f64 {
        self.raw[(u, v)]
    }

    pub fn normalized(&self, u: VertexId, v: VertexId) -> f64 {
        self.raw[(u, v)] / (2.0 * self.total_weight)
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// `h(u, v) + h(v, u)`, which equals the effective resistance.
    pub fn commute_resistance(&self, u: VertexId, v: VertexId) -> f64 {
        self.normalized(u, v) + self.normalized(v, u)
    }
}

pub fn hitting_times(g: &WeightedMultigraph) -> Result<HittingTimes> {
    hitting_times_with(g, Parallelism::default())
}

/// For every target `v`, solves `h(v) = 0`,
/// `h(u) = 1 + Σ_x P(u → x) h(x)`. Multiplying through by `deg(u)` turns
/// this into the grounded Laplacian system `L_v h = deg`; self-loops cancel
/// in `L` but still count as (lazy) steps through `deg`.
pub fn hitting_times_with(g: &WeightedMultigraph, par: Parallelism) -> Result<HittingTimes> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let l = laplacian(g);
    let deg = g.degrees();
    let columns = par.map_range(n, |v| -> Result<Vec<f64>> {
        let keep: Vec<usize> = (0..n).filter(|&x| x != v).collect();
        let reduced = l.select_rows(&keep).select_columns(&keep);
        let rhs = DVector::from_iterator(n - 1, keep.iter().map(|&x| deg[x]));
        let sol = reduced.lu().solve(&rhs).ok_or(Error::Disconnected)?;
        let mut col = vec![0.0; n];
        for (i, &x) in keep.iter().enumerate() {
            col[x] = sol[i];
        }
        Ok(col)
    });
    let mut raw = DMatrix::zeros(n, n);
    for (v, col) in columns.into_iter().enumerate() {
        let col = col?;
        for u in 0..n {
            raw[(u, v)] = col[u];
        }
    }
    Ok(HittingTimes {
        raw,
        total_weight: g.total_weight(),
    })
}

/// Two-step graph of a `d`-regular bipartite graph restricted to `side`.
///
/// Vertex `i` of the result is `side[i]`. For `i != j` the weight is
/// `(1/d) Σ_k w(i,k) w(j,k)`; the return mass `(1/d) Σ_k w(i,k)^2` is kept
/// as a self-loop of half that weight (loops count twice toward degree), so
/// every weighted degree is exactly `d` and one step here is two steps in
/// `g`.
pub fn bipartite_square(
    g: &WeightedMultigraph,
    side: &[VertexId],
    d: f64,
) -> Result<WeightedMultigraph> {
    let n = g.n();
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter(format!("degree must be positive, got {d}")));
    }
    let mut index = vec![usize::MAX; n];
    for (i, &v) in side.iter().enumerate() {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        index[v] = i;
    }
    for e in g.edges() {
        if (index[e.u] == usize::MAX) == (index[e.v] == usize::MAX) {
            return Err(Error::NotBipartite);
        }
    }
    let deg = g.degrees();
    if let Some(v) = deg.iter().position(|&x| (x - d).abs() > 1e-9 * d) {
        return Err(Error::NotRegular(format!(
            "vertex {v} has weighted degree {} instead of {d}",
            deg[v]
        )));
    }
    let adj = g.adjacency();
    let m = side.len();
    let mut w1 = DMatrix::<f64>::zeros(m, m);
    for k in (0..n).filter(|&k| index[k] == usize::MAX) {
        for &(i, wi) in &adj[k] {
            for &(j, wj) in &adj[k] {
                w1[(index[i], index[j])] += wi * wj / d;
            }
        }
    }
    let mut out = WeightedMultigraph::new(m);
    for i in 0..m {
        if w1[(i, i)] > 0.0 {
            out.add_edge(i, i, w1[(i, i)] / 2.0)?;
        }
        for j in i + 1..m {
            if w1[(i, j)] > 0.0 {
                out.add_edge(i, j, w1[(i, j)])?;
            }
        }
    }
    Ok(out)
}
