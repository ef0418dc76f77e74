use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedMultigraph};
use crate::spectral::laplacian;

/// Pseudo-inverse of the Laplacian of a connected graph, computed as
/// `(L + J/n)^{-1} - J/n` with a Cholesky factorization.
pub fn laplacian_pinv(g: &WeightedMultigraph) -> Result<DMatrix<f64>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let shift = 1.0 / n as f64;
    let mut m = laplacian(g);
    m.add_scalar_mut(shift);
    let chol = m.cholesky().ok_or(Error::Disconnected)?;
    let mut p = chol.inverse();
    p.add_scalar_mut(-shift);
    Ok(p)
}

/// Effective resistance between `u` and `v`, by grounding `v` and solving
/// the reduced Laplacian system for a unit current injected at `u`.
pub fn effective_resistance(g: &WeightedMultigraph, u: VertexId, v: VertexId) -> Result<f64> {
    let n = g.n();
    for x in [u, v] {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Ok(0.0);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let l = laplacian(g);
    let keep: Vec<usize> = (0..n).filter(|&x| x != v).collect();
    let reduced = l.select_rows(&keep).select_columns(&keep);
    let pos = keep.iter().position(|&x| x == u).expect("u is kept");
    let mut rhs = nalgebra::DVector::zeros(n - 1);
    rhs[pos] = 1.0;
    let chol = reduced.cholesky().ok_or(Error::Disconnected)?;
    Ok(chol.solve(&rhs)[pos])
}

/// Symmetric table of pairwise effective resistances.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceTable {
    values: DMatrix<f64>,
}

impl ResistanceTable {
    pub fn from_pinv(p: &DMatrix<f64>) -> Self {
        let n = p.nrows();
        let values = DMatrix::from_fn(n, n, |u, v| {
            if u == v {
                0.0
            } else {
                (p[(u, u)] + p[(v, v)] - 2.0 * p[(u, v)]).max(0.0)
            }
        });
        ResistanceTable { values }
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> f64 {
        self.values[(u, v)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|u| self.values.row(u).iter().copied().collect())
            .collect()
    }

    /// `u,v,R` lines for `u < v`, with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,R\n");
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                let _ = writeln!(out, "{u},{v},{:.17e}", self.get(u, v));
            }
        }
        out
    }

    /// Largest `R(u,v) - R(u,w) - R(w,v)` over all triples; at most 0 for a
    /// metric up to rounding.
    pub fn max_triangle_excess(&self) -> f64 {
        let n = self.n();
        let mut worst = f64::NEG_INFINITY;
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    worst = worst.max(self.get(u, v) - self.get(u, w) - self.get(w, v));
                }
            }
        }
        worst
    }
}

pub fn all_resistances(g: &WeightedMultigraph) -> Result<ResistanceTable> {
    Ok(ResistanceTable::from_pinv(&laplacian_pinv(g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::spectral::pseudo_inverse_eigen;

    #[test]
    fn single_resistor() {
        let g = WeightedMultigraph::from_edges(2, [(0, 1, 3.0)]).unwrap();
        assert!((effective_resistance(&g, 0, 1).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((all_resistances(&g).unwrap().get(1, 0) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_and_k5() {
        let t = generators::complete(3);
        assert!((effective_resistance(&t, 0, 2).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let k5 = all_resistances(&generators::complete(5)).unwrap();
        for u in 0..5 {
            for v in 0..5 {
                let expected = if u == v { 0.0 } else { 0.4 };
                assert!((k5.get(u, v) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn self_pair_and_disconnected() {
        let g = WeightedMultigraph::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(effective_resistance(&g, 1, 1).unwrap(), 0.0);
        assert_eq!(effective_resistance(&g, 0, 2), Err(Error::Disconnected));
        assert_eq!(all_resistances(&g), Err(Error::Disconnected));
    }

    #[test]
    fn cholesky_pinv_matches_eigen_pinv() {
        let g = generators::circulant(10, &[1, 3]).unwrap();
        let a = laplacian_pinv(&g).unwrap();
        let b = pseudo_inverse_eigen(&laplacian(&g));
        assert!((a - b).amax() < 1e-10);
    }

    #[test]
    fn path_resistances_add_in_series() {
        let g = WeightedMultigraph::from_edges(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 4.0)]).unwrap();
        let t = all_resistances(&g).unwrap();
        assert!((t.get(0, 3) - 1.75).abs() < 1e-12);
        assert!(t.max_triangle_excess() < 1e-12);
    }

    #[test]
    fn csv_has_header_and_upper_triangle() {
        let t = all_resistances(&generators::complete(3)).unwrap();
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("u,v,R\n0,1,"));
    }
}
