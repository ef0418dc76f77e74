use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::WeightedMultigraph;

/// Dense Laplacian `D - A`. Self-loops cancel out.
pub fn laplacian(g: &WeightedMultigraph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for e in g.edges().filter(|e| !e.is_loop()) {
        let w = e.total();
        l[(e.u, e.u)] += w;
        l[(e.v, e.v)] += w;
        l[(e.u, e.v)] -= w;
        l[(e.v, e.u)] -= w;
    }
    l
}

/// `D^{-1/2} L D^{-1/2}`, with `D` the weighted degrees including loops.
pub fn normalized_laplacian(g: &WeightedMultigraph) -> Result<DMatrix<f64>> {
    let deg = g.degrees();
    if let Some(v) = deg.iter().position(|&d| d <= 0.0) {
        return Err(Error::IsolatedVertex(v));
    }
    let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut l = laplacian(g);
    for i in 0..g.n() {
        for j in 0..g.n() {
            l[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    Ok(l)
}

/// Laplacian together with its normalized form.
#[derive(Debug, Clone)]
pub struct LaplacianView {
    pub laplacian: DMatrix<f64>,
    pub normalized: DMatrix<f64>,
    pub degrees: Vec<f64>,
}

impl LaplacianView {
    pub fn new(g: &WeightedMultigraph) -> Result<Self> {
        Ok(LaplacianView {
            laplacian: laplacian(g),
            normalized: normalized_laplacian(g)?,
            degrees: g.degrees(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.degrees.len()
    }
}

/// Second-smallest eigenvalue of the normalized Laplacian.
///
/// The known null vector `D^{1/2} 1` is shifted out of the way (its
/// eigenvalue is moved above 2), so the smallest remaining eigenvalue is
/// `λ2`. Disconnected graphs are detected structurally and return 0.
pub fn lambda2(g: &WeightedMultigraph) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "lambda2 needs at least two vertices".into(),
        ));
    }
    let mut l = normalized_laplacian(g)?;
    if !g.is_connected() {
        return Ok(0.0);
    }
    let deg = g.degrees();
    let q = DVector::from_iterator(n, deg.iter().map(|d| d.sqrt())).normalize();
    l += 3.0 * &q * q.transpose();
    let eig = l.symmetric_eigenvalues();
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min.max(0.0))
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix through its
/// eigendecomposition; eigenvalues below `1e-12 * λ_max` count as zero.
pub fn pseudo_inverse_eigen(l: &DMatrix<f64>) -> DMatrix<f64> {
    let n = l.nrows();
    let eig = SymmetricEigen::new(l.clone());
    let lmax = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let cutoff = 1e-12 * lmax;
    let mut p = DMatrix::zeros(n, n);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > cutoff {
            let v = eig.eigenvectors.column(k);
            p += (1.0 / lam) * v * v.transpose();
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let mut g = generators::complete(5);
        g.add_edge(2, 2, 4.0).unwrap();
        let l = laplacian(&g);
        for i in 0..5 {
            assert!(l.row(i).sum().abs() < 1e-12);
        }
    }

    #[test]
    fn lambda2_complete_graph() {
        let l2 = lambda2(&generators::complete(5)).unwrap();
        assert!((l2 - 1.25).abs() < 1e-9, "{l2}");
        for n in [3, 8, 13] {
            let l2 = lambda2(&generators::complete(n)).unwrap();
            assert!((l2 - n as f64 / (n as f64 - 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn lambda2_disconnected_is_zero() {
        let g = WeightedMultigraph::from_pairs(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap();
        assert!(lambda2(&g).unwrap().abs() < 1e-9);
    }

    #[test]
    fn lambda2_isolated_vertex() {
        let g = WeightedMultigraph::from_pairs(3, [(0, 1)]).unwrap();
        assert_eq!(lambda2(&g), Err(Error::IsolatedVertex(2)));
    }

    #[test]
    fn lambda2_cycle_closed_form() {
        // Normalized spectrum of C_n: 1 - cos(2πk/n).
        let n = 9;
        let l2 = lambda2(&generators::circulant(n, &[1]).unwrap()).unwrap();
        let expected = 1.0 - (2.0 * std::f64::consts::PI / n as f64).cos();
        assert!((l2 - expected).abs() < 1e-9);
    }

    #[test]
    fn eigen_pinv_is_a_pseudo_inverse() {
        let l = laplacian(&generators::hypercube(3));
        let p = pseudo_inverse_eigen(&l);
        let lpl = &l * &p * &l;
        assert!((lpl - &l).amax() < 1e-9);
    }
}
