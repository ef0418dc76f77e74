use crate::error::Result;
use crate::graph::{VertexId, WeightedMultigraph};

/// `center ± radius`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Interval {
    pub center: f64,
    pub radius: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() <= self.radius
    }

    /// `radius - |x - center|`; negative when `x` falls outside.
    pub fn slack(&self, x: f64) -> f64 {
        self.radius - (x - self.center).abs()
    }
}

/// Degree-based resistance estimate for non-bipartite graphs:
/// `R(u,v) = 1/d_u + 1/d_v ± 2 (1/λ2 + 2) w_max / d_min²`.
pub fn vlrh_bound(d_u: f64, d_v: f64, lambda2: f64, w_max: f64, d_min: f64) -> Interval {
    Interval {
        center: 1.0 / d_u + 1.0 / d_v,
        radius: 2.0 * (1.0 / lambda2 + 2.0) * w_max / (d_min * d_min),
    }
}

/// Variant for graphs that are `d`-regular in weighted degrees, bipartite
/// or not: `R(u,v) = 2/d ± 12 (1/λ2 + 2) w_max / d²`.
pub fn vlrh_bound_regular(d: f64, lambda2: f64, w_max: f64) -> Interval {
    Interval {
        center: 2.0 / d,
        radius: 12.0 * (1.0 / lambda2 + 2.0) * w_max / (d * d),
    }
}

/// Interval for `R(u,v)` given a measured `λ2`: the non-bipartite form when
/// an odd cycle certifies non-bipartiteness, the regular form otherwise.
/// Returns `None` for a bipartite graph that is not regular.
pub fn resistance_interval(
    g: &WeightedMultigraph,
    lambda2: f64,
    u: VertexId,
    v: VertexId,
) -> Result<Option<Interval>> {
    let deg = g.degrees();
    let w_max = g.max_weight();
    if !g.is_bipartite() {
        let d_min = deg.iter().copied().fold(f64::INFINITY, f64::min);
        return Ok(Some(vlrh_bound(deg[u], deg[v], lambda2, w_max, d_min)));
    }
    Ok(g
        .regular_degree(1e-9)
        .map(|d| vlrh_bound_regular(d, lambda2, w_max)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::spectral::{all_resistances, lambda2};

    #[test]
    fn formula_arithmetic() {
        let b = vlrh_bound(10.0, 10.0, 0.5, 1.0, 10.0);
        assert!((b.center - 0.2).abs() < 1e-15);
        assert!((b.radius - 0.08).abs() < 1e-15);
        let r = vlrh_bound_regular(10.0, 0.5, 1.0);
        assert!((r.center - 0.2).abs() < 1e-15);
        assert!((r.radius - 0.48).abs() < 1e-15);
    }

    #[test]
    fn radius_decreases_in_lambda2() {
        let mut last = f64::INFINITY;
        for k in 1..50 {
            let r = vlrh_bound(5.0, 7.0, k as f64 * 0.04, 1.0, 5.0).radius;
            assert!(r < last);
            last = r;
        }
    }

    #[test]
    fn complete_graph_lies_inside() {
        let g = generators::complete(9);
        let l2 = lambda2(&g).unwrap();
        let t = all_resistances(&g).unwrap();
        let iv = resistance_interval(&g, l2, 0, 1).unwrap().unwrap();
        assert!(iv.contains(t.get(0, 1)));
        assert!(iv.slack(t.get(0, 1)) > 0.0);
    }

    #[test]
    fn bipartite_irregular_has_no_interval() {
        let star = WeightedMultigraph::from_pairs(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(resistance_interval(&star, 0.5, 1, 2).unwrap(), None);
    }
}
