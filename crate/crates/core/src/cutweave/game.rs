use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Bisection, VertexId, WeightedMultigraph};
use crate::par::Parallelism;

/// Lazy random walk on an `r`-regular weave: stay with probability ½,
/// otherwise move along an incident edge copy with probability `1/(2r)`
/// each. A self-loop of multiplicity `m` counts `2m` toward `r` and its
/// mass stays put, so the stay probability at that vertex is `½ + m/r`.
#[derive(Debug, Clone)]
pub struct LazyWalk {
    r: usize,
    adj: Vec<Vec<(VertexId, f64)>>,
}

impl LazyWalk {
    pub fn new(weave: &WeightedMultigraph, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("walk degree r must be positive".into()));
        }
        let bad = weave
            .degrees()
            .into_iter()
            .enumerate()
            .find(|&(_, d)| (d - r as f64).abs() > 1e-9 * (r as f64));
        if let Some((v, d)) = bad {
            return Err(Error::NotRegular(format!(
                "vertex {v} has degree {d}, expected {r}"
            )));
        }
        Ok(LazyWalk {
            r,
            adj: weave.adjacency(),
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        self.apply_into(x, &mut y);
        y
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let step = 1.0 / (2.0 * self.r as f64);
        for (i, nbrs) in self.adj.iter().enumerate() {
            let flow: f64 = nbrs.iter().map(|&(j, w)| w * (x[i] - x[j])).sum();
            y[i] = x[i] - step * flow;
        }
    }

    /// Replaces every column of `p` by its image under the walk.
    pub fn apply_columns(&self, p: &mut DMatrix<f64>, par: Parallelism) {
        let n = p.nrows();
        if n == 0 {
            return;
        }
        par.for_each_chunk_mut(p.as_mut_slice(), n, |_, col| {
            let x = col.to_vec();
            self.apply_into(&x, col);
        });
    }
}

/// `M x` for the lazy walk on `weave`.
pub fn lazy_walk_apply(weave: &WeightedMultigraph, r: usize, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != weave.n() {
        return Err(Error::VertexCountMismatch(x.len(), weave.n()));
    }
    Ok(LazyWalk::new(weave, r)?.apply(x))
}

/// `1/(4n²)`: below this potential the played graph is certified.
pub fn potential_threshold(n: usize) -> f64 {
    1.0 / (4.0 * (n as f64).powi(2))
}

/// `⌈C·r·(ln n)²⌉`.
pub fn round_cap(c: f64, r: usize, n: usize) -> usize {
    (c * r as f64 * (n as f64).ln().powi(2)).ceil() as usize
}

/// One played round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub bisection: u64,
    pub weave_edges: usize,
    pub psi_before: f64,
    pub psi_after: f64,
    pub drop: f64,
    /// `Σ_{ij ∈ weave} ‖P_i − P_j‖²` before the step, edge copies counted.
    pub edge_sum: f64,
    /// `edge_sum / r`.
    pub full_bound: f64,
    /// `edge_sum / (2r)`.
    pub half_bound: f64,
    pub full_slack: f64,
    pub half_slack: f64,
    /// `‖P_before − P_after‖²_F`; the drop equals `edge_sum/r` minus this.
    pub step_norm_sq: f64,
    pub identity_residual: f64,
    pub max_row_sum_error: f64,
    pub max_col_sum_error: f64,
}

/// State of a cut-weave game on `n` vertices.
#[derive(Debug, Clone)]
pub struct GameState {
    n: usize,
    r: Option<usize>,
    round_cap: usize,
    union: WeightedMultigraph,
    sum: WeightedMultigraph,
    walks: Vec<LazyWalk>,
    p: DMatrix<f64>,
    psi: f64,
    history: Vec<RoundRecord>,
    par: Parallelism,
}

impl GameState {
    pub fn new(n: usize, round_cap: usize) -> Self {
        Self::with_parallelism(n, round_cap, Parallelism::default())
    }

    pub fn with_parallelism(n: usize, round_cap: usize, par: Parallelism) -> Self {
        let p = DMatrix::identity(n, n);
        let psi = potential(&p);
        GameState {
            n,
            r: None,
            round_cap,
            union: WeightedMultigraph::new(n),
            sum: WeightedMultigraph::new(n),
            walks: Vec::new(),
            p,
            psi,
            history: Vec::new(),
            par,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn round(&self) -> usize {
        self.history.len()
    }

    pub fn r(&self) -> Option<usize> {
        self.r
    }

    pub fn round_cap(&self) -> usize {
        self.round_cap
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// `P[(i, j)]`: probability that the composed walk started at `j` is at
    /// `i`.
    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Union of the played weaves (parallel edges merged).
    pub fn union_graph(&self) -> &WeightedMultigraph {
        &self.union
    }

    /// Sum of the played weaves (parallel edges kept).
    pub fn sum_graph(&self) -> &WeightedMultigraph {
        &self.sum
    }

    pub fn history(&self) -> &[RoundRecord] {
        &self.history
    }

    pub fn reached_threshold(&self) -> bool {
        self.psi < potential_threshold(self.n)
    }

    /// `M_t ⋯ M_1 z`, applying the stored walks in order.
    pub fn project(&self, z: &[f64]) -> Vec<f64> {
        self.walks.iter().fold(z.to_vec(), |u, w| w.apply(&u))
    }

    /// Plays `weave` against `b`: `P ← M P`, `H ← H ∪ weave`.
    pub fn game_step(
        &mut self,
        b: &Bisection,
        weave: &WeightedMultigraph,
        r: usize,
    ) -> Result<&RoundRecord> {
        if weave.n() != self.n || b.n() != self.n {
            return Err(Error::VertexCountMismatch(weave.n(), self.n));
        }
        if let Some(prev) = self.r {
            if prev != r {
                return Err(Error::InvalidParameter(format!(
                    "weave degree {r} differs from the game's {prev}"
                )));
            }
        }
        if !weave.is_weave(b) {
            return Err(Error::NotAWeave);
        }
        let walk = LazyWalk::new(weave, r)?;

        let rows = self.p.transpose();
        let row = |i: usize| rows.column(i);
        let edge_sum: f64 = weave
            .edges()
            .filter(|e| !e.is_loop())
            .map(|e| e.total() * (row(e.u) - row(e.v)).norm_squared())
            .sum();

        let before = self.p.clone();
        walk.apply_columns(&mut self.p, self.par);
        let psi_before = self.psi;
        let psi_after = potential(&self.p);
        let step_norm_sq = (&before - &self.p).norm_squared();
        let drop = psi_before - psi_after;
        let rf = r as f64;
        let record = RoundRecord {
            round: self.history.len() + 1,
            bisection: b.fingerprint(),
            weave_edges: weave.edge_count(),
            psi_before,
            psi_after,
            drop,
            edge_sum,
            full_bound: edge_sum / rf,
            half_bound: edge_sum / (2.0 * rf),
            full_slack: drop - edge_sum / rf,
            half_slack: drop - edge_sum / (2.0 * rf),
            step_norm_sq,
            identity_residual: drop - (edge_sum / rf - step_norm_sq),
            max_row_sum_error: max_sum_error(self.p.row_iter().map(|r| r.sum())),
            max_col_sum_error: max_sum_error(self.p.column_iter().map(|c| c.sum())),
        };

        self.union = self.union.union(weave)?;
        self.sum = self.sum.sum(weave)?;
        self.walks.push(walk);
        self.psi = psi_after;
        self.r = Some(r);
        self.history.push(record);
        Ok(self.history.last().expect("just pushed"))
    }

    /// Per-round records as JSON lines.
    pub fn transcript_jsonl(&self) -> String {
        self.history
            .iter()
            .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
            .collect()
    }
}

fn potential(p: &DMatrix<f64>) -> f64 {
    let u = 1.0 / p.nrows().max(1) as f64;
    p.iter().map(|&x| (x - u) * (x - u)).sum()
}

fn max_sum_error(sums: impl Iterator<Item = f64>) -> f64 {
    sums.map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
}

/// The `⌊n/2⌋` vertices with the smallest entries of `u` (ties by index)
/// against the rest.
pub fn bisection_from_vector(u: &[f64]) -> Bisection {
    let mut order: Vec<VertexId> = (0..u.len()).collect();
    order.sort_by(|&a, &b| u[a].total_cmp(&u[b]).then(a.cmp(&b)));
    let mut mask = vec![false; u.len()];
    for &v in &order[..u.len() / 2] {
        mask[v] = true;
    }
    Bisection::from_mask(mask).expect("half split is a bisection")
}

/// Random unit vector orthogonal to the all-ones vector.
fn random_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let mean = z.iter().sum::<f64>() / n as f64;
        z.iter_mut().for_each(|x| *x -= mean);
        let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            z.iter_mut().for_each(|x| *x /= norm);
            return z;
        }
    }
}

/// Draws a fresh direction `z ⊥ 1`, pushes it through the played walks and
/// splits at the median. Returns the bisection together with `z` and `u`.
pub fn cut_player_bisection<R: Rng + ?Sized>(
    state: &GameState,
    rng: &mut R,
) -> (Bisection, Vec<f64>, Vec<f64>) {
    let z = random_direction(state.n, rng);
    let u = state.project(&z);
    (bisection_from_vector(&u), z, u)
}

/// Expansion guaranteed once the potential drops below `1/(4n²)`.
///
/// Each played copy of an edge carries at most `1/r` of the flow that
/// routes the all-pairs walk graph, so the sum graph has expansion at least
/// `r/2`. In the union graph an edge played in `m` rounds carries `m/r`,
/// which gives `r/(2m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub rounds: usize,
    pub r: usize,
    pub psi: f64,
    pub threshold: f64,
    pub sum_bound: f64,
    pub max_round_multiplicity: u32,
    pub union_bound: f64,
    /// Brute-force expansion of the sum and union graphs, on small graphs.
    pub brute_force: Option<(f64, f64)>,
}

impl Certificate {
    pub fn from_state(state: &GameState) -> Option<Self> {
        if !state.reached_threshold() {
            return None;
        }
        let r = state.r?;
        let m = state.sum.edges().map(|e| e.mult).max().unwrap_or(1);
        let sum_bound = r as f64 / 2.0;
        let brute_force = (state.n <= 14).then(|| {
            let phi = |g: &WeightedMultigraph| {
                crate::spectral::cheeger_bruteforce(g).map_or(f64::NAN, |c| c.phi)
            };
            (phi(&state.sum), phi(&state.union))
        });
        Some(Certificate {
            rounds: state.round(),
            r,
            psi: state.psi,
            threshold: potential_threshold(state.n),
            sum_bound,
            max_round_multiplicity: m,
            union_bound: sum_bound / m as f64,
            brute_force,
        })
    }

    /// False only when a brute-force value contradicts a bound.
    pub fn consistent(&self) -> bool {
        match self.brute_force {
            Some((s, u)) => s >= self.sum_bound - 1e-9 && u >= self.union_bound - 1e-9,
            None => true,
        }
    }
}

/// Final state of a played game.
#[derive(Debug, Clone)]
pub struct GameOutcome {
    pub state: GameState,
    pub certificate: Option<Certificate>,
}
