//! Configured, seeded runs of the pipelines, summarized as [`Report`]s.
//!
//! A master seed fixes everything: stream 0 generates the graph, stream
//! `t + 1` drives trial `t`. Trials run through [`Parallelism`] and are
//! collected in trial order, so a report depends only on its config.

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cutweave::{play_game_with, play_routed_game, round_cap, Certificate, RoundRecord};
use crate::decompose::{matching_decomposition, walecki_decomposition, DecompositionAudit, ElementFamily};
use crate::error::{Error, Result};
use crate::generators;
use crate::graph::WeightedMultigraph;
use crate::par::Parallelism;
use crate::report::{to_json, SCHEMA_VERSION};
use crate::sparsify::{
    independent_sample_baseline, target_degree, interval_certificate, verify_sparsifier_with,
    ErrorReport, SparsifierPlan, SparsifierResult, IntervalCertificate, DEFAULT_C0, DEFAULT_PAIR_BUDGET,
};
use crate::spectral::{cheeger_bruteforce_with, lambda2, CHEEGER_MAX_N};

/// RNG for `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Complete { n: usize },
    RandomRegular { n: usize, degree: usize },
    Circulant { n: usize, offsets: Vec<usize> },
    Hypercube { dim: u32 },
    Petersen,
    File { path: PathBuf },
}

impl GeneratorSpec {
    pub fn generate(&self, seed: u64) -> Result<WeightedMultigraph> {
        let mut rng = stream_rng(seed, 0);
        match self {
            GeneratorSpec::Complete { n } => Ok(generators::complete(*n)),
            GeneratorSpec::RandomRegular { n, degree } => generators::random_regular(*n, *degree, &mut rng),
            GeneratorSpec::Circulant { n, offsets } => generators::circulant(*n, offsets),
            GeneratorSpec::Hypercube { dim } => {
                if *dim > 20 {
                    return Err(Error::InvalidParameter(format!("hypercube dimension {dim} too large")));
                }
                Ok(generators::hypercube(*dim))
            }
            GeneratorSpec::Petersen => Ok(generators::petersen()),
            GeneratorSpec::File { path } => crate::io::read_graph(path),
        }
    }
}

/// Which regular pieces the weave player draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementKind {
    /// Hamiltonian cycles for odd complete graphs, routed matchings
    /// otherwise.
    #[default]
    Auto,
    /// Perfect matchings of the (bipartite) graph itself.
    Matchings,
    /// Perfect matchings of the double cover; the game runs on `2n` vertices.
    DoubleCover,
    /// Walecki cycles of an odd complete graph.
    Cycles,
    /// Perfect matchings across each bisection, routed in the graph.
    Routed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    pub epsilon: Option<f64>,
    pub d_target: Option<usize>,
    pub c0: f64,
    pub seed: u64,
    pub trials: usize,
    pub pair_budget: usize,
    /// `C` in the round cap `⌈C·r·(ln n)²⌉`.
    pub round_constant: f64,
    /// Weave degree for games; defaults to all elements.
    pub r: Option<usize>,
    pub elements: ElementKind,
}

impl ExperimentConfig {
    pub fn new(generator: GeneratorSpec) -> Self {
        ExperimentConfig {
            generator,
            epsilon: None,
            d_target: None,
            c0: DEFAULT_C0,
            seed: 0,
            trials: 1,
            pair_budget: DEFAULT_PAIR_BUDGET,
            round_constant: 10.0,
            r: None,
            elements: ElementKind::Auto,
        }
    }

    /// Rejects configs that cannot run, before any work happens.
    pub fn validate(&self) -> Result<()> {
        if let Some(eps) = self.epsilon {
            target_degree(eps, self.c0)?;
        }
        if self.d_target == Some(0) {
            return Err(Error::InvalidParameter("d_target must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        if !(self.round_constant > 0.0 && self.round_constant.is_finite()) {
            return Err(Error::InvalidParameter("round constant must be positive".into()));
        }
        if self.pair_budget == 0 {
            return Err(Error::InvalidParameter("pair budget must be positive".into()));
        }
        Ok(())
    }

    /// `d_target` if set, else `⌈c₀/ε⌉`.
    pub fn resolved_d_target(&self) -> Result<usize> {
        match (self.d_target, self.epsilon) {
            (Some(d), _) => Ok(d),
            (None, Some(eps)) => target_degree(eps, self.c0),
            (None, None) => Err(Error::InvalidParameter("need epsilon or d_target".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub degree: Option<usize>,
    pub lambda2: f64,
}

impl GraphSummary {
    fn of(g: &WeightedMultigraph) -> Result<Self> {
        Ok(GraphSummary {
            n: g.n(),
            edges: g.edge_count(),
            degree: g.regular_unweighted_degree(),
            lambda2: lambda2(g)?,
        })
    }
}

/// A named check; the run fails if any check fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Assertion {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineTrial {
    pub sample: SparsifierResult,
    pub errors: ErrorReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SparsifyTrial {
    pub trial: usize,
    pub sparsifier: SparsifierResult,
    pub errors: ErrorReport,
    pub interval: IntervalCertificate,
    pub max_degree_error: f64,
    pub baseline: Option<BaselineTrial>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyTrial {
    pub trial: usize,
    pub r: usize,
    pub round_cap: usize,
    pub rounds: usize,
    pub psi: f64,
    pub certificate: Option<Certificate>,
    /// Routed games only: congestion of the routes and the implied lower
    /// bound on the graph's expansion.
    pub congestion: Option<usize>,
    pub host_bound: Option<f64>,
    /// Rounds whose drop fell short of `edge_sum / r`.
    pub full_bound_shortfalls: usize,
    pub transcript: Vec<RoundRecord>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum TrialRecord {
    Sparsify(Box<SparsifyTrial>),
    Certify(Box<CertifyTrial>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Aggregate {
    pub median_max_error: Option<f64>,
    pub median_baseline_max_error: Option<f64>,
    pub certified_runs: Option<usize>,
    pub median_rounds: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: ExperimentConfig,
    pub graph: GraphSummary,
    pub decomposition: Option<DecompositionAudit>,
    pub trials: Vec<TrialRecord>,
    pub aggregate: Aggregate,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// `trial,u,v,R_G,R_H,rel_err` for every checked pair of every trial.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,u,v,R_G,R_H,rel_err\n");
        for t in &self.trials {
            if let TrialRecord::Sparsify(s) = t {
                for p in &s.errors.pairs {
                    let _ = writeln!(
                        out,
                        "{},{},{},{:.16e},{:.16e},{:.16e}",
                        s.trial, p.u, p.v, p.r_g, p.r_h, p.rel_err
                    );
                }
            }
        }
        out
    }
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    Some(if k % 2 == 1 { xs[k / 2] } else { 0.5 * (xs[k / 2 - 1] + xs[k / 2]) })
}

fn sparsify_report(cfg: &ExperimentConfig, with_baseline: bool, par: Parallelism) -> Result<Report> {
    cfg.validate()?;
    let d_target = cfg.resolved_d_target()?;
    let g = cfg.generator.generate(cfg.seed)?;
    let plan = SparsifierPlan::new(&g)?;
    if d_target > plan.degree() {
        return Err(Error::InsufficientElements {
            needed: d_target,
            available: plan.degree(),
        });
    }
    let audit = plan.decomposition().audit(&g.double_cover()?);
    let big_d = plan.degree() as f64;

    let trials: Vec<Result<SparsifyTrial>> = par.map_range(cfg.trials, |t| {
        let mut rng = stream_rng(cfg.seed, t as u64 + 1);
        let sparsifier = plan.sparsify_to(d_target, &mut rng)?;
        let inner = Parallelism::Sequential;
        let errors = verify_sparsifier_with(&g, &sparsifier.graph, cfg.pair_budget, inner, &mut rng)?;
        let interval = interval_certificate(&sparsifier.graph)?;
        let max_degree_error = sparsifier
            .graph
            .degrees()
            .into_iter()
            .map(|d| (d - big_d).abs())
            .fold(0.0, f64::max);
        let baseline = if with_baseline {
            let sample = independent_sample_baseline(&g, d_target * g.n(), &mut rng)?;
            let errors = if sample.connected {
                verify_sparsifier_with(&g, &sample.graph, cfg.pair_budget, inner, &mut rng)?
            } else {
                ErrorReport::disconnected()
            };
            Some(BaselineTrial { sample, errors })
        } else {
            None
        };
        Ok(SparsifyTrial {
            trial: t,
            sparsifier,
            errors,
            interval,
            max_degree_error,
            baseline,
        })
    });
    let trials: Vec<SparsifyTrial> = trials.into_iter().collect::<Result<_>>()?;

    let mut assertions = vec![Assertion::new(
        "decomposition_audit",
        audit.passed(),
        format!("{} matchings, expected {}", audit.count, audit.expected_count),
    )];
    let outside = trials.iter().filter(|t| !t.interval.holds).count();
    assertions.push(Assertion::new(
        "resistance_interval",
        outside == 0,
        format!("{outside} of {} trials outside the interval", trials.len()),
    ));
    let worst_deg = trials.iter().map(|t| t.max_degree_error).fold(0.0, f64::max);
    assertions.push(Assertion::new(
        "weighted_regularity",
        worst_deg <= 1e-9,
        format!("max |deg - D| = {worst_deg:e}"),
    ));
    let bad_weights = trials
        .iter()
        .filter(|t| {
            let s = t.sparsifier.scale;
            !t.sparsifier.graph.edges().all(|e| e.w == s || e.w == 2.0 * s)
        })
        .count();
    assertions.push(Assertion::new(
        "weight_values",
        bad_weights == 0,
        format!("{bad_weights} trials with weights outside {{scale, 2 scale}}"),
    ));

    let aggregate = Aggregate {
        median_max_error: median(trials.iter().map(|t| t.errors.max).collect()),
        median_baseline_max_error: with_baseline
            .then(|| median(trials.iter().filter_map(|t| t.baseline.as_ref()).map(|b| b.errors.max).collect()))
            .flatten(),
        ..Aggregate::default()
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: if with_baseline { "experiment" } else { "sparsify" }.into(),
        config: cfg.clone(),
        graph: GraphSummary::of(&g)?,
        decomposition: Some(audit),
        trials: trials.into_iter().map(|t| TrialRecord::Sparsify(Box::new(t))).collect(),
        aggregate,
        assertions,
    })
}

/// Sparsifies the configured graph once per trial and checks each result.
pub fn run_sparsify(cfg: &ExperimentConfig) -> Result<Report> {
    sparsify_report(cfg, false, Parallelism::default())
}

/// As [`run_sparsify`], plus an independent-sampling baseline per trial
/// with an expected `d_target · n` edges.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    sparsify_report(cfg, true, Parallelism::default())
}

pub fn run_sparsify_with(cfg: &ExperimentConfig, baseline: bool, par: Parallelism) -> Result<Report> {
    sparsify_report(cfg, baseline, par)
}

/// Element family for a game on `g`, with the audit of the decomposition
/// used (when matchings were involved).
pub fn element_family(
    g: &WeightedMultigraph,
    kind: ElementKind,
) -> Result<(ElementFamily, Option<DecompositionAudit>)> {
    let is_odd_complete = is_odd_complete(g);
    let kind = match kind {
        ElementKind::Auto if is_odd_complete => ElementKind::Cycles,
        ElementKind::Auto | ElementKind::Routed => {
            return Err(Error::InvalidParameter("routed weaves use no element family".into()))
        }
        k => k,
    };
    match kind {
        ElementKind::Cycles => {
            if !is_odd_complete {
                return Err(Error::InvalidParameter(
                    "cycle elements need an odd complete graph".into(),
                ));
            }
            Ok((ElementFamily::from_cycles(&walecki_decomposition(g.n())?), None))
        }
        ElementKind::Matchings => {
            let d = matching_decomposition(g)?;
            let audit = d.audit(g);
            Ok((ElementFamily::from_matchings(&d), Some(audit)))
        }
        _ => {
            let cover = g.double_cover()?;
            let d = matching_decomposition(&cover)?;
            let audit = d.audit(&cover);
            Ok((ElementFamily::from_matchings(&d), Some(audit)))
        }
    }
}

/// Plays one cut-weave game per trial and reports transcripts and
/// certificates.
pub fn run_certify(cfg: &ExperimentConfig) -> Result<Report> {
    run_certify_with(cfg, Parallelism::default())
}

fn is_odd_complete(g: &WeightedMultigraph) -> bool {
    g.n() % 2 == 1
        && g.n() >= 3
        && g.regular_unweighted_degree() == Some(g.n() - 1)
        && g.edges().all(|e| e.mult == 1 && !e.is_loop())
}

pub fn run_certify_with(cfg: &ExperimentConfig, par: Parallelism) -> Result<Report> {
    cfg.validate()?;
    let g = cfg.generator.generate(cfg.seed)?;
    let kind = match cfg.elements {
        ElementKind::Auto if is_odd_complete(&g) => ElementKind::Cycles,
        ElementKind::Auto => ElementKind::Routed,
        k => k,
    };
    let (family, audit) = if kind == ElementKind::Routed {
        (None, None)
    } else {
        let (f, a) = element_family(&g, kind)?;
        (Some(f), a)
    };
    let (n, r) = match &family {
        Some(f) => (f.n(), cfg.r.unwrap_or(f.len() * f.element_degree())),
        None => (g.n(), cfg.r.unwrap_or(1)),
    };
    let cap = round_cap(cfg.round_constant, r, n);
    let trials: Vec<CertifyTrial> = par.map_range(cfg.trials, |t| {
        let mut rng = stream_rng(cfg.seed, t as u64 + 1);
        let seq = Parallelism::Sequential;
        let played = match &family {
            Some(f) => play_game_with(f, r, cap, seq, &mut rng).map(|o| (o, None, None)),
            None => play_routed_game(&g, r, cap, seq, &mut rng)
                .map(|o| (o.game, Some(o.embedding.congestion()), o.host_bound)),
        };
        match played {
            Ok((out, congestion, host_bound)) => {
                let transcript = out.state.history().to_vec();
                CertifyTrial {
                    trial: t,
                    r,
                    round_cap: cap,
                    rounds: out.state.round(),
                    psi: out.state.psi(),
                    certificate: out.certificate,
                    congestion,
                    host_bound,
                    full_bound_shortfalls: transcript.iter().filter(|r| r.full_slack < -1e-9).count(),
                    transcript,
                    error: None,
                }
            }
            Err(e) => CertifyTrial {
                trial: t,
                r,
                round_cap: cap,
                rounds: 0,
                psi: f64::NAN,
                certificate: None,
                congestion: None,
                host_bound: None,
                full_bound_shortfalls: 0,
                transcript: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    });

    let mut assertions = Vec::new();
    if let Some(a) = &audit {
        assertions.push(Assertion::new(
            "decomposition_audit",
            a.passed(),
            format!("{} matchings, expected {}", a.count, a.expected_count),
        ));
    }
    let failed = trials.iter().filter(|t| t.error.is_some()).count();
    assertions.push(Assertion::new(
        "weave_validity",
        failed == 0,
        format!("{failed} games stopped by the weave player"),
    ));
    let rounds: Vec<&RoundRecord> = trials.iter().flat_map(|t| &t.transcript).collect();
    let increases = rounds.iter().filter(|r| r.psi_after > r.psi_before + 1e-12).count();
    assertions.push(Assertion::new(
        "potential_non_increasing",
        increases == 0,
        format!("{increases} rounds increased the potential"),
    ));
    let half = rounds.iter().filter(|r| r.half_slack < -1e-9).count();
    assertions.push(Assertion::new(
        "potential_half_bound",
        half == 0,
        format!("{half} rounds dropped less than edge_sum / (2r)"),
    ));
    let inconsistent = trials
        .iter()
        .filter_map(|t| t.certificate.as_ref())
        .filter(|c| !c.consistent())
        .count();
    assertions.push(Assertion::new(
        "certificate_brute_force",
        inconsistent == 0,
        format!("{inconsistent} certificates contradicted by brute force"),
    ));
    let best_host = trials.iter().filter_map(|t| t.host_bound).fold(f64::NAN, f64::max);
    if best_host.is_finite() && g.n() <= CHEEGER_MAX_N {
        let phi = cheeger_bruteforce_with(&g, par)?.phi;
        assertions.push(Assertion::new(
            "host_bound_brute_force",
            phi >= best_host - 1e-9,
            format!("expansion {phi} against best routed bound {best_host}"),
        ));
    }

    let certified = trials.iter().filter(|t| t.certificate.is_some()).count();
    let aggregate = Aggregate {
        certified_runs: Some(certified),
        median_rounds: median(
            trials
                .iter()
                .filter(|t| t.certificate.is_some())
                .map(|t| t.rounds as f64)
                .collect(),
        ),
        ..Aggregate::default()
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: "certify".into(),
        config: cfg.clone(),
        graph: GraphSummary::of(&g)?,
        decomposition: audit,
        trials: trials.into_iter().map(|t| TrialRecord::Certify(Box::new(t))).collect(),
        aggregate,
        assertions,
    })
}
