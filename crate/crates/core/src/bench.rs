//! End-to-end workflows and the two benchmark families: diagonal Hermitian
//! operators and QAOA phase-separation circuits on random 3-regular graphs.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{check_dense_qubits, GateMask, GateSeq, Layering, MczrGate, PhaseVector};
use crate::layering::{
    complementary_split, depth_lower_bound, extract_complementary_pairs, iterative_depth_opt,
    OptReport,
};
use crate::phasepoly::PhasePolynomial;
use crate::synth::{optimal_gate_count, pairwise_layout, solve_angles_fast, solve_angles_naive};

/// Environment variable consulted when a config has no seed.
pub const SEED_ENV: &str = "MCZR_SEED";
pub const DEFAULT_SEED: u64 = 20230;
pub const DEFAULT_GAMMA: f64 = 1.0;
/// Largest `n` for which every Hermitian diagonal can be listed.
pub const MAX_ENUMERATE_QUBITS: u32 = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Solver {
    #[default]
    Fast,
    Naive,
}

impl Solver {
    pub fn solve(self, alpha: &PhaseVector) -> Result<PhasePolynomial> {
        match self {
            Solver::Fast => solve_angles_fast(alpha),
            Solver::Naive => solve_angles_naive(alpha),
        }
    }
}

/// The non-identity gates of a solved polynomial, in increasing mask order.
pub fn gates_of(poly: &PhasePolynomial) -> GateSeq {
    let gates = poly.terms().map(|(m, t)| MczrGate::new(m, t)).collect();
    GateSeq::from_gates(poly.n(), gates).expect("terms never use the zero mask")
}

/// Complementary pairs first (one per layer), then the optimized remainder.
fn pairs_then_rest(pairs: Layering, rest: &GateSeq, iter: usize) -> Result<OptReport> {
    let head = pairs.depth();
    let report = iterative_depth_opt(rest, iter)?;
    let layering = pairs.concat(report.layering)?;
    Ok(OptReport {
        depth: layering.depth(),
        layering,
        lower_bound: head + report.lower_bound,
        iterations_run: report.iterations_run,
        per_iteration_depths: report
            .per_iteration_depths
            .into_iter()
            .map(|d| head + d)
            .collect(),
    })
}

/// Synthesize the minimal gate set for `alpha`, pair up complements, and run
/// the iterative optimizer on what is left.
pub fn workflow1(alpha: &PhaseVector, iter: usize) -> Result<(Layering, OptReport)> {
    workflow1_with(alpha, iter, Solver::Fast)
}

pub fn workflow1_with(
    alpha: &PhaseVector,
    iter: usize,
    solver: Solver,
) -> Result<(Layering, OptReport)> {
    let poly = solver.solve(alpha)?;
    let (pairs, rest) = extract_complementary_pairs(&gates_of(&poly))?;
    let report = pairs_then_rest(pairs, &rest, iter)?;
    Ok((report.layering.clone(), report))
}

/// Depth optimization of an existing circuit: complementary pairs first,
/// iterative optimizer on the rest.
pub fn workflow2(seq: &GateSeq, iter: usize) -> Result<OptReport> {
    let (pairs, rest) = complementary_split(seq);
    pairs_then_rest(pairs, &rest, iter)
}

fn hermitian_from_signs(n: u32, signs: impl Fn(usize) -> bool) -> PhaseVector {
    let alpha = (0..1usize << n)
        .map(|q| if q > 0 && signs(q) { PI } else { 0.0 })
        .collect();
    PhaseVector::new(n, alpha).expect("length is 2^n")
}

/// Every `±1` diagonal with a `+1` first entry, as phases in `{0, π}`.
/// There are `2^(2^n - 1)` of them.
pub fn enumerate_hermitian_diagonals(n: u32) -> Result<impl Iterator<Item = PhaseVector>> {
    if n == 0 || n > MAX_ENUMERATE_QUBITS {
        return Err(Error::QubitCount {
            n,
            max: MAX_ENUMERATE_QUBITS,
        });
    }
    let count = 1u64 << ((1u32 << n) - 1);
    Ok((0..count).map(move |k| hermitian_from_signs(n, |q| k >> (q - 1) & 1 == 1)))
}

/// A seeded random `±1` diagonal with a `+1` first entry.
pub fn random_hermitian_diagonal(n: u32, seed: u64) -> Result<PhaseVector> {
    check_dense_qubits(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signs: Vec<bool> = (0..1usize << n).map(|_| rng.gen_bool(0.5)).collect();
    Ok(hermitian_from_signs(n, |q| signs[q]))
}

/// Simple undirected graph in which every vertex has degree 3. Vertices are
/// 0-indexed; vertex `v` drives qubit `v + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl RegularGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n < 4 || n % 2 == 1 {
            return Err(Error::GraphSize(n));
        }
        let mut degree = vec![0usize; n];
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b {
                return Err(Error::Config(format!("bad edge ({a}, {b})")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Config(format!("repeated edge ({a}, {b})")));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(Error::Config(format!(
                "vertex {v} has degree {}",
                degree[v]
            )));
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Pairing-model sampler: shuffle three stubs per vertex, pair neighbours,
/// and start over whenever a loop or repeated edge appears. Edges come back
/// as a sorted list of `(low, high)` vertex pairs.
pub fn random_3regular_graph(n: usize, seed: u64) -> Result<RegularGraph> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::GraphSize(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..3 * n).map(|s| s / 3).collect();
    loop {
        stubs.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        let simple = stubs.chunks_exact(2).all(|p| {
            let (a, b) = (p[0].min(p[1]), p[0].max(p[1]));
            a != b && seen.insert((a, b))
        });
        if simple {
            return RegularGraph::new(n, seen.into_iter().collect());
        }
    }
}

/// One two-qubit gate of angle `gamma` per edge, in edge-list order.
pub fn qaoa_phase_separation(graph: &RegularGraph, gamma: f64) -> Result<GateSeq> {
    let n = u32::try_from(graph.n).map_err(|_| Error::GraphSize(graph.n))?;
    let gates = graph
        .edges
        .iter()
        .map(|&(a, b)| Ok(MczrGate::new(GateMask::from_qubits(&[a + 1, b + 1], n)?, gamma)))
        .collect::<Result<Vec<_>>>()?;
    GateSeq::from_gates(n, gates)
}

/// One row of benchmark output. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: u32,
    pub instance_id: u64,
    pub strategy: String,
    pub depth_before: usize,
    pub depth_after: usize,
    pub gate_count: usize,
    pub lower_bound: usize,
    pub wall_time: f64,
    pub rng_seed: u64,
}

pub const CSV_HEADER: &str =
    "n,instance_id,strategy,depth_before,depth_after,gate_count,lower_bound,wall_time,rng_seed";

/// Hermitian strategies: `app01` is the pair layout alone, `app02`..`app04`
/// run workflow 1 with 1, 5 and 20 iterations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    App01,
    App02,
    App03,
    App04,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::App01,
        Strategy::App02,
        Strategy::App03,
        Strategy::App04,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Strategy::App01 => "app01",
            Strategy::App02 => "app02",
            Strategy::App03 => "app03",
            Strategy::App04 => "app04",
        }
    }

    /// Workflow 1 iteration count; `None` for the bare pair layout.
    pub fn iterations(self) -> Option<usize> {
        match self {
            Strategy::App01 => None,
            Strategy::App02 => Some(1),
            Strategy::App03 => Some(5),
            Strategy::App04 => Some(20),
        }
    }
}

fn default_samples() -> usize {
    100
}

fn default_enumerate_max() -> u32 {
    MAX_ENUMERATE_QUBITS
}

fn default_strategies() -> Vec<Strategy> {
    Strategy::ALL.to_vec()
}

fn default_graphs() -> usize {
    100
}

fn default_iters() -> Vec<usize> {
    (1..=5).collect()
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermitianConfig {
    pub sizes: Vec<u32>,
    /// Random operators per size above `enumerate_max_n`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Sizes up to this are enumerated in full.
    #[serde(default = "default_enumerate_max")]
    pub enumerate_max_n: u32,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<Strategy>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QaoaConfig {
    pub sizes: Vec<usize>,
    #[serde(default = "default_graphs")]
    pub graphs: usize,
    #[serde(default = "default_iters")]
    pub iters: Vec<usize>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SuiteConfig {
    Hermitian(HermitianConfig),
    Qaoa(QaoaConfig),
}

/// Config seed, else `MCZR_SEED`, else [`DEFAULT_SEED`].
pub fn resolve_seed(seed: Option<u64>) -> Result<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Per-instance seed derived from the suite seed.
pub fn instance_seed(base: u64, n: u64, instance: u64) -> u64 {
    base.wrapping_add(n << 32).wrapping_add(instance)
}

impl HermitianConfig {
    fn validate(&self) -> Result<()> {
        if let Some(&n) = self.sizes.iter().find(|&&n| n == 0 || n > 24) {
            return Err(Error::Config(format!("hermitian size {n} outside 1..=24")));
        }
        if self.enumerate_max_n > MAX_ENUMERATE_QUBITS {
            return Err(Error::Config(format!(
                "enumerate_max_n above {MAX_ENUMERATE_QUBITS}"
            )));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("no strategies listed".into()));
        }
        Ok(())
    }
}

impl QaoaConfig {
    fn validate(&self) -> Result<()> {
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 4 || n % 2 == 1 || n > 64) {
            return Err(Error::Config(format!(
                "qaoa size {n} must be even and within 4..=64"
            )));
        }
        if self.iters.is_empty() || self.iters.contains(&0) {
            return Err(Error::Config("iters must be non-empty and positive".into()));
        }
        if !self.gamma.is_finite() {
            return Err(Error::Config("gamma must be finite".into()));
        }
        Ok(())
    }
}

fn hermitian_records(
    alpha: &PhaseVector,
    instance_id: u64,
    rng_seed: u64,
    strategies: &[Strategy],
) -> Result<Vec<ExperimentRecord>> {
    let poly = solve_angles_fast(alpha)?;
    let gate_count = optimal_gate_count(&poly);
    let baseline = pairwise_layout(&poly).depth();
    let lower_bound = depth_lower_bound(&gates_of(&poly));
    strategies
        .iter()
        .map(|&s| {
            let start = Instant::now();
            let depth = match s.iterations() {
                None => pairwise_layout(&solve_angles_fast(alpha)?).depth(),
                Some(iter) => workflow1(alpha, iter)?.1.depth,
            };
            Ok(ExperimentRecord {
                n: alpha.n(),
                instance_id,
                strategy: s.tag().to_string(),
                depth_before: baseline,
                depth_after: depth,
                gate_count,
                lower_bound,
                wall_time: start.elapsed().as_secs_f64(),
                rng_seed,
            })
        })
        .collect()
}

fn run_hermitian(cfg: &HermitianConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let base = resolve_seed(cfg.seed)?;
    let mut jobs: Vec<(u32, u64, Option<u64>)> = Vec::new();
    for &n in &cfg.sizes {
        if n <= cfg.enumerate_max_n {
            let count = 1u64 << ((1u32 << n) - 1);
            jobs.extend((0..count).map(|k| (n, k, None)));
        } else {
            jobs.extend(
                (0..cfg.samples as u64).map(|i| (n, i, Some(instance_seed(base, n.into(), i)))),
            );
        }
    }
    let chunks = jobs
        .par_iter()
        .map(|&(n, id, seed)| {
            let alpha = match seed {
                Some(s) => random_hermitian_diagonal(n, s)?,
                None => hermitian_from_signs(n, |q| id >> (q - 1) & 1 == 1),
            };
            hermitian_records(&alpha, id, seed.unwrap_or(0), &cfg.strategies)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

fn run_qaoa(cfg: &QaoaConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let base = resolve_seed(cfg.seed)?;
    let jobs: Vec<(usize, u64)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| (0..cfg.graphs as u64).map(move |i| (n, i)))
        .collect();
    let chunks = jobs
        .par_iter()
        .map(|&(n, id)| {
            let seed = instance_seed(base, n as u64, id);
            let seq = qaoa_phase_separation(&random_3regular_graph(n, seed)?, cfg.gamma)?;
            let before = seq.asap_depth();
            cfg.iters
                .iter()
                .map(|&iter| {
                    let start = Instant::now();
                    let report = workflow2(&seq, iter)?;
                    Ok(ExperimentRecord {
                        n: seq.n(),
                        instance_id: id,
                        strategy: format!("iter{iter}"),
                        depth_before: before,
                        depth_after: report.depth,
                        gate_count: seq.len(),
                        lower_bound: report.lower_bound,
                        wall_time: start.elapsed().as_secs_f64(),
                        rng_seed: seed,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Runs every instance of the suite. Records come out grouped by size, then
/// instance, then strategy, regardless of thread scheduling.
pub fn run_experiment_suite(config: &SuiteConfig) -> Result<Vec<ExperimentRecord>> {
    match config {
        SuiteConfig::Hermitian(c) => run_hermitian(c),
        SuiteConfig::Qaoa(c) => run_qaoa(c),
    }
}

/// Means over all records sharing `(n, strategy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub n: u32,
    pub strategy: String,
    pub instances: usize,
    pub mean_depth_before: f64,
    pub mean_depth_after: f64,
    /// Mean of `100 * (before - after) / before` over instances with `before > 0`.
    pub mean_reduction_pct: f64,
    pub mean_wall_time: f64,
}

pub fn aggregate(records: &[ExperimentRecord]) -> Vec<Summary> {
    let mut keys: Vec<(u32, &str)> = Vec::new();
    for r in records {
        let key = (r.n, r.strategy.as_str());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(n, strategy)| {
            let group: Vec<&ExperimentRecord> = records
                .iter()
                .filter(|r| r.n == n && r.strategy == strategy)
                .collect();
            let count = group.len() as f64;
            let mean = |f: &dyn Fn(&ExperimentRecord) -> f64| {
                group.iter().map(|r| f(r)).sum::<f64>() / count
            };
            let reductions: Vec<f64> = group
                .iter()
                .filter(|r| r.depth_before > 0)
                .map(|r| {
                    100.0 * (r.depth_before as f64 - r.depth_after as f64) / r.depth_before as f64
                })
                .collect();
            Summary {
                n,
                strategy: strategy.to_string(),
                instances: group.len(),
                mean_depth_before: mean(&|r| r.depth_before as f64),
                mean_depth_after: mean(&|r| r.depth_after as f64),
                mean_reduction_pct: if reductions.is_empty() {
                    0.0
                } else {
                    reductions.iter().sum::<f64>() / reductions.len() as f64
                },
                mean_wall_time: mean(&|r| r.wall_time),
            }
        })
        .collect()
}
