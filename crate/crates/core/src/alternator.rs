//! Extraction that alternates with routing: every cycle, candidate
//! extraction paths are routed and the one with the best success
//! probability plus wire-reduction bonus is committed.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::extract::{enumerate_cycles, expand_paths, extract_baseline, ExtractError, ExtractionPath, ExtractorState, PathDescriptor};
use crate::route::{delta_fidelity, route, route_backward, HardwareModel, Mapping, RouteError, RoutedResult};
use crate::zx::GraphLike;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlternatorError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("extraction made no progress within {0} iterations")]
    IterationCap(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlternatorConfig {
    /// Weight of the wire-reduction bonus.
    pub beta: f64,
    /// Number of committed gates rerouted with each candidate; `None` reroutes
    /// everything.
    pub window: Option<usize>,
    /// Cycles of lookahead per candidate path.
    pub depth: usize,
    /// Candidate cycles per extraction step.
    pub max_branch: usize,
    pub seed: u64,
    /// Worker threads for candidate scoring.
    pub jobs: usize,
}

impl Default for AlternatorConfig {
    fn default() -> Self {
        AlternatorConfig {
            beta: 0.0,
            window: None,
            depth: 1,
            max_branch: 8,
            seed: 0,
            jobs: 1,
        }
    }
}

impl AlternatorConfig {
    pub fn validate(&self) -> Result<(), AlternatorError> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(AlternatorError::Config(format!("beta must be finite and non-negative, got {}", self.beta)));
        }
        if self.depth == 0 {
            return Err(AlternatorError::Config("depth must be at least 1".into()));
        }
        if self.max_branch == 0 {
            return Err(AlternatorError::Config("max_branch must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(AlternatorError::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Routing-based score of one candidate path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathScore {
    /// Position of the path in the candidate list.
    pub index: usize,
    pub delta_w: i64,
    pub asp: f64,
    /// β·ΔW.
    pub bias: f64,
    /// asp + bias.
    pub total: f64,
    pub routed_preview: RoutedResult,
}

impl PathScore {
    /// Ordering under which the greatest element is the preferred path:
    /// higher total, then higher ΔW, then lower index.
    pub fn preference(&self, other: &PathScore) -> Ordering {
        self.total
            .total_cmp(&other.total)
            .then(self.delta_w.cmp(&other.delta_w))
            .then(other.index.cmp(&self.index))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateRecord {
    pub delta_w: i64,
    pub asp: f64,
    pub bias: f64,
    pub total: f64,
}

/// One committed cycle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub candidates: usize,
    /// Index of the best-scoring path.
    pub chosen: usize,
    /// Index of the committed single cycle.
    pub committed_cycle: usize,
    pub descriptor: PathDescriptor,
    pub delta_w: i64,
    pub scores: Vec<CandidateRecord>,
    pub committed_gates: usize,
    pub interior_spiders: usize,
    pub hadamard_wires: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AlternatorTrace {
    /// Interior spiders before extraction.
    pub k: usize,
    pub max_branch: usize,
    pub depth: usize,
    /// Routing evaluations performed; steps with a single candidate need none.
    pub evaluations: usize,
    pub iterations: Vec<IterationRecord>,
}

impl AlternatorTrace {
    /// One JSON object per iteration, newline separated.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for it in &self.iterations {
            out.push_str(&serde_json::to_string(it).expect("trace records serialize"));
            out.push('\n');
        }
        out
    }
}

/// Routes `prefix ⧺ path` (extraction order) from `carried` and scores it.
pub fn score_path(
    prefix: &[Gate],
    path: &ExtractionPath,
    index: usize,
    hw: &HardwareModel,
    cfg: &AlternatorConfig,
    carried: &Mapping,
) -> Result<PathScore, AlternatorError> {
    let n = path.successor.num_qubits();
    let gates: Vec<Gate> = prefix.iter().chain(path.extraction_order()).copied().collect();
    let circuit = Circuit::from_gates(n, gates).map_err(|e| AlternatorError::Config(e.to_string()))?;
    let routed = route(&circuit, hw, carried)?;
    let bias = cfg.beta * path.delta_w as f64;
    Ok(PathScore {
        index,
        delta_w: path.delta_w,
        asp: routed.asp,
        bias,
        total: routed.asp + bias,
        routed_preview: routed,
    })
}

/// Scores every path, in parallel when `pool` is given. The result order
/// matches `paths`.
fn score_all(
    prefix: &[Gate],
    paths: &[ExtractionPath],
    hw: &HardwareModel,
    cfg: &AlternatorConfig,
    carried: &Mapping,
    pool: Option<&rayon::ThreadPool>,
) -> Result<Vec<PathScore>, AlternatorError> {
    let one = |(i, p): (usize, &ExtractionPath)| score_path(prefix, p, i, hw, cfg, carried);
    match pool {
        Some(pool) => pool.install(|| paths.par_iter().enumerate().map(one).collect()),
        None => paths.iter().enumerate().map(one).collect(),
    }
}

/// Index of the preferred score.
pub fn select_best(scores: &[PathScore]) -> Option<usize> {
    scores
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.preference(b.1))
        .map(|(i, _)| i)
}

/// Runs the alternating loop and routes the complete circuit in extraction
/// order, so that with an unbounded window the last score matches the
/// result.
pub fn alternating_extract(
    g: &GraphLike,
    hw: &HardwareModel,
    cfg: &AlternatorConfig,
) -> Result<(RoutedResult, AlternatorTrace), AlternatorError> {
    cfg.validate()?;
    let n = g.num_qubits();
    if n > hw.num_physical() {
        return Err(RouteError::TooManyQubits {
            logical: n,
            physical: hw.num_physical(),
        }
        .into());
    }
    let pool = if cfg.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.jobs)
                .build()
                .map_err(|e| AlternatorError::Config(e.to_string()))?,
        )
    } else {
        None
    };

    let mut st = ExtractorState::new(g)?;
    let mut trace = AlternatorTrace {
        k: g.diagram().num_interior(),
        max_branch: cfg.max_branch,
        depth: cfg.depth,
        ..AlternatorTrace::default()
    };
    let mut carried = Mapping::identity(n, hw.num_physical())?;
    let mut carried_pos = 0;
    let cap = 4 * (g.diagram().num_spiders() + 1);

    while !st.is_done() {
        if trace.iterations.len() >= cap {
            return Err(AlternatorError::IterationCap(cap));
        }
        let cycles = enumerate_cycles(&st, cfg.max_branch)?;
        let paths = if cfg.depth > 1 {
            expand_paths(&cycles, cfg.depth, cfg.max_branch)?
        } else {
            cycles.clone()
        };

        let committed = st.extracted_rev();
        let window_start = match cfg.window {
            Some(s) => committed.len().saturating_sub(s),
            None => 0,
        };
        if window_start > carried_pos {
            let segment = Circuit::from_gates(n, committed[carried_pos..window_start].to_vec())
                .map_err(|e| AlternatorError::Config(e.to_string()))?;
            carried = route(&segment, hw, &carried)?.final_mapping;
            carried_pos = window_start;
        }

        let (chosen, scores) = if paths.len() > 1 {
            let scores = score_all(&committed[window_start..], &paths, hw, cfg, &carried, pool.as_ref())?;
            trace.evaluations += scores.len();
            let best = select_best(&scores).expect("at least two candidates");
            (best, scores)
        } else {
            (0, Vec::new())
        };
        let path = &paths[chosen];
        let root = path.root;
        let next = cycles
            .into_iter()
            .nth(root)
            .expect("root indexes a single-cycle candidate");
        st = next.successor;
        trace.iterations.push(IterationRecord {
            iteration: trace.iterations.len(),
            candidates: paths.len(),
            chosen,
            committed_cycle: root,
            descriptor: next.descriptor,
            delta_w: next.delta_w,
            scores: scores
                .iter()
                .map(|s| CandidateRecord {
                    delta_w: s.delta_w,
                    asp: s.asp,
                    bias: s.bias,
                    total: s.total,
                })
                .collect(),
            committed_gates: st.extracted_rev().len(),
            interior_spiders: st.diagram().diagram().num_interior(),
            hadamard_wires: st.hadamard_wire_count(),
        });
    }
    let routed = route_backward(&st.extracted_circuit(), hw)?;
    Ok((routed, trace))
}

/// Baseline and alternating runs on the same diagram and hardware.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub baseline: RoutedResult,
    pub alternating: RoutedResult,
    pub asp_base: f64,
    pub asp_alt: f64,
    pub delta_fidelity: f64,
    pub trace: AlternatorTrace,
}

/// Extract, then route in extraction order.
pub fn baseline_routed(g: &GraphLike, hw: &HardwareModel) -> Result<RoutedResult, AlternatorError> {
    Ok(route_backward(&extract_baseline(g)?, hw)?)
}

pub fn compare_to_baseline(g: &GraphLike, hw: &HardwareModel, cfg: &AlternatorConfig) -> Result<Comparison, AlternatorError> {
    let baseline = baseline_routed(g, hw)?;
    let (alternating, trace) = alternating_extract(g, hw, cfg)?;
    Ok(Comparison {
        asp_base: baseline.asp,
        asp_alt: alternating.asp,
        delta_fidelity: delta_fidelity(alternating.asp, baseline.asp)?,
        baseline,
        alternating,
        trace,
    })
}

/// One grid point of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub circuit_id: String,
    pub beta: f64,
    pub window: Option<usize>,
    pub depth: usize,
    pub max_branch: usize,
    pub asp_base: f64,
    pub asp_alt: f64,
    pub delta_fidelity: f64,
    pub swaps_base: usize,
    pub swaps_alt: usize,
    pub twoq_base: usize,
    pub twoq_alt: usize,
    pub evaluations: usize,
    /// Zero unless timing was requested, so that output stays reproducible.
    pub wall_time_ms: u64,
}

/// A sweep row with the trace of its alternating run.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRun {
    pub row: SweepRow,
    pub trace: AlternatorTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub betas: Vec<f64>,
    pub windows: Vec<Option<usize>>,
    pub depths: Vec<usize>,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<(), AlternatorError> {
        if self.betas.is_empty() || self.windows.is_empty() || self.depths.is_empty() {
            return Err(AlternatorError::Config("sweep grids must be non-empty".into()));
        }
        Ok(())
    }
}

/// Full-factorial sweep over one diagram. The baseline is computed once and
/// shared by every grid point.
pub fn sweep(
    circuit_id: &str,
    g: &GraphLike,
    hw: &HardwareModel,
    base: &AlternatorConfig,
    grid: &SweepGrid,
    timing: bool,
) -> Result<Vec<SweepRun>, AlternatorError> {
    grid.validate()?;
    let baseline = baseline_routed(g, hw)?;
    let mut rows = Vec::new();
    for &depth in &grid.depths {
        for &window in &grid.windows {
            for &beta in &grid.betas {
                let cfg = AlternatorConfig {
                    beta,
                    window,
                    depth,
                    ..base.clone()
                };
                let started = Instant::now();
                let (alt, trace) = alternating_extract(g, hw, &cfg)?;
                let wall_time_ms = if timing { started.elapsed().as_millis() as u64 } else { 0 };
                let row = SweepRow {
                    circuit_id: circuit_id.to_string(),
                    beta,
                    window,
                    depth,
                    max_branch: cfg.max_branch,
                    asp_base: baseline.asp,
                    asp_alt: alt.asp,
                    delta_fidelity: delta_fidelity(alt.asp, baseline.asp)?,
                    swaps_base: baseline.swap_count,
                    swaps_alt: alt.swap_count,
                    twoq_base: baseline.two_qubit_count,
                    twoq_alt: alt.two_qubit_count,
                    evaluations: trace.evaluations,
                    wall_time_ms,
                };
                rows.push(SweepRun { row, trace });
            }
        }
    }
    Ok(rows)
}
