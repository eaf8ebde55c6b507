//! Experiment runner: random and QASM studies, parameter sweeps, corpus
//! verification and CSV/JSON reporting.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::alternator::{self, AlternatorConfig, IterationRecord, SweepGrid, SweepRun};
use crate::circuit::Circuit;
use crate::extract::extract_baseline;
use crate::qasm::parse_qasm;
use crate::random::random_clifford_t;
use crate::route::{hardware_from_pairs, parse_key_values, HardwareModel, RoutedResult};
use crate::sim::{equivalent_up_to_permutation, equivalent_up_to_phase, MAX_SIM_QUBITS};
use crate::simplify::interior_clifford_simp;
use crate::zx::{circuit_to_zx, to_graph_like, GraphLike};

/// The edge-bias grid of the benchmark study.
pub const BETA_GRID: [f64; 6] = [5e-5, 5e-4, 1e-3, 3e-3, 5e-3, 0.01];

/// Largest circuit the verification oracle accepts.
pub const MAX_VERIFY_QUBITS: usize = 8;

const HARDWARE_KEYS: [&str; 8] = ["rows", "cols", "fidelity_1q", "fidelity_2q", "duration_1q", "duration_2q", "t1", "t2"];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Alternator(#[from] alternator::AlternatorError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Random,
    Qasm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub num_qubits: usize,
    pub depth: usize,
    pub p_t: f64,
    pub p_cx: f64,
    pub count: usize,
    pub seed: u64,
    pub files: Vec<PathBuf>,
    pub hardware: HardwareModel,
    pub betas: Vec<f64>,
    pub windows: Vec<Option<usize>>,
    pub depths: Vec<usize>,
    pub max_branch: usize,
    /// Record wall-clock time per run (makes output non-reproducible).
    pub timing: bool,
    /// Circuits processed concurrently.
    pub jobs: usize,
}

impl ExperimentConfig {
    /// Desk-scale random study: 20 circuits, n=6, d=100, m=8, l=1, s=∞,
    /// β ∈ {0} ∪ the benchmark grid, on a 6×6 grid.
    pub fn desk() -> ExperimentConfig {
        let mut betas = vec![0.0];
        betas.extend(BETA_GRID);
        ExperimentConfig {
            mode: Mode::Random,
            num_qubits: 6,
            depth: 100,
            p_t: 0.4,
            p_cx: 0.3,
            count: 20,
            seed: 0,
            files: Vec::new(),
            hardware: hardware_from_pairs(&BTreeMap::new()).expect("default hardware is valid"),
            betas,
            windows: vec![None],
            depths: vec![1],
            max_branch: 8,
            timing: false,
            jobs: 1,
        }
    }

    /// Named presets: `desk`, `deep-bias` (d=300 β sweep) and
    /// `deep-window` (d=300, β=0.002, s and l sweep).
    pub fn preset(name: &str) -> Result<ExperimentConfig, BenchError> {
        let desk = ExperimentConfig::desk();
        match name {
            "desk" => Ok(desk),
            "deep-bias" => Ok(ExperimentConfig {
                depth: 300,
                count: 5,
                ..desk
            }),
            "deep-window" => Ok(ExperimentConfig {
                depth: 300,
                count: 5,
                betas: vec![0.002],
                windows: vec![Some(50), Some(100), Some(200), None],
                depths: vec![1, 2],
                ..desk
            }),
            _ => Err(BenchError::Config(format!("unknown preset `{name}`"))),
        }
    }

    /// Parses flat `key = value` text. Relative paths resolve against
    /// `base_dir`. A `preset` key selects the starting point; inline hardware
    /// keys override those of a `hardware` file.
    pub fn parse(text: &str, base_dir: &Path) -> Result<ExperimentConfig, BenchError> {
        let kv = parse_key_values(text).map_err(BenchError::Config)?;
        let mut cfg = ExperimentConfig::preset(kv.get("preset").map_or("desk", String::as_str))?;
        let mut hw_pairs = BTreeMap::new();
        if let Some(path) = kv.get("hardware") {
            let path = base_dir.join(path);
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            hw_pairs = parse_key_values(&text).map_err(BenchError::Config)?;
        }
        let mut hw_inline = false;
        for (k, v) in &kv {
            let bad = |what: &str| BenchError::Config(format!("{k}: expected {what}, got `{v}`"));
            match k.as_str() {
                "preset" | "hardware" => {}
                "mode" => {
                    cfg.mode = match v.as_str() {
                        "random" => Mode::Random,
                        "qasm" => Mode::Qasm,
                        _ => return Err(bad("`random` or `qasm`")),
                    }
                }
                "qubits" => cfg.num_qubits = v.parse().map_err(|_| bad("an integer"))?,
                "depth" => cfg.depth = v.parse().map_err(|_| bad("an integer"))?,
                "p_t" => cfg.p_t = v.parse().map_err(|_| bad("a number"))?,
                "p_cx" => cfg.p_cx = v.parse().map_err(|_| bad("a number"))?,
                "count" => cfg.count = v.parse().map_err(|_| bad("an integer"))?,
                "seed" => cfg.seed = v.parse().map_err(|_| bad("an integer"))?,
                "files" => cfg.files = split_list(v).map(|f| base_dir.join(f)).collect(),
                "betas" => cfg.betas = split_list(v).map(str::parse).collect::<Result<_, _>>().map_err(|_| bad("numbers"))?,
                "windows" => cfg.windows = split_list(v).map(parse_window).collect::<Option<_>>().ok_or_else(|| bad("integers or `inf`"))?,
                "depths" => cfg.depths = split_list(v).map(str::parse).collect::<Result<_, _>>().map_err(|_| bad("integers"))?,
                "max_branch" => cfg.max_branch = v.parse().map_err(|_| bad("an integer"))?,
                "timing" => cfg.timing = v.parse().map_err(|_| bad("`true` or `false`"))?,
                "jobs" => cfg.jobs = v.parse().map_err(|_| bad("an integer"))?,
                key if HARDWARE_KEYS.contains(&key) => {
                    hw_pairs.insert(k.clone(), v.clone());
                    hw_inline = true;
                }
                _ => return Err(BenchError::Config(format!("unknown key `{k}`"))),
            }
        }
        if hw_inline || kv.contains_key("hardware") {
            cfg.hardware = hardware_from_pairs(&hw_pairs).map_err(|e| BenchError::Config(e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig, BenchError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        ExperimentConfig::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let err = |m: &str| Err(BenchError::Config(m.into()));
        if self.mode == Mode::Random && self.num_qubits == 0 {
            return err("qubits must be positive");
        }
        if !(0.0..=1.0).contains(&self.p_t) || !(0.0..=1.0).contains(&self.p_cx) || self.p_t + self.p_cx > 1.0 {
            return err("p_t and p_cx must be probabilities with p_t + p_cx <= 1");
        }
        if self.jobs == 0 {
            return err("jobs must be at least 1");
        }
        self.grid().validate()?;
        self.alternator(0.0, None, 1).validate()?;
        for &d in &self.depths {
            self.alternator(0.0, None, d).validate()?;
        }
        for &b in &self.betas {
            self.alternator(b, None, 1).validate()?;
        }
        Ok(())
    }

    pub fn grid(&self) -> SweepGrid {
        SweepGrid {
            betas: self.betas.clone(),
            windows: self.windows.clone(),
            depths: self.depths.clone(),
        }
    }

    fn alternator(&self, beta: f64, window: Option<usize>, depth: usize) -> AlternatorConfig {
        AlternatorConfig {
            beta,
            window,
            depth,
            max_branch: self.max_branch,
            seed: self.seed,
            jobs: 1,
        }
    }
}

fn split_list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_window(s: &str) -> Option<Option<usize>> {
    match s {
        "inf" | "∞" => Some(None),
        _ => s.parse().ok().map(Some),
    }
}

pub fn window_label(w: Option<usize>) -> String {
    w.map_or_else(|| "inf".to_string(), |s| s.to_string())
}

/// One input circuit of a study.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitCase {
    pub id: String,
    pub circuit: Circuit,
    /// Generator seed for random circuits.
    pub seed: Option<u64>,
    /// Generator depth for random circuits, layer depth otherwise.
    pub depth: usize,
}

/// A circuit that could not be loaded or processed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub circuit_id: String,
    pub reason: String,
}

/// Random Clifford+T cases; circuit `i` uses seed `seed + i`.
pub fn random_cases(cfg: &ExperimentConfig) -> Result<Vec<CircuitCase>, BenchError> {
    (0..cfg.count)
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let circuit = random_clifford_t(cfg.num_qubits, cfg.depth, cfg.p_t, cfg.p_cx, seed)
                .map_err(|e| BenchError::Config(e.to_string()))?;
            Ok(CircuitCase {
                id: format!("random-{i:03}"),
                circuit,
                seed: Some(seed),
                depth: cfg.depth,
            })
        })
        .collect()
}

/// Loads QASM files; unreadable or unsupported files become failures.
pub fn qasm_cases(files: &[PathBuf]) -> (Vec<CircuitCase>, Vec<Failure>) {
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for path in files {
        let id = path.display().to_string();
        let parsed = fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_qasm(&text).map_err(|e| e.to_string()));
        match parsed {
            Ok(circuit) => cases.push(CircuitCase {
                id,
                depth: circuit.depth(),
                circuit,
                seed: None,
            }),
            Err(reason) => {
                log::warn!("skipping {id}: {reason}");
                failures.push(Failure { circuit_id: id, reason });
            }
        }
    }
    (cases, failures)
}

/// Circuit → ZX → graph-like → Clifford simplification.
pub fn prepare(c: &Circuit) -> Result<GraphLike, BenchError> {
    let g = to_graph_like(circuit_to_zx(c)).map_err(|e| BenchError::Config(e.to_string()))?;
    Ok(interior_clifford_simp(&g))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub circuit_id: String,
    pub n: usize,
    pub depth: usize,
    pub beta: f64,
    pub s: String,
    pub l: usize,
    pub m: usize,
    pub asp_base: f64,
    pub asp_alt: f64,
    pub delta_fidelity: f64,
    pub swaps_base: usize,
    pub swaps_alt: usize,
    pub twoq_base: usize,
    pub twoq_alt: usize,
    pub evaluations: usize,
    pub wall_time_ms: u64,
    pub seed: Option<u64>,
}

/// One alternating-run iteration, tagged with its run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceLine {
    pub circuit_id: String,
    pub beta: f64,
    pub s: String,
    pub l: usize,
    pub k: usize,
    pub m: usize,
    #[serde(flatten)]
    pub record: IterationRecord,
}

/// Base (β=0) and best-over-grid Δ per circuit and (s, l).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasSummary {
    pub circuit_id: String,
    pub s: String,
    pub l: usize,
    pub delta_base: Option<f64>,
    pub delta_biased: f64,
    pub best_beta: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StudyOutput {
    pub rows: Vec<ResultRow>,
    #[serde(skip)]
    pub traces: Vec<TraceLine>,
    pub summary: Vec<BiasSummary>,
    pub failures: Vec<Failure>,
}

fn run_case(case: &CircuitCase, cfg: &ExperimentConfig) -> Result<Vec<SweepRun>, BenchError> {
    log::info!("{}: {} qubits, {} gates", case.id, case.circuit.num_qubits(), case.circuit.len());
    let g = prepare(&case.circuit)?;
    let base = cfg.alternator(0.0, None, 1);
    Ok(alternator::sweep(&case.id, &g, &cfg.hardware, &base, &cfg.grid(), cfg.timing)?)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, BenchError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| BenchError::Config(e.to_string()))
}

/// Runs the configured grid on every case, `cfg.jobs` circuits at a time.
/// Rows keep case order, so the output does not depend on `jobs`.
pub fn run_cases(cases: &[CircuitCase], cfg: &ExperimentConfig) -> Result<StudyOutput, BenchError> {
    cfg.validate()?;
    let results: Vec<Result<Vec<SweepRun>, BenchError>> = pool(cfg.jobs)?.install(|| cases.par_iter().map(|c| run_case(c, cfg)).collect());
    let mut out = StudyOutput::default();
    for (case, result) in cases.iter().zip(results) {
        let runs = match result {
            Ok(runs) => runs,
            Err(e) => {
                log::warn!("{}: {e}", case.id);
                out.failures.push(Failure {
                    circuit_id: case.id.clone(),
                    reason: e.to_string(),
                });
                continue;
            }
        };
        for SweepRun { row, trace } in runs {
            let s = window_label(row.window);
            for record in trace.iterations {
                out.traces.push(TraceLine {
                    circuit_id: case.id.clone(),
                    beta: row.beta,
                    s: s.clone(),
                    l: row.depth,
                    k: trace.k,
                    m: trace.max_branch,
                    record,
                });
            }
            out.rows.push(ResultRow {
                circuit_id: case.id.clone(),
                n: case.circuit.num_qubits(),
                depth: case.depth,
                beta: row.beta,
                s,
                l: row.depth,
                m: row.max_branch,
                asp_base: row.asp_base,
                asp_alt: row.asp_alt,
                delta_fidelity: row.delta_fidelity,
                swaps_base: row.swaps_base,
                swaps_alt: row.swaps_alt,
                twoq_base: row.twoq_base,
                twoq_alt: row.twoq_alt,
                evaluations: row.evaluations,
                wall_time_ms: row.wall_time_ms,
                seed: case.seed,
            });
        }
    }
    out.summary = summarize(&out.rows);
    Ok(out)
}

/// Groups rows by circuit, s and l and takes the best Δ over β.
pub fn summarize(rows: &[ResultRow]) -> Vec<BiasSummary> {
    let mut groups: BTreeMap<(String, String, usize), Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.circuit_id.clone(), r.s.clone(), r.l)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((circuit_id, s, l), rs)| {
            let best = rs
                .iter()
                .max_by(|a, b| a.delta_fidelity.total_cmp(&b.delta_fidelity))
                .expect("groups are non-empty");
            BiasSummary {
                circuit_id,
                s,
                l,
                delta_base: rs.iter().find(|r| r.beta == 0.0).map(|r| r.delta_fidelity),
                delta_biased: best.delta_fidelity,
                best_beta: best.beta,
            }
        })
        .collect()
}

pub fn run_random_study(cfg: &ExperimentConfig) -> Result<StudyOutput, BenchError> {
    run_cases(&random_cases(cfg)?, cfg)
}

pub fn run_qasm_study(cfg: &ExperimentConfig) -> Result<StudyOutput, BenchError> {
    let (cases, failures) = qasm_cases(&cfg.files);
    let mut out = run_cases(&cases, cfg)?;
    let mut all = failures;
    all.append(&mut out.failures);
    out.failures = all;
    Ok(out)
}

/// Runs the study selected by `cfg.mode`.
pub fn run_study(cfg: &ExperimentConfig) -> Result<StudyOutput, BenchError> {
    match cfg.mode {
        Mode::Random => run_random_study(cfg),
        Mode::Qasm => run_qasm_study(cfg),
    }
}

/// Rows as RFC-4180 CSV with a header line.
pub fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Writes `results.csv`, `summary.csv`, `results.json` and `traces.jsonl`
/// into `dir`.
pub fn write_outputs(dir: &Path, out: &StudyOutput) -> Result<(), BenchError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let write = |name: &str, text: String| {
        let path = dir.join(name);
        fs::write(&path, text).map_err(io_err(&path))
    };
    write("results.csv", rows_to_csv(&out.rows)?)?;
    write("summary.csv", rows_to_csv(&out.summary)?)?;
    write("results.json", serde_json::to_string_pretty(out)? + "\n")?;
    let mut lines = String::new();
    for t in &out.traces {
        lines.push_str(&serde_json::to_string(t)?);
        lines.push('\n');
    }
    write("traces.jsonl", lines)
}

/// A failed oracle check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyFailure {
    pub circuit_id: String,
    pub seed: Option<u64>,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub circuits: usize,
    pub checks: usize,
    pub failures: Vec<VerifyFailure>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Oracle suite over the configured corpus: extraction round trip, routing
/// legality and equivalence of both arms, and single-branch degeneration.
pub fn verify_corpus(cfg: &ExperimentConfig) -> Result<VerifyReport, BenchError> {
    verify_corpus_with(cfg, &|g: &GraphLike| g.clone())
}

/// As [`verify_corpus`], with `rewrite` applied to every simplified diagram
/// before extraction. A faulty rewrite must show up as failures.
pub fn verify_corpus_with(cfg: &ExperimentConfig, rewrite: &(dyn Fn(&GraphLike) -> GraphLike + Sync)) -> Result<VerifyReport, BenchError> {
    cfg.validate()?;
    let (mut cases, load_failures) = match cfg.mode {
        Mode::Random => (random_cases(cfg)?, Vec::new()),
        Mode::Qasm => qasm_cases(&cfg.files),
    };
    let mut report = VerifyReport::default();
    for f in load_failures {
        report.warnings.push(format!("{}: skipped: {}", f.circuit_id, f.reason));
    }
    cases.retain(|c| {
        let fits = c.circuit.num_qubits() <= MAX_VERIFY_QUBITS.min(MAX_SIM_QUBITS);
        if !fits {
            report
                .warnings
                .push(format!("{}: skipped: {} qubits exceed the oracle limit", c.id, c.circuit.num_qubits()));
        }
        fits
    });
    if cases.is_empty() {
        report.warnings.push("empty corpus: nothing to verify".into());
        return Ok(report);
    }
    let alt_cfg = cfg.alternator(cfg.betas[0], cfg.windows[0], cfg.depths[0]);
    let per_case: Vec<(usize, Vec<VerifyFailure>)> =
        pool(cfg.jobs)?.install(|| cases.par_iter().map(|c| verify_case(c, cfg, &alt_cfg, rewrite)).collect());
    report.circuits = cases.len();
    for (checks, failures) in per_case {
        report.checks += checks;
        report.failures.extend(failures);
    }
    Ok(report)
}

fn verify_case(
    case: &CircuitCase,
    cfg: &ExperimentConfig,
    alt_cfg: &AlternatorConfig,
    rewrite: &(dyn Fn(&GraphLike) -> GraphLike + Sync),
) -> (usize, Vec<VerifyFailure>) {
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut fail = |check: &str, detail: String| {
        failures.push(VerifyFailure {
            circuit_id: case.id.clone(),
            seed: case.seed,
            check: check.into(),
            detail,
        })
    };
    let g = match prepare(&case.circuit) {
        Ok(g) => rewrite(&g),
        Err(e) => {
            fail("prepare", e.to_string());
            return (1, failures);
        }
    };
    let src = &case.circuit;
    let hw = &cfg.hardware;

    checks += 1;
    match extract_baseline(&g) {
        Ok(c) => {
            if !equivalent_up_to_phase(src, &c, 1e-8).unwrap_or(false) {
                fail("extraction", "extracted circuit differs from the source".into());
            }
        }
        Err(e) => fail("extraction", e.to_string()),
    }

    let mut check_routed = |arm: &str, r: &RoutedResult, checks: &mut usize| {
        *checks += 2;
        if let Some(g) = r.circuit.gates().iter().find(|g| g.is_two_qubit() && !hw.coupled(g.qubits()[0], g.qubits()[1])) {
            fail("routing-legality", format!("{arm}: {g:?} is not on a coupling edge"));
        }
        let (logical, perm) = r.logical_circuit();
        if !equivalent_up_to_permutation(src, &logical, &perm, 1e-8).unwrap_or(false) {
            fail("routed-equivalence", format!("{arm}: routed circuit differs from the source"));
        }
    };
    match alternator::compare_to_baseline(&g, hw, alt_cfg) {
        Ok(cmp) => {
            check_routed("baseline", &cmp.baseline, &mut checks);
            check_routed("alternating", &cmp.alternating, &mut checks);
            checks += 1;
            let single = AlternatorConfig {
                max_branch: 1,
                ..alt_cfg.clone()
            };
            match alternator::alternating_extract(&g, hw, &single) {
                Ok((r, _)) if r.circuit == cmp.baseline.circuit => {}
                Ok(_) => fail("degeneration", "single-branch output differs from the baseline".into()),
                Err(e) => fail("degeneration", e.to_string()),
            }
        }
        Err(e) => {
            checks += 1;
            fail("alternating", e.to_string());
        }
    }
    (checks, failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Phase;

    fn small() -> ExperimentConfig {
        ExperimentConfig::parse("count = 3\nqubits = 4\ndepth = 30\nrows = 2\ncols = 3\nbetas = 0, 0.003\n", Path::new(".")).unwrap()
    }

    #[test]
    fn desk_defaults() {
        let d = ExperimentConfig::desk();
        assert_eq!((d.count, d.num_qubits, d.depth, d.max_branch), (20, 6, 100, 8));
        assert_eq!(d.windows, vec![None]);
        assert_eq!(d.depths, vec![1]);
        assert_eq!(d.betas.len(), 7);
        assert_eq!(d.hardware.num_physical(), 36);
        assert_eq!(ExperimentConfig::preset("deep-bias").unwrap().depth, 300);
        assert!(ExperimentConfig::preset("nope").is_err());
    }

    #[test]
    fn config_parsing() {
        let cfg = ExperimentConfig::parse(
            "preset = deep-window\nmode = qasm\nfiles = a.qasm, b.qasm\nwindows = 10, inf\ndepths = 1,2\nrows=1\ncols=5\njobs = 3\n",
            Path::new("/data"),
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Qasm);
        assert_eq!(cfg.files, vec![PathBuf::from("/data/a.qasm"), PathBuf::from("/data/b.qasm")]);
        assert_eq!(cfg.windows, vec![Some(10), None]);
        assert_eq!(cfg.depth, 300);
        assert_eq!(cfg.hardware.num_physical(), 5);
        assert_eq!(cfg.jobs, 3);
        for bad in ["colour = red", "betas = x", "windows = -1", "depths = 0", "max_branch = 0", "jobs = 0", "p_t = 0.8\np_cx = 0.5", "mode = both"] {
            assert!(ExperimentConfig::parse(bad, Path::new(".")).is_err(), "{bad}");
        }
    }

    #[test]
    fn rows_satisfy_delta_identity() {
        let out = run_random_study(&small()).unwrap();
        assert_eq!(out.rows.len(), 6);
        assert!(out.failures.is_empty());
        for r in &out.rows {
            assert!((r.delta_fidelity - (r.asp_alt - r.asp_base) / r.asp_base).abs() < 1e-12);
        }
        assert_eq!(out.summary.len(), 3);
        for s in &out.summary {
            assert!(s.delta_biased >= s.delta_base.unwrap());
        }
    }

    #[test]
    fn single_branch_single_row() {
        let cfg = ExperimentConfig::parse("count = 1\nqubits = 4\ndepth = 30\nmax_branch = 1\nbetas = 0\n", Path::new(".")).unwrap();
        let out = run_random_study(&cfg).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0].delta_fidelity, 0.0);
    }

    #[test]
    fn csv_is_deterministic_across_jobs() {
        let cfg = small();
        let a = rows_to_csv(&run_random_study(&cfg).unwrap().rows).unwrap();
        let b = rows_to_csv(&run_random_study(&ExperimentConfig { jobs: 3, ..cfg }).unwrap().rows).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("circuit_id,n,depth,beta,s,l,m,asp_base,asp_alt,delta_fidelity,"));
    }

    #[test]
    fn verify_passes_and_catches_mutations() {
        let cfg = small();
        let report = verify_corpus(&cfg).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.circuits, 3);
        let corrupt = |g: &GraphLike| {
            let mut d = g.diagram().clone();
            let v = d.spider_ids().find(|&v| !d.is_boundary(v)).expect("an interior spider");
            d.add_to_phase(v, Phase::QUARTER_PI);
            GraphLike::new(d).unwrap()
        };
        let report = verify_corpus_with(&cfg, &corrupt).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().any(|f| f.check == "extraction" && f.seed.is_some()));
    }

    #[test]
    fn empty_corpus_is_vacuous() {
        let cfg = ExperimentConfig { count: 0, ..small() };
        let report = verify_corpus(&cfg).unwrap();
        assert!(report.passed());
        assert_eq!(report.circuits, 0);
        assert_eq!(report.warnings.len(), 1);
    }
}
