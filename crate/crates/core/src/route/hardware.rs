use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::RouteError;

/// Gate fidelities, durations (µs) and coherence times (µs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardwareParams {
    pub fidelity_1q: f64,
    pub fidelity_2q: f64,
    pub duration_1q: f64,
    pub duration_2q: f64,
    pub t1: f64,
    pub t2: f64,
}

impl Default for HardwareParams {
    fn default() -> Self {
        HardwareParams {
            fidelity_1q: 0.999,
            fidelity_2q: 0.995,
            duration_1q: 1.0,
            duration_2q: 2.0,
            t1: 100_000.0,
            t2: 1_500.0,
        }
    }
}

impl HardwareParams {
    pub fn validate(&self) -> Result<(), RouteError> {
        for (name, f) in [("fidelity_1q", self.fidelity_1q), ("fidelity_2q", self.fidelity_2q)] {
            if !(f > 0.0 && f <= 1.0) {
                return Err(RouteError::Hardware(format!("{name} must lie in (0, 1], got {f}")));
            }
        }
        for (name, d) in [("duration_1q", self.duration_1q), ("duration_2q", self.duration_2q)] {
            if !(d.is_finite() && d >= 0.0) {
                return Err(RouteError::Hardware(format!("{name} must be non-negative, got {d}")));
            }
        }
        for (name, t) in [("t1", self.t1), ("t2", self.t2)] {
            if !(t.is_finite() && t > 0.0) {
                return Err(RouteError::Hardware(format!("{name} must be positive, got {t}")));
            }
        }
        Ok(())
    }

    /// T1·T2/(T1+T2).
    pub fn t_eff(&self) -> f64 {
        self.t1 * self.t2 / (self.t1 + self.t2)
    }
}

/// Coupling graph plus gate and coherence parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct HardwareModel {
    num_physical: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    distance: Vec<Vec<usize>>,
    params: HardwareParams,
    t_eff: f64,
}

impl HardwareModel {
    /// Builds a model from an undirected edge list; the graph must be
    /// connected.
    pub fn new(num_physical: usize, edges: &[(usize, usize)], params: HardwareParams) -> Result<HardwareModel, RouteError> {
        if num_physical == 0 {
            return Err(RouteError::Hardware("hardware needs at least one qubit".into()));
        }
        params.validate()?;
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= num_physical || b >= num_physical || a == b {
                return Err(RouteError::Hardware(format!("invalid coupling edge ({a}, {b})")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); num_physical];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        let distance: Vec<Vec<usize>> = (0..num_physical).map(|s| bfs(&adjacency, s)).collect();
        if distance[0].contains(&usize::MAX) {
            return Err(RouteError::Hardware("coupling graph is not connected".into()));
        }
        Ok(HardwareModel {
            num_physical,
            edges,
            adjacency,
            distance,
            t_eff: params.t_eff(),
            params,
        })
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    /// Coupling edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, p: usize) -> &[usize] {
        &self.adjacency[p]
    }

    pub fn coupled(&self, a: usize, b: usize) -> bool {
        self.distance[a][b] == 1
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distance[a][b]
    }

    pub fn params(&self) -> &HardwareParams {
        &self.params
    }

    pub fn t_eff(&self) -> f64 {
        self.t_eff
    }

    /// A shortest path from `a` to `b`, preferring low-numbered qubits.
    pub fn shortest_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = *self.adjacency[cur]
                .iter()
                .find(|&&n| self.distance[n][b] + 1 == self.distance[cur][b])
                .expect("connected graph");
            path.push(cur);
        }
        path
    }
}

fn bfs(adjacency: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adjacency.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Nearest-neighbour grid, qubits numbered row-major.
pub fn grid_model(rows: usize, cols: usize, params: HardwareParams) -> Result<HardwareModel, RouteError> {
    if rows == 0 || cols == 0 {
        return Err(RouteError::Hardware(format!("grid dimensions must be positive, got {rows}x{cols}")));
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let p = r * cols + c;
            if c + 1 < cols {
                edges.push((p, p + 1));
            }
            if r + 1 < rows {
                edges.push((p, p + cols));
            }
        }
    }
    HardwareModel::new(rows * cols, &edges, params)
}

/// Parses flat `key = value` lines (blank lines and `#` comments ignored).
/// Recognised keys: `rows`, `cols` and every [`HardwareParams`] field.
/// Missing keys keep their defaults (6×6 grid).
pub fn parse_hardware_config(text: &str) -> Result<HardwareModel, RouteError> {
    let kv = parse_key_values(text).map_err(RouteError::Hardware)?;
    hardware_from_pairs(&kv)
}

/// Builds a grid model from `rows`, `cols` and hardware parameter keys;
/// missing keys take their defaults.
pub fn hardware_from_pairs(kv: &BTreeMap<String, String>) -> Result<HardwareModel, RouteError> {
    let mut params = HardwareParams::default();
    let (mut rows, mut cols) = (6usize, 6usize);
    for (k, v) in kv {
        let float = || v.parse::<f64>().map_err(|_| RouteError::Hardware(format!("{k}: not a number: {v}")));
        let int = || v.parse::<usize>().map_err(|_| RouteError::Hardware(format!("{k}: not an integer: {v}")));
        match k.as_str() {
            "rows" => rows = int()?,
            "cols" => cols = int()?,
            "fidelity_1q" => params.fidelity_1q = float()?,
            "fidelity_2q" => params.fidelity_2q = float()?,
            "duration_1q" => params.duration_1q = float()?,
            "duration_2q" => params.duration_2q = float()?,
            "t1" => params.t1 = float()?,
            "t2" => params.t2 = float()?,
            _ => return Err(RouteError::Hardware(format!("unknown hardware key `{k}`"))),
        }
    }
    grid_model(rows, cols, params)
}

/// Splits `key = value` lines; later duplicates override earlier ones.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(format!("line {}: empty key", i + 1));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}
