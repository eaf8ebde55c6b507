//! Qubit routing on a coupling graph and fidelity estimation of the result.

mod hardware;
mod mapping;
mod metrics;
mod sabre;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};

pub use hardware::{grid_model, parse_hardware_config, parse_key_values, HardwareModel, HardwareParams};
pub use hardware::hardware_from_pairs;
pub use mapping::Mapping;
pub use metrics::{asp, delta_fidelity, gate_duration, gate_fidelity, schedule, Schedule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RouteError {
    #[error("circuit needs {logical} qubits but hardware has {physical}")]
    TooManyQubits { logical: usize, physical: usize },
    #[error("invalid mapping: {0}")]
    BadMapping(String),
    #[error("invalid hardware: {0}")]
    Hardware(String),
    #[error("physical qubits {0} and {1} are not coupled")]
    NotCoupled(usize, usize),
    #[error("baseline success probability is zero")]
    ZeroBaseline,
}

/// A hardware-legal circuit together with its mappings and cost figures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoutedResult {
    pub circuit: Circuit,
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    pub swap_count: usize,
    /// CX and CZ gates, excluding inserted SWAPs.
    pub two_qubit_count: usize,
    /// Two-qubit gates with each SWAP counted as three.
    pub two_qubit_cost: usize,
    pub asp: f64,
    pub schedule: Schedule,
    pub idle_time_total: f64,
}

impl RoutedResult {
    /// Rewrites the routed circuit over the logical register: SWAPs between
    /// two occupied physical qubits become logical SWAPs and moves into free
    /// qubits disappear. Returns the circuit and the permutation `perm` with
    /// `perm[l]` the logical slot that carries qubit `l` at the end.
    pub fn logical_circuit(&self) -> (Circuit, Vec<usize>) {
        let n = self.initial_mapping.num_logical();
        let mut slot: Vec<Option<usize>> = (0..self.initial_mapping.num_physical())
            .map(|p| self.initial_mapping.logical(p))
            .collect();
        let mut gates = Vec::with_capacity(self.circuit.len());
        for g in self.circuit.gates() {
            if g.kind == GateKind::Swap {
                let (a, b) = (g.qubits()[0], g.qubits()[1]);
                match (slot[a], slot[b]) {
                    (Some(x), Some(y)) => gates.push(Gate::swap(x, y)),
                    _ => slot.swap(a, b),
                }
            } else {
                gates.push(g.map_qubits(|p| slot[p].expect("gate acts on an occupied qubit")));
            }
        }
        let perm = (0..n)
            .map(|l| slot[self.final_mapping.physical(l)].expect("mapped qubit is occupied"))
            .collect();
        let circuit = Circuit::from_gates(n, gates).expect("slots stay within the logical register");
        (circuit, perm)
    }
}

/// Routes `c` onto `hw` starting from `initial`. SWAP gates already present
/// in `c` relabel the mapping and cost nothing.
pub fn route(c: &Circuit, hw: &HardwareModel, initial: &Mapping) -> Result<RoutedResult, RouteError> {
    if c.num_qubits() > hw.num_physical() {
        return Err(RouteError::TooManyQubits {
            logical: c.num_qubits(),
            physical: hw.num_physical(),
        });
    }
    if initial.num_logical() != c.num_qubits() || initial.num_physical() != hw.num_physical() {
        return Err(RouteError::BadMapping(format!(
            "mapping is {}→{} but circuit has {} qubits on {} physical",
            initial.num_logical(),
            initial.num_physical(),
            c.num_qubits(),
            hw.num_physical()
        )));
    }
    let out = sabre::sabre(c, hw, initial);
    let circuit = Circuit::from_gates(hw.num_physical(), out.gates).expect("physical qubits are in range");
    let schedule = schedule(&circuit, hw)?;
    let asp = metrics::asp_with_schedule(&circuit, &schedule, hw);
    let two_qubit_count = circuit.gates().iter().filter(|g| g.is_two_qubit() && g.kind != GateKind::Swap).count();
    Ok(RoutedResult {
        idle_time_total: schedule.idle_time_total,
        two_qubit_cost: two_qubit_count + 3 * out.swaps,
        two_qubit_count,
        swap_count: out.swaps,
        asp,
        schedule,
        final_mapping: out.final_mapping,
        initial_mapping: initial.clone(),
        circuit,
    })
}

/// Routes from the identity mapping.
pub fn route_identity(c: &Circuit, hw: &HardwareModel) -> Result<RoutedResult, RouteError> {
    let m = Mapping::identity(c.num_qubits(), hw.num_physical())?;
    route(c, hw, &m)
}

/// Routes `c` from its last gate to its first, starting from the identity
/// mapping at the outputs, and returns the reversed result: a routing of `c`
/// whose final mapping is the identity. Circuits produced output-side first
/// can be routed this way as they grow.
pub fn route_backward(c: &Circuit, hw: &HardwareModel) -> Result<RoutedResult, RouteError> {
    flip(route_identity(&c.reversed(), hw)?, hw)
}

/// Reverses a routed circuit, exchanging its initial and final mappings.
pub(crate) fn flip(r: RoutedResult, hw: &HardwareModel) -> Result<RoutedResult, RouteError> {
    let circuit = r.circuit.reversed();
    let schedule = schedule(&circuit, hw)?;
    Ok(RoutedResult {
        asp: metrics::asp_with_schedule(&circuit, &schedule, hw),
        idle_time_total: schedule.idle_time_total,
        schedule,
        circuit,
        initial_mapping: r.final_mapping,
        final_mapping: r.initial_mapping,
        ..r
    })
}
