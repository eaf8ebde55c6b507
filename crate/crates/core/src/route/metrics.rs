use serde::Serialize;

use super::{HardwareModel, RouteError};
use crate::circuit::{Circuit, Gate, GateKind};

/// ASAP start and end times (µs) for every gate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub makespan: f64,
    /// Σ over qubits that carry a gate of (makespan − busy time).
    pub idle_time_total: f64,
}

pub fn gate_duration(g: &Gate, hw: &HardwareModel) -> f64 {
    let p = hw.params();
    match g.kind {
        GateKind::Cx | GateKind::Cz => p.duration_2q,
        GateKind::Swap => 3.0 * p.duration_2q,
        _ => p.duration_1q,
    }
}

pub fn gate_fidelity(g: &Gate, hw: &HardwareModel) -> f64 {
    let p = hw.params();
    match g.kind {
        GateKind::Cx | GateKind::Cz => p.fidelity_2q,
        GateKind::Swap => p.fidelity_2q * p.fidelity_2q * p.fidelity_2q,
        _ => p.fidelity_1q,
    }
}

fn check_legal(c: &Circuit, hw: &HardwareModel) -> Result<(), RouteError> {
    if c.num_qubits() > hw.num_physical() {
        return Err(RouteError::TooManyQubits {
            logical: c.num_qubits(),
            physical: hw.num_physical(),
        });
    }
    for g in c.gates() {
        if let [a, b] = *g.qubits() {
            if !hw.coupled(a, b) {
                return Err(RouteError::NotCoupled(a, b));
            }
        }
    }
    Ok(())
}

/// As-soon-as-possible schedule of a hardware-legal circuit.
pub fn schedule(c: &Circuit, hw: &HardwareModel) -> Result<Schedule, RouteError> {
    check_legal(c, hw)?;
    let n = c.num_qubits();
    let mut free = vec![0.0f64; n];
    let mut busy = vec![0.0f64; n];
    let mut used = vec![false; n];
    let mut start = Vec::with_capacity(c.len());
    let mut end = Vec::with_capacity(c.len());
    for g in c.gates() {
        let d = gate_duration(g, hw);
        let s = g.qubits().iter().map(|&q| free[q]).fold(0.0, f64::max);
        for &q in g.qubits() {
            free[q] = s + d;
            busy[q] += d;
            used[q] = true;
        }
        start.push(s);
        end.push(s + d);
    }
    let makespan = end.iter().copied().fold(0.0, f64::max);
    let idle_time_total = (0..n).filter(|&q| used[q]).map(|q| makespan - busy[q]).sum();
    Ok(Schedule {
        start,
        end,
        makespan,
        idle_time_total,
    })
}

/// exp(−t_idle/T_eff) · Π F(gate), with a SWAP counted as three two-qubit
/// gates.
pub fn asp(c: &Circuit, hw: &HardwareModel) -> Result<f64, RouteError> {
    let s = schedule(c, hw)?;
    Ok(asp_with_schedule(c, &s, hw))
}

pub(crate) fn asp_with_schedule(c: &Circuit, s: &Schedule, hw: &HardwareModel) -> f64 {
    let product: f64 = c.gates().iter().map(|g| gate_fidelity(g, hw)).product();
    product * (-s.idle_time_total / hw.t_eff()).exp()
}

/// (asp_new − asp_base)/asp_base.
pub fn delta_fidelity(asp_new: f64, asp_base: f64) -> Result<f64, RouteError> {
    if asp_base <= 0.0 || !asp_base.is_finite() {
        return Err(RouteError::ZeroBaseline);
    }
    Ok((asp_new - asp_base) / asp_base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_clifford_t;
    use crate::route::{grid_model, HardwareParams};

    fn line(n: usize, params: HardwareParams) -> HardwareModel {
        grid_model(1, n, params).unwrap()
    }

    #[test]
    fn empty_circuit_has_unit_asp() {
        let hw = line(3, HardwareParams::default());
        assert_eq!(asp(&Circuit::new(3), &hw).unwrap(), 1.0);
    }

    #[test]
    fn single_h_schedule() {
        let hw = line(2, HardwareParams::default());
        let c = Circuit::from_gates(2, vec![Gate::h(0)]).unwrap();
        let s = schedule(&c, &hw).unwrap();
        assert_eq!(s.makespan, 1.0);
        assert_eq!(s.idle_time_total, 0.0);
    }

    #[test]
    fn h_then_cx_idles_one_gate() {
        let hw = line(2, HardwareParams::default());
        let c = Circuit::from_gates(2, vec![Gate::h(0), Gate::cx(0, 1)]).unwrap();
        let s = schedule(&c, &hw).unwrap();
        assert_eq!(s.idle_time_total, hw.params().duration_1q);
    }

    #[test]
    fn three_two_qubit_gates() {
        let params = HardwareParams {
            fidelity_2q: 0.99,
            ..HardwareParams::default()
        };
        let hw = line(2, params);
        let c = Circuit::from_gates(2, vec![Gate::cx(0, 1), Gate::cz(0, 1), Gate::cx(1, 0)]).unwrap();
        let a = asp(&c, &hw).unwrap();
        assert!((a - 0.970299).abs() < 1e-12);
    }

    #[test]
    fn idle_penalty_factor() {
        // H(0), CX(0,1): qubit 1 idles for duration_1q; choose T_eff so that
        // t_idle/T_eff = 0.1
        let t_eff = 10.0;
        let params = HardwareParams {
            fidelity_1q: 1.0,
            fidelity_2q: 0.99,
            t1: 2.0 * t_eff,
            t2: 2.0 * t_eff,
            ..HardwareParams::default()
        };
        let hw = line(2, params);
        let c = Circuit::from_gates(2, vec![Gate::h(0), Gate::cx(0, 1), Gate::cx(0, 1), Gate::cz(0, 1)]).unwrap();
        let a = asp(&c, &hw).unwrap();
        assert!((a - 0.970299 * (-0.1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn illegal_gate_rejected() {
        let hw = line(3, HardwareParams::default());
        let c = Circuit::from_gates(3, vec![Gate::cz(0, 2)]).unwrap();
        assert!(matches!(schedule(&c, &hw), Err(RouteError::NotCoupled(0, 2))));
    }

    #[test]
    fn delta_fidelity_examples() {
        assert_eq!(delta_fidelity(0.5, 0.5).unwrap(), 0.0);
        assert!((delta_fidelity(0.7, 0.2).unwrap() - 2.5).abs() < 1e-12);
        assert!((delta_fidelity(0.2, 0.4).unwrap() + 0.5).abs() < 1e-12);
        assert!(delta_fidelity(0.3, 0.0).is_err());
    }

    /// Longest weighted path through the gate dependency DAG.
    fn dag_makespan(c: &Circuit, hw: &HardwareModel) -> f64 {
        let gates = c.gates();
        let mut finish = vec![0.0f64; gates.len()];
        for i in 0..gates.len() {
            let mut best = 0.0f64;
            for j in 0..i {
                if gates[j].qubits().iter().any(|q| gates[i].qubits().contains(q)) {
                    best = best.max(finish[j]);
                }
            }
            finish[i] = best + gate_duration(&gates[i], hw);
        }
        finish.iter().copied().fold(0.0, f64::max)
    }

    #[test]
    fn makespan_matches_longest_path() {
        let hw = line(5, HardwareParams::default());
        for seed in 0..30 {
            let c = random_clifford_t(5, 80, 0.3, 0.0, seed).unwrap();
            let mut legal = c.clone();
            legal.push(Gate::cx(seed as usize % 4, seed as usize % 4 + 1)).unwrap();
            let s = schedule(&legal, &hw).unwrap();
            assert!((s.makespan - dag_makespan(&legal, &hw)).abs() < 1e-9);
        }
    }

    #[test]
    fn appending_never_increases_asp() {
        let hw = line(4, HardwareParams::default());
        for seed in 0..20 {
            let src = random_clifford_t(4, 60, 0.3, 0.4, seed).unwrap();
            let c = crate::route::route_identity(&src, &hw).unwrap().circuit;
            let mut prefix = Circuit::new(4);
            let mut last = 1.0;
            for g in c.gates() {
                prefix.push(*g).unwrap();
                let a = asp(&prefix, &hw).unwrap();
                assert!(a <= last + 1e-15, "seed {seed}");
                assert!(a > 0.0);
                last = a;
            }
        }
    }
}
