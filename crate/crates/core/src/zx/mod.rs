//! ZX diagrams: data structure, circuit translation, graph-like form.

mod diagram;
pub mod eval;
mod graph_like;

use thiserror::Error;

pub use diagram::{Spider, SpiderId, SpiderKind, WireKind, ZxDiagram};
pub use graph_like::GraphLike;

use crate::circuit::{Circuit, GateKind};
use crate::phase::Phase;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZxError {
    #[error("unknown spider {0}")]
    UnknownSpider(SpiderId),
    #[error("boundary {0} would not have degree exactly one")]
    BoundaryDegree(SpiderId),
    #[error("rewrite precondition violated: {0}")]
    Precondition(String),
    #[error("diagram invariant violated: {0}")]
    Invariant(String),
    #[error("diagram is not unitary ({inputs} inputs, {outputs} outputs)")]
    NotUnitary { inputs: usize, outputs: usize },
    #[error("diagram dump: {0}")]
    Dump(String),
    #[error("tensor evaluation exceeds {0} open legs")]
    TooLarge(usize),
}

/// Translates a circuit gate-by-gate into a diagram with the same linear map
/// up to a scalar.
pub fn circuit_to_zx(c: &Circuit) -> ZxDiagram {
    use WireKind::{Hadamard, Simple};
    let n = c.num_qubits();
    let mut d = ZxDiagram::new();
    // (last spider on the qubit line, kind of the pending wire out of it)
    let mut tails: Vec<(SpiderId, WireKind)> = (0..n).map(|_| (d.add_input(), Simple)).collect();

    let place = |d: &mut ZxDiagram, tails: &mut Vec<(SpiderId, WireKind)>, q: usize, kind: SpiderKind, phase: Phase| {
        let id = d.add_spider(kind, phase);
        let (prev, wk) = tails[q];
        d.add_wire(prev, id, wk).expect("fresh spider");
        tails[q] = (id, Simple);
        id
    };

    for g in c.gates() {
        let g = g.canonical();
        let q = g.qubits();
        match g.kind {
            GateKind::H => tails[q[0]].1 = tails[q[0]].1.toggled(),
            GateKind::Rz(p) => {
                place(&mut d, &mut tails, q[0], SpiderKind::Z, p);
            }
            GateKind::Z => {
                place(&mut d, &mut tails, q[0], SpiderKind::Z, Phase::PI);
            }
            GateKind::X => {
                place(&mut d, &mut tails, q[0], SpiderKind::X, Phase::PI);
            }
            GateKind::Cz => {
                let a = place(&mut d, &mut tails, q[0], SpiderKind::Z, Phase::ZERO);
                let b = place(&mut d, &mut tails, q[1], SpiderKind::Z, Phase::ZERO);
                d.add_wire(a, b, Hadamard).expect("fresh spiders");
            }
            GateKind::Cx => {
                let a = place(&mut d, &mut tails, q[0], SpiderKind::Z, Phase::ZERO);
                let b = place(&mut d, &mut tails, q[1], SpiderKind::X, Phase::ZERO);
                d.add_wire(a, b, Simple).expect("fresh spiders");
            }
            GateKind::Swap => tails.swap(q[0], q[1]),
            GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg => unreachable!("canonicalized"),
        }
    }
    for (prev, wk) in tails {
        let o = d.add_output();
        d.add_wire(prev, o, wk).expect("fresh output");
    }
    d
}

/// Rewrites a unitary diagram into graph-like form.
pub fn to_graph_like(d: ZxDiagram) -> Result<GraphLike, ZxError> {
    GraphLike::from_diagram(d)
}

pub fn hadamard_wire_count(g: &GraphLike) -> usize {
    g.hadamard_wire_count()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::random::random_clifford_t;
    use crate::sim::simulate;

    pub(crate) fn grover2() -> Circuit {
        Circuit::from_gates(
            2,
            vec![
                Gate::h(0),
                Gate::h(1),
                Gate::cz(0, 1),
                Gate::h(0),
                Gate::h(1),
                Gate::x(0),
                Gate::x(1),
                Gate::cz(0, 1),
                Gate::x(0),
                Gate::x(1),
                Gate::h(0),
                Gate::h(1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn empty_circuit_is_plain_wires() {
        let d = circuit_to_zx(&Circuit::new(3));
        assert_eq!(d.num_spiders(), 6);
        assert_eq!(d.num_interior(), 0);
        for (i, o) in d.inputs().iter().zip(d.outputs()) {
            assert_eq!(d.wire(*i, *o), Some(WireKind::Simple));
        }
        d.check_invariants().unwrap();
    }

    #[test]
    fn grover_translation_shape() {
        let d = circuit_to_zx(&grover2());
        // 2 CZ → 4 Z spiders, 4 X gates → 4 X spiders, H gates live on wires
        let z = d.spiders().filter(|(_, s)| s.kind == SpiderKind::Z).count();
        let x = d.spiders().filter(|(_, s)| s.kind == SpiderKind::X).count();
        assert_eq!((z, x), (4, 4));
        let h = d.wires().filter(|w| w.2 == WireKind::Hadamard).count();
        // two CZ wires + H pairs on each qubit line (6 H gates → 6 Hadamard wire segments)
        assert_eq!(h, 8);
        d.check_invariants().unwrap();
    }

    #[test]
    fn translation_matches_circuit_unitary() {
        for seed in 0..20 {
            let c = random_clifford_t(3, 20, 0.3, 0.3, seed).unwrap();
            let d = circuit_to_zx(&c);
            let m = eval::evaluate(&d).unwrap();
            assert!(m.proportional(&simulate(&c).unwrap(), 1e-8), "seed {seed}");
        }
    }

    #[test]
    fn swap_and_cx_translation() {
        let c = Circuit::from_gates(3, vec![Gate::swap(0, 2), Gate::cx(2, 1), Gate::h(1), Gate::s(0)]).unwrap();
        let m = eval::evaluate(&circuit_to_zx(&c)).unwrap();
        assert!(m.proportional(&simulate(&c).unwrap(), 1e-10));
    }
}
