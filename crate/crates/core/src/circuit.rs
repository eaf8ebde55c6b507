//! Gate-level circuit representation.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GateKind {
    Rz(Phase),
    H,
    X,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Cx,
    Cz,
    Swap,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rz(_) => "rz",
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
        }
    }
}

/// A gate applied to one or two qubits. For `Cx` the qubit order is
/// `[control, target]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Gate {
    pub kind: GateKind,
    qubits: [usize; 2],
}

impl Gate {
    fn one(kind: GateKind, q: usize) -> Gate {
        Gate {
            kind,
            qubits: [q, q],
        }
    }

    fn two(kind: GateKind, a: usize, b: usize) -> Gate {
        Gate {
            kind,
            qubits: [a, b],
        }
    }

    /// Builds a gate from a kind and qubit list; the list length must match
    /// the kind's arity.
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Gate, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity {
                gate: kind.name(),
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        Ok(if kind.arity() == 1 {
            Gate::one(kind, qubits[0])
        } else {
            Gate::two(kind, qubits[0], qubits[1])
        })
    }

    pub fn rz(q: usize, phase: Phase) -> Gate {
        Gate::one(GateKind::Rz(phase), q)
    }
    pub fn h(q: usize) -> Gate {
        Gate::one(GateKind::H, q)
    }
    pub fn x(q: usize) -> Gate {
        Gate::one(GateKind::X, q)
    }
    pub fn z(q: usize) -> Gate {
        Gate::one(GateKind::Z, q)
    }
    pub fn s(q: usize) -> Gate {
        Gate::one(GateKind::S, q)
    }
    pub fn sdg(q: usize) -> Gate {
        Gate::one(GateKind::Sdg, q)
    }
    pub fn t(q: usize) -> Gate {
        Gate::one(GateKind::T, q)
    }
    pub fn tdg(q: usize) -> Gate {
        Gate::one(GateKind::Tdg, q)
    }
    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Cx, control, target)
    }
    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Cz, a, b)
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Swap, a, b)
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    /// Same gate acting on relabelled qubits.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            qubits: [f(self.qubits[0]), f(self.qubits[1])],
        }
    }

    /// Rewrites S/Sdg/T/Tdg to `Rz`; everything else is unchanged.
    pub fn canonical(&self) -> Gate {
        let phase = match self.kind {
            GateKind::S => Phase::HALF_PI,
            GateKind::Sdg => Phase::MINUS_HALF_PI,
            GateKind::T => Phase::QUARTER_PI,
            GateKind::Tdg => Phase::MINUS_QUARTER_PI,
            _ => return *self,
        };
        Gate::rz(self.qubits[0], phase)
    }

    fn validate(&self, num_qubits: usize) -> Result<(), CircuitError> {
        for &q in self.qubits() {
            if q >= num_qubits {
                return Err(CircuitError::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        if self.is_two_qubit() && self.qubits[0] == self.qubits[1] {
            return Err(CircuitError::RepeatedQubit {
                gate: self.kind.name(),
                qubit: self.qubits[0],
            });
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::Rz(p) => write!(f, "rz({p}) q[{}]", self.qubits[0]),
            k if k.arity() == 1 => write!(f, "{} q[{}]", k.name(), self.qubits[0]),
            k => write!(f, "{} q[{}],q[{}]", k.name(), self.qubits[0], self.qubits[1]),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("gate {gate} applied twice to qubit {qubit}")]
    RepeatedQubit { gate: &'static str, qubit: usize },
    #[error("gate {gate} takes {expected} qubit(s), got {got}")]
    Arity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("circuit must have at least one qubit")]
    NoQubits,
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
    #[error("{0}")]
    Invalid(String),
}

/// An ordered gate list over `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        assert!(num_qubits > 0, "circuit must have at least one qubit");
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        for g in &gates {
            g.validate(num_qubits)?;
        }
        Ok(Circuit { num_qubits, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other` (which must have the same width).
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.num_qubits != self.num_qubits {
            return Err(CircuitError::QubitCountMismatch(self.num_qubits, other.num_qubits));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn canonicalized(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().map(Gate::canonical).collect(),
        }
    }

    /// Length of the longest chain of gates sharing qubits.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let d = g.qubits().iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in g.qubits() {
                level[q] = d;
            }
            depth = depth.max(d);
        }
        depth
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Two-qubit gate count with each SWAP costed as three CX.
    pub fn two_qubit_cost(&self) -> usize {
        self.gates
            .iter()
            .map(|g| match g.kind {
                GateKind::Swap => 3,
                GateKind::Cx | GateKind::Cz => 1,
                _ => 0,
            })
            .sum()
    }

    pub fn count_kind(&self, pred: impl Fn(GateKind) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g.kind)).count()
    }

    /// The inverse circuit's gate order without inverting gates: used to
    /// route a gate sequence from its far end.
    pub fn reversed(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }
}
