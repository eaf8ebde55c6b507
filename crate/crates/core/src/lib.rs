//! Quantum circuit compilation that alternates between ZX-diagram circuit
//! extraction and hardware routing.

pub mod alternator;
pub mod bench;
pub mod circuit;
pub mod extract;
pub mod phase;
pub mod qasm;
pub mod random;
pub mod route;
pub mod sim;
pub mod simplify;
pub mod zx;

pub use circuit::{Circuit, CircuitError, Gate, GateKind};
pub use phase::Phase;
