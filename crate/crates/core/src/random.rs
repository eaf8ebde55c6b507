//! Random Clifford+T circuit generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitError, Gate};

/// Generates `depth` gates. Each layer draws one gate: with probability
/// `p_cx` a CX on a uniformly random ordered pair, with probability `p_t` a
/// T on a random qubit, otherwise one of H, S, Z, X on a random qubit.
pub fn random_clifford_t(n: usize, depth: usize, p_t: f64, p_cx: f64, seed: u64) -> Result<Circuit, CircuitError> {
    if n == 0 {
        return Err(CircuitError::NoQubits);
    }
    if depth == 0 {
        return Err(CircuitError::Invalid("depth must be positive".into()));
    }
    if !(0.0..=1.0).contains(&p_t) || !(0.0..=1.0).contains(&p_cx) || p_t + p_cx > 1.0 + 1e-12 {
        return Err(CircuitError::Invalid(format!(
            "invalid gate probabilities p_t={p_t}, p_cx={p_cx} (must be in [0,1] and sum to at most 1)"
        )));
    }
    if n < 2 && p_cx > 0.0 {
        return Err(CircuitError::Invalid("CX draws need at least two qubits".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    for _ in 0..depth {
        let r: f64 = rng.gen();
        let gate = if r < p_cx {
            let control = rng.gen_range(0..n);
            let mut target = rng.gen_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            Gate::cx(control, target)
        } else if r < p_cx + p_t {
            Gate::t(rng.gen_range(0..n))
        } else {
            let q = rng.gen_range(0..n);
            match rng.gen_range(0..4) {
                0 => Gate::h(q),
                1 => Gate::s(q),
                2 => Gate::z(q),
                _ => Gate::x(q),
            }
        };
        c.push(gate)?;
    }
    Ok(c)
}

/// Same generator without T gates.
pub fn random_clifford(n: usize, depth: usize, p_cx: f64, seed: u64) -> Result<Circuit, CircuitError> {
    random_clifford_t(n, depth, 0.0, p_cx, seed)
}
