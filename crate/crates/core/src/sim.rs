//! Dense unitary simulation used as the equivalence oracle.
//!
//! Qubit 0 is the least-significant bit of a basis index.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};

/// Largest circuit width the dense simulator accepts.
pub const MAX_SIM_QUBITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("circuit has {0} qubits; the simulator is limited to {MAX_SIM_QUBITS}")]
    TooManyQubits(usize),
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
    #[error("permutation is not a bijection on {0} qubits")]
    BadPermutation(usize),
}

/// A `2^n × 2^n` complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Matrix {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Matrix { dim, data }
    }

    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Matrix {
        assert_eq!(data.len(), dim * dim);
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        let n = self.dim;
        assert_eq!(n, rhs.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Matrix { dim: n, data: out }
    }

    /// Max-norm distance after aligning the global phase on the
    /// largest-magnitude entry of `self`. `None` if `other` vanishes there.
    pub fn phase_distance(&self, other: &Matrix) -> Option<f64> {
        let (idx, a) = self
            .data
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))?;
        let b = other.data[idx];
        if b.norm() < 1e-12 || a.norm() < 1e-12 {
            return None;
        }
        let rot = (a / a.norm()) / (b / b.norm());
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| (x - rot * y).norm())
                .fold(0.0, f64::max),
        )
    }

    /// Whether `self = c · other` for some non-zero scalar `c`, to relative
    /// max-norm tolerance `tol`.
    pub fn proportional(&self, other: &Matrix, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let Some((idx, a)) = self
            .data
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
        else {
            return true;
        };
        let b = other.data[idx];
        if a.norm() < 1e-300 || b.norm() < 1e-300 {
            return false;
        }
        let c = a / b;
        let scale = a.norm();
        self.data
            .iter()
            .zip(&other.data)
            .all(|(x, y)| (x - c * y).norm() <= tol * scale)
    }
}

fn one_qubit_matrix(kind: GateKind) -> [Complex64; 4] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let rz = |theta: f64| {
        [
            Complex64::from_polar(1.0, -theta / 2.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Complex64::from_polar(1.0, theta / 2.0),
        ]
    };
    match kind {
        GateKind::H => [c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)],
        GateKind::X => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        GateKind::Z => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        GateKind::S => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
        GateKind::Sdg => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)],
        GateKind::T => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
        GateKind::Tdg => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)],
        GateKind::Rz(p) => rz(p.to_radians()),
        GateKind::Cx | GateKind::Cz | GateKind::Swap => unreachable!("two-qubit gate"),
    }
}

/// Applies `gate` in place to a state vector of `2^n` amplitudes.
pub fn apply_gate(state: &mut [Complex64], gate: &Gate) {
    let q = gate.qubits();
    match gate.kind {
        GateKind::Cx => {
            let (cm, tm) = (1usize << q[0], 1usize << q[1]);
            for i in 0..state.len() {
                if i & cm != 0 && i & tm == 0 {
                    state.swap(i, i | tm);
                }
            }
        }
        GateKind::Cz => {
            let m = (1usize << q[0]) | (1usize << q[1]);
            for (i, amp) in state.iter_mut().enumerate() {
                if i & m == m {
                    *amp = -*amp;
                }
            }
        }
        GateKind::Swap => {
            let (am, bm) = (1usize << q[0], 1usize << q[1]);
            for i in 0..state.len() {
                if i & am != 0 && i & bm == 0 {
                    state.swap(i, (i & !am) | bm);
                }
            }
        }
        kind => {
            let m = one_qubit_matrix(kind);
            let bit = 1usize << q[0];
            for i in 0..state.len() {
                if i & bit == 0 {
                    let (a0, a1) = (state[i], state[i | bit]);
                    state[i] = m[0] * a0 + m[1] * a1;
                    state[i | bit] = m[2] * a0 + m[3] * a1;
                }
            }
        }
    }
}

/// The circuit unitary.
pub fn simulate(c: &Circuit) -> Result<Matrix, SimError> {
    let n = c.num_qubits();
    if n > MAX_SIM_QUBITS {
        return Err(SimError::TooManyQubits(n));
    }
    let dim = 1usize << n;
    // Simulate column by column, then transpose into row-major order.
    let mut cols = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (j, col) in cols.chunks_mut(dim).enumerate() {
        col[j] = Complex64::new(1.0, 0.0);
        for g in c.gates() {
            apply_gate(col, g);
        }
    }
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        for i in 0..dim {
            data[i * dim + j] = cols[j * dim + i];
        }
    }
    Ok(Matrix { dim, data })
}

/// Whether `a` and `b` implement the same unitary up to a global phase.
pub fn equivalent_up_to_phase(a: &Circuit, b: &Circuit, tol: f64) -> Result<bool, SimError> {
    if a.num_qubits() != b.num_qubits() {
        return Err(SimError::QubitCountMismatch(a.num_qubits(), b.num_qubits()));
    }
    let (ua, ub) = (simulate(a)?, simulate(b)?);
    Ok(ua.phase_distance(&ub).is_some_and(|d| d < tol))
}

/// Whether `b` equals `a` followed by the qubit permutation that moves
/// qubit `q` to position `perm[q]`, up to global phase.
pub fn equivalent_up_to_permutation(a: &Circuit, b: &Circuit, perm: &[usize], tol: f64) -> Result<bool, SimError> {
    let n = a.num_qubits();
    if n != b.num_qubits() {
        return Err(SimError::QubitCountMismatch(n, b.num_qubits()));
    }
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(SimError::BadPermutation(n));
    }
    let (ua, ub) = (simulate(a)?, simulate(b)?);
    let dim = ua.dim();
    let moved = |r: usize| {
        (0..n)
            .filter(|&q| r >> q & 1 == 1)
            .fold(0usize, |acc, q| acc | 1 << perm[q])
    };
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        let src = moved(r);
        data[r * dim..(r + 1) * dim].copy_from_slice(&ub.data[src * dim..(src + 1) * dim]);
    }
    let unpermuted = Matrix { dim, data };
    Ok(ua.phase_distance(&unpermuted).is_some_and(|d| d < tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Phase;
    use crate::random::random_clifford_t;

    fn circ(n: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::from_gates(n, gates).unwrap()
    }

    #[test]
    fn hadamard_matrix() {
        let u = simulate(&circ(1, vec![Gate::h(0)])).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [r, r, r, -r];
        for (i, e) in expected.iter().enumerate() {
            assert!((u.data()[i] - Complex64::new(*e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn cx_is_involution() {
        let u = simulate(&circ(2, vec![Gate::cx(0, 1), Gate::cx(0, 1)])).unwrap();
        assert!(u.phase_distance(&Matrix::identity(4)).unwrap() < 1e-15);
    }

    #[test]
    fn cx_control_is_first_qubit() {
        // CX(0,1) maps |01> (qubit 0 set, index 1) to |11> (index 3).
        let u = simulate(&circ(2, vec![Gate::cx(0, 1)])).unwrap();
        assert!((u.get(3, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((u.get(2, 2) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_equivalence_examples() {
        let c = random_clifford_t(3, 20, 0.3, 0.3, 5).unwrap();
        assert!(equivalent_up_to_phase(&c, &c, 1e-10).unwrap());
        assert!(equivalent_up_to_phase(&circ(1, vec![Gate::z(0)]), &circ(1, vec![Gate::rz(0, Phase::PI)]), 1e-10).unwrap());
        assert!(!equivalent_up_to_phase(&circ(1, vec![Gate::h(0)]), &circ(1, vec![Gate::x(0)]), 1e-10).unwrap());
        assert!(equivalent_up_to_phase(&circ(1, vec![]), &circ(2, vec![]), 1e-10).is_err());
    }

    #[test]
    fn permutation_equivalence_examples() {
        let c = random_clifford_t(3, 20, 0.3, 0.3, 6).unwrap();
        assert!(equivalent_up_to_permutation(&c, &c, &[0, 1, 2], 1e-10).unwrap());
        assert!(equivalent_up_to_permutation(&circ(2, vec![Gate::swap(0, 1)]), &circ(2, vec![]), &[1, 0], 1e-10).unwrap());
        assert!(!equivalent_up_to_permutation(&circ(2, vec![Gate::swap(0, 1)]), &circ(2, vec![]), &[0, 1], 1e-10).unwrap());
        assert!(equivalent_up_to_permutation(&c, &c, &[0, 0, 1], 1e-10).is_err());
        // a 3-cycle: b = a followed by moving q0->q1, q1->q2, q2->q0
        let mut b = c.clone();
        b.push(Gate::swap(0, 1)).unwrap();
        b.push(Gate::swap(0, 2)).unwrap();
        let perm = [1, 2, 0];
        assert!(equivalent_up_to_permutation(&c, &b, &perm, 1e-10).unwrap());
    }

    #[test]
    fn simulation_respects_composition() {
        for seed in 0..10 {
            let a = random_clifford_t(3, 15, 0.3, 0.3, seed).unwrap();
            let b = random_clifford_t(3, 15, 0.3, 0.3, seed + 100).unwrap();
            let mut ab = a.clone();
            ab.append(&b).unwrap();
            let composed = simulate(&b).unwrap().mul(&simulate(&a).unwrap());
            let direct = simulate(&ab).unwrap();
            let max = composed
                .data()
                .iter()
                .zip(direct.data())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(max < 1e-10);
        }
    }

    #[test]
    fn guards_qubit_count() {
        assert!(matches!(simulate(&Circuit::new(13)), Err(SimError::TooManyQubits(13))));
    }
}
