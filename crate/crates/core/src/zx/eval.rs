//! Dense tensor-network evaluation of small diagrams.
//!
//! Independent of every rewrite: spiders are materialized as their defining
//! tensors and contracted greedily. Intended as a test oracle for diagrams
//! with a handful of qubits.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{SpiderKind, WireKind, ZxDiagram, ZxError};
use crate::sim::Matrix;

/// Largest intermediate tensor rank the evaluator will build.
pub const MAX_RANK: usize = 22;

#[derive(Clone, Debug)]
struct Tensor {
    /// Leg labels; leg `i` is bit `i` of the data index.
    legs: Vec<usize>,
    data: Vec<Complex64>,
}

fn spider_tensor(kind: SpiderKind, phase: f64, legs: Vec<usize>) -> Tensor {
    let d = legs.len();
    let size = 1usize << d;
    let e = Complex64::from_polar(1.0, phase);
    let data = match kind {
        SpiderKind::Z => {
            let mut v = vec![Complex64::new(0.0, 0.0); size];
            v[0] += Complex64::new(1.0, 0.0);
            v[size - 1] += e;
            v
        }
        SpiderKind::X => {
            // |+…+> + e^{iα}|−…−>
            let norm = 0.5f64.powf(d as f64 / 2.0);
            (0..size)
                .map(|b| {
                    let sign = if (b as u32).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                    (Complex64::new(1.0, 0.0) + e * sign) * norm
                })
                .collect()
        }
        SpiderKind::Boundary => unreachable!(),
    };
    Tensor { legs, data }
}

fn hadamard(a: usize, b: usize) -> Tensor {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Tensor {
        legs: vec![a, b],
        data: vec![
            Complex64::new(r, 0.0),
            Complex64::new(r, 0.0),
            Complex64::new(r, 0.0),
            Complex64::new(-r, 0.0),
        ],
    }
}

fn contract(x: &Tensor, y: &Tensor) -> Tensor {
    let shared: Vec<usize> = x.legs.iter().copied().filter(|l| y.legs.contains(l)).collect();
    let out_legs: Vec<usize> = x
        .legs
        .iter()
        .chain(&y.legs)
        .copied()
        .filter(|l| !shared.contains(l))
        .collect();
    let pos = |legs: &[usize], l: usize| legs.iter().position(|&m| m == l).unwrap();
    let x_out: Vec<usize> = x.legs.iter().filter(|l| !shared.contains(l)).map(|&l| pos(&x.legs, l)).collect();
    let y_out: Vec<usize> = y.legs.iter().filter(|l| !shared.contains(l)).map(|&l| pos(&y.legs, l)).collect();
    let x_sh: Vec<usize> = shared.iter().map(|&l| pos(&x.legs, l)).collect();
    let y_sh: Vec<usize> = shared.iter().map(|&l| pos(&y.legs, l)).collect();
    let mut data = vec![Complex64::new(0.0, 0.0); 1 << out_legs.len()];
    for (o, slot) in data.iter_mut().enumerate() {
        let mut xi = 0usize;
        let mut yi = 0usize;
        for (k, &p) in x_out.iter().enumerate() {
            xi |= (o >> k & 1) << p;
        }
        for (k, &p) in y_out.iter().enumerate() {
            yi |= (o >> (k + x_out.len()) & 1) << p;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..(1usize << shared.len()) {
            let (mut xs, mut ys) = (xi, yi);
            for k in 0..shared.len() {
                let bit = s >> k & 1;
                xs |= bit << x_sh[k];
                ys |= bit << y_sh[k];
            }
            acc += x.data[xs] * y.data[ys];
        }
        *slot = acc;
    }
    Tensor { legs: out_legs, data }
}

/// Evaluates the diagram's linear map as a `2^outputs × 2^inputs` matrix,
/// up to a global scalar. Qubit `i` corresponds to the `i`-th input/output
/// and is the least-significant bit of the index.
pub fn evaluate(d: &ZxDiagram) -> Result<Matrix, ZxError> {
    let n_in = d.inputs().len();
    let n_out = d.outputs().len();
    if n_in != n_out {
        return Err(ZxError::NotUnitary {
            inputs: n_in,
            outputs: n_out,
        });
    }
    // Every wire gets a label per endpoint; simple wires share one label,
    // Hadamard wires get a separate H tensor.
    let mut next_label = 0usize;
    let mut fresh = || {
        next_label += 1;
        next_label - 1
    };
    let mut legs: BTreeMap<_, Vec<usize>> = d.spider_ids().map(|id| (id, Vec::new())).collect();
    let mut tensors: Vec<Tensor> = Vec::new();
    for (a, b, k) in d.wires() {
        let la = fresh();
        let lb = if k == WireKind::Simple {
            la
        } else {
            let lb = fresh();
            tensors.push(hadamard(la, lb));
            lb
        };
        legs.get_mut(&a).unwrap().push(la);
        legs.get_mut(&b).unwrap().push(lb);
    }
    let mut open_of = BTreeMap::new();
    for (id, s) in d.spiders() {
        let l = legs.remove(&id).unwrap();
        if s.kind == SpiderKind::Boundary {
            open_of.insert(id, l[0]);
        } else {
            if l.len() > MAX_RANK {
                return Err(ZxError::TooLarge(MAX_RANK));
            }
            tensors.push(spider_tensor(s.kind, s.phase.to_radians(), l));
        }
    }
    // Boundary-to-boundary simple wires have no tensor; add an identity.
    for (a, b, k) in d.wires() {
        if d.is_boundary(a) && d.is_boundary(b) && k == WireKind::Simple {
            let l = open_of[&a];
            let m = fresh();
            open_of.insert(b, m);
            let one = Complex64::new(1.0, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            tensors.push(Tensor {
                legs: vec![l, m],
                data: vec![one, zero, zero, one],
            });
        }
    }

    // Greedy pairwise contraction by smallest result rank.
    while tensors.len() > 1 {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..tensors.len() {
            for j in i + 1..tensors.len() {
                let shared = tensors[i].legs.iter().filter(|l| tensors[j].legs.contains(l)).count();
                if shared == 0 {
                    continue;
                }
                let rank = tensors[i].legs.len() + tensors[j].legs.len() - 2 * shared;
                if best.is_none_or(|b| rank < b.2) {
                    best = Some((i, j, rank));
                }
            }
        }
        let (i, j) = match best {
            Some((i, j, rank)) => {
                if rank > MAX_RANK {
                    return Err(ZxError::TooLarge(MAX_RANK));
                }
                (i, j)
            }
            // disconnected pieces: outer product of the two smallest
            None => {
                let mut idx: Vec<usize> = (0..tensors.len()).collect();
                idx.sort_by_key(|&k| tensors[k].legs.len());
                let (a, b) = (idx[0].min(idx[1]), idx[0].max(idx[1]));
                if tensors[a].legs.len() + tensors[b].legs.len() > MAX_RANK {
                    return Err(ZxError::TooLarge(MAX_RANK));
                }
                (a, b)
            }
        };
        let y = tensors.swap_remove(j);
        let x = tensors.swap_remove(i);
        tensors.push(contract(&x, &y));
    }
    let t = tensors.pop().unwrap_or(Tensor {
        legs: vec![],
        data: vec![Complex64::new(1.0, 0.0)],
    });

    let dim = 1usize << n_in;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    let out_pos: Vec<usize> = d
        .outputs()
        .iter()
        .map(|o| t.legs.iter().position(|&l| l == open_of[o]).expect("open output leg"))
        .collect();
    let in_pos: Vec<usize> = d
        .inputs()
        .iter()
        .map(|i| t.legs.iter().position(|&l| l == open_of[i]).expect("open input leg"))
        .collect();
    for r in 0..dim {
        for c in 0..dim {
            let mut idx = 0usize;
            for q in 0..n_in {
                idx |= (r >> q & 1) << out_pos[q];
                idx |= (c >> q & 1) << in_pos[q];
            }
            data[r * dim + c] = t.data[idx];
        }
    }
    Ok(Matrix::from_rows(dim, data))
}
