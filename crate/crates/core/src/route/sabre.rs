use std::collections::BTreeSet;

use super::{HardwareModel, Mapping};
use crate::circuit::{Circuit, Gate, GateKind};

/// Weight of the lookahead term relative to the front layer.
const EXTENDED_WEIGHT: f64 = 0.5;
/// Number of upcoming two-qubit gates in the lookahead window.
const EXTENDED_SIZE: usize = 20;
/// Penalty added to a physical qubit each time it takes part in a SWAP.
const DECAY_STEP: f64 = 0.001;
/// Decay values reset after this many SWAPs without progress.
const DECAY_RESET: usize = 5;

pub(crate) struct SabreOutput {
    pub gates: Vec<Gate>,
    pub final_mapping: Mapping,
    pub swaps: usize,
}

struct Dag {
    succ: Vec<Vec<usize>>,
    indegree: Vec<usize>,
}

fn build_dag(c: &Circuit) -> Dag {
    let mut last: Vec<Option<usize>> = vec![None; c.num_qubits()];
    let mut succ = vec![Vec::new(); c.len()];
    let mut indegree = vec![0; c.len()];
    for (i, g) in c.gates().iter().enumerate() {
        let mut preds: Vec<usize> = g.qubits().iter().filter_map(|&q| last[q]).collect();
        preds.dedup();
        for p in preds {
            succ[p].push(i);
            indegree[i] += 1;
        }
        for &q in g.qubits() {
            last[q] = Some(i);
        }
    }
    Dag { succ, indegree }
}

/// SWAP insertion with a front layer, a decayed lookahead window and a
/// shortest-path fallback when no SWAP makes progress. SWAP gates in the
/// source are absorbed into the mapping instead of being executed.
pub(crate) fn sabre(c: &Circuit, hw: &HardwareModel, initial: &Mapping) -> SabreOutput {
    let gates = c.gates();
    let Dag { succ, mut indegree } = build_dag(c);
    let mut front: BTreeSet<usize> = (0..gates.len()).filter(|&i| indegree[i] == 0).collect();
    let mut mapping = initial.clone();
    let mut out = Vec::with_capacity(gates.len());
    let mut decay = vec![1.0f64; hw.num_physical()];
    let mut swaps = 0;
    let mut stalled = 0usize;
    let max_distance = (0..hw.num_physical()).map(|p| hw.distance(0, p)).max().unwrap_or(0);
    let stall_limit = 3 * max_distance + 10;

    while !front.is_empty() {
        let mut progressed = false;
        loop {
            let ready: Vec<usize> = front
                .iter()
                .copied()
                .filter(|&i| match *gates[i].qubits() {
                    [a, b] if gates[i].kind != GateKind::Swap => hw.coupled(mapping.physical(a), mapping.physical(b)),
                    _ => true,
                })
                .collect();
            if ready.is_empty() {
                break;
            }
            for i in ready {
                let g = &gates[i];
                if g.kind == GateKind::Swap {
                    let (a, b) = (mapping.physical(g.qubits()[0]), mapping.physical(g.qubits()[1]));
                    mapping.swap_physical(a, b);
                } else {
                    out.push(g.map_qubits(|q| mapping.physical(q)));
                }
                front.remove(&i);
                for &s in &succ[i] {
                    indegree[s] -= 1;
                    if indegree[s] == 0 {
                        front.insert(s);
                    }
                }
            }
            progressed = true;
        }
        if front.is_empty() {
            break;
        }
        if progressed {
            stalled = 0;
            decay.iter_mut().for_each(|d| *d = 1.0);
        }

        let blocked: Vec<(usize, usize)> = front
            .iter()
            .map(|&i| (gates[i].qubits()[0], gates[i].qubits()[1]))
            .collect();

        if stalled >= stall_limit {
            // walk the first blocked gate's operands together
            let (a, b) = blocked[0];
            let path = hw.shortest_path(mapping.physical(a), mapping.physical(b));
            for w in path[..path.len() - 1].windows(2) {
                out.push(Gate::swap(w[0], w[1]));
                mapping.swap_physical(w[0], w[1]);
                swaps += 1;
            }
            stalled = 0;
            continue;
        }

        let extended = extended_set(gates, &succ, &indegree, &front);
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for &(a, b) in &blocked {
            touched.insert(mapping.physical(a));
            touched.insert(mapping.physical(b));
        }
        let mut best: Option<((usize, usize), f64)> = None;
        for &(p, q) in hw.edges() {
            if !touched.contains(&p) && !touched.contains(&q) {
                continue;
            }
            let mut trial = mapping.clone();
            trial.swap_physical(p, q);
            let dist = |pairs: &[(usize, usize)]| -> f64 {
                pairs
                    .iter()
                    .map(|&(a, b)| hw.distance(trial.physical(a), trial.physical(b)) as f64)
                    .sum::<f64>()
            };
            let mut score = dist(&blocked) / blocked.len() as f64;
            if !extended.is_empty() {
                score += EXTENDED_WEIGHT * dist(&extended) / extended.len() as f64;
            }
            score *= decay[p].max(decay[q]);
            if best.is_none_or(|(_, s)| score < s) {
                best = Some(((p, q), score));
            }
        }
        let ((p, q), _) = best.expect("a blocked gate touches at least one edge");
        out.push(Gate::swap(p, q));
        mapping.swap_physical(p, q);
        swaps += 1;
        stalled += 1;
        decay[p] += DECAY_STEP;
        decay[q] += DECAY_STEP;
        if stalled.is_multiple_of(DECAY_RESET) {
            decay.iter_mut().for_each(|d| *d = 1.0);
        }
    }
    SabreOutput {
        gates: out,
        final_mapping: mapping,
        swaps,
    }
}

/// Upcoming two-qubit gates (excluding source SWAPs) reached by a
/// breadth-first walk from the front layer.
fn extended_set(gates: &[Gate], succ: &[Vec<usize>], indegree: &[usize], front: &BTreeSet<usize>) -> Vec<(usize, usize)> {
    let mut remaining: Vec<usize> = indegree.to_vec();
    let mut queue: std::collections::VecDeque<usize> = front.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(i) = queue.pop_front() {
        for &s in &succ[i] {
            remaining[s] -= 1;
            if remaining[s] == 0 {
                let g = &gates[s];
                if g.is_two_qubit() && g.kind != GateKind::Swap {
                    out.push((g.qubits()[0], g.qubits()[1]));
                    if out.len() == EXTENDED_SIZE {
                        return out;
                    }
                }
                queue.push_back(s);
            }
        }
    }
    out
}
