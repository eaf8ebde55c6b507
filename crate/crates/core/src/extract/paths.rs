use serde::Serialize;

use super::{ExtractError, ExtractorState};
use crate::circuit::{Gate, GateKind};

/// Gate counts of a path, by kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PathDescriptor {
    pub rz: usize,
    pub h: usize,
    pub cz: usize,
    pub cx: usize,
    pub swap: usize,
}

impl PathDescriptor {
    pub fn of(gates: &[Gate]) -> PathDescriptor {
        let mut d = PathDescriptor::default();
        for g in gates {
            match g.kind {
                GateKind::Cz => d.cz += 1,
                GateKind::Cx => d.cx += 1,
                GateKind::Swap => d.swap += 1,
                GateKind::H => d.h += 1,
                _ => d.rz += 1,
            }
        }
        d
    }

    pub fn two_qubit(&self) -> usize {
        self.cz + self.cx + self.swap
    }
}

/// One or more consecutive extraction cycles from a given state.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtractionPath {
    /// Emitted gates in circuit order.
    pub gates: Vec<Gate>,
    pub successor: ExtractorState,
    /// Hadamard wires removed by the path; negative if it added wires.
    pub delta_w: i64,
    pub descriptor: PathDescriptor,
    /// Index of the single-cycle candidate this path starts with.
    pub root: usize,
}

impl ExtractionPath {
    fn new(before: &ExtractorState, successor: ExtractorState, emitted_from: usize, root: usize) -> ExtractionPath {
        let gates: Vec<Gate> = successor.extracted_rev()[emitted_from..].iter().rev().copied().collect();
        let delta_w = before.hadamard_wire_count() as i64 - successor.hadamard_wire_count() as i64;
        ExtractionPath {
            descriptor: PathDescriptor::of(&gates),
            gates,
            successor,
            delta_w,
            root,
        }
    }

    /// Gates in extraction order (nearest-to-output first).
    pub fn extraction_order(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter().rev()
    }
}

/// Row additions `(control, target)` on the frontier biadjacency that lower
/// the control row's weight, or (unless `strict`) leave it a singleton,
/// with the weight reduction.
fn reducing_cx(st: &ExtractorState, strict: bool) -> Vec<(i64, usize, usize)> {
    let b = st.frontier_biadjacency();
    let m = &b.matrix;
    let mut out = Vec::new();
    for (ri, &qc) in b.rows.iter().enumerate() {
        for (rj, &qt) in b.rows.iter().enumerate() {
            if ri == rj {
                continue;
            }
            let old = m.row_weight(ri) as i64;
            let new = m.xor_weight(rj, ri) as i64;
            if old - new > 0 || (!strict && new == 1 && old != 1) {
                out.push((old - new, qc, qt));
            }
        }
    }
    out
}

/// Single-cycle candidates from `st`. Candidate 0 is the default cycle. The
/// others add one CX that removes Hadamard wires, either after the
/// elimination the default cycle needs or in place of it (in which case it
/// may also leave a frontier spider with a single neighbour); each then
/// completes the cycle the default way. CX choices are ranked by wire
/// reduction, then by placement (after elimination first), then by qubit
/// pair. Alternatives that add wires overall, fail to advance the frontier
/// or duplicate an earlier candidate are skipped.
pub fn enumerate_cycles(st: &ExtractorState, max_branch: usize) -> Result<Vec<ExtractionPath>, ExtractError> {
    if max_branch == 0 {
        return Err(ExtractError::Bounds("max_branch must be at least 1".into()));
    }
    let emitted_from = st.extracted_rev().len();
    let mut base = st.clone();
    base.begin_cycle();
    let mut unblocked = base.clone();
    unblocked.unblock()?;

    let mut default = unblocked.clone();
    default.advance()?;
    let mut out = vec![ExtractionPath::new(st, default, emitted_from, 0)];
    if max_branch == 1 || base.is_done() {
        return Ok(out);
    }

    let mut choices: Vec<(i64, u8, usize, usize)> = Vec::new();
    choices.extend(reducing_cx(&unblocked, true).into_iter().map(|(r, c, t)| (r, 0, c, t)));
    choices.extend(reducing_cx(&base, false).into_iter().map(|(r, c, t)| (r, 1, c, t)));
    choices.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3)));

    for (_, placement, qc, qt) in choices {
        if out.len() == max_branch {
            break;
        }
        let mut cand = if placement == 0 { unblocked.clone() } else { base.clone() };
        if cand.apply_cx(qc, qt).is_err() {
            continue;
        }
        let completed = if placement == 0 { cand.advance() } else { cand.finish_cycle() };
        if completed.is_err() {
            continue;
        }
        let path = ExtractionPath::new(st, cand, emitted_from, out.len());
        if path.delta_w < 0 || out.iter().any(|p| p.gates == path.gates) {
            continue;
        }
        out.push(path);
    }
    Ok(out)
}

/// Expands single-cycle candidates into paths of `depth` cycles. Every leaf
/// keeps the root index of its first cycle. Finished states end a path early.
pub fn expand_paths(
    cycles: &[ExtractionPath],
    depth: usize,
    max_branch: usize,
) -> Result<Vec<ExtractionPath>, ExtractError> {
    let mut out = Vec::new();
    for c in cycles {
        extend(c.clone(), depth.saturating_sub(1), max_branch, &mut out)?;
    }
    Ok(out)
}

fn extend(path: ExtractionPath, remaining: usize, max_branch: usize, out: &mut Vec<ExtractionPath>) -> Result<(), ExtractError> {
    if remaining == 0 || path.successor.is_done() {
        out.push(path);
        return Ok(());
    }
    for next in enumerate_cycles(&path.successor, max_branch)? {
        let mut gates = next.gates;
        gates.extend_from_slice(&path.gates);
        let joined = ExtractionPath {
            descriptor: PathDescriptor::of(&gates),
            gates,
            successor: next.successor,
            delta_w: path.delta_w + next.delta_w,
            root: path.root,
        };
        extend(joined, remaining - 1, max_branch, out)?;
    }
    Ok(())
}

/// All paths of `depth` cycles from `st`, at most `max_branch^depth`.
pub fn enumerate_paths(st: &ExtractorState, depth: usize, max_branch: usize) -> Result<Vec<ExtractionPath>, ExtractError> {
    if depth == 0 {
        return Err(ExtractError::Bounds("depth must be at least 1".into()));
    }
    let cycles = enumerate_cycles(st, max_branch)?;
    expand_paths(&cycles, depth, max_branch)
}
