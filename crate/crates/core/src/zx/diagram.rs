use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::phase::Phase;

use super::ZxError;

/// Stable spider identifier; never reused within one diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpiderId(pub usize);

impl std::fmt::Display for SpiderId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpiderKind {
    Z,
    X,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WireKind {
    Simple,
    Hadamard,
}

impl WireKind {
    pub fn toggled(self) -> WireKind {
        match self {
            WireKind::Simple => WireKind::Hadamard,
            WireKind::Hadamard => WireKind::Simple,
        }
    }

    /// Kind of the wire obtained by composing two wires in series.
    pub fn then(self, other: WireKind) -> WireKind {
        if self == other {
            WireKind::Simple
        } else {
            WireKind::Hadamard
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Spider {
    pub kind: SpiderKind,
    pub phase: Phase,
}

/// An undirected ZX diagram with ordered input and output boundaries.
///
/// Wires are normalized eagerly on insertion: self-loops are removed
/// (a Hadamard self-loop adds π to the spider), parallel wires between
/// spiders either cancel or trigger fusion, so there is at most one wire per
/// spider pair.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZxDiagram {
    spiders: BTreeMap<SpiderId, Spider>,
    adj: BTreeMap<SpiderId, BTreeMap<SpiderId, WireKind>>,
    inputs: Vec<SpiderId>,
    outputs: Vec<SpiderId>,
    next_id: usize,
}

impl ZxDiagram {
    pub fn new() -> ZxDiagram {
        ZxDiagram::default()
    }

    pub fn add_spider(&mut self, kind: SpiderKind, phase: Phase) -> SpiderId {
        let id = SpiderId(self.next_id);
        self.next_id += 1;
        let phase = if kind == SpiderKind::Boundary { Phase::ZERO } else { phase };
        self.spiders.insert(id, Spider { kind, phase });
        self.adj.insert(id, BTreeMap::new());
        id
    }

    pub fn add_input(&mut self) -> SpiderId {
        let id = self.add_spider(SpiderKind::Boundary, Phase::ZERO);
        self.inputs.push(id);
        id
    }

    pub fn add_output(&mut self) -> SpiderId {
        let id = self.add_spider(SpiderKind::Boundary, Phase::ZERO);
        self.outputs.push(id);
        id
    }

    pub fn inputs(&self) -> &[SpiderId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[SpiderId] {
        &self.outputs
    }

    pub fn contains(&self, id: SpiderId) -> bool {
        self.spiders.contains_key(&id)
    }

    pub fn spider(&self, id: SpiderId) -> Option<Spider> {
        self.spiders.get(&id).copied()
    }

    pub fn kind(&self, id: SpiderId) -> SpiderKind {
        self.spiders[&id].kind
    }

    pub fn phase(&self, id: SpiderId) -> Phase {
        self.spiders[&id].phase
    }

    pub fn set_phase(&mut self, id: SpiderId, phase: Phase) {
        let s = self.spiders.get_mut(&id).expect("unknown spider");
        debug_assert!(s.kind != SpiderKind::Boundary || phase.is_zero());
        s.phase = phase;
    }

    pub fn add_to_phase(&mut self, id: SpiderId, delta: Phase) {
        let s = self.spiders.get_mut(&id).expect("unknown spider");
        s.phase += delta;
    }

    pub fn is_boundary(&self, id: SpiderId) -> bool {
        self.spiders.get(&id).is_some_and(|s| s.kind == SpiderKind::Boundary)
    }

    pub fn spider_ids(&self) -> impl Iterator<Item = SpiderId> + '_ {
        self.spiders.keys().copied()
    }

    pub fn spiders(&self) -> impl Iterator<Item = (SpiderId, Spider)> + '_ {
        self.spiders.iter().map(|(k, v)| (*k, *v))
    }

    pub fn num_spiders(&self) -> usize {
        self.spiders.len()
    }

    /// Non-boundary spiders.
    pub fn num_interior(&self) -> usize {
        self.spiders.values().filter(|s| s.kind != SpiderKind::Boundary).count()
    }

    pub fn num_wires(&self) -> usize {
        self.adj.values().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn wire(&self, a: SpiderId, b: SpiderId) -> Option<WireKind> {
        self.adj.get(&a).and_then(|m| m.get(&b)).copied()
    }

    pub fn neighbors(&self, id: SpiderId) -> impl Iterator<Item = (SpiderId, WireKind)> + '_ {
        self.adj[&id].iter().map(|(k, v)| (*k, *v))
    }

    pub fn neighbor_ids(&self, id: SpiderId) -> Vec<SpiderId> {
        self.adj[&id].keys().copied().collect()
    }

    pub fn degree(&self, id: SpiderId) -> usize {
        self.adj[&id].len()
    }

    /// All wires as `(a, b, kind)` with `a < b`, sorted.
    pub fn wires(&self) -> impl Iterator<Item = (SpiderId, SpiderId, WireKind)> + '_ {
        self.adj
            .iter()
            .flat_map(|(a, m)| m.iter().filter(move |(b, _)| *a < **b).map(move |(b, k)| (*a, *b, *k)))
    }

    pub(crate) fn raw_insert(&mut self, a: SpiderId, b: SpiderId, kind: WireKind) {
        self.adj.get_mut(&a).expect("unknown spider").insert(b, kind);
        self.adj.get_mut(&b).expect("unknown spider").insert(a, kind);
    }

    pub fn remove_wire(&mut self, a: SpiderId, b: SpiderId) -> Option<WireKind> {
        let k = self.adj.get_mut(&a)?.remove(&b);
        if let Some(m) = self.adj.get_mut(&b) {
            m.remove(&a);
        }
        k
    }

    /// Removes a spider and its wires, returning the wires it had.
    pub fn remove_spider(&mut self, id: SpiderId) -> Vec<(SpiderId, WireKind)> {
        let wires: Vec<_> = self.adj.remove(&id).map(|m| m.into_iter().collect()).unwrap_or_default();
        for (n, _) in &wires {
            if let Some(m) = self.adj.get_mut(n) {
                m.remove(&id);
            }
        }
        self.spiders.remove(&id);
        self.inputs.retain(|&b| b != id);
        self.outputs.retain(|&b| b != id);
        wires
    }

    /// Toggles a Hadamard wire between two Z spiders: adds it if absent,
    /// removes it if present. Simple wires are left to [`Self::add_wire`].
    pub(crate) fn toggle_hadamard(&mut self, a: SpiderId, b: SpiderId) {
        match self.wire(a, b) {
            Some(WireKind::Hadamard) => {
                self.remove_wire(a, b);
            }
            None => self.raw_insert(a, b, WireKind::Hadamard),
            Some(WireKind::Simple) => panic!("toggle_hadamard on a simple wire {a}-{b}"),
        }
    }

    /// Adds a wire and applies the normalization rules until no self-loop or
    /// parallel wire remains.
    pub fn add_wire(&mut self, a: SpiderId, b: SpiderId, kind: WireKind) -> Result<(), ZxError> {
        for id in [a, b] {
            if !self.contains(id) {
                return Err(ZxError::UnknownSpider(id));
            }
        }
        self.insert_wires(VecDeque::from([(a, b, kind)]))
    }

    fn insert_wires(&mut self, mut pending: VecDeque<(SpiderId, SpiderId, WireKind)>) -> Result<(), ZxError> {
        let mut merged: HashMap<SpiderId, SpiderId> = HashMap::new();
        let resolve = |merged: &HashMap<SpiderId, SpiderId>, mut id: SpiderId| {
            while let Some(&n) = merged.get(&id) {
                id = n;
            }
            id
        };
        while let Some((a, b, k)) = pending.pop_front() {
            let (a, b) = (resolve(&merged, a), resolve(&merged, b));
            if a == b {
                match self.kind(a) {
                    SpiderKind::Boundary => return Err(ZxError::BoundaryDegree(a)),
                    _ if k == WireKind::Hadamard => self.add_to_phase(a, Phase::PI),
                    _ => {}
                }
                continue;
            }
            let (ka, kb) = (self.kind(a), self.kind(b));
            let Some(existing) = self.wire(a, b) else {
                for (id, kind) in [(a, ka), (b, kb)] {
                    if kind == SpiderKind::Boundary && self.degree(id) > 0 {
                        return Err(ZxError::BoundaryDegree(id));
                    }
                }
                self.raw_insert(a, b, k);
                continue;
            };
            if ka == SpiderKind::Boundary || kb == SpiderKind::Boundary {
                return Err(ZxError::BoundaryDegree(if ka == SpiderKind::Boundary { a } else { b }));
            }
            if ka == kb {
                if existing == WireKind::Simple || k == WireKind::Simple {
                    // fuse along the simple wire; the other one becomes a self-loop
                    let other = if existing == WireKind::Simple { k } else { existing };
                    self.remove_wire(a, b);
                    let rest = self.absorb(a, b);
                    merged.insert(b, a);
                    pending.push_front((a, a, other));
                    pending.extend(rest.into_iter().map(|(n, kn)| (a, n, kn)));
                } else {
                    self.remove_wire(a, b);
                }
            } else if existing == WireKind::Simple && k == WireKind::Simple {
                // Hopf: a Z and an X spider joined by two simple wires disconnect
                self.remove_wire(a, b);
            } else {
                let x = if ka == SpiderKind::X { a } else { b };
                self.color_change_in_place(x);
                pending.push_front((a, b, k.toggled()));
            }
        }
        Ok(())
    }

    /// Merges `b` into `a` (phases add) and returns b's remaining wires.
    fn absorb(&mut self, a: SpiderId, b: SpiderId) -> Vec<(SpiderId, WireKind)> {
        let pb = self.phase(b);
        self.add_to_phase(a, pb);
        self.remove_spider(b)
    }

    /// Fuses two same-coloured spiders joined by a simple wire.
    pub fn fuse(&self, a: SpiderId, b: SpiderId) -> Result<ZxDiagram, ZxError> {
        let mut d = self.clone();
        d.fuse_in_place(a, b)?;
        Ok(d)
    }

    pub fn fuse_in_place(&mut self, a: SpiderId, b: SpiderId) -> Result<(), ZxError> {
        let (Some(sa), Some(sb)) = (self.spider(a), self.spider(b)) else {
            return Err(ZxError::UnknownSpider(if self.contains(a) { b } else { a }));
        };
        if a == b || sa.kind != sb.kind || sa.kind == SpiderKind::Boundary {
            return Err(ZxError::Precondition(format!(
                "fusion needs two distinct spiders of the same non-boundary colour ({a}: {:?}, {b}: {:?})",
                sa.kind, sb.kind
            )));
        }
        if self.wire(a, b) != Some(WireKind::Simple) {
            return Err(ZxError::Precondition(format!("spiders {a} and {b} are not joined by a simple wire")));
        }
        self.remove_wire(a, b);
        let rest = self.absorb(a, b);
        self.insert_wires(rest.into_iter().map(|(n, k)| (a, n, k)).collect())
    }

    /// Flips a Z spider to X (or back) and toggles every incident wire.
    pub fn color_change(&self, s: SpiderId) -> Result<ZxDiagram, ZxError> {
        let mut d = self.clone();
        d.color_change_checked(s)?;
        Ok(d)
    }

    pub fn color_change_checked(&mut self, s: SpiderId) -> Result<(), ZxError> {
        match self.spider(s) {
            None => Err(ZxError::UnknownSpider(s)),
            Some(sp) if sp.kind == SpiderKind::Boundary => {
                Err(ZxError::Precondition(format!("cannot colour-change boundary {s}")))
            }
            Some(_) => {
                self.color_change_in_place(s);
                Ok(())
            }
        }
    }

    fn color_change_in_place(&mut self, s: SpiderId) {
        let sp = self.spiders.get_mut(&s).expect("unknown spider");
        sp.kind = match sp.kind {
            SpiderKind::Z => SpiderKind::X,
            SpiderKind::X => SpiderKind::Z,
            SpiderKind::Boundary => unreachable!(),
        };
        let nbrs: Vec<_> = self.neighbors(s).collect();
        for (n, k) in nbrs {
            self.raw_insert(s, n, k.toggled());
        }
    }

    /// Removes a phase-free degree-2 spider, joining its neighbours with the
    /// composed wire.
    pub fn remove_identity(&mut self, v: SpiderId) -> Result<(), ZxError> {
        let s = self.spider(v).ok_or(ZxError::UnknownSpider(v))?;
        if s.kind == SpiderKind::Boundary || !s.phase.is_zero() || self.degree(v) != 2 {
            return Err(ZxError::Precondition(format!("spider {v} is not an identity")));
        }
        let w = self.remove_spider(v);
        self.insert_wires(VecDeque::from([(w[0].0, w[1].0, w[0].1.then(w[1].1))]))
    }

    /// Checks the structural invariants shared by every diagram.
    pub fn check_invariants(&self) -> Result<(), ZxError> {
        for (id, s) in &self.spiders {
            let nbrs = &self.adj[id];
            if nbrs.contains_key(id) {
                return Err(ZxError::Invariant(format!("self-loop on {id}")));
            }
            for (n, k) in nbrs {
                if self.adj.get(n).and_then(|m| m.get(id)) != Some(k) {
                    return Err(ZxError::Invariant(format!("asymmetric wire {id}-{n}")));
                }
            }
            if s.kind == SpiderKind::Boundary {
                if nbrs.len() != 1 {
                    return Err(ZxError::Invariant(format!("boundary {id} has degree {}", nbrs.len())));
                }
                if !s.phase.is_zero() {
                    return Err(ZxError::Invariant(format!("boundary {id} carries a phase")));
                }
                let n_in = self.inputs.iter().filter(|&&b| b == *id).count();
                let n_out = self.outputs.iter().filter(|&&b| b == *id).count();
                if n_in + n_out != 1 {
                    return Err(ZxError::Invariant(format!("boundary {id} is not exactly one input or output")));
                }
            }
        }
        for b in self.inputs.iter().chain(&self.outputs) {
            if !self.is_boundary(*b) {
                return Err(ZxError::Invariant(format!("{b} listed as boundary but is not one")));
            }
        }
        Ok(())
    }

    /// Deterministic text dump: header, boundary lists, sorted spiders,
    /// sorted wires. Phases are written as `num/den` multiples of π.
    ///
    /// ```text
    /// zx v1
    /// inputs 0 1
    /// outputs 2 3
    /// spider 0 B 0/1
    /// spider 4 Z 1/4
    /// wire 0 4 S
    /// wire 4 5 H
    /// ```
    pub fn dump(&self) -> String {
        let mut out = String::from("zx v1\n");
        let list = |ids: &[SpiderId]| ids.iter().map(|i| i.0.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "inputs {}", list(&self.inputs)).and_then(|_| writeln!(out, "outputs {}", list(&self.outputs)));
        for (id, s) in &self.spiders {
            let k = match s.kind {
                SpiderKind::Z => "Z",
                SpiderKind::X => "X",
                SpiderKind::Boundary => "B",
            };
            let _ = writeln!(out, "spider {} {k} {}/{}", id.0, s.phase.numerator(), s.phase.denominator());
        }
        for (a, b, k) in self.wires() {
            let _ = writeln!(out, "wire {} {} {}", a.0, b.0, if k == WireKind::Simple { "S" } else { "H" });
        }
        out
    }

    /// Reads the format written by [`Self::dump`]. Wires are inserted through
    /// the normalizing path.
    pub fn parse_dump(text: &str) -> Result<ZxDiagram, ZxError> {
        let mut d = ZxDiagram::new();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut wires = Vec::new();
        let bad = |line: usize, msg: &str| ZxError::Dump(format!("line {}: {msg}", line + 1));
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        match lines.next() {
            Some((_, l)) if l.trim() == "zx v1" => {}
            Some((i, _)) => return Err(bad(i, "expected header `zx v1`")),
            None => return Err(ZxError::Dump("empty dump".into())),
        }
        let parse_id = |i: usize, s: &str| s.parse::<usize>().map(SpiderId).map_err(|_| bad(i, "bad spider id"));
        for (i, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts[0] {
                "inputs" => inputs = parts[1..].iter().map(|s| parse_id(i, s)).collect::<Result<_, _>>()?,
                "outputs" => outputs = parts[1..].iter().map(|s| parse_id(i, s)).collect::<Result<_, _>>()?,
                "spider" if parts.len() == 4 => {
                    let id = parse_id(i, parts[1])?;
                    let kind = match parts[2] {
                        "Z" => SpiderKind::Z,
                        "X" => SpiderKind::X,
                        "B" => SpiderKind::Boundary,
                        _ => return Err(bad(i, "bad spider kind")),
                    };
                    let (n, den) = parts[3].split_once('/').ok_or_else(|| bad(i, "phase must be num/den"))?;
                    let n: i64 = n.parse().map_err(|_| bad(i, "bad phase numerator"))?;
                    let den: i64 = den.parse().map_err(|_| bad(i, "bad phase denominator"))?;
                    if den == 0 {
                        return Err(bad(i, "zero phase denominator"));
                    }
                    if d.spiders.contains_key(&id) {
                        return Err(bad(i, "duplicate spider id"));
                    }
                    d.spiders.insert(id, Spider { kind, phase: Phase::new(n, den) });
                    d.adj.insert(id, BTreeMap::new());
                    d.next_id = d.next_id.max(id.0 + 1);
                }
                "wire" if parts.len() == 4 => {
                    let kind = match parts[3] {
                        "S" => WireKind::Simple,
                        "H" => WireKind::Hadamard,
                        _ => return Err(bad(i, "bad wire kind")),
                    };
                    wires.push((parse_id(i, parts[1])?, parse_id(i, parts[2])?, kind, i));
                }
                _ => return Err(bad(i, "unrecognised line")),
            }
        }
        for (a, b, k, i) in wires {
            if !d.contains(a) || !d.contains(b) {
                return Err(bad(i, "wire references unknown spider"));
            }
            d.add_wire(a, b, k)?;
        }
        d.inputs = inputs;
        d.outputs = outputs;
        d.check_invariants()?;
        Ok(d)
    }
}
