use super::{SpiderId, SpiderKind, WireKind, ZxDiagram, ZxError};

/// A diagram with only Z spiders, Hadamard wires between interior spiders,
/// and boundary wires of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphLike(ZxDiagram);

impl GraphLike {
    /// Wraps a diagram after checking the graph-like invariants.
    pub fn new(d: ZxDiagram) -> Result<GraphLike, ZxError> {
        let g = GraphLike(d);
        g.check()?;
        Ok(g)
    }

    /// Rewrites any unitary diagram into graph-like form: colour-changes X
    /// spiders, fuses simple-wired neighbours, removes identities and drops
    /// isolated spiders.
    pub fn from_diagram(mut d: ZxDiagram) -> Result<GraphLike, ZxError> {
        if d.inputs().len() != d.outputs().len() {
            return Err(ZxError::NotUnitary {
                inputs: d.inputs().len(),
                outputs: d.outputs().len(),
            });
        }
        let xs: Vec<SpiderId> = d.spiders().filter(|(_, s)| s.kind == SpiderKind::X).map(|(id, _)| id).collect();
        for x in xs {
            d.color_change_checked(x)?;
        }
        loop {
            if let Some((a, b)) = find_simple_pair(&d) {
                d.fuse_in_place(a, b)?;
                continue;
            }
            if let Some(v) = find_identity(&d) {
                d.remove_identity(v)?;
                continue;
            }
            break;
        }
        let isolated: Vec<SpiderId> = d
            .spider_ids()
            .filter(|&id| !d.is_boundary(id) && d.degree(id) == 0)
            .collect();
        for id in isolated {
            d.remove_spider(id);
        }
        GraphLike::new(d)
    }

    pub fn diagram(&self) -> &ZxDiagram {
        &self.0
    }

    pub fn into_diagram(self) -> ZxDiagram {
        self.0
    }

    /// Mutable access for rewrites that preserve graph-likeness; callers
    /// re-check in debug builds.
    pub(crate) fn diagram_mut(&mut self) -> &mut ZxDiagram {
        &mut self.0
    }

    pub fn num_qubits(&self) -> usize {
        self.0.inputs().len()
    }

    /// Hadamard wires between two non-boundary spiders.
    pub fn hadamard_wire_count(&self) -> usize {
        let d = &self.0;
        d.wires()
            .filter(|&(a, b, k)| k == WireKind::Hadamard && !d.is_boundary(a) && !d.is_boundary(b))
            .count()
    }

    /// True if the spider is a Z spider with no boundary neighbour.
    pub fn is_interior(&self, v: SpiderId) -> bool {
        let d = &self.0;
        d.contains(v) && !d.is_boundary(v) && d.neighbors(v).all(|(n, _)| !d.is_boundary(n))
    }

    pub fn check(&self) -> Result<(), ZxError> {
        let d = &self.0;
        d.check_invariants()?;
        for (id, s) in d.spiders() {
            if s.kind == SpiderKind::X {
                return Err(ZxError::Invariant(format!("X spider {id} in graph-like diagram")));
            }
        }
        for (a, b, k) in d.wires() {
            if k == WireKind::Simple && !d.is_boundary(a) && !d.is_boundary(b) {
                return Err(ZxError::Invariant(format!("simple wire {a}-{b} between Z spiders")));
            }
        }
        Ok(())
    }

    pub(crate) fn debug_check(&self) {
        if cfg!(debug_assertions) {
            if let Err(e) = self.check() {
                panic!("graph-like invariant broken: {e}");
            }
        }
    }
}

fn find_simple_pair(d: &ZxDiagram) -> Option<(SpiderId, SpiderId)> {
    d.wires()
        .find(|&(a, b, k)| k == WireKind::Simple && !d.is_boundary(a) && d.kind(a) == d.kind(b))
        .map(|(a, b, _)| (a, b))
}

fn find_identity(d: &ZxDiagram) -> Option<SpiderId> {
    d.spiders()
        .find(|&(id, s)| s.kind != SpiderKind::Boundary && s.phase.is_zero() && d.degree(id) == 2)
        .map(|(id, _)| id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::phase::Phase;
    use crate::random::random_clifford_t;
    use crate::sim::simulate;
    use crate::zx::{circuit_to_zx, eval::evaluate};
    use proptest::prelude::*;

    fn graph_like(c: &Circuit) -> GraphLike {
        GraphLike::from_diagram(circuit_to_zx(c)).unwrap()
    }

    #[test]
    fn empty_circuit_has_no_interior() {
        let g = graph_like(&Circuit::new(3));
        assert_eq!(g.diagram().num_interior(), 0);
        assert_eq!(g.hadamard_wire_count(), 0);
        for (i, o) in g.diagram().inputs().iter().zip(g.diagram().outputs()) {
            assert_eq!(g.diagram().wire(*i, *o), Some(WireKind::Simple));
        }
    }

    #[test]
    fn grover_graph_like_is_small_and_equivalent() {
        let c = crate::zx::tests::grover2();
        let g = graph_like(&c);
        g.check().unwrap();
        let m = evaluate(g.diagram()).unwrap();
        assert!(m.proportional(&simulate(&c).unwrap(), 1e-9));
        // per qubit line: in -H- A(π) -H- B(0) -H- C(π) - out, where A fuses
        // the first CZ spider with the colour-changed X, and the CZ wires join
        // A0-A1 and B0-B1
        assert_eq!(g.diagram().num_interior(), 6);
        assert_eq!(g.hadamard_wire_count(), 6);
        let d = g.diagram();
        let pis = d.spiders().filter(|(_, s)| s.phase == Phase::PI).count();
        assert_eq!(pis, 4);
    }

    #[test]
    fn x_spider_colour_change_toggles_wires() {
        let mut d = ZxDiagram::new();
        let i = d.add_input();
        let x = d.add_spider(SpiderKind::X, Phase::PI);
        let o = d.add_output();
        d.add_wire(i, x, WireKind::Simple).unwrap();
        d.add_wire(x, o, WireKind::Simple).unwrap();
        let g = GraphLike::from_diagram(d).unwrap();
        let z = g.diagram().neighbor_ids(i)[0];
        assert_eq!(g.diagram().kind(z), SpiderKind::Z);
        assert_eq!(g.diagram().phase(z), Phase::PI);
        assert_eq!(g.diagram().wire(i, z), Some(WireKind::Hadamard));
        assert_eq!(g.diagram().wire(z, o), Some(WireKind::Hadamard));
    }

    #[test]
    fn rejects_non_graph_like() {
        let mut d = ZxDiagram::new();
        let i = d.add_input();
        let x = d.add_spider(SpiderKind::X, Phase::ZERO);
        let o = d.add_output();
        d.add_wire(i, x, WireKind::Simple).unwrap();
        d.add_wire(x, o, WireKind::Simple).unwrap();
        assert!(GraphLike::new(d).is_err());
    }

    #[test]
    fn five_qubit_depth_thirty_invariants() {
        for seed in 0..10 {
            let c = random_clifford_t(5, 30, 0.3, 0.3, seed).unwrap();
            let g = graph_like(&c);
            g.check().unwrap();
            let m = evaluate(g.diagram()).unwrap();
            assert!(m.proportional(&simulate(&c).unwrap(), 1e-8), "seed {seed}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn conversion_preserves_semantics(seed in 0u64..10_000, n in 1usize..5, depth in 1usize..30) {
            let p_cx = if n > 1 { 0.3 } else { 0.0 };
            let c = random_clifford_t(n, depth, 0.3, p_cx, seed).unwrap();
            let g = graph_like(&c);
            prop_assert!(g.check().is_ok());
            let m = evaluate(g.diagram()).unwrap();
            prop_assert!(m.proportional(&simulate(&c).unwrap(), 1e-8));
        }

        #[test]
        fn conversion_is_idempotent(seed in 0u64..10_000) {
            let c = random_clifford_t(3, 25, 0.3, 0.3, seed).unwrap();
            let g = graph_like(&c);
            let again = GraphLike::from_diagram(g.diagram().clone()).unwrap();
            prop_assert_eq!(g, again);
        }
    }
}
