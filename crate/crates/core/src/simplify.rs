//! Interior Clifford simplification of graph-like diagrams.

use std::collections::BTreeSet;

use crate::phase::Phase;
use crate::zx::{GraphLike, SpiderId, SpiderKind, WireKind, ZxError};

fn is_half_pi(p: Phase) -> bool {
    p == Phase::HALF_PI || p == Phase::MINUS_HALF_PI
}

fn require_interior(g: &GraphLike, v: SpiderId) -> Result<(), ZxError> {
    if !g.diagram().contains(v) {
        return Err(ZxError::UnknownSpider(v));
    }
    if !g.is_interior(v) {
        return Err(ZxError::Precondition(format!("spider {v} is a boundary or touches one")));
    }
    Ok(())
}

/// Removes a ±π/2 interior spider, complementing the wires among its
/// neighbours and subtracting its phase from each of them.
pub fn local_complementation(g: &GraphLike, s: SpiderId) -> Result<GraphLike, ZxError> {
    let mut out = g.clone();
    local_complementation_in_place(&mut out, s)?;
    Ok(out)
}

pub(crate) fn local_complementation_in_place(g: &mut GraphLike, s: SpiderId) -> Result<(), ZxError> {
    require_interior(g, s)?;
    let alpha = g.diagram().phase(s);
    if !is_half_pi(alpha) {
        return Err(ZxError::Precondition(format!("spider {s} has phase {alpha}, not ±π/2")));
    }
    let d = g.diagram_mut();
    let nbrs = d.neighbor_ids(s);
    d.remove_spider(s);
    for (i, &a) in nbrs.iter().enumerate() {
        d.add_to_phase(a, -alpha);
        for &b in &nbrs[i + 1..] {
            d.toggle_hadamard(a, b);
        }
    }
    g.debug_check();
    Ok(())
}

/// Removes a Hadamard-joined pair of interior Pauli spiders, complementing
/// the wires between the three neighbour classes.
pub fn pivot(g: &GraphLike, a: SpiderId, b: SpiderId) -> Result<GraphLike, ZxError> {
    let mut out = g.clone();
    pivot_in_place(&mut out, a, b)?;
    Ok(out)
}

pub(crate) fn pivot_in_place(g: &mut GraphLike, a: SpiderId, b: SpiderId) -> Result<(), ZxError> {
    require_interior(g, a)?;
    require_interior(g, b)?;
    let d = g.diagram();
    let (pa, pb) = (d.phase(a), d.phase(b));
    if !pa.is_pauli() || !pb.is_pauli() {
        return Err(ZxError::Precondition(format!("pivot needs Pauli phases, got {pa} and {pb}")));
    }
    if a == b || d.wire(a, b).is_none() {
        return Err(ZxError::Precondition(format!("spiders {a} and {b} are not joined")));
    }
    let na: BTreeSet<SpiderId> = d.neighbor_ids(a).into_iter().filter(|&n| n != b).collect();
    let nb: BTreeSet<SpiderId> = d.neighbor_ids(b).into_iter().filter(|&n| n != a).collect();
    let shared: Vec<SpiderId> = na.intersection(&nb).copied().collect();
    let only_a: Vec<SpiderId> = na.difference(&nb).copied().collect();
    let only_b: Vec<SpiderId> = nb.difference(&na).copied().collect();

    let d = g.diagram_mut();
    d.remove_spider(a);
    d.remove_spider(b);
    for (x, y) in [(&only_a, &only_b), (&only_a, &shared), (&only_b, &shared)] {
        for &u in x {
            for &v in y {
                d.toggle_hadamard(u, v);
            }
        }
    }
    for &u in &only_a {
        d.add_to_phase(u, pb);
    }
    for &u in &only_b {
        d.add_to_phase(u, pa);
    }
    for &u in &shared {
        d.add_to_phase(u, pa + pb + Phase::PI);
    }
    g.debug_check();
    Ok(())
}

/// Makes a boundary-adjacent neighbour `w` of the interior Pauli spider `v`
/// interior by splitting each of its boundary wires with a phase-free
/// spider, then removes `w` by pivoting with `v` (Pauli `w`) or by local
/// complementation (±π/2 `w`).
pub fn boundary_pivot(g: &GraphLike, v: SpiderId, w: SpiderId) -> Result<GraphLike, ZxError> {
    let mut out = g.clone();
    boundary_pivot_in_place(&mut out, v, w)?;
    Ok(out)
}

pub(crate) fn boundary_pivot_in_place(g: &mut GraphLike, v: SpiderId, w: SpiderId) -> Result<(), ZxError> {
    require_interior(g, v)?;
    let d = g.diagram();
    if !d.contains(w) || d.is_boundary(w) {
        return Err(ZxError::UnknownSpider(w));
    }
    if !d.phase(v).is_pauli() || !d.phase(w).is_clifford() || d.wire(v, w).is_none() {
        return Err(ZxError::Precondition(format!(
            "boundary pivot needs a Pauli interior {v} joined to a Clifford {w}"
        )));
    }
    unfuse_boundaries(g, w);
    if g.diagram().phase(w).is_pauli() {
        pivot_in_place(g, v, w)
    } else {
        local_complementation_in_place(g, w)
    }
}

/// Replaces every wire `b -k- w` to a boundary `b` by
/// `b -(k then H)- u(0) -H- w`.
fn unfuse_boundaries(g: &mut GraphLike, w: SpiderId) {
    let d = g.diagram_mut();
    let bounds: Vec<(SpiderId, WireKind)> = d.neighbors(w).filter(|&(n, _)| d.is_boundary(n)).collect();
    for (b, k) in bounds {
        d.remove_wire(b, w);
        let u = d.add_spider(SpiderKind::Z, Phase::ZERO);
        d.raw_insert(b, u, k.toggled());
        d.raw_insert(u, w, WireKind::Hadamard);
    }
}

fn next_lcomp(g: &GraphLike) -> Option<SpiderId> {
    g.diagram()
        .spiders()
        .find(|&(id, s)| is_half_pi(s.phase) && g.is_interior(id))
        .map(|(id, _)| id)
}

fn next_pivot(g: &GraphLike) -> Option<(SpiderId, SpiderId)> {
    let d = g.diagram();
    d.spiders()
        .filter(|&(id, s)| s.phase.is_pauli() && g.is_interior(id))
        .find_map(|(id, _)| {
            d.neighbors(id)
                .map(|(n, _)| n)
                .find(|&n| d.phase(n).is_pauli() && g.is_interior(n))
                .map(|n| (id, n))
        })
}

fn next_boundary_pivot(g: &GraphLike) -> Option<(SpiderId, SpiderId)> {
    let d = g.diagram();
    d.spiders()
        .filter(|&(id, s)| s.phase.is_pauli() && g.is_interior(id))
        .find_map(|(id, _)| {
            let mut ws = d.neighbors(id).map(|(n, _)| n).filter(|&n| d.phase(n).is_clifford());
            ws.next().map(|n| (id, n))
        })
}

/// True if no rewrite applies anywhere.
pub fn is_fixpoint(g: &GraphLike) -> bool {
    next_lcomp(g).is_none() && next_pivot(g).is_none() && next_boundary_pivot(g).is_none()
}

/// Applies local complementation, pivoting and boundary pivoting, lowest
/// spider id first and in that rule order, until none applies.
pub fn interior_clifford_simp(g: &GraphLike) -> GraphLike {
    let mut g = g.clone();
    loop {
        if let Some(s) = next_lcomp(&g) {
            local_complementation_in_place(&mut g, s).expect("eligible spider");
        } else if let Some((a, b)) = next_pivot(&g) {
            pivot_in_place(&mut g, a, b).expect("eligible pair");
        } else if let Some((v, w)) = next_boundary_pivot(&g) {
            boundary_pivot_in_place(&mut g, v, w).expect("eligible pair");
        } else {
            break;
        }
        remove_isolated(&mut g);
    }
    g
}

fn remove_isolated(g: &mut GraphLike) {
    let d = g.diagram_mut();
    let isolated: Vec<SpiderId> = d.spider_ids().filter(|&v| !d.is_boundary(v) && d.degree(v) == 0).collect();
    for v in isolated {
        d.remove_spider(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::random::{random_clifford, random_clifford_t};
    use crate::sim::simulate;
    use crate::zx::{circuit_to_zx, eval::evaluate, ZxDiagram};
    use proptest::prelude::*;

    /// Inputs and outputs each hang off their own spider, so the middle
    /// spiders are interior.
    fn chain(phases: &[Phase]) -> (GraphLike, Vec<SpiderId>) {
        let mut d = ZxDiagram::new();
        let i = d.add_input();
        let ids: Vec<SpiderId> = phases.iter().map(|&p| d.add_spider(SpiderKind::Z, p)).collect();
        let o = d.add_output();
        d.add_wire(i, ids[0], WireKind::Simple).unwrap();
        for w in ids.windows(2) {
            d.add_wire(w[0], w[1], WireKind::Hadamard).unwrap();
        }
        d.add_wire(*ids.last().unwrap(), o, WireKind::Simple).unwrap();
        (GraphLike::new(d).unwrap(), ids)
    }

    #[test]
    fn lcomp_on_a_star_joins_neighbours() {
        let q = Phase::QUARTER_PI;
        let (g, ids) = chain(&[Phase::ZERO, q, Phase::HALF_PI, q, Phase::ZERO]);
        let out = local_complementation(&g, ids[2]).unwrap();
        let d = out.diagram();
        assert!(!d.contains(ids[2]));
        assert_eq!(d.wire(ids[1], ids[3]), Some(WireKind::Hadamard));
        assert_eq!(d.phase(ids[1]), q - Phase::HALF_PI);
        assert_eq!(d.phase(ids[3]), q - Phase::HALF_PI);
        assert!(evaluate(d).unwrap().proportional(&evaluate(g.diagram()).unwrap(), 1e-10));
    }

    #[test]
    fn lcomp_single_neighbour_shifts_phase() {
        let mut d = ZxDiagram::new();
        let i = d.add_input();
        let a = d.add_spider(SpiderKind::Z, Phase::ZERO);
        let b = d.add_spider(SpiderKind::Z, Phase::QUARTER_PI);
        let s = d.add_spider(SpiderKind::Z, Phase::MINUS_HALF_PI);
        let o = d.add_output();
        d.add_wire(i, a, WireKind::Simple).unwrap();
        d.add_wire(a, b, WireKind::Hadamard).unwrap();
        d.add_wire(b, s, WireKind::Hadamard).unwrap();
        d.add_wire(a, o, WireKind::Hadamard).unwrap();
        let g = GraphLike::new(d).unwrap();
        let out = local_complementation(&g, s).unwrap();
        assert_eq!(out.diagram().phase(b), Phase::QUARTER_PI + Phase::HALF_PI);
        assert!(!out.diagram().contains(s));
    }

    #[test]
    fn lcomp_rejects_bad_phase_and_boundary() {
        let (g, ids) = chain(&[Phase::HALF_PI, Phase::QUARTER_PI, Phase::HALF_PI]);
        assert!(local_complementation(&g, ids[1]).is_err());
        assert!(local_complementation(&g, ids[0]).is_err());
    }

    #[test]
    fn smallest_pivot_joins_private_neighbours() {
        let q = Phase::QUARTER_PI;
        let (g, ids) = chain(&[Phase::ZERO, q, Phase::ZERO, Phase::ZERO, q, Phase::ZERO]);
        let out = pivot(&g, ids[2], ids[3]).unwrap();
        let d = out.diagram();
        assert!(!d.contains(ids[2]) && !d.contains(ids[3]));
        assert_eq!(d.wire(ids[1], ids[4]), Some(WireKind::Hadamard));
        assert!(evaluate(d).unwrap().proportional(&evaluate(g.diagram()).unwrap(), 1e-10));
    }

    #[test]
    fn pivot_phase_bookkeeping() {
        let q = Phase::QUARTER_PI;
        let (g, ids) = chain(&[Phase::ZERO, q, Phase::PI, Phase::ZERO, q, Phase::ZERO]);
        let out = pivot(&g, ids[2], ids[3]).unwrap();
        // a = ids[2] has phase π, so b's exclusive neighbour gains π
        assert_eq!(out.diagram().phase(ids[4]), q + Phase::PI);
        assert_eq!(out.diagram().phase(ids[1]), q);
        assert!(evaluate(out.diagram()).unwrap().proportional(&evaluate(g.diagram()).unwrap(), 1e-10));
    }

    #[test]
    fn pivot_with_shared_neighbour() {
        let mut d = ZxDiagram::new();
        let i = d.add_input();
        let u = d.add_spider(SpiderKind::Z, Phase::ZERO);
        let a = d.add_spider(SpiderKind::Z, Phase::PI);
        let b = d.add_spider(SpiderKind::Z, Phase::ZERO);
        let w = d.add_spider(SpiderKind::Z, Phase::QUARTER_PI);
        let o = d.add_output();
        d.add_wire(i, u, WireKind::Simple).unwrap();
        d.add_wire(u, a, WireKind::Hadamard).unwrap();
        d.add_wire(u, b, WireKind::Hadamard).unwrap();
        d.add_wire(a, b, WireKind::Hadamard).unwrap();
        d.add_wire(a, w, WireKind::Hadamard).unwrap();
        d.add_wire(w, o, WireKind::Simple).unwrap();
        let g = GraphLike::new(d).unwrap();
        let out = pivot(&g, a, b).unwrap();
        assert_eq!(out.diagram().phase(u), Phase::ZERO + Phase::PI + Phase::PI);
        assert!(evaluate(out.diagram()).unwrap().proportional(&evaluate(g.diagram()).unwrap(), 1e-10));
    }

    #[test]
    fn pivot_rejects_non_pauli() {
        let (g, ids) = chain(&[Phase::ZERO, Phase::ZERO, Phase::QUARTER_PI, Phase::ZERO]);
        assert!(pivot(&g, ids[1], ids[2]).is_err());
    }

    #[test]
    fn fixpoint_is_unchanged() {
        let c = random_clifford_t(4, 40, 0.4, 0.3, 3).unwrap();
        let g = GraphLike::from_diagram(circuit_to_zx(&c)).unwrap();
        let once = interior_clifford_simp(&g);
        assert!(is_fixpoint(&once));
        assert_eq!(interior_clifford_simp(&once), once);
    }

    #[test]
    fn grover_reaches_fixpoint() {
        let g = GraphLike::from_diagram(circuit_to_zx(&crate::zx::tests::grover2())).unwrap();
        let s = interior_clifford_simp(&g);
        assert!(is_fixpoint(&s));
        assert!(evaluate(s.diagram()).unwrap().proportional(&evaluate(g.diagram()).unwrap(), 1e-10));
    }

    #[test]
    fn clifford_circuits_lose_all_interior_spiders() {
        for seed in 0..40 {
            let c = random_clifford(4, 40, 0.3, seed).unwrap();
            let g = interior_clifford_simp(&GraphLike::from_diagram(circuit_to_zx(&c)).unwrap());
            let interior = g.diagram().spider_ids().filter(|&v| g.is_interior(v)).count();
            assert_eq!(interior, 0, "seed {seed}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn simplification_preserves_semantics(seed in 0u64..100_000, n in 2usize..5, depth in 5usize..40) {
            let c = random_clifford_t(n, depth, 0.3, 0.3, seed).unwrap();
            let g = GraphLike::from_diagram(circuit_to_zx(&c)).unwrap();
            let s = interior_clifford_simp(&g);
            prop_assert!(s.check().is_ok());
            prop_assert!(is_fixpoint(&s));
            prop_assert!(s.diagram().num_interior() <= g.diagram().num_interior());
            prop_assert!(evaluate(s.diagram()).unwrap().proportional(&simulate(&c).unwrap(), 1e-8));
        }
    }

    #[test]
    fn boundary_pivot_removes_stranded_pauli_spider() {
        // in - a(π/2) -H- v(0) -H- c(0) - out: v is interior, both neighbours touch boundaries
        let (g, ids) = chain(&[Phase::HALF_PI, Phase::ZERO, Phase::ZERO]);
        for w in [ids[0], ids[2]] {
            let out = boundary_pivot(&g, ids[1], w).unwrap();
            let interior = out.diagram().spider_ids().filter(|&x| out.is_interior(x)).count();
            assert!(out.check().is_ok());
            assert!(evaluate(out.diagram()).unwrap().proportional(&evaluate(g.diagram()).unwrap(), 1e-10));
            assert!(interior <= 1);
        }
        let s = interior_clifford_simp(&g);
        assert!(s.diagram().spider_ids().all(|x| !s.is_interior(x)));
    }

    #[test]
    fn empty_circuit_is_untouched() {
        let g = GraphLike::from_diagram(circuit_to_zx(&Circuit::new(2))).unwrap();
        assert_eq!(interior_clifford_simp(&g), g);
    }
}
