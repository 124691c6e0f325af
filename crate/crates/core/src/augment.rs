//! Augmented skeleton: arrowheads from single-node minimal dependencies.

use crate::error::{Error, Result};
use crate::graph::{Mark, MixedGraph, VarId, VarSet};
use crate::oracle::{in_stage, IndependenceOracle, Stage};
use crate::sepset::SepsetMap;

/// For every nonadjacent pair `(X, Y)` with stored set `Z`, and every `W`
/// adjacent to `{X, Y} ∪ Z`, a dependence `X ⊥̸ Y | Z ∪ {W}` shows `W` is not
/// an ancestor of `{X, Y} ∪ Z` (or of the selection set). An arrowhead is then
/// placed at `W` on each of its edges into `{X, Y} ∪ Z`.
///
/// Arrowheads are never removed and tails are never placed.
pub fn augment_graph<O: IndependenceOracle + ?Sized>(
    g: &MixedGraph,
    sepsets: &SepsetMap,
    oracle: &mut O,
) -> Result<MixedGraph> {
    in_stage(oracle, Stage::Augment, |oracle| {
        let mut out = g.clone();
        for x in g.vars() {
            for y in g.vars().filter(|&y| y > x && !g.adjacent(x, y)) {
                let z = sepsets.get(x, y).ok_or_else(|| {
                    Error::Input(format!(
                        "no separating set stored for nonadjacent pair ({}, {})",
                        g.name(x),
                        g.name(y)
                    ))
                })?;
                let mut anchor: VarSet = z.clone();
                anchor.insert(x);
                anchor.insert(y);
                for w in g.vars() {
                    if anchor.contains(&w) || !anchor.iter().any(|&a| g.adjacent(w, a)) {
                        continue;
                    }
                    let mut zw = z.clone();
                    zw.insert(w);
                    if oracle.query(x, y, &zw)? {
                        continue;
                    }
                    for &a in anchor.iter().filter(|&&a| g.adjacent(w, a)) {
                        out.orient(w, a, Mark::Arrow)?;
                    }
                }
            }
        }
        Ok(out)
    })
}

/// Arrowheads present in `g`, as `(at, other)` pairs.
pub fn arrowheads(g: &MixedGraph) -> Vec<(VarId, VarId)> {
    g.edges()
        .flat_map(|e| {
            let mut v = Vec::new();
            if e.mark_a == Mark::Arrow {
                v.push((e.a, e.b));
            }
            if e.mark_b == Mark::Arrow {
                v.push((e.b, e.a));
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CausalDag;
    use crate::oracle::DsepOracle;
    use crate::pc::pc_adjacency_search;

    fn run(edges: &[(usize, usize)], names: &[&str]) -> (MixedGraph, MixedGraph, DsepOracle) {
        let d = CausalDag::from_edges(names, edges, &[], &[]).unwrap();
        let mut o = DsepOracle::from_dag(d);
        let (g, s) = pc_adjacency_search(&mut o, None).unwrap();
        let gp = augment_graph(&g, &s, &mut o).unwrap();
        (g, gp, o)
    }

    #[test]
    fn collider_gets_arrowheads() {
        let (_, gp, _) = run(&[(0, 1), (2, 1)], &["X", "Z", "Y"]);
        assert_eq!(gp.mark(VarId(1), VarId(0)), Some(Mark::Arrow));
        assert_eq!(gp.mark(VarId(1), VarId(2)), Some(Mark::Arrow));
        assert_eq!(gp.mark(VarId(0), VarId(1)), Some(Mark::Circle));
    }

    #[test]
    fn chain_is_unchanged() {
        let (g, gp, o) = run(&[(0, 1), (1, 2)], &["X", "Z", "Y"]);
        assert_eq!(g, gp);
        assert_eq!(o.stats().stage(Stage::Augment).queries, 0);
    }

    #[test]
    fn augmenting_twice_adds_nothing() {
        let d = CausalDag::from_edges(
            &["a", "b", "c", "d", "e"],
            &[(0, 2), (1, 2), (2, 3), (1, 4), (3, 4)],
            &[],
            &[],
        )
        .unwrap();
        let mut o = DsepOracle::from_dag(d);
        let (g, s) = pc_adjacency_search(&mut o, None).unwrap();
        let once = augment_graph(&g, &s, &mut o).unwrap();
        let twice = augment_graph(&once, &s, &mut o).unwrap();
        assert_eq!(once, twice);
        assert!(!arrowheads(&once).is_empty());
    }

    #[test]
    fn missing_sepset_is_an_input_error() {
        let g = MixedGraph::empty(2);
        let d = CausalDag::from_edges(&["a", "b"], &[], &[], &[]).unwrap();
        let mut o = DsepOracle::from_dag(d);
        assert!(augment_graph(&g, &SepsetMap::new(), &mut o)
            .unwrap_err()
            .is_input_error());
    }
}
