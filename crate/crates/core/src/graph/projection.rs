use std::collections::VecDeque;

use super::separation::{ancestors_unchecked, check_ancestral};
use super::{CausalDag, Mag, Mark, MixedGraph, Role, VarId};
use crate::error::{Error, Result};

/// Projects a causal DAG onto the MAG over its observed variables.
///
/// Observed variable `i` of the result is `dag.observed()[i]`. Two observed
/// variables are adjacent iff an inducing path connects them in the DAG; the
/// mark at `a` is a tail iff `a` is an ancestor of the other endpoint or of a
/// selection variable.
pub fn latent_project(dag: &CausalDag) -> Result<Mag> {
    let obs = dag.observed();
    let mut mag = MixedGraph::with_names(dag.observed_names());
    let g = dag.graph();
    for (i, &a) in obs.iter().enumerate() {
        let anc_a = ancestors_unchecked(g, std::iter::once(a).chain(dag.selection().iter().copied()));
        for (j, &b) in obs.iter().enumerate().skip(i + 1) {
            if !has_inducing_path(dag, a, b) {
                continue;
            }
            let anc_b = ancestors_unchecked(g, std::iter::once(b).chain(dag.selection().iter().copied()));
            let mark_a = if anc_b.contains(&a) { Mark::Tail } else { Mark::Arrow };
            let mark_b = if anc_a.contains(&b) { Mark::Tail } else { Mark::Arrow };
            mag.put_edge(VarId(i), VarId(j), mark_a, mark_b);
        }
    }
    check_ancestral(&mag).map_err(|e| Error::Internal(format!("latent projection produced a non-MAG: {e}")))?;
    Ok(Mag::new(mag).expect("checked above"))
}

/// An inducing path relative to (latent, selection): every intermediate node
/// is latent or a collider, and every collider is an ancestor of
/// `{a, b}` or of a selection variable.
pub(crate) fn has_inducing_path(dag: &CausalDag, a: VarId, b: VarId) -> bool {
    let g = dag.graph();
    let anc = ancestors_unchecked(g, [a, b].into_iter().chain(dag.selection().iter().copied()));
    let n = g.n();
    let mut visited = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    for w in g.neighbors(a) {
        if w == b {
            return true;
        }
        let arrow = g.mark(w, a) == Some(Mark::Arrow);
        visited[2 * w.0 + arrow as usize] = true;
        queue.push_back((w, arrow));
    }
    while let Some((v, arrived_arrow)) = queue.pop_front() {
        for u in g.neighbors(v) {
            if u == a {
                continue;
            }
            let collider = arrived_arrow && g.mark(v, u) == Some(Mark::Arrow);
            let pass = if collider {
                anc.contains(&v)
            } else {
                dag.role(v) == Role::Latent
            };
            if !pass {
                continue;
            }
            if u == b {
                return true;
            }
            let arrow = g.mark(u, v) == Some(Mark::Arrow);
            let slot = 2 * u.0 + arrow as usize;
            if !visited[slot] {
                visited[slot] = true;
                queue.push_back((u, arrow));
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fully_observed_projection_is_identity() {
        let d = CausalDag::from_edges(&["a", "b", "c", "d"], &[(0, 1), (1, 2), (0, 3), (3, 2)], &[], &[]).unwrap();
        let m = latent_project(&d).unwrap();
        assert_eq!(m.graph(), d.graph());
    }

    #[test]
    fn confounder_becomes_bidirected() {
        let d = CausalDag::from_edges(&["X", "L", "Y"], &[(1, 0), (1, 2)], &[1], &[]).unwrap();
        let m = latent_project(&d).unwrap();
        assert_eq!(m.graph().n(), 2);
        assert!(m.graph().is_bidirected(VarId(0), VarId(1)));
    }

    #[test]
    fn selection_child_becomes_undirected() {
        let d = CausalDag::from_edges(&["X", "S", "Y"], &[(0, 1), (2, 1)], &[], &[1]).unwrap();
        let m = latent_project(&d).unwrap();
        assert_eq!(m.graph().num_edges(), 1);
        assert!(m.graph().is_undirected(VarId(0), VarId(1)));
    }

    #[test]
    fn latent_chain_is_collapsed() {
        // X -> L -> Y with L latent gives X -> Y
        let d = CausalDag::from_edges(&["X", "L", "Y"], &[(0, 1), (1, 2)], &[1], &[]).unwrap();
        let m = latent_project(&d).unwrap();
        assert!(m.graph().is_directed(VarId(0), VarId(1)));
    }
}
