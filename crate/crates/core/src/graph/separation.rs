use std::collections::VecDeque;

use super::{CausalDag, Mark, MixedGraph, VarId, VarSet};
use crate::error::{Error, Result};

/// `xs` together with every node that has a directed path into `xs`.
///
/// Directed paths follow edges with a tail at the source and an arrowhead at
/// the target; undirected and bi-directed edges are not traversed.
pub fn ancestors(g: &MixedGraph, xs: &VarSet) -> Result<VarSet> {
    for &x in xs {
        g.check_var(x)?;
    }
    Ok(ancestors_unchecked(g, xs.iter().copied()))
}

pub(crate) fn ancestors_unchecked(g: &MixedGraph, seeds: impl IntoIterator<Item = VarId>) -> VarSet {
    let mut seen = vec![false; g.n()];
    let mut stack: Vec<VarId> = Vec::new();
    for s in seeds {
        if !seen[s.0] {
            seen[s.0] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for p in g.parents(v) {
            if !seen[p.0] {
                seen[p.0] = true;
                stack.push(p);
            }
        }
    }
    seen.iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(i, _)| VarId(i))
        .collect()
}

fn check_query(g: &MixedGraph, x: VarId, y: VarId, z: &VarSet) -> Result<()> {
    g.check_var(x)?;
    g.check_var(y)?;
    for &v in z {
        g.check_var(v)?;
    }
    if x == y {
        return Err(Error::InvalidQuery(format!("x and y are both {x}")));
    }
    if z.contains(&x) || z.contains(&y) {
        return Err(Error::InvalidQuery(format!(
            "conditioning set contains an endpoint of ({x}, {y})"
        )));
    }
    Ok(())
}

/// Reachability over (node, arrived-with-arrowhead) states. A node is passed
/// as a collider only if it is an ancestor of `z`, and as a noncollider only
/// if it is not in `z`. The graph must not contain circle marks.
pub(crate) fn connected(g: &MixedGraph, x: VarId, y: VarId, z: &VarSet) -> bool {
    let anc = ancestors_unchecked(g, z.iter().copied());
    let n = g.n();
    let mut in_z = vec![false; n];
    for v in z {
        in_z[v.0] = true;
    }
    // visited[2 * v + arrow] for the two arrival kinds.
    let mut visited = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    for w in g.neighbors(x) {
        let arrow = g.mark(w, x) == Some(Mark::Arrow);
        if w == y {
            return true;
        }
        if !visited[2 * w.0 + arrow as usize] {
            visited[2 * w.0 + arrow as usize] = true;
            queue.push_back((w, arrow));
        }
    }
    while let Some((v, arrived_arrow)) = queue.pop_front() {
        for u in g.neighbors(v) {
            let collider = arrived_arrow && g.mark(v, u) == Some(Mark::Arrow);
            let pass = if collider { anc.contains(&v) } else { !in_z[v.0] };
            if !pass {
                continue;
            }
            if u == y {
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

/// Whether `x` and `y` are d-separated by `z` in the DAG. `z` may contain any
/// variable of the DAG, including latent and selection variables.
pub fn d_separated(dag: &CausalDag, x: VarId, y: VarId, z: &VarSet) -> Result<bool> {
    check_query(dag.graph(), x, y, z)?;
    Ok(!connected(dag.graph(), x, y, z))
}

/// A mixed graph validated to be ancestral: no circle marks, no arrowhead at a
/// node that has a directed path to the other endpoint, and no arrowhead into
/// a node incident to an undirected edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mag(MixedGraph);

impl Mag {
    pub fn new(graph: MixedGraph) -> Result<Self> {
        check_ancestral(&graph)?;
        Ok(Mag(graph))
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.0
    }

    pub fn into_graph(self) -> MixedGraph {
        self.0
    }
}

impl AsRef<MixedGraph> for Mag {
    fn as_ref(&self) -> &MixedGraph {
        &self.0
    }
}

pub(crate) fn check_ancestral(g: &MixedGraph) -> Result<()> {
    if g.has_circles() {
        return Err(Error::NotAncestral("graph contains circle marks".into()));
    }
    for v in g.vars() {
        let has_undirected = g.neighbors(v).any(|u| g.is_undirected(v, u));
        let has_arrow_in = g.neighbors(v).any(|u| g.mark(v, u) == Some(Mark::Arrow));
        if has_undirected && has_arrow_in {
            return Err(Error::NotAncestral(format!(
                "{} has an undirected edge and an incoming arrowhead",
                g.name(v)
            )));
        }
    }
    for v in g.vars() {
        let anc = ancestors_unchecked(g, [v]);
        for u in g.neighbors(v) {
            // Arrowhead at u on u-v while u is an ancestor of v.
            if g.mark(u, v) == Some(Mark::Arrow) && anc.contains(&u) {
                return Err(Error::NotAncestral(format!(
                    "arrowhead at {} on edge to {} but {} is an ancestor of {}",
                    g.name(u),
                    g.name(v),
                    g.name(u),
                    g.name(v)
                )));
            }
        }
    }
    Ok(())
}

/// Whether `x` and `y` are m-separated by `z` in the MAG.
pub fn m_separated(mag: &Mag, x: VarId, y: VarId, z: &VarSet) -> Result<bool> {
    check_query(mag.graph(), x, y, z)?;
    Ok(!connected(mag.graph(), x, y, z))
}
