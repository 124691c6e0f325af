use serde::{Deserialize, Serialize};

use super::{GraphBuilder, Mark, MixedGraph, VarId, VarSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Observed,
    Latent,
    Selection,
}

/// Ground-truth causal DAG over observed, latent and selection variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CausalDag {
    graph: MixedGraph,
    roles: Vec<Role>,
    observed: Vec<VarId>,
    selection: VarSet,
}

impl CausalDag {
    /// Validates that `graph` holds only directed edges, is acyclic, and that
    /// `roles` covers every variable.
    pub fn new(graph: MixedGraph, roles: Vec<Role>) -> Result<Self> {
        if roles.len() != graph.n() {
            return Err(Error::InvalidGraph(format!(
                "{} roles for {} variables",
                roles.len(),
                graph.n()
            )));
        }
        for e in graph.edges() {
            let directed = matches!(
                (e.mark_a, e.mark_b),
                (Mark::Tail, Mark::Arrow) | (Mark::Arrow, Mark::Tail)
            );
            if !directed {
                return Err(Error::InvalidGraph(format!("edge {} is not directed", e)));
            }
        }
        topological_order(&graph)?;
        let observed = (0..graph.n())
            .filter(|&i| roles[i] == Role::Observed)
            .map(VarId)
            .collect();
        let selection = (0..graph.n())
            .filter(|&i| roles[i] == Role::Selection)
            .map(VarId)
            .collect();
        Ok(CausalDag {
            graph,
            roles,
            observed,
            selection,
        })
    }

    /// DAG without latent or selection variables.
    pub fn fully_observed(graph: MixedGraph) -> Result<Self> {
        let roles = vec![Role::Observed; graph.n()];
        Self::new(graph, roles)
    }

    /// Convenience constructor from named variables and `(parent, child)` pairs.
    pub fn from_edges(names: &[&str], edges: &[(usize, usize)], latent: &[usize], selection: &[usize]) -> Result<Self> {
        let mut b = GraphBuilder::named(names.iter().copied());
        for &(p, c) in edges {
            b = b.directed(p, c);
        }
        let graph = b.build()?;
        let mut roles = vec![Role::Observed; graph.n()];
        for &l in latent {
            let slot = roles
                .get_mut(l)
                .ok_or_else(|| Error::InvalidGraph(format!("latent index {l} out of range")))?;
            *slot = Role::Latent;
        }
        for &s in selection {
            let slot = roles
                .get_mut(s)
                .ok_or_else(|| Error::InvalidGraph(format!("selection index {s} out of range")))?;
            if *slot != Role::Observed {
                return Err(Error::InvalidGraph(format!(
                    "variable {s} is both latent and selection"
                )));
            }
            *slot = Role::Selection;
        }
        Self::new(graph, roles)
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, v: VarId) -> Role {
        self.roles[v.0]
    }

    /// Observed variables in ascending id order. Position `i` in this slice is
    /// the id of the variable in any graph learned over the observed set.
    pub fn observed(&self) -> &[VarId] {
        &self.observed
    }

    pub fn observed_names(&self) -> Vec<String> {
        self.observed.iter().map(|&v| self.graph.name(v).to_owned()).collect()
    }

    pub fn selection(&self) -> &VarSet {
        &self.selection
    }

    pub fn latent(&self) -> Vec<VarId> {
        self.graph.vars().filter(|&v| self.role(v) == Role::Latent).collect()
    }

    pub fn parents(&self, v: VarId) -> impl Iterator<Item = VarId> + '_ {
        self.graph.parents(v)
    }

    pub fn children(&self, v: VarId) -> impl Iterator<Item = VarId> + '_ {
        self.graph.children(v)
    }

    pub fn topological_order(&self) -> Vec<VarId> {
        topological_order(&self.graph).expect("validated at construction")
    }
}

/// Kahn's algorithm over directed edges; smallest ready id first.
fn topological_order(g: &MixedGraph) -> Result<Vec<VarId>> {
    let n = g.n();
    let mut indeg: Vec<usize> = g.vars().map(|v| g.parents(v).count()).collect();
    let mut ready: std::collections::BTreeSet<VarId> = g.vars().filter(|v| indeg[v.0] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for c in g.children(v) {
            indeg[c.0] -= 1;
            if indeg[c.0] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err(Error::NotAcyclic(format!(
            "{} variables lie on directed cycles",
            n - order.len()
        )))
    }
}
