//! Graph JSON schema and DOT export.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CausalDag, GraphBuilder, Mark, MixedGraph, Role};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub a: usize,
    pub b: usize,
    pub mark_a: Mark,
    pub mark_b: Mark,
}

/// `{"n", "names", "observed", "latent", "selection", "edges"}`. Used for
/// ground-truth DAGs and for learned PAGs (where every variable is observed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub names: Vec<String>,
    pub observed: Vec<usize>,
    #[serde(default)]
    pub latent: Vec<usize>,
    #[serde(default)]
    pub selection: Vec<usize>,
    pub edges: Vec<EdgeJson>,
}

impl GraphJson {
    pub fn from_graph(g: &MixedGraph) -> Self {
        GraphJson {
            n: g.n(),
            names: g.names().to_vec(),
            observed: (0..g.n()).collect(),
            latent: Vec::new(),
            selection: Vec::new(),
            edges: g
                .edges()
                .map(|e| EdgeJson {
                    a: e.a.0,
                    b: e.b.0,
                    mark_a: e.mark_a,
                    mark_b: e.mark_b,
                })
                .collect(),
        }
    }

    pub fn from_dag(dag: &CausalDag) -> Self {
        let mut j = Self::from_graph(dag.graph());
        let by_role = |r: Role| {
            dag.roles()
                .iter()
                .enumerate()
                .filter(|(_, &x)| x == r)
                .map(|(i, _)| i)
                .collect::<Vec<_>>()
        };
        j.observed = by_role(Role::Observed);
        j.latent = by_role(Role::Latent);
        j.selection = by_role(Role::Selection);
        j
    }

    pub fn to_graph(&self) -> Result<MixedGraph> {
        if self.names.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} names for n = {}",
                self.names.len(),
                self.n
            )));
        }
        let mut b = GraphBuilder::named(self.names.iter().cloned());
        for e in &self.edges {
            b = b.edge(e.a, e.b, e.mark_a, e.mark_b);
        }
        b.build()
    }

    pub fn to_dag(&self) -> Result<CausalDag> {
        let graph = self.to_graph()?;
        let mut roles: Vec<Option<Role>> = vec![None; self.n];
        let lists = [
            (&self.observed, Role::Observed),
            (&self.latent, Role::Latent),
            (&self.selection, Role::Selection),
        ];
        for (ids, role) in lists {
            for &i in ids {
                match roles.get_mut(i) {
                    None => return Err(Error::InvalidGraph(format!("role index {i} out of range"))),
                    Some(Some(_)) => return Err(Error::InvalidGraph(format!("variable {i} has two roles"))),
                    Some(slot) => *slot = Some(role),
                }
            }
        }
        let roles = roles
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| Error::InvalidGraph(format!("variable {i} has no role"))))
            .collect::<Result<Vec<_>>>()?;
        CausalDag::new(graph, roles)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

fn dot_arrow(m: Mark) -> &'static str {
    match m {
        Mark::Arrow => "normal",
        Mark::Tail => "none",
        Mark::Circle => "odot",
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering; each edge is drawn from its lower endpoint with both
/// endpoint marks shown.
pub fn to_dot(g: &MixedGraph) -> String {
    to_dot_with_roles(g, None)
}

/// DOT rendering of a causal DAG; latent nodes are dashed, selection nodes boxed.
pub fn dag_to_dot(dag: &CausalDag) -> String {
    to_dot_with_roles(dag.graph(), Some(dag.roles()))
}

fn to_dot_with_roles(g: &MixedGraph, roles: Option<&[Role]>) -> String {
    let mut out = String::from("digraph G {\n");
    for v in g.vars() {
        let style = match roles.map(|r| r[v.0]) {
            Some(Role::Latent) => ", style=dashed",
            Some(Role::Selection) => ", shape=box",
            _ => "",
        };
        let _ = writeln!(out, "  {} [label=\"{}\"{}];", v.0, dot_escape(g.name(v)), style);
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [dir=both, arrowtail={}, arrowhead={}];",
            e.a.0,
            e.b.0,
            dot_arrow(e.mark_a),
            dot_arrow(e.mark_b)
        );
    }
    out.push_str("}\n");
    out
}
