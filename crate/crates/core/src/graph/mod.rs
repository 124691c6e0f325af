//! Mixed graphs with per-endpoint marks, causal DAGs, separation criteria and
//! the latent projection from a DAG onto its maximal ancestral graph.
//!
//! A [`MixedGraph`] stores one mark per edge endpoint. The same type holds
//! skeletons (all circles), augmented skeletons, MAGs and PAGs.

mod dag;
pub mod io;
mod projection;
mod separation;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dag::{CausalDag, Role};
pub use projection::latent_project;
pub use separation::{ancestors, d_separated, m_separated, Mag};

/// Dense index of a variable in a run-scoped variable table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub usize);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for VarId {
    fn from(i: usize) -> Self {
        VarId(i)
    }
}

/// Ordered set of variables. Iteration is always ascending.
pub type VarSet = BTreeSet<VarId>;

/// Builds a [`VarSet`] from raw indices.
pub fn var_set<I: IntoIterator<Item = usize>>(ids: I) -> VarSet {
    ids.into_iter().map(VarId).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    Tail,
    Arrow,
    Circle,
}

impl Mark {
    pub fn as_str(self) -> &'static str {
        match self {
            Mark::Tail => "tail",
            Mark::Arrow => "arrow",
            Mark::Circle => "circle",
        }
    }
}

/// One edge as seen from its lower endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: VarId,
    pub b: VarId,
    pub mark_a: Mark,
    pub mark_b: Mark,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let left = match self.mark_a {
            Mark::Tail => "-",
            Mark::Arrow => "<",
            Mark::Circle => "o",
        };
        let right = match self.mark_b {
            Mark::Tail => "-",
            Mark::Arrow => ">",
            Mark::Circle => "o",
        };
        write!(f, "{} {}-{} {}", self.a, left, right, self.b)
    }
}

/// A graph over `n` variables with at most one edge per pair and a mark at
/// each endpoint.
///
/// Public construction goes through [`GraphBuilder`]; algorithms in this crate
/// work on private copies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    n: usize,
    names: Vec<String>,
    // ends[a * n + b] is the mark at `a` on edge a-b.
    ends: Vec<Option<Mark>>,
}

impl MixedGraph {
    /// Graph without edges; variables are named `X0..X{n-1}`.
    pub fn empty(n: usize) -> Self {
        Self::with_names((0..n).map(|i| format!("X{i}")).collect())
    }

    pub fn with_names(names: Vec<String>) -> Self {
        let n = names.len();
        MixedGraph {
            n,
            names,
            ends: vec![None; n * n],
        }
    }

    /// Complete graph with circle marks everywhere.
    pub fn complete(names: Vec<String>) -> Self {
        let mut g = Self::with_names(names);
        for a in 0..g.n {
            for b in (a + 1)..g.n {
                g.put_edge(VarId(a), VarId(b), Mark::Circle, Mark::Circle);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.0]
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.n).map(VarId)
    }

    pub fn check_var(&self, v: VarId) -> Result<()> {
        if v.0 < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVariable(v, self.n))
        }
    }

    #[inline]
    pub fn adjacent(&self, a: VarId, b: VarId) -> bool {
        self.ends[a.0 * self.n + b.0].is_some()
    }

    /// Mark at `at` on the edge `at`-`other`, if the edge exists.
    #[inline]
    pub fn mark(&self, at: VarId, other: VarId) -> Option<Mark> {
        self.ends[at.0 * self.n + other.0]
    }

    #[inline]
    pub fn has_mark(&self, at: VarId, other: VarId, m: Mark) -> bool {
        self.mark(at, other) == Some(m)
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: VarId) -> impl Iterator<Item = VarId> + '_ {
        let row = &self.ends[v.0 * self.n..(v.0 + 1) * self.n];
        row.iter()
            .enumerate()
            .filter(|(_, m)| m.is_some())
            .map(|(i, _)| VarId(i))
    }

    pub fn adjacency(&self, v: VarId) -> VarSet {
        self.neighbors(v).collect()
    }

    pub fn degree(&self, v: VarId) -> usize {
        self.neighbors(v).count()
    }

    pub fn max_degree(&self) -> usize {
        self.vars().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges in lexicographic order of `(min id, max id)`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |a| {
            ((a + 1)..self.n).filter_map(move |b| {
                let (a, b) = (VarId(a), VarId(b));
                Some(Edge {
                    a,
                    b,
                    mark_a: self.mark(a, b)?,
                    mark_b: self.mark(b, a)?,
                })
            })
        })
    }

    pub fn num_edges(&self) -> usize {
        self.edges().count()
    }

    /// `a -> b`: tail at `a`, arrowhead at `b`.
    #[inline]
    pub fn is_directed(&self, a: VarId, b: VarId) -> bool {
        self.mark(a, b) == Some(Mark::Tail) && self.mark(b, a) == Some(Mark::Arrow)
    }

    #[inline]
    pub fn is_bidirected(&self, a: VarId, b: VarId) -> bool {
        self.mark(a, b) == Some(Mark::Arrow) && self.mark(b, a) == Some(Mark::Arrow)
    }

    #[inline]
    pub fn is_undirected(&self, a: VarId, b: VarId) -> bool {
        self.mark(a, b) == Some(Mark::Tail) && self.mark(b, a) == Some(Mark::Tail)
    }

    pub fn parents(&self, v: VarId) -> impl Iterator<Item = VarId> + '_ {
        self.neighbors(v).filter(move |&u| self.is_directed(u, v))
    }

    pub fn children(&self, v: VarId) -> impl Iterator<Item = VarId> + '_ {
        self.neighbors(v).filter(move |&u| self.is_directed(v, u))
    }

    /// Same vertex count and the same adjacencies, ignoring marks.
    pub fn same_skeleton(&self, other: &MixedGraph) -> bool {
        self.n == other.n
            && self
                .ends
                .iter()
                .zip(&other.ends)
                .all(|(a, b)| a.is_some() == b.is_some())
    }

    /// Copy of the graph with the adjacencies kept and every mark set to circle.
    pub fn to_circle_skeleton(&self) -> MixedGraph {
        let mut g = self.clone();
        for m in g.ends.iter_mut().flatten() {
            *m = Mark::Circle;
        }
        g
    }

    /// Whether any endpoint still carries a circle.
    pub fn has_circles(&self) -> bool {
        self.ends.contains(&Some(Mark::Circle))
    }

    pub(crate) fn put_edge(&mut self, a: VarId, b: VarId, mark_a: Mark, mark_b: Mark) {
        debug_assert_ne!(a, b);
        self.ends[a.0 * self.n + b.0] = Some(mark_a);
        self.ends[b.0 * self.n + a.0] = Some(mark_b);
    }

    pub(crate) fn remove_edge(&mut self, a: VarId, b: VarId) {
        self.ends[a.0 * self.n + b.0] = None;
        self.ends[b.0 * self.n + a.0] = None;
    }

    /// Overwrites the mark at `at` on edge `at`-`other`.
    pub(crate) fn set_mark(&mut self, at: VarId, other: VarId, m: Mark) {
        let slot = &mut self.ends[at.0 * self.n + other.0];
        debug_assert!(slot.is_some(), "set_mark on missing edge {at}-{other}");
        *slot = Some(m);
    }

    /// Refines a mark monotonically: a circle may become a tail or an arrow;
    /// an existing non-circle mark must agree. Returns whether anything changed.
    pub(crate) fn orient(&mut self, at: VarId, other: VarId, m: Mark) -> Result<bool> {
        match self.mark(at, other) {
            None => Err(Error::Internal(format!("orienting missing edge {at}-{other}"))),
            Some(cur) if cur == m => Ok(false),
            Some(Mark::Circle) => {
                self.set_mark(at, other, m);
                Ok(true)
            }
            Some(cur) => Err(Error::ModelViolation(format!(
                "mark at {} on edge {}-{} is {}, cannot become {}",
                self.name(at),
                self.name(at),
                self.name(other),
                cur.as_str(),
                m.as_str()
            ))),
        }
    }
}

/// Explicit builder for [`MixedGraph`] values.
#[derive(Debug)]
pub struct GraphBuilder {
    graph: MixedGraph,
    errors: Vec<String>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            graph: MixedGraph::empty(n),
            errors: Vec::new(),
        }
    }

    pub fn named<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        GraphBuilder {
            graph: MixedGraph::with_names(names.into_iter().map(Into::into).collect()),
            errors: Vec::new(),
        }
    }

    /// Adds edge `a`-`b` with `mark_a` at `a` and `mark_b` at `b`.
    pub fn edge(mut self, a: usize, b: usize, mark_a: Mark, mark_b: Mark) -> Self {
        let n = self.graph.n;
        if a >= n || b >= n {
            self.errors.push(format!("edge {a}-{b} out of range (n = {n})"));
        } else if a == b {
            self.errors.push(format!("self-loop at {a}"));
        } else if self.graph.adjacent(VarId(a), VarId(b)) {
            self.errors.push(format!("duplicate edge {a}-{b}"));
        } else {
            self.graph.put_edge(VarId(a), VarId(b), mark_a, mark_b);
        }
        self
    }

    pub fn directed(self, a: usize, b: usize) -> Self {
        self.edge(a, b, Mark::Tail, Mark::Arrow)
    }

    pub fn bidirected(self, a: usize, b: usize) -> Self {
        self.edge(a, b, Mark::Arrow, Mark::Arrow)
    }

    pub fn undirected(self, a: usize, b: usize) -> Self {
        self.edge(a, b, Mark::Tail, Mark::Tail)
    }

    pub fn circle(self, a: usize, b: usize) -> Self {
        self.edge(a, b, Mark::Circle, Mark::Circle)
    }

    pub fn build(self) -> Result<MixedGraph> {
        if self.errors.is_empty() {
            Ok(self.graph)
        } else {
            Err(Error::InvalidGraph(self.errors.join("; ")))
        }
    }
}
