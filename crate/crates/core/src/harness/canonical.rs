//! Small hand-built instances with known hidden separators. Each one carries
//! the independence facts it is meant to exhibit and is rejected at load time
//! if any fact fails against the d-separation oracle.

use itertools::Itertools;

use crate::augment::augment_graph;
use crate::dsep_plus::{hie, pattern_witness};
use crate::error::{Error, Result};
use crate::graph::{CausalDag, MixedGraph, VarId, VarSet};
use crate::oracle::DsepOracle;
use crate::pc::pc_adjacency_search;
use crate::sepset::SepsetMap;

use super::invariants::Truth;

#[derive(Clone, Debug)]
pub struct CanonicalExample {
    pub name: &'static str,
    pub dag: CausalDag,
    /// Facts verified when the example was built.
    pub facts: Vec<String>,
}

impl CanonicalExample {
    /// Observed position of a named variable.
    pub fn var(&self, name: &str) -> VarId {
        var_named(&self.dag, name).unwrap_or_else(|| panic!("no observed variable `{name}`"))
    }

    pub fn vars(&self, names: &[&str]) -> VarSet {
        names.iter().map(|n| self.var(n)).collect()
    }
}

fn var_named(dag: &CausalDag, name: &str) -> Option<VarId> {
    dag.observed_names().iter().position(|n| n == name).map(VarId)
}

/// Fact checker bound to one candidate DAG.
struct Facts {
    name: &'static str,
    dag: CausalDag,
    truth: Truth,
    /// Adjacency search result and augmented skeleton, computed on demand.
    searched: Option<(SepsetMap, MixedGraph)>,
    verified: Vec<String>,
}

impl Facts {
    fn new(name: &'static str, dag: CausalDag) -> Result<Self> {
        let truth = Truth::new(&dag)?;
        Ok(Facts {
            name,
            dag,
            truth,
            searched: None,
            verified: Vec::new(),
        })
    }

    fn v(&self, name: &str) -> VarId {
        var_named(&self.dag, name).expect("fact refers to an observed variable")
    }

    fn set(&self, names: &[&str]) -> VarSet {
        names.iter().map(|n| self.v(n)).collect()
    }

    fn require(&mut self, fact: String, ok: bool) -> Result<()> {
        if !ok {
            return Err(Error::Configuration {
                name: self.name.to_string(),
                fact,
            });
        }
        self.verified.push(fact);
        Ok(())
    }

    fn independent(&mut self, x: &str, y: &str, z: &[&str]) -> Result<()> {
        let ok = self.truth.independent(self.v(x), self.v(y), &self.set(z));
        self.require(format!("{x} ⊥ {y} | {{{}}}", z.join(",")), ok)
    }

    /// Independent given `z` and dependent given every strict subset of `z`.
    fn minimal(&mut self, x: &str, y: &str, z: &[&str]) -> Result<()> {
        let (vx, vy) = (self.v(x), self.v(y));
        let zs = self.set(z);
        let ok = self.truth.independent(vx, vy, &zs)
            && zs
                .iter()
                .copied()
                .powerset()
                .filter(|s| s.len() < zs.len())
                .all(|s| !self.truth.independent(vx, vy, &s.into_iter().collect()));
        self.require(format!("{x} ⊥ {y} | [{}] (minimal)", z.join(",")), ok)
    }

    fn adjacent(&mut self, x: &str, y: &str, want: bool) -> Result<()> {
        let ok = self.truth.mag.adjacent(self.v(x), self.v(y)) == want;
        let rel = if want { "adjacent" } else { "not adjacent" };
        self.require(format!("{x} and {y} are {rel} in the MAG"), ok)
    }

    fn bidirected(&mut self, x: &str, y: &str) -> Result<()> {
        let ok = self.truth.mag.is_bidirected(self.v(x), self.v(y));
        self.require(format!("{x} <-> {y} in the MAG"), ok)
    }

    /// No subset of the MAG adjacencies of `x` and `y` separates them.
    fn dsep_link(&mut self, x: &str, y: &str) -> Result<()> {
        let (vx, vy) = (self.v(x), self.v(y));
        let ok = self.truth.dsep_links().contains(&(vx.min(vy), vx.max(vy)));
        self.require(format!("({x}, {y}) is separable only through nonadjacent nodes"), ok)
    }

    fn searched(&mut self) -> Result<&(SepsetMap, MixedGraph)> {
        if self.searched.is_none() {
            let mut o = DsepOracle::from_dag(self.dag.clone());
            let (g, sepsets) = pc_adjacency_search(&mut o, None)?;
            let gplus = augment_graph(&g, &sepsets, &mut o)?;
            self.searched = Some((sepsets, gplus));
        }
        Ok(self.searched.as_ref().expect("just computed"))
    }

    /// `u <-> x <-> y <-> v` with `u`, `v` nonadjacent in the augmented skeleton.
    fn augmented_pattern(&mut self, u: &str, x: &str, y: &str, v: &str) -> Result<()> {
        let [vu, vx, vy, vv] = [u, x, y, v].map(|n| self.v(n));
        let (_, g) = self.searched()?;
        let ok = g.is_bidirected(vu, vx) && g.is_bidirected(vx, vy) && g.is_bidirected(vy, vv) && !g.adjacent(vu, vv);
        self.require(format!("augmented skeleton contains {u} <-> {x} <-> {y} <-> {v}"), ok)
    }

    fn augmented_link(&mut self, x: &str, y: &str) -> Result<()> {
        let (vx, vy) = (self.v(x), self.v(y));
        let (_, g) = self.searched()?;
        let ok = pattern_witness(g, vx, vy).is_some();
        self.require(
            format!("augmented skeleton flags {x} <-> {y} as a possible hidden-separator link"),
            ok,
        )
    }

    /// `member` is in the hierarchy of `seed` under the adjacency search's sets.
    fn in_hierarchy(&mut self, member: &str, seed: &[&str]) -> Result<()> {
        let (vm, vs) = (self.v(member), self.set(seed));
        let (sepsets, _) = self.searched()?;
        let ok = hie(&vs, sepsets).closure.contains(&vm);
        self.require(format!("{member} ∈ HIE({{{}}})", seed.join(",")), ok)
    }

    fn finish(self) -> CanonicalExample {
        CanonicalExample {
            name: self.name,
            dag: self.dag,
            facts: self.verified,
        }
    }
}

/// `observed` variables first, then `latent`; edges by name.
fn build(observed: &[&str], latent: &[&str], edges: &[(&str, &str)]) -> Result<CausalDag> {
    let names: Vec<&str> = observed.iter().chain(latent).copied().collect();
    let id = |n: &str| names.iter().position(|&m| m == n).expect("edge endpoint is declared");
    let edges: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (id(a), id(b))).collect();
    let latent_ids: Vec<usize> = (observed.len()..names.len()).collect();
    CausalDag::from_edges(&names, &edges, &latent_ids, &[])
}

/// `X <-> U <- Z -> V <-> Y` with `U -> Y` and `V -> X`: the pair `(X, Y)`
/// needs `Z`, which is adjacent to neither.
pub fn figure4b() -> Result<CanonicalExample> {
    let dag = build(
        &["X", "Y", "U", "V", "Z"],
        &["L1", "L2"],
        &[
            ("L1", "X"),
            ("L1", "U"),
            ("L2", "V"),
            ("L2", "Y"),
            ("Z", "U"),
            ("Z", "V"),
            ("U", "Y"),
            ("V", "X"),
        ],
    )?;
    let mut f = Facts::new("figure4b", dag)?;
    f.independent("X", "Y", &["U", "V", "Z"])?;
    f.minimal("X", "Y", &["U", "V", "Z"])?;
    f.adjacent("Z", "X", false)?;
    f.adjacent("Z", "Y", false)?;
    f.dsep_link("X", "Y")?;
    Ok(f.finish())
}

/// Two nested hidden-separator links: `(X, Z)` is separated by `[S, T, W]`,
/// and `(X, Y)` needs `Z` itself, so `(X, Z)` must be found first.
pub fn figure5() -> Result<CanonicalExample> {
    let dag = build(
        &["X", "Y", "Z", "S", "T", "U", "V", "W"],
        &["L1", "L2", "L3", "L4"],
        &[
            ("L1", "X"),
            ("L1", "S"),
            ("L2", "T"),
            ("L2", "Z"),
            ("W", "S"),
            ("W", "T"),
            ("S", "Z"),
            ("T", "X"),
            ("L3", "X"),
            ("L3", "U"),
            ("L4", "V"),
            ("L4", "Y"),
            ("U", "Y"),
            ("V", "X"),
            ("Z", "Y"),
            ("Z", "U"),
            ("S", "Y"),
            ("T", "V"),
            ("W", "V"),
        ],
    )?;
    let mut f = Facts::new("figure5", dag)?;
    f.minimal("X", "Z", &["S", "T", "W"])?;
    f.minimal("X", "Y", &["S", "T", "U", "V", "W", "Z"])?;
    f.dsep_link("X", "Z")?;
    f.dsep_link("X", "Y")?;
    f.augmented_pattern("S", "X", "Z", "T")?;
    f.augmented_link("X", "Y")?;
    Ok(f.finish())
}

/// `(X, Y)` is separated by `{S, T, U, V, Z1, Z2, Z3}`; `Z3` is reached only
/// through the stored set of `(S, Z1)`.
pub fn figure6() -> Result<CanonicalExample> {
    let dag = build(
        &["X", "Y", "S", "T", "U", "V", "W", "Z1", "Z2", "Z3"],
        &["Lxs", "Lty", "Lxu", "Lvy", "Lsw", "Lwt"],
        &[
            ("Lxs", "X"),
            ("Lxs", "S"),
            ("Lty", "T"),
            ("Lty", "Y"),
            ("Lxu", "X"),
            ("Lxu", "U"),
            ("Lvy", "V"),
            ("Lvy", "Y"),
            ("Lsw", "S"),
            ("Lsw", "W"),
            ("Lwt", "W"),
            ("Lwt", "T"),
            ("S", "Y"),
            ("T", "X"),
            ("U", "Y"),
            ("V", "X"),
            ("Z3", "Z2"),
            ("Z3", "Z1"),
            ("Z1", "W"),
            ("Z1", "U"),
            ("Z1", "V"),
            ("Z2", "T"),
            ("Z2", "U"),
            ("Z3", "S"),
            ("Z3", "V"),
        ],
    )?;
    let mut f = Facts::new("figure6", dag)?;
    f.minimal("X", "Y", &["S", "T", "U", "V", "Z1", "Z2", "Z3"])?;
    f.minimal("S", "Z1", &["Z3"])?;
    f.dsep_link("X", "Y")?;
    for (a, b) in [("X", "S"), ("S", "W"), ("W", "T"), ("T", "Y")] {
        f.bidirected(a, b)?;
    }
    f.in_hierarchy("Z3", &["X", "Y", "S", "T", "U", "V"])?;
    Ok(f.finish())
}

/// All canonical examples, each validated.
pub fn canonical_examples() -> Result<Vec<CanonicalExample>> {
    Ok(vec![figure4b()?, figure5()?, figure6()?])
}
