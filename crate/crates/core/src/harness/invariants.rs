//! Cross-module checks of a finished run against the ground-truth DAG.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::dsep_plus::hie;
use crate::error::Result;
use crate::graph::{ancestors, latent_project, CausalDag, Mark, MixedGraph, VarId, VarSet};
use crate::oracle::{CiTest, DsepTest, Stage};
use crate::orientation::{apply_fci_rules, orient_v_structures};

use super::pipeline::{Algorithm, RunOutput};

/// Outcome of one named check. Violations are capped at a few examples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub violations: Vec<String>,
}

const MAX_REPORTED: usize = 5;

struct Check {
    name: &'static str,
    checked: u64,
    failed: u64,
    violations: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            checked: 0,
            failed: 0,
            violations: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.violations.len() < MAX_REPORTED {
                self.violations.push(describe());
            }
        }
    }

    fn finish(self) -> InvariantCheck {
        InvariantCheck {
            name: self.name.to_string(),
            passed: self.failed == 0,
            checked: self.checked,
            violations: self.violations,
        }
    }
}

/// Ground truth seen through observed positions.
pub struct Truth {
    dag: CausalDag,
    test: DsepTest,
    /// True MAG over observed positions.
    pub mag: MixedGraph,
}

impl Truth {
    pub fn new(dag: &CausalDag) -> Result<Self> {
        Ok(Truth {
            dag: dag.clone(),
            test: DsepTest::new(dag.clone()),
            mag: latent_project(dag)?.into_graph(),
        })
    }

    pub fn n(&self) -> usize {
        self.mag.n()
    }

    fn lift(&self, v: VarId) -> VarId {
        self.dag.observed()[v.0]
    }

    /// Whether `v` is an ancestor of `targets ∪ S` in the DAG.
    pub fn is_ancestor(&self, v: VarId, targets: &VarSet) -> bool {
        let mut seeds: VarSet = targets.iter().map(|&t| self.lift(t)).collect();
        seeds.extend(self.dag.selection().iter().copied());
        ancestors(self.dag.graph(), &seeds)
            .expect("lifted ids are valid")
            .contains(&self.lift(v))
    }

    /// Ancestors of `targets` among observed positions, without the selection set.
    pub fn observed_ancestors(&self, targets: &VarSet) -> VarSet {
        let seeds: VarSet = targets.iter().map(|&t| self.lift(t)).collect();
        let an = ancestors(self.dag.graph(), &seeds).expect("lifted ids are valid");
        (0..self.n())
            .map(VarId)
            .filter(|&v| an.contains(&self.lift(v)))
            .collect()
    }

    pub fn independent(&self, x: VarId, y: VarId, z: &VarSet) -> bool {
        self.test.independent(x, y, z).expect("valid query")
    }

    /// Nonadjacent pairs of the MAG not separated by any subset of the
    /// adjacencies of their endpoints.
    pub fn dsep_links(&self) -> Vec<(VarId, VarId)> {
        let g = &self.mag;
        let mut out = Vec::new();
        for (x, y) in g.vars().collect::<Vec<_>>().into_iter().tuple_combinations() {
            if g.adjacent(x, y) {
                continue;
            }
            let local: Vec<VarId> = g
                .adjacency(x)
                .union(&g.adjacency(y))
                .copied()
                .filter(|&v| v != x && v != y)
                .collect();
            let separable = local
                .iter()
                .copied()
                .powerset()
                .any(|s| self.independent(x, y, &s.into_iter().collect()));
            if !separable {
                out.push((x, y));
            }
        }
        out
    }

    /// Adjacent ancestors of `{x, y}` in the MAG.
    pub fn adjacent_ancestors(&self, x: VarId, y: VarId) -> VarSet {
        let pair: VarSet = [x, y].into_iter().collect();
        let an = self.observed_ancestors(&pair);
        self.mag
            .adjacency(x)
            .union(&self.mag.adjacency(y))
            .copied()
            .filter(|v| an.contains(v) && !pair.contains(v))
            .collect()
    }
}

fn pair_set(x: VarId, y: VarId) -> VarSet {
    [x, y].into_iter().collect()
}

/// Upper bound on the query count: total `N^(2(k+2))`, adjacency search `4 N^(k+2)`.
pub fn query_bounds(n: usize, k: usize) -> (f64, f64) {
    let n = n as f64;
    (n.powi(2 * (k as i32 + 2)), 4.0 * n.powi(k as i32 + 2))
}

/// Runs the invariant suite on a finished run.
pub fn check_invariants(dag: &CausalDag, out: &RunOutput) -> Result<Vec<InvariantCheck>> {
    let truth = Truth::new(dag)?;
    let mut results = vec![
        mark_soundness("pag_mark_soundness", &truth, &out.pag),
        sepset_ancestry(&truth, out),
        sepset_minimality(&truth, out),
        query_bound(&truth, out),
    ];
    if out.config.algorithm == Algorithm::Fciplus {
        if let Some(gplus) = &out.gplus {
            results.push(mark_soundness("gplus_arrowhead_soundness", &truth, gplus));
            results.push(circle_start_agrees(out, gplus)?);
        }
        results.extend(resolution_checks(&truth, out));
        results.push(hierarchy_separates_dsep_links(&truth, out));
    }
    Ok(results)
}

fn mark_soundness(name: &'static str, truth: &Truth, g: &MixedGraph) -> InvariantCheck {
    let mut c = Check::new(name);
    for e in g.edges() {
        for (at, other, m) in [(e.a, e.b, e.mark_a), (e.b, e.a, e.mark_b)] {
            let target = [other].into_iter().collect();
            match m {
                Mark::Arrow => c.expect(!truth.is_ancestor(at, &target), || {
                    format!(
                        "arrowhead at {} on edge to {} but it is an ancestor",
                        g.name(at),
                        g.name(other)
                    )
                }),
                Mark::Tail => c.expect(truth.is_ancestor(at, &target), || {
                    format!(
                        "tail at {} on edge to {} but it is not an ancestor",
                        g.name(at),
                        g.name(other)
                    )
                }),
                Mark::Circle => {}
            }
        }
    }
    c.finish()
}

fn sepset_ancestry(truth: &Truth, out: &RunOutput) -> InvariantCheck {
    let mut c = Check::new("sepset_member_ancestry");
    for ((x, y), e) in out.sepsets.iter() {
        for &z in &e.set {
            c.expect(truth.is_ancestor(z, &pair_set(x, y)), || {
                format!("{z} in sepset of ({x}, {y}) is not an ancestor of the pair or S")
            });
        }
    }
    c.finish()
}

fn sepset_minimality(truth: &Truth, out: &RunOutput) -> InvariantCheck {
    let mut c = Check::new("sepset_minimality");
    for ((x, y), e) in out.sepsets.iter() {
        c.expect(truth.independent(x, y, &e.set), || {
            format!("stored set {:?} does not separate ({x}, {y})", e.set)
        });
        let members: Vec<VarId> = e.set.iter().copied().collect();
        let redundant = members
            .iter()
            .copied()
            .powerset()
            .filter(|s| s.len() < members.len())
            .find(|s| truth.independent(x, y, &s.iter().copied().collect()));
        c.expect(redundant.is_none(), || {
            format!("sepset {:?} of ({x}, {y}) has separating subset {:?}", e.set, redundant)
        });
    }
    c.finish()
}

fn query_bound(truth: &Truth, out: &RunOutput) -> InvariantCheck {
    let mut c = Check::new("query_bound");
    let n = truth.n();
    let k = out.config.max_level.unwrap_or(n);
    let (total_bound, pc_bound) = query_bounds(n, k);
    let total = out.stats.total().queries as f64;
    let pc = out.stats.stage(Stage::PcSearch).queries as f64;
    c.expect(total <= total_bound, || format!("{total} queries exceed {total_bound}"));
    c.expect(pc <= pc_bound, || {
        format!("{pc} adjacency-search queries exceed {pc_bound}")
    });
    c.finish()
}

fn circle_start_agrees(out: &RunOutput, gplus: &MixedGraph) -> Result<InvariantCheck> {
    let mut c = Check::new("orientation_independent_of_augmented_marks");
    let fresh = gplus.to_circle_skeleton();
    let pag = apply_fci_rules(&orient_v_structures(&fresh, &out.sepsets)?, &out.sepsets)?;
    c.expect(pag == out.pag, || {
        "orienting from the circle skeleton gives a different PAG".into()
    });
    Ok(c.finish())
}

fn resolution_checks(truth: &Truth, out: &RunOutput) -> Vec<InvariantCheck> {
    let mut conditions = Check::new("dsep_resolution_ancestry");
    let mut pattern = Check::new("dsep_pattern_at_resolution");
    let mut hierarchy = Check::new("hierarchy_ancestry");
    let Some(log) = &out.dsep_log else {
        return Vec::new();
    };
    for r in &log.resolutions {
        let (x, y, z) = (r.x, r.y, &r.separator);
        let mut yz = z.clone();
        yz.insert(y);
        let mut xz = z.clone();
        xz.insert(x);
        conditions.expect(!truth.is_ancestor(x, &yz), || {
            format!("{x} is an ancestor of {{{y}}} ∪ {z:?} ∪ S")
        });
        conditions.expect(!truth.is_ancestor(y, &xz), || {
            format!("{y} is an ancestor of {{{x}}} ∪ {z:?} ∪ S")
        });
        for &m in z {
            conditions.expect(truth.is_ancestor(m, &pair_set(x, y)), || {
                format!("separator member {m} of ({x}, {y}) is not an ancestor of the pair or S")
            });
        }
        pattern.expect(r.pattern.is_some(), || {
            format!("no pattern around ({x}, {y}) at resolution")
        });
        let mut seed = pair_set(x, y);
        seed.extend(r.base_x.iter().copied());
        seed.extend(r.base_y.iter().copied());
        for &m in r.hierarchy.difference(&seed) {
            hierarchy.expect(truth.is_ancestor(m, &seed), || {
                format!("hierarchy member {m} for ({x}, {y}) is not an ancestor of its seed or S")
            });
        }
    }
    vec![conditions.finish(), pattern.finish(), hierarchy.finish()]
}

/// The hierarchy of the true adjacent ancestors, built from the final
/// separating sets without the pair's own, separates every true D-sep link.
fn hierarchy_separates_dsep_links(truth: &Truth, out: &RunOutput) -> InvariantCheck {
    let mut c = Check::new("hierarchy_separates_dsep_links");
    for (x, y) in truth.dsep_links() {
        let mut sepsets = out.sepsets.clone();
        sepsets.remove(x, y);
        let seed = truth.adjacent_ancestors(x, y);
        let mut z = hie(&seed, &sepsets).closure;
        z.remove(&x);
        z.remove(&y);
        c.expect(truth.independent(x, y, &z), || {
            format!("HIE({seed:?}) \\ {{{x}, {y}}} = {z:?} does not separate ({x}, {y})")
        });
    }
    c.finish()
}
