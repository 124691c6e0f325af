//! Brute-force reference implementations shared by the integration tests.
//! Each one follows a textbook definition directly and is exponential.

#![allow(dead_code)]

use std::collections::BTreeMap;

use itertools::Itertools;

use fciplus::graph::{ancestors, d_separated, CausalDag, Mag, Mark, MixedGraph, VarId, VarSet};
use fciplus::harness::{corpus_config, random_sparse_dag, GenConfig};

pub fn vs(ids: &[usize]) -> VarSet {
    ids.iter().map(|&i| VarId(i)).collect()
}

fn descendants(dag: &MixedGraph, v: VarId) -> VarSet {
    let mut out = VarSet::new();
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        if out.insert(u) {
            stack.extend(dag.children(u));
        }
    }
    out
}

/// All simple paths from `x` to `y` in the skeleton of `g`.
pub fn simple_paths(g: &MixedGraph, x: VarId, y: VarId) -> Vec<Vec<VarId>> {
    fn go(g: &MixedGraph, path: &mut Vec<VarId>, y: VarId, out: &mut Vec<Vec<VarId>>) {
        let last = *path.last().unwrap();
        if last == y {
            out.push(path.clone());
            return;
        }
        for n in g.neighbors(last).collect::<Vec<_>>() {
            if !path.contains(&n) {
                path.push(n);
                go(g, path, y, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, &mut vec![x], y, &mut out);
    out
}

/// d-separation by enumerating every simple path of the DAG skeleton.
pub fn dsep_by_paths(dag: &CausalDag, x: VarId, y: VarId, z: &VarSet) -> bool {
    let g = dag.graph();
    simple_paths(g, x, y).into_iter().all(|p| {
        (1..p.len() - 1).any(|i| {
            let (a, v, b) = (p[i - 1], p[i], p[i + 1]);
            let collider = g.is_directed(a, v) && g.is_directed(b, v);
            if collider {
                descendants(g, v).is_disjoint(z)
            } else {
                z.contains(&v)
            }
        })
    })
}

/// The MAG of a DAG from its definition: observed `a`, `b` are adjacent iff no
/// set of other observed variables separates them (selection always given),
/// and the mark at `a` is a tail iff `a` is an ancestor of `b` or the selection set.
pub fn mag_by_definition(dag: &CausalDag) -> MixedGraph {
    let obs = dag.observed().to_vec();
    let n = obs.len();
    let sel = dag.selection().clone();
    let mut b = fciplus::graph::GraphBuilder::named(dag.observed_names());
    for (i, j) in (0..n).tuple_combinations() {
        let rest: Vec<VarId> = (0..n).filter(|&k| k != i && k != j).map(|k| obs[k]).collect();
        let separable = rest.into_iter().powerset().any(|s| {
            let mut z: VarSet = s.into_iter().collect();
            z.extend(sel.iter().copied());
            d_separated(dag, obs[i], obs[j], &z).unwrap()
        });
        if separable {
            continue;
        }
        let tail_at = |a: usize, b: usize| {
            let mut seeds = sel.clone();
            seeds.insert(obs[b]);
            ancestors(dag.graph(), &seeds).unwrap().contains(&obs[a])
        };
        let mark = |t: bool| if t { Mark::Tail } else { Mark::Arrow };
        b = b.edge(i, j, mark(tail_at(i, j)), mark(tail_at(j, i)));
    }
    b.build().unwrap()
}

/// Possible-D-SEP by simple-path enumeration: `v` qualifies if some simple
/// path from `a` to `v` has every interior vertex a collider or in a triangle
/// with its path neighbours.
pub fn pds_by_paths(g: &MixedGraph, a: VarId, b: VarId) -> VarSet {
    fn go(g: &MixedGraph, path: &mut Vec<VarId>, out: &mut VarSet) {
        let last = *path.last().unwrap();
        out.insert(last);
        for n in g.neighbors(last).collect::<Vec<_>>() {
            if path.contains(&n) {
                continue;
            }
            if path.len() >= 2 {
                let p = path[path.len() - 2];
                let collider = g.mark(last, p) == Some(Mark::Arrow) && g.mark(last, n) == Some(Mark::Arrow);
                if !collider && !g.adjacent(p, n) {
                    continue;
                }
            }
            path.push(n);
            go(g, path, out);
            path.pop();
        }
    }
    let mut out = VarSet::new();
    go(g, &mut vec![a], &mut out);
    out.remove(&a);
    out.remove(&b);
    out
}

/// D-SEP(a, b) in a MAG: vertices joined to `a` by a path whose interior
/// vertices are all colliders and ancestors of `a` or `b`.
pub fn true_dsep_set(mag: &MixedGraph, a: VarId, b: VarId) -> VarSet {
    let an = ancestors(mag, &[a, b].into_iter().collect()).unwrap();
    let mut out = VarSet::new();
    for v in mag.vars().filter(|&v| v != a) {
        let ok = simple_paths(mag, a, v).into_iter().any(|p| {
            (1..p.len() - 1).all(|i| {
                let (l, m, r) = (p[i - 1], p[i], p[i + 1]);
                mag.mark(m, l) == Some(Mark::Arrow) && mag.mark(m, r) == Some(Mark::Arrow) && an.contains(&m)
            })
        });
        if ok {
            out.insert(v);
        }
    }
    out
}

const EDGE_KINDS: [(Mark, Mark); 4] = [
    (Mark::Tail, Mark::Arrow),
    (Mark::Arrow, Mark::Tail),
    (Mark::Arrow, Mark::Arrow),
    (Mark::Tail, Mark::Tail),
];

/// Every ancestral graph with the given skeleton.
pub fn ancestral_graphs_on(skeleton: &MixedGraph) -> Vec<Mag> {
    let edges: Vec<(VarId, VarId)> = skeleton.edges().map(|e| (e.a, e.b)).collect();
    let mut out = Vec::new();
    for kinds in (0..edges.len()).map(|_| 0..4).multi_cartesian_product() {
        let mut b = fciplus::graph::GraphBuilder::named(skeleton.names().to_vec());
        for (&(x, y), &k) in edges.iter().zip(&kinds) {
            let (mx, my) = EDGE_KINDS[k];
            b = b.edge(x.0, y.0, mx, my);
        }
        if let Ok(mag) = Mag::new(b.build().unwrap()) {
            out.push(mag);
        }
    }
    if edges.is_empty() {
        out.push(Mag::new(skeleton.clone()).unwrap());
    }
    out
}

/// The full independence model of a MAG as a sorted list of `(x, y, z)` facts.
pub fn independence_model(mag: &Mag) -> Vec<(VarId, VarId, VarSet)> {
    let g = mag.graph();
    let mut facts = Vec::new();
    for (x, y) in g.vars().collect::<Vec<_>>().into_iter().tuple_combinations() {
        let rest: Vec<VarId> = g.vars().filter(|&v| v != x && v != y).collect();
        for s in rest.into_iter().powerset() {
            let z: VarSet = s.into_iter().collect();
            if fciplus::graph::m_separated(mag, x, y, &z).unwrap() {
                facts.push((x, y, z));
            }
        }
    }
    facts
}

/// Marks shared by every MAG Markov equivalent to `mag`, with circles
/// where members disagree. Equivalent MAGs share a skeleton, so only mark
/// assignments on that skeleton are enumerated.
pub fn invariant_marks(mag: &Mag) -> MixedGraph {
    let model = independence_model(mag);
    let g = mag.graph();
    let mut seen: BTreeMap<(VarId, VarId), Option<Mark>> = BTreeMap::new();
    for other in ancestral_graphs_on(g) {
        if independence_model(&other) != model {
            continue;
        }
        for e in other.graph().edges() {
            for (at, o, m) in [(e.a, e.b, e.mark_a), (e.b, e.a, e.mark_b)] {
                seen.entry((at, o))
                    .and_modify(|cur| {
                        if *cur != Some(m) {
                            *cur = None;
                        }
                    })
                    .or_insert(Some(m));
            }
        }
    }
    let mut b = fciplus::graph::GraphBuilder::named(g.names().to_vec());
    for e in g.edges() {
        let at = |x, y| seen[&(x, y)].unwrap_or(Mark::Circle);
        b = b.edge(e.a.0, e.b.0, at(e.a, e.b), at(e.b, e.a));
    }
    b.build().unwrap()
}

/// Small random instance for property-style tests.
pub fn small_instance(seed: u64, n: usize, latents: usize, selection: usize) -> CausalDag {
    let mut cfg = GenConfig::new(n, 3, seed);
    cfg.n_latent = latents;
    cfg.n_selection = selection;
    cfg.density = 2.5 / (n + latents + selection) as f64;
    random_sparse_dag(&cfg).unwrap()
}

pub fn corpus_instance(index: u64) -> CausalDag {
    random_sparse_dag(&corpus_config(index, CORPUS_SEED)).unwrap()
}

pub const CORPUS_SEED: u64 = 7919;
