//! Reference searches used as correctness oracles: classic FCI with an
//! exhaustive Possible-D-SEP stage, and a fully exhaustive skeleton search.

use std::collections::VecDeque;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Mark, MixedGraph, VarId, VarSet};
use crate::oracle::{in_stage, IndependenceOracle, Stage};
use crate::orientation::{apply_fci_rules, orient_v_structures};
use crate::pc::pc_adjacency_search;
use crate::sepset::SepsetMap;

/// Default limit on the variable count for [`exhaustive_skeleton`].
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 14;

/// Nodes `V ∉ {a, b}` reachable from `a` along a path on which every
/// intermediate vertex is a collider or part of a triangle with its two path
/// neighbours.
pub fn possible_dsep(pi0: &MixedGraph, a: VarId, b: VarId) -> VarSet {
    let n = pi0.n();
    let mut seen = vec![false; n * n];
    let mut out = VarSet::new();
    let mut queue = VecDeque::new();
    for w in pi0.neighbors(a) {
        seen[a.0 * n + w.0] = true;
        queue.push_back((a, w));
    }
    while let Some((p, c)) = queue.pop_front() {
        if c != a && c != b {
            out.insert(c);
        }
        for nx in pi0.neighbors(c) {
            if nx == p {
                continue;
            }
            let collider = pi0.mark(c, p) == Some(Mark::Arrow) && pi0.mark(c, nx) == Some(Mark::Arrow);
            if !(collider || pi0.adjacent(p, nx)) {
                continue;
            }
            let slot = c.0 * n + nx.0;
            if !seen[slot] {
                seen[slot] = true;
                queue.push_back((c, nx));
            }
        }
    }
    out
}

/// Output of [`fci_reference`].
#[derive(Clone, Debug)]
pub struct FciOutput {
    pub pag: MixedGraph,
    /// Skeleton left by the adjacency search, before the Possible-D-SEP stage.
    pub pc_skeleton: MixedGraph,
    pub skeleton: MixedGraph,
    pub sepsets: SepsetMap,
    /// Edges removed by the Possible-D-SEP stage.
    pub removed: Vec<(VarId, VarId)>,
}

/// Classic FCI: adjacency search, v-structures, exhaustive search over subsets
/// of Possible-D-SEP for each remaining edge, then orientation from scratch.
pub fn fci_reference<O: IndependenceOracle + ?Sized>(oracle: &mut O, max_level: Option<usize>) -> Result<FciOutput> {
    let (pc_skeleton, mut sepsets) = pc_adjacency_search(oracle, max_level)?;
    let pi0 = in_stage(oracle, Stage::Orientation, |_| {
        orient_v_structures(&pc_skeleton, &sepsets)
    })?;
    let mut skeleton = pc_skeleton.clone();
    let mut removed = Vec::new();
    in_stage(oracle, Stage::Reference, |oracle| {
        let edges: Vec<(VarId, VarId)> = pc_skeleton.edges().map(|e| (e.a, e.b)).collect();
        for (a, b) in edges {
            'sides: for (x, y) in [(a, b), (b, a)] {
                let pds: Vec<VarId> = possible_dsep(&pi0, x, y).into_iter().collect();
                for size in 0..=pds.len() {
                    for subset in pds.iter().copied().combinations(size) {
                        let z: VarSet = subset.into_iter().collect();
                        if oracle.query(x, y, &z)? {
                            skeleton.remove_edge(a, b);
                            sepsets.insert(a, b, z, size, Stage::Reference);
                            removed.push((a, b));
                            break 'sides;
                        }
                    }
                }
            }
        }
        Ok(())
    })?;
    let pag = in_stage(oracle, Stage::Orientation, |_| {
        let fresh = skeleton.to_circle_skeleton();
        apply_fci_rules(&orient_v_structures(&fresh, &sepsets)?, &sepsets)
    })?;
    Ok(FciOutput {
        pag,
        pc_skeleton,
        skeleton,
        sepsets,
        removed,
    })
}

/// Ground-truth skeleton: a pair is adjacent iff no subset of the remaining
/// variables separates it. Subsets are tried by ascending size, so every stored
/// set is minimal.
pub fn exhaustive_skeleton<O: IndependenceOracle + ?Sized>(
    oracle: &mut O,
    cap: usize,
) -> Result<(MixedGraph, SepsetMap)> {
    let n = oracle.num_vars();
    if n > cap {
        return Err(Error::BruteForceCap { n, cap });
    }
    in_stage(oracle, Stage::Reference, |oracle| {
        let mut g = MixedGraph::complete(oracle.names());
        let mut sepsets = SepsetMap::new();
        for x in 0..n {
            for y in (x + 1)..n {
                let (x, y) = (VarId(x), VarId(y));
                let rest: Vec<VarId> = (0..n).map(VarId).filter(|&v| v != x && v != y).collect();
                'search: for size in 0..=rest.len() {
                    for subset in rest.iter().copied().combinations(size) {
                        let z: VarSet = subset.into_iter().collect();
                        if oracle.query(x, y, &z)? {
                            g.remove_edge(x, y);
                            sepsets.insert(x, y, z, size, Stage::Reference);
                            break 'search;
                        }
                    }
                }
            }
        }
        Ok((g, sepsets))
    })
}
