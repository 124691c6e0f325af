//! Level-wise adjacency search.

use itertools::Itertools;

use crate::error::Result;
use crate::graph::{MixedGraph, VarId, VarSet};
use crate::oracle::{in_stage, IndependenceOracle, Stage};
use crate::sepset::SepsetMap;

/// Removes every edge `X - Y` separated by some subset of the adjacencies of
/// `X` or `Y`, trying conditioning sets of increasing size.
///
/// Adjacencies are snapshotted at the start of each level, so the resulting
/// skeleton does not depend on the order in which edges are visited. Both
/// endpoints' adjacency sets are searched. With `max_level = Some(k)` no set
/// larger than `k` is tried.
pub fn pc_adjacency_search<O: IndependenceOracle + ?Sized>(
    oracle: &mut O,
    max_level: Option<usize>,
) -> Result<(MixedGraph, SepsetMap)> {
    in_stage(oracle, Stage::PcSearch, |oracle| {
        let mut g = MixedGraph::complete(oracle.names());
        let mut sepsets = SepsetMap::new();
        let mut level = 0usize;
        loop {
            if max_level.is_some_and(|k| level > k) {
                break;
            }
            let snapshot: Vec<Vec<VarId>> = g.vars().map(|v| g.neighbors(v).collect()).collect();
            if !snapshot.iter().any(|adj| adj.len() > level) {
                break;
            }
            let edges: Vec<(VarId, VarId)> = g.edges().map(|e| (e.a, e.b)).collect();
            for (x, y) in edges {
                'sides: for (a, b) in [(x, y), (y, x)] {
                    let candidates: Vec<VarId> = snapshot[a.0].iter().copied().filter(|&v| v != b).collect();
                    if candidates.len() < level {
                        continue;
                    }
                    for subset in candidates.into_iter().combinations(level) {
                        let z: VarSet = subset.into_iter().collect();
                        if oracle.query(a, b, &z)? {
                            g.remove_edge(x, y);
                            sepsets.insert(x, y, z, level, Stage::PcSearch);
                            break 'sides;
                        }
                    }
                }
            }
            level += 1;
        }
        Ok((g, sepsets))
    })
}
