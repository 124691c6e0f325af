//! Hierarchical search for separators of edges that survive the adjacency
//! search only because every separator needs a node nonadjacent to both ends.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::augment::augment_graph;
use crate::error::{Error, Result};
use crate::graph::{MixedGraph, VarId, VarSet};
use crate::oracle::{in_stage, IndependenceOracle, Stage};
use crate::reference::possible_dsep;
use crate::sepset::SepsetMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkStatus {
    Pending,
    TriedFailed,
    Resolved,
}

/// Candidate edge whose endpoints may only be separable through nonadjacent nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosDsepLink {
    pub x: VarId,
    pub y: VarId,
    pub status: LinkStatus,
}

/// A witness `(U, V)` of the pattern `U <-> X <-> Y <-> V` with `U`, `V`
/// distinct and nonadjacent, if one exists.
pub fn pattern_witness(g: &MixedGraph, x: VarId, y: VarId) -> Option<(VarId, VarId)> {
    if !g.is_bidirected(x, y) {
        return None;
    }
    let us: Vec<VarId> = g.neighbors(x).filter(|&u| u != y && g.is_bidirected(u, x)).collect();
    for v in g.neighbors(y).filter(|&v| v != x && g.is_bidirected(y, v)) {
        if let Some(&u) = us.iter().find(|&&u| u != v && !g.adjacent(u, v)) {
            return Some((u, v));
        }
    }
    None
}

/// Every bidirected edge of `g` matching the pattern, in lexicographic order,
/// all pending.
pub fn find_possible_dsep_links(g: &MixedGraph) -> Vec<PosDsepLink> {
    g.edges()
        .filter(|e| pattern_witness(g, e.a, e.b).is_some())
        .map(|e| PosDsepLink {
            x: e.a,
            y: e.b,
            status: LinkStatus::Pending,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hierarchy {
    pub seed: VarSet,
    /// Least superset of `seed` closed under adding the stored separating set
    /// of any pair of its members.
    pub closure: VarSet,
}

pub fn hie(seed: &VarSet, sepsets: &SepsetMap) -> Hierarchy {
    let mut closure = seed.clone();
    loop {
        let mut grown = false;
        for ((a, b), entry) in sepsets.iter() {
            if closure.contains(&a) && closure.contains(&b) {
                for &v in &entry.set {
                    grown |= closure.insert(v);
                }
            }
        }
        if !grown {
            break;
        }
    }
    Hierarchy {
        seed: seed.clone(),
        closure,
    }
}

/// Shrinks a separating set by dropping members in ascending order, repeating
/// passes until no single member can be dropped.
pub fn minimal_dsep<O: IndependenceOracle + ?Sized>(
    oracle: &mut O,
    x: VarId,
    y: VarId,
    z_star: &VarSet,
) -> Result<VarSet> {
    in_stage(oracle, Stage::MinimalDsep, |oracle| {
        if !oracle.query(x, y, z_star)? {
            return Err(Error::Internal(format!(
                "minimal_dsep called with a set that does not separate {x} and {y}"
            )));
        }
        let mut z = z_star.clone();
        loop {
            let mut changed = false;
            for w in z.clone() {
                let mut smaller = z.clone();
                smaller.remove(&w);
                if oracle.query(x, y, &smaller)? {
                    z = smaller;
                    changed = true;
                }
            }
            if !changed {
                return Ok(z);
            }
        }
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsepOptions {
    /// Largest base size drawn from each endpoint's adjacencies; unbounded if `None`.
    pub max_level: Option<usize>,
    /// Query the hierarchy restricted to Possible-D-SEP first, falling back to
    /// the full hierarchy when the restriction does not separate.
    pub intersect_pdsep: bool,
}

/// One pass over the bases of a single link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkAttempt {
    pub x: VarId,
    pub y: VarId,
    /// Base pairs enumerated, including those whose hierarchy repeated an earlier one.
    pub combinations: u64,
    pub distinct_hierarchies: u64,
    pub resolved: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub x: VarId,
    pub y: VarId,
    pub base_x: VarSet,
    pub base_y: VarSet,
    pub hierarchy: VarSet,
    pub separator: VarSet,
    /// Pattern witness `(U, V)` in the graph at resolution time.
    pub pattern: Option<(VarId, VarId)>,
    pub used_intersection: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsepLog {
    /// Every link that was ever in the work list, in first-seen order.
    pub detected: Vec<(VarId, VarId)>,
    pub resolutions: Vec<Resolution>,
    pub attempts: Vec<LinkAttempt>,
    /// Tried-failed links returned to pending after a resolution.
    pub reactivations: u64,
}

#[derive(Clone, Debug)]
pub struct DsepOutcome {
    pub gplus: MixedGraph,
    pub sepsets: SepsetMap,
    pub links: Vec<PosDsepLink>,
    pub log: DsepLog,
}

/// Removes every detected link that some hierarchy separates, re-augmenting
/// and re-checking earlier failures after each removal.
pub fn dsep_search<O: IndependenceOracle + ?Sized>(
    gplus: &MixedGraph,
    sepsets: &SepsetMap,
    oracle: &mut O,
    options: DsepOptions,
) -> Result<DsepOutcome> {
    let mut g = gplus.clone();
    let mut sepsets = sepsets.clone();
    let mut log = DsepLog::default();
    let mut seen: BTreeSet<(VarId, VarId)> = BTreeSet::new();
    let mut resolved: BTreeSet<(VarId, VarId)> = BTreeSet::new();
    let mut links = find_possible_dsep_links(&g);
    for l in &links {
        if seen.insert((l.x, l.y)) {
            log.detected.push((l.x, l.y));
        }
    }
    while let Some(i) = links.iter().position(|l| l.status == LinkStatus::Pending) {
        let (x, y) = (links[i].x, links[i].y);
        let found = in_stage(oracle, Stage::DsepSearch, |oracle| {
            search_link(&g, &sepsets, oracle, x, y, options)
        })?;
        log.attempts.push(found.attempt);
        let Some((base_x, base_y, hierarchy, z, used_intersection)) = found.hit else {
            links[i].status = LinkStatus::TriedFailed;
            continue;
        };
        if !resolved.insert((x, y)) {
            return Err(Error::Internal(format!("link {x} - {y} resolved twice")));
        }
        let pattern = pattern_witness(&g, x, y);
        let separator = minimal_dsep(oracle, x, y, &z)?;
        log.resolutions.push(Resolution {
            x,
            y,
            base_x,
            base_y,
            hierarchy,
            separator: separator.clone(),
            pattern,
            used_intersection,
        });
        let size = separator.len();
        sepsets.insert(x, y, separator, size, Stage::DsepSearch);
        g.remove_edge(x, y);
        g = augment_graph(&g, &sepsets, oracle)?;
        let failed: HashSet<(VarId, VarId)> = links
            .iter()
            .filter(|l| l.status == LinkStatus::TriedFailed)
            .map(|l| (l.x, l.y))
            .collect();
        links = find_possible_dsep_links(&g);
        for l in &links {
            if failed.contains(&(l.x, l.y)) {
                log.reactivations += 1;
            }
            if seen.insert((l.x, l.y)) {
                log.detected.push((l.x, l.y));
            }
        }
    }
    for &(x, y) in &resolved {
        links.push(PosDsepLink {
            x,
            y,
            status: LinkStatus::Resolved,
        });
    }
    links.sort_by_key(|l| (l.x, l.y));
    Ok(DsepOutcome {
        gplus: g,
        sepsets,
        links,
        log,
    })
}

type Hit = (VarSet, VarSet, VarSet, VarSet, bool);

struct LinkSearch {
    attempt: LinkAttempt,
    hit: Option<Hit>,
}

fn search_link<O: IndependenceOracle + ?Sized>(
    g: &MixedGraph,
    sepsets: &SepsetMap,
    oracle: &mut O,
    x: VarId,
    y: VarId,
    options: DsepOptions,
) -> Result<LinkSearch> {
    let adj_x: Vec<VarId> = g.neighbors(x).filter(|&v| v != y).collect();
    let adj_y: Vec<VarId> = g.neighbors(y).filter(|&v| v != x).collect();
    let cap = |len: usize| options.max_level.map_or(len, |k| k.min(len));
    let pdsep: Option<VarSet> = options.intersect_pdsep.then(|| {
        let mut s = possible_dsep(g, x, y);
        s.extend(possible_dsep(g, y, x));
        s
    });
    let mut attempt = LinkAttempt {
        x,
        y,
        combinations: 0,
        distinct_hierarchies: 0,
        resolved: false,
    };
    let mut tried: HashSet<VarSet> = HashSet::new();
    for n in 0..=cap(adj_x.len()) {
        for m in 0..=cap(adj_y.len()) {
            for base_x in adj_x.iter().copied().combinations(n) {
                for base_y in adj_y.iter().copied().combinations(m) {
                    attempt.combinations += 1;
                    let mut seed: VarSet = [x, y].into_iter().collect();
                    seed.extend(base_x.iter().copied());
                    seed.extend(base_y.iter().copied());
                    let mut z = hie(&seed, sepsets).closure;
                    z.remove(&x);
                    z.remove(&y);
                    if !tried.insert(z.clone()) {
                        continue;
                    }
                    attempt.distinct_hierarchies += 1;
                    if let Some(pds) = &pdsep {
                        let narrow: VarSet = z.intersection(pds).copied().collect();
                        if narrow != z && oracle.query(x, y, &narrow)? {
                            attempt.resolved = true;
                            let hit = (
                                base_x.into_iter().collect(),
                                base_y.into_iter().collect(),
                                z,
                                narrow,
                                true,
                            );
                            return Ok(LinkSearch {
                                attempt,
                                hit: Some(hit),
                            });
                        }
                    }
                    if oracle.query(x, y, &z)? {
                        attempt.resolved = true;
                        let hit = (
                            base_x.into_iter().collect(),
                            base_y.into_iter().collect(),
                            z.clone(),
                            z,
                            false,
                        );
                        return Ok(LinkSearch {
                            attempt,
                            hit: Some(hit),
                        });
                    }
                }
            }
        }
    }
    Ok(LinkSearch { attempt, hit: None })
}
