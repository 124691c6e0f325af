//! Orientation phase: unshielded colliders from stored separating sets, then
//! the complete rule set R1-R10 for PAGs with latent confounders and selection
//! bias, applied to a fixpoint.
//!
//! Path-based rules (R4, R5, R9, R10) search by breadth-first reachability over
//! `(previous, current)` node pairs, so each check is polynomial in the graph
//! size.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Mark, MixedGraph, VarId};
use crate::sepset::SepsetMap;

/// Arrowheads at `Z` on both edges of every unshielded triple `X - Z - Y`
/// whose stored separating set for `(X, Y)` does not contain `Z`.
pub fn orient_v_structures(skeleton: &MixedGraph, sepsets: &SepsetMap) -> Result<MixedGraph> {
    let mut g = skeleton.clone();
    for z in skeleton.vars() {
        let nb: Vec<VarId> = skeleton.neighbors(z).collect();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if skeleton.adjacent(x, y) {
                    continue;
                }
                let sep = sepsets.get(x, y).ok_or_else(|| missing_sepset(skeleton, x, y))?;
                if !sep.contains(&z) {
                    g.orient(z, x, Mark::Arrow)?;
                    g.orient(z, y, Mark::Arrow)?;
                }
            }
        }
    }
    Ok(g)
}

fn missing_sepset(g: &MixedGraph, x: VarId, y: VarId) -> Error {
    Error::Input(format!(
        "no separating set stored for nonadjacent pair ({}, {})",
        g.name(x),
        g.name(y)
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
}

impl Rule {
    pub const ALL: [Rule; 10] = [
        Rule::R1,
        Rule::R2,
        Rule::R3,
        Rule::R4,
        Rule::R5,
        Rule::R6,
        Rule::R7,
        Rule::R8,
        Rule::R9,
        Rule::R10,
    ];

    fn apply(self, g: &mut MixedGraph, sepsets: &SepsetMap) -> Result<bool> {
        match self {
            Rule::R1 => r1(g),
            Rule::R2 => r2(g),
            Rule::R3 => r3(g),
            Rule::R4 => r4(g, sepsets),
            Rule::R5 => r5(g),
            Rule::R6 => r6(g),
            Rule::R7 => r7(g),
            Rule::R8 => r8(g),
            Rule::R9 => r9(g),
            Rule::R10 => r10(g),
        }
    }
}

/// Applies R1-R10 in round-robin sweeps until a full sweep changes nothing.
pub fn apply_fci_rules(pag: &MixedGraph, sepsets: &SepsetMap) -> Result<MixedGraph> {
    apply_rules_in_order(pag, sepsets, &Rule::ALL)
}

/// Same fixpoint as [`apply_fci_rules`] with a caller-chosen sweep order.
pub fn apply_rules_in_order(pag: &MixedGraph, sepsets: &SepsetMap, order: &[Rule]) -> Result<MixedGraph> {
    let mut g = pag.clone();
    // Every productive sweep turns at least one circle into a tail or arrow.
    let budget = 2 * g.num_edges() + 2;
    for _ in 0..budget {
        let mut changed = false;
        for &rule in order {
            changed |= rule.apply(&mut g, sepsets)?;
        }
        if !changed {
            return Ok(g);
        }
    }
    Err(Error::Internal("orientation rules did not reach a fixpoint".into()))
}

#[inline]
fn mk(g: &MixedGraph, at: VarId, other: VarId) -> Option<Mark> {
    g.mark(at, other)
}

fn nbrs(g: &MixedGraph, v: VarId) -> Vec<VarId> {
    g.neighbors(v).collect()
}

/// R1: `α *-> β o-* γ`, α and γ nonadjacent ⇒ `β -> γ`.
fn r1(g: &mut MixedGraph) -> Result<bool> {
    let mut changed = false;
    for b in g.vars() {
        for a in nbrs(g, b) {
            if mk(g, b, a) != Some(Mark::Arrow) {
                continue;
            }
            for c in nbrs(g, b) {
                if c == a || g.adjacent(a, c) || mk(g, b, c) != Some(Mark::Circle) {
                    continue;
                }
                changed |= g.orient(b, c, Mark::Tail)?;
                changed |= g.orient(c, b, Mark::Arrow)?;
            }
        }
    }
    Ok(changed)
}

/// R2: `α -> β *-> γ` or `α *-> β -> γ`, and `α *-o γ` ⇒ `α *-> γ`.
fn r2(g: &mut MixedGraph) -> Result<bool> {
    let mut changed = false;
    for a in g.vars() {
        for c in nbrs(g, a) {
            if mk(g, c, a) != Some(Mark::Circle) {
                continue;
            }
            let fires = g.neighbors(a).any(|b| {
                b != c
                    && g.adjacent(b, c)
                    && ((g.is_directed(a, b) && mk(g, c, b) == Some(Mark::Arrow))
                        || (mk(g, b, a) == Some(Mark::Arrow) && g.is_directed(b, c)))
            });
            if fires {
                changed |= g.orient(c, a, Mark::Arrow)?;
            }
        }
    }
    Ok(changed)
}

/// R3: `α *-> β <-* γ`, `α *-o θ o-* γ`, α and γ nonadjacent, `θ *-o β` ⇒ `θ *-> β`.
fn r3(g: &mut MixedGraph) -> Result<bool> {
    let mut changed = false;
    for b in g.vars() {
        for t in nbrs(g, b) {
            if mk(g, b, t) != Some(Mark::Circle) {
                continue;
            }
            let nb = nbrs(g, b);
            let fires = nb.iter().enumerate().any(|(i, &a)| {
                nb[i + 1..].iter().any(|&c| {
                    a != t
                        && c != t
                        && !g.adjacent(a, c)
                        && mk(g, b, a) == Some(Mark::Arrow)
                        && mk(g, b, c) == Some(Mark::Arrow)
                        && mk(g, t, a) == Some(Mark::Circle)
                        && mk(g, t, c) == Some(Mark::Circle)
                })
            });
            if fires {
                changed |= g.orient(b, t, Mark::Arrow)?;
            }
        }
    }
    Ok(changed)
}

/// Start θ of a discriminating path `⟨θ, ..., α, β, γ⟩` for β, if any.
///
/// Every vertex strictly between θ and β must be a collider on the path and a
/// parent of γ; θ must be nonadjacent to γ.
fn discriminating_start(g: &MixedGraph, a: VarId, b: VarId, c: VarId) -> Option<VarId> {
    let mut visited = vec![false; g.n()];
    visited[a.0] = true;
    visited[b.0] = true;
    visited[c.0] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if visited[w.0] || mk(g, v, w) != Some(Mark::Arrow) {
                continue;
            }
            if !g.adjacent(w, c) {
                return Some(w);
            }
            if g.is_directed(w, c) && mk(g, w, v) == Some(Mark::Arrow) {
                visited[w.0] = true;
                queue.push_back(w);
            }
        }
    }
    None
}

/// R4: discriminating path `⟨θ, ..., α, β, γ⟩` for β with `β o-* γ`: if β is in
/// the stored set of `(θ, γ)` then `β -> γ`, otherwise `α <-> β <-> γ`.
fn r4(g: &mut MixedGraph, sepsets: &SepsetMap) -> Result<bool> {
    let mut changed = false;
    for b in g.vars() {
        for c in nbrs(g, b) {
            if mk(g, b, c) != Some(Mark::Circle) {
                continue;
            }
            for a in nbrs(g, b) {
                if a == c
                    || !g.is_directed(a, c)
                    || mk(g, a, b) != Some(Mark::Arrow)
                    || mk(g, b, c) != Some(Mark::Circle)
                {
                    continue;
                }
                let Some(t) = discriminating_start(g, a, b, c) else {
                    continue;
                };
                let in_sep = sepsets.separates_with(t, c, b).ok_or_else(|| missing_sepset(g, t, c))?;
                if in_sep {
                    changed |= g.orient(b, c, Mark::Tail)?;
                    changed |= g.orient(c, b, Mark::Arrow)?;
                } else {
                    changed |= g.orient(b, a, Mark::Arrow)?;
                    changed |= g.orient(b, c, Mark::Arrow)?;
                    changed |= g.orient(c, b, Mark::Arrow)?;
                }
            }
        }
    }
    Ok(changed)
}

/// Breadth-first search for an uncovered path that starts with the edge
/// `start -> first`, uses only edges accepted by `step(from, to)`, never
/// revisits `start` or passes through any node in `avoid`, and ends at a node
/// accepted by `done(prev, cur)`. Returns the node sequence of the path found.
fn uncovered_search(
    g: &MixedGraph,
    start: VarId,
    first: VarId,
    avoid: &[VarId],
    step: impl Fn(VarId, VarId) -> bool,
    done: impl Fn(VarId, VarId) -> bool,
) -> Option<Vec<VarId>> {
    let mut parent: HashMap<(VarId, VarId), (VarId, VarId)> = HashMap::new();
    let mut queue = VecDeque::new();
    let root = (start, first);
    parent.insert(root, root);
    queue.push_back(root);
    while let Some((p, c)) = queue.pop_front() {
        if done(p, c) {
            let mut path = vec![c];
            let mut s = (p, c);
            while s != root {
                s = parent[&s];
                path.push(s.1);
            }
            path.push(start);
            path.reverse();
            return Some(path);
        }
        if avoid.contains(&c) {
            continue;
        }
        for n in g.neighbors(c) {
            if n == p || n == start || g.adjacent(p, n) || !step(c, n) {
                continue;
            }
            let s = (c, n);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(s) {
                e.insert((p, c));
                queue.push_back(s);
            }
        }
    }
    None
}

fn circle_edge(g: &MixedGraph, a: VarId, b: VarId) -> bool {
    mk(g, a, b) == Some(Mark::Circle) && mk(g, b, a) == Some(Mark::Circle)
}

/// Edge `a - b` can be oriented `a -> b` in some member of the class: no
/// arrowhead at `a` and no tail at `b`.
fn potentially_directed(g: &MixedGraph, a: VarId, b: VarId) -> bool {
    matches!(mk(g, a, b), Some(Mark::Tail | Mark::Circle)) && matches!(mk(g, b, a), Some(Mark::Arrow | Mark::Circle))
}

/// R5: `α o-o β` with an uncovered circle path `⟨α, γ, ..., θ, β⟩`, α and θ
/// nonadjacent, β and γ nonadjacent ⇒ `α - β` and every edge on the path
/// becomes undirected.
fn r5(g: &mut MixedGraph) -> Result<bool> {
    let mut changed = false;
    for a in g.vars() {
        for b in nbrs(g, a) {
            if !circle_edge(g, a, b) {
                continue;
            }
            let mut found = None;
            for c in nbrs(g, a) {
                if c == b || g.adjacent(c, b) || !circle_edge(g, a, c) {
                    continue;
                }
                let snap = &*g;
                found = uncovered_search(
                    snap,
                    a,
                    c,
                    &[b],
                    |x, y| circle_edge(snap, x, y),
                    |theta, cur| cur == b && theta != c && !snap.adjacent(a, theta),
                );
                if found.is_some() {
                    break;
                }
            }
            if let Some(path) = found {
                changed |= g.orient(a, b, Mark::Tail)?;
                changed |= g.orient(b, a, Mark::Tail)?;
                for w in path.windows(2) {
                    changed |= g.orient(w[0], w[1], Mark::Tail)?;
                    changed |= g.orient(w[1], w[0], Mark::Tail)?;
                }
            }
        }
    }
    Ok(changed)
}

/// R6: `α - β o-* γ` ⇒ `β -* γ`.
fn r6(g: &mut MixedGraph) -> Result<bool> {
    let mut changed = false;
    for b in g.vars() {
        let has_undirected = g.neighbors(b).any(|a| g.is_undirected(a, b));
        if !has_undirected {
            continue;
        }
        for c in nbrs(g, b) {
            if mk(g, b, c) == Some(Mark::Circle) {
                // the undirected neighbour cannot be c itself: that edge has a tail at b
                changed |= g.orient(b, c, Mark::Tail)?;
            }
        }
    }
    Ok(changed)
}

/// R7: `α -o β o-* γ`, α and γ nonadjacent ⇒ `β -* γ`.
fn r7(g: &mut MixedGraph) -> Result<bool> {
    let mut changed = false;
    for b in g.vars() {
        for a in nbrs(g, b) {
            if mk(g, a, b) != Some(Mark::Tail) || mk(g, b, a) != Some(Mark::Circle) {
                continue;
            }
            for c in nbrs(g, b) {
                if c != a && !g.adjacent(a, c) && mk(g, b, c) == Some(Mark::Circle) {
                    changed |= g.orient(b, c, Mark::Tail)?;
                }
            }
        }
    }
    Ok(changed)
}

fn partially_directed_into(g: &MixedGraph, a: VarId, c: VarId) -> bool {
    mk(g, a, c) == Some(Mark::Circle) && mk(g, c, a) == Some(Mark::Arrow)
}

/// R8: `α -> β -> γ` or `α -o β -> γ`, and `α o-> γ` ⇒ `α -> γ`.
fn r8(g: &mut MixedGraph) -> Result<bool> {
    let mut changed = false;
    for a in g.vars() {
        for c in nbrs(g, a) {
            if !partially_directed_into(g, a, c) {
                continue;
            }
            let fires = g.neighbors(a).any(|b| {
                b != c
                    && mk(g, a, b) == Some(Mark::Tail)
                    && matches!(mk(g, b, a), Some(Mark::Arrow | Mark::Circle))
                    && g.is_directed(b, c)
            });
            if fires {
                changed |= g.orient(a, c, Mark::Tail)?;
            }
        }
    }
    Ok(changed)
}

/// R9: `α o-> γ` with an uncovered potentially directed path
/// `⟨α, β, θ, ..., γ⟩`, β and γ nonadjacent ⇒ `α -> γ`.
fn r9(g: &mut MixedGraph) -> Result<bool> {
    let mut changed = false;
    for a in g.vars() {
        for c in nbrs(g, a) {
            if !partially_directed_into(g, a, c) {
                continue;
            }
            let snap = &*g;
            let fires = snap.neighbors(a).any(|b| {
                b != c
                    && !snap.adjacent(b, c)
                    && potentially_directed(snap, a, b)
                    && uncovered_search(
                        snap,
                        a,
                        b,
                        &[c],
                        |x, y| potentially_directed(snap, x, y),
                        |_, cur| cur == c,
                    )
                    .is_some()
            });
            if fires {
                changed |= g.orient(a, c, Mark::Tail)?;
            }
        }
    }
    Ok(changed)
}

/// R10: `α o-> γ`, `β -> γ <- θ`, uncovered potentially directed paths from α
/// to β and from α to θ whose second vertices μ and ω are distinct and
/// nonadjacent ⇒ `α -> γ`.
fn r10(g: &mut MixedGraph) -> Result<bool> {
    let mut changed = false;
    for a in g.vars() {
        for c in nbrs(g, a) {
            if !partially_directed_into(g, a, c) {
                continue;
            }
            let snap = &*g;
            let into_c: Vec<VarId> = snap
                .neighbors(c)
                .filter(|&b| b != a && snap.is_directed(b, c))
                .collect();
            if into_c.len() < 2 {
                continue;
            }
            // For each first step μ: which parents of γ are reachable.
            let mut reach: Vec<(VarId, Vec<VarId>)> = Vec::new();
            for m in snap.neighbors(a) {
                if m == c || !potentially_directed(snap, a, m) {
                    continue;
                }
                let targets: Vec<VarId> = into_c
                    .iter()
                    .copied()
                    .filter(|&t| {
                        t == m
                            || uncovered_search(
                                snap,
                                a,
                                m,
                                &[c, t],
                                |x, y| potentially_directed(snap, x, y),
                                |_, cur| cur == t,
                            )
                            .is_some()
                    })
                    .collect();
                if !targets.is_empty() {
                    reach.push((m, targets));
                }
            }
            let fires = reach.iter().enumerate().any(|(i, (m, tm))| {
                reach[i + 1..]
                    .iter()
                    .any(|(w, tw)| !snap.adjacent(*m, *w) && tm.iter().any(|b| tw.iter().any(|t| b != t)))
            });
            if fires {
                changed |= g.orient(a, c, Mark::Tail)?;
            }
        }
    }
    Ok(changed)
}
