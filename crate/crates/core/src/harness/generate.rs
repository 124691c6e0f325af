use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{latent_project, CausalDag, MixedGraph, Role, VarId};

/// Parameters of [`random_sparse_dag`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    /// Observed variable count.
    pub n: usize,
    /// Bound on the degree of the projected MAG.
    pub max_degree: usize,
    pub n_latent: usize,
    pub n_selection: usize,
    /// Probability of each forward edge in the random order.
    pub density: f64,
    pub seed: u64,
    pub max_attempts: usize,
    /// Copies of the hidden-separator gadget `X <-> U <- Z -> V <-> Y`,
    /// `U -> Y`, `V -> X` to embed. Each uses five observed variables and two
    /// of the latent ones.
    #[serde(default)]
    pub planted_links: usize,
}

impl GenConfig {
    pub fn new(n: usize, max_degree: usize, seed: u64) -> Self {
        let total = n as f64;
        Self {
            n,
            max_degree,
            n_latent: 0,
            n_selection: 0,
            density: (2.0 / (total - 1.0).max(1.0)).min(1.0),
            seed,
            max_attempts: 10_000,
            planted_links: 0,
        }
    }
}

/// Member `index` of the standard test corpus: 8 to 14 observed variables,
/// MAG degree at most 3, 0 to 3 latents, 0 or 1 selection variable, and a
/// planted hidden-separator gadget in about a quarter of the instances.
pub fn corpus_config(index: u64, base_seed: u64) -> GenConfig {
    let n = 8 + (index % 7) as usize;
    let mut cfg = GenConfig::new(n, 3, base_seed.wrapping_add(index));
    cfg.n_latent = ((index / 7) % 4) as usize;
    cfg.n_selection = ((index / 28) % 2) as usize;
    if cfg.n_latent >= 2 && index.is_multiple_of(2) {
        cfg.planted_links = 1;
    }
    cfg.density = 2.5 / (n + cfg.n_latent + cfg.n_selection) as f64;
    cfg
}

/// Random DAG over observed, latent and selection variables whose projection
/// has maximum degree `max_degree`. Observed variables get ids `0..n` in the
/// DAG, followed by latent and then selection variables.
///
/// Latent variables are drawn from nodes with at least two children and
/// selection variables from nodes with at least two parents, favouring the
/// most connected ones, so they tend to induce bidirected and undirected edges.
pub fn random_sparse_dag(cfg: &GenConfig) -> Result<CausalDag> {
    if cfg.n < 2 {
        return Err(Error::Input(format!(
            "need at least 2 observed variables, got {}",
            cfg.n
        )));
    }
    if cfg.max_degree < 1 {
        return Err(Error::Input("max_degree must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&cfg.density) {
        return Err(Error::Input(format!("density {} is not a probability", cfg.density)));
    }
    if 5 * cfg.planted_links > cfg.n || 2 * cfg.planted_links > cfg.n_latent {
        return Err(Error::Input(format!(
            "{} planted links need {} observed and {} latent variables",
            cfg.planted_links,
            5 * cfg.planted_links,
            2 * cfg.planted_links
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let total = cfg.n + cfg.n_latent + cfg.n_selection;
    let mut rejected_roles = 0usize;
    let mut rejected_degree = 0usize;
    let mut smallest_excess = usize::MAX;
    for _ in 0..cfg.max_attempts {
        let mut order: Vec<usize> = (0..total).collect();
        order.shuffle(&mut rng);
        let (mut edges, planted_latents) = plant(&order, cfg.planted_links, &mut rng);
        for i in 0..total {
            for j in (i + 1)..total {
                let (a, b) = (order[i], order[j]);
                if planted_latents.contains(&a) || planted_latents.contains(&b) {
                    continue;
                }
                if rng.random_bool(cfg.density) && !edges.contains(&(a, b)) {
                    edges.push((a, b));
                }
            }
        }
        let Some(roles) = pick_roles(total, &edges, &planted_latents, cfg, &mut rng) else {
            rejected_roles += 1;
            continue;
        };
        let dag = relabel(total, &edges, &roles)?;
        let mag = latent_project(&dag)?;
        let degree = mag.graph().max_degree();
        if degree <= cfg.max_degree {
            return Ok(dag);
        }
        rejected_degree += 1;
        smallest_excess = smallest_excess.min(degree - cfg.max_degree);
    }
    Err(Error::Generation(format!(
        "no DAG found in {} attempts (n={}, latents={}, selection={}, density={}, seed={}): \
         {} lacked role candidates, {} exceeded degree {} (smallest excess {})",
        cfg.max_attempts,
        cfg.n,
        cfg.n_latent,
        cfg.n_selection,
        cfg.density,
        cfg.seed,
        rejected_roles,
        rejected_degree,
        cfg.max_degree,
        if smallest_excess == usize::MAX {
            0
        } else {
            smallest_excess
        },
    )))
}

/// Gadget node order: `Z, L1, L2, U, V, X, Y`; consistent with its edges.
const GADGET_EDGES: [(usize, usize); 8] = [(1, 5), (1, 3), (2, 4), (2, 6), (0, 3), (0, 4), (3, 6), (4, 5)];

/// Edges of the planted gadgets and their latent nodes. Gadget slots are
/// random nodes, assigned in order of their position in `order`.
fn plant(order: &[usize], gadgets: usize, rng: &mut ChaCha8Rng) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut edges = Vec::new();
    let mut latents = Vec::new();
    if gadgets == 0 {
        return (edges, latents);
    }
    let mut slots: Vec<usize> = (0..order.len()).collect();
    slots.shuffle(rng);
    for chunk in slots.chunks(7).take(gadgets) {
        let mut positions = chunk.to_vec();
        positions.sort_unstable();
        let nodes: Vec<usize> = positions.iter().map(|&p| order[p]).collect();
        for &(a, b) in &GADGET_EDGES {
            edges.push((nodes[a], nodes[b]));
        }
        latents.extend([nodes[1], nodes[2]]);
    }
    (edges, latents)
}

fn pick_roles(
    total: usize,
    edges: &[(usize, usize)],
    planted_latents: &[usize],
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Role>> {
    let mut out_deg = vec![0usize; total];
    let mut in_deg = vec![0usize; total];
    for &(a, b) in edges {
        out_deg[a] += 1;
        in_deg[b] += 1;
    }
    let mut roles = vec![Role::Observed; total];
    for &v in planted_latents {
        roles[v] = Role::Latent;
    }
    let free_latents = cfg.n_latent - planted_latents.len();
    let mut by_children: Vec<usize> = (0..total)
        .filter(|&v| out_deg[v] >= 2 && roles[v] == Role::Observed)
        .collect();
    by_children.shuffle(rng);
    by_children.sort_by_key(|&v| std::cmp::Reverse(out_deg[v]));
    if by_children.len() < free_latents {
        return None;
    }
    for &v in &by_children[..free_latents] {
        roles[v] = Role::Latent;
    }
    let mut by_parents: Vec<usize> = (0..total)
        .filter(|&v| in_deg[v] >= 2 && roles[v] == Role::Observed)
        .collect();
    by_parents.shuffle(rng);
    by_parents.sort_by_key(|&v| std::cmp::Reverse(in_deg[v]));
    if by_parents.len() < cfg.n_selection {
        return None;
    }
    for &v in &by_parents[..cfg.n_selection] {
        roles[v] = Role::Selection;
    }
    Some(roles)
}

fn relabel(total: usize, edges: &[(usize, usize)], roles: &[Role]) -> Result<CausalDag> {
    let rank = |r: Role| match r {
        Role::Observed => 0,
        Role::Latent => 1,
        Role::Selection => 2,
    };
    let mut perm: Vec<usize> = (0..total).collect();
    perm.sort_by_key(|&v| (rank(roles[v]), v));
    let mut new_id = vec![0usize; total];
    for (i, &v) in perm.iter().enumerate() {
        new_id[v] = i;
    }
    let mut counters = [0usize; 3];
    let names: Vec<String> = perm
        .iter()
        .map(|&v| {
            let r = rank(roles[v]);
            counters[r] += 1;
            let prefix = ["X", "L", "S"][r];
            format!("{prefix}{}", counters[r])
        })
        .collect();
    let mut g = MixedGraph::with_names(names);
    for &(a, b) in edges {
        g.put_edge(
            VarId(new_id[a]),
            VarId(new_id[b]),
            crate::graph::Mark::Tail,
            crate::graph::Mark::Arrow,
        );
    }
    let new_roles: Vec<Role> = perm.iter().map(|&v| roles[v]).collect();
    CausalDag::new(g, new_roles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let mut cfg = GenConfig::new(10, 3, 7);
        cfg.n_latent = 2;
        cfg.n_selection = 1;
        let a = random_sparse_dag(&cfg).unwrap();
        let b = random_sparse_dag(&cfg).unwrap();
        assert_eq!(a.graph(), b.graph());
        assert_eq!(a.roles(), b.roles());
        assert_eq!(a.observed().len(), 10);
        assert!(latent_project(&a).unwrap().graph().max_degree() <= 3);
    }

    #[test]
    fn sufficient_projection_is_the_dag() {
        let cfg = GenConfig::new(8, 3, 3);
        let dag = random_sparse_dag(&cfg).unwrap();
        assert_eq!(latent_project(&dag).unwrap().graph(), dag.graph());
    }

    #[test]
    fn planted_gadget_yields_a_hidden_separator() {
        let mut cfg = GenConfig::new(9, 3, 11);
        cfg.n_latent = 2;
        cfg.planted_links = 1;
        cfg.density = 0.0;
        let dag = random_sparse_dag(&cfg).unwrap();
        let truth = crate::harness::Truth::new(&dag).unwrap();
        assert_eq!(truth.dsep_links().len(), 1);
        cfg.n_latent = 1;
        assert!(random_sparse_dag(&cfg).unwrap_err().is_input_error());
    }

    #[test]
    fn impossible_requests_report_diagnostics() {
        let mut cfg = GenConfig::new(6, 1, 1);
        cfg.density = 1.0;
        cfg.max_attempts = 5;
        let err = random_sparse_dag(&cfg).unwrap_err();
        assert!(matches!(err, Error::Generation(ref m) if m.contains("exceeded degree 1")));
    }
}
