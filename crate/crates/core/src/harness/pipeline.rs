use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::augment::augment_graph;
use crate::dsep_plus::{dsep_search, DsepLog, DsepOptions};
use crate::error::{Error, Result};
use crate::graph::io::GraphJson;
use crate::graph::{CausalDag, MixedGraph};
use crate::oracle::{in_stage, DsepOracle, IndependenceOracle, OracleStats, Stage};
use crate::orientation::{apply_fci_rules, orient_v_structures};
use crate::pc::pc_adjacency_search;
use crate::reference::fci_reference;
use crate::sepset::SepsetMap;

use super::invariants::{check_invariants, InvariantCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Adjacency search followed directly by orientation.
    Pc,
    /// Classic FCI with the exhaustive Possible-D-SEP stage.
    Fci,
    Fciplus,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Pc, Algorithm::Fci, Algorithm::Fciplus];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Pc => "pc",
            Algorithm::Fci => "fci",
            Algorithm::Fciplus => "fciplus",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown algorithm `{s}` (expected pc, fci or fciplus)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Largest conditioning level in the adjacency search and largest base
    /// size per endpoint in the hierarchy search.
    pub max_level: Option<usize>,
    pub intersect_pdsep: bool,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        RunConfig {
            algorithm,
            max_level: None,
            intersect_pdsep: false,
        }
    }

    pub fn with_max_level(mut self, k: Option<usize>) -> Self {
        self.max_level = k;
        self
    }

    pub fn with_intersect_pdsep(mut self, on: bool) -> Self {
        self.intersect_pdsep = on;
        self
    }
}

/// Everything a run produced, before serialization.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub config: RunConfig,
    pub pag: MixedGraph,
    /// Skeleton after the adjacency search.
    pub pc_skeleton: MixedGraph,
    /// Augmented skeleton after the hierarchy search; only for `fciplus`.
    pub gplus: Option<MixedGraph>,
    pub sepsets: SepsetMap,
    pub dsep_log: Option<DsepLog>,
    pub stats: OracleStats,
    pub timings: BTreeMap<String, f64>,
}

impl RunOutput {
    /// Adjacencies of the completed PAG.
    pub fn skeleton(&self) -> MixedGraph {
        self.pag.to_circle_skeleton()
    }
}

fn timed<R>(timings: &mut BTreeMap<String, f64>, name: &str, f: impl FnOnce() -> Result<R>) -> Result<R> {
    let start = Instant::now();
    let out = f();
    *timings.entry(name.to_string()).or_default() += start.elapsed().as_secs_f64() * 1e3;
    out
}

pub fn run_pipeline<O: IndependenceOracle + ?Sized>(oracle: &mut O, config: RunConfig) -> Result<RunOutput> {
    let mut timings = BTreeMap::new();
    let k = config.max_level;
    match config.algorithm {
        Algorithm::Pc => {
            let (skel, sepsets) = timed(&mut timings, "pc_search", || pc_adjacency_search(oracle, k))?;
            let pag = timed(&mut timings, "orientation", || {
                in_stage(oracle, Stage::Orientation, |_| {
                    apply_fci_rules(&orient_v_structures(&skel, &sepsets)?, &sepsets)
                })
            })?;
            Ok(RunOutput {
                config,
                pag,
                pc_skeleton: skel,
                gplus: None,
                sepsets,
                dsep_log: None,
                stats: oracle.stats().clone(),
                timings,
            })
        }
        Algorithm::Fci => {
            let out = timed(&mut timings, "fci", || fci_reference(oracle, k))?;
            Ok(RunOutput {
                config,
                pag: out.pag,
                pc_skeleton: out.pc_skeleton,
                gplus: None,
                sepsets: out.sepsets,
                dsep_log: None,
                stats: oracle.stats().clone(),
                timings,
            })
        }
        Algorithm::Fciplus => {
            let (skel, sepsets) = timed(&mut timings, "pc_search", || pc_adjacency_search(oracle, k))?;
            let gplus = timed(&mut timings, "augment", || augment_graph(&skel, &sepsets, oracle))?;
            let options = DsepOptions {
                max_level: k,
                intersect_pdsep: config.intersect_pdsep,
            };
            let found = timed(&mut timings, "dsep_search", || {
                dsep_search(&gplus, &sepsets, oracle, options)
            })?;
            let pag = timed(&mut timings, "orientation", || {
                in_stage(oracle, Stage::Orientation, |_| {
                    apply_fci_rules(&orient_v_structures(&found.gplus, &found.sepsets)?, &found.sepsets)
                })
            })?;
            Ok(RunOutput {
                config,
                pag,
                pc_skeleton: skel,
                gplus: Some(found.gplus),
                sepsets: found.sepsets,
                dsep_log: Some(found.log),
                stats: oracle.stats().clone(),
                timings,
            })
        }
    }
}

/// Hex SHA-256 of the compact JSON encoding of a graph.
pub fn graph_hash(g: &GraphJson) -> String {
    content_hash(&serde_json::to_vec(g).expect("graph JSON serializes"))
}

/// Hex SHA-256 of raw input bytes, e.g. a data file.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Serializable record of one run. Two runs with the same input, seed and
/// configuration produce reports that agree in every field but `timings_ms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub config: RunConfig,
    pub input_hash: String,
    pub seed: Option<u64>,
    pub pag: GraphJson,
    pub stats: OracleStats,
    pub timings_ms: BTreeMap<String, f64>,
    /// Number of stored separating sets per stage that found them.
    pub separated_by_stage: BTreeMap<Stage, usize>,
    pub dsep_log: Option<DsepLog>,
    pub invariants: Vec<InvariantCheck>,
}

impl RunReport {
    pub fn new(output: &RunOutput, input_hash: String, seed: Option<u64>) -> Self {
        let mut separated_by_stage = BTreeMap::new();
        for (_, e) in output.sepsets.iter() {
            *separated_by_stage.entry(e.stage).or_insert(0) += 1;
        }
        RunReport {
            algorithm: output.config.algorithm,
            config: output.config,
            input_hash,
            seed,
            pag: GraphJson::from_graph(&output.pag),
            stats: output.stats.clone(),
            timings_ms: output.timings.clone(),
            separated_by_stage,
            dsep_log: output.dsep_log.clone(),
            invariants: Vec::new(),
        }
    }

    pub fn invariants_passed(&self) -> bool {
        self.invariants.iter().all(|c| c.passed)
    }

    /// Copy with the wall-clock timings cleared, for replay comparisons.
    pub fn without_timings(&self) -> Self {
        RunReport {
            timings_ms: BTreeMap::new(),
            ..self.clone()
        }
    }
}

/// Runs `config` on the d-separation oracle of `dag` and checks the result
/// against the ground truth.
pub fn run_on_dag(dag: &CausalDag, config: RunConfig, seed: Option<u64>) -> Result<(RunOutput, RunReport)> {
    let mut oracle = DsepOracle::from_dag(dag.clone());
    let output = run_pipeline(&mut oracle, config)?;
    let mut report = RunReport::new(&output, graph_hash(&GraphJson::from_dag(dag)), seed);
    report.invariants = check_invariants(dag, &output)?;
    Ok((output, report))
}
