//! Independence oracles and per-stage query accounting.
//!
//! Every search in this crate talks to an [`IndependenceOracle`]. The concrete
//! oracles are [`CountingOracle`]s wrapping a [`CiTest`] backend: d-separation
//! in a ground-truth DAG, m-separation in a MAG, or a Fisher z test on data.

mod dsep;
mod gauss;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VarId, VarSet};

pub use dsep::{DsepOracle, DsepTest, MagOracle, MagTest};
pub use gauss::{fisher_z_test, GaussOracle, GaussTest, TestError, DEFAULT_ALPHA};

/// Pipeline stage a query is attributed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    PcSearch,
    Augment,
    DsepSearch,
    MinimalDsep,
    Orientation,
    Reference,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::PcSearch,
        Stage::Augment,
        Stage::DsepSearch,
        Stage::MinimalDsep,
        Stage::Orientation,
        Stage::Reference,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::PcSearch => "pc_search",
            Stage::Augment => "augment",
            Stage::DsepSearch => "dsep_search",
            Stage::MinimalDsep => "minimal_dsep",
            Stage::Orientation => "orientation",
            Stage::Reference => "reference",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageStats {
    /// Every call, memo hits included.
    pub queries: u64,
    /// Calls whose key had not been seen before in this run.
    pub distinct: u64,
    pub max_cond_size: usize,
}

/// Query counters per stage. Serializes as
/// `{"pc_search": {"queries": .., "distinct": .., "max_cond_size": ..}, ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OracleStats {
    stages: BTreeMap<Stage, StageStats>,
}

impl Default for OracleStats {
    fn default() -> Self {
        OracleStats {
            stages: Stage::ALL.iter().map(|&s| (s, StageStats::default())).collect(),
        }
    }
}

impl OracleStats {
    pub fn stage(&self, s: Stage) -> StageStats {
        self.stages.get(&s).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Stage, StageStats)> + '_ {
        self.stages.iter().map(|(&s, &v)| (s, v))
    }

    pub fn total(&self) -> StageStats {
        self.stages.values().fold(StageStats::default(), |acc, s| StageStats {
            queries: acc.queries + s.queries,
            distinct: acc.distinct + s.distinct,
            max_cond_size: acc.max_cond_size.max(s.max_cond_size),
        })
    }

    fn record(&mut self, stage: Stage, cond_size: usize, fresh: bool) {
        let s = self.stages.entry(stage).or_default();
        s.queries += 1;
        if fresh {
            s.distinct += 1;
        }
        s.max_cond_size = s.max_cond_size.max(cond_size);
    }
}

/// Answers conditional independence queries and counts them.
pub trait IndependenceOracle {
    fn num_vars(&self) -> usize;

    fn names(&self) -> Vec<String>;

    /// `true` iff `x` and `y` are independent given `z`.
    fn query(&mut self, x: VarId, y: VarId, z: &VarSet) -> Result<bool>;

    fn stats(&self) -> &OracleStats;

    fn stage(&self) -> Stage;

    fn set_stage(&mut self, stage: Stage);
}

/// Raw conditional independence backend, without counting or memoization.
pub trait CiTest {
    fn num_vars(&self) -> usize;

    fn names(&self) -> Vec<String>;

    fn independent(&self, x: VarId, y: VarId, z: &VarSet) -> Result<bool>;
}

type QueryKey = (VarId, VarId, Vec<VarId>);

fn key(x: VarId, y: VarId, z: &VarSet) -> QueryKey {
    (x.min(y), x.max(y), z.iter().copied().collect())
}

/// Validates, memoizes and counts queries against a [`CiTest`] backend.
#[derive(Debug, Clone)]
pub struct CountingOracle<T> {
    test: T,
    memoize: bool,
    answers: HashMap<QueryKey, bool>,
    stage: Stage,
    stats: OracleStats,
}

impl<T: CiTest> CountingOracle<T> {
    pub fn new(test: T) -> Self {
        CountingOracle {
            test,
            memoize: true,
            answers: HashMap::new(),
            stage: Stage::PcSearch,
            stats: OracleStats::default(),
        }
    }

    /// With memoization off every query reaches the backend; distinct counts
    /// are still tracked.
    pub fn without_memo(mut self) -> Self {
        self.memoize = false;
        self
    }

    pub fn backend(&self) -> &T {
        &self.test
    }

    fn validate(&self, x: VarId, y: VarId, z: &VarSet) -> Result<()> {
        let n = self.test.num_vars();
        for v in [x, y].iter().chain(z) {
            if v.0 >= n {
                return Err(Error::UnknownVariable(*v, n));
            }
        }
        if x == y {
            return Err(Error::InvalidQuery(format!("x and y are both {x}")));
        }
        if z.contains(&x) || z.contains(&y) {
            return Err(Error::InvalidQuery(format!(
                "conditioning set contains an endpoint of ({x}, {y})"
            )));
        }
        Ok(())
    }
}

impl<T: CiTest> IndependenceOracle for CountingOracle<T> {
    fn num_vars(&self) -> usize {
        self.test.num_vars()
    }

    fn names(&self) -> Vec<String> {
        self.test.names()
    }

    fn query(&mut self, x: VarId, y: VarId, z: &VarSet) -> Result<bool> {
        self.validate(x, y, z)?;
        let k = key(x, y, z);
        let cached = self.answers.get(&k).copied();
        let fresh = cached.is_none();
        let answer = match cached {
            Some(a) if self.memoize => a,
            _ => {
                let a = self.test.independent(k.0, k.1, z)?;
                self.answers.insert(k, a);
                a
            }
        };
        self.stats.record(self.stage, z.len(), fresh);
        Ok(answer)
    }

    fn stats(&self) -> &OracleStats {
        &self.stats
    }

    fn stage(&self) -> Stage {
        self.stage
    }

    fn set_stage(&mut self, stage: Stage) {
        self.stage = stage;
    }
}

/// Runs `f` with the oracle attributed to `stage`, restoring the previous
/// stage afterwards and tagging errors with the stage.
pub(crate) fn in_stage<O: IndependenceOracle + ?Sized, R>(
    oracle: &mut O,
    stage: Stage,
    f: impl FnOnce(&mut O) -> Result<R>,
) -> Result<R> {
    let prev = oracle.stage();
    oracle.set_stage(stage);
    let out = f(oracle);
    oracle.set_stage(prev);
    out.map_err(|e| e.in_stage(stage))
}
