use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::io::GraphJson;
use crate::graph::{Mark, MixedGraph, VarId};
use crate::oracle::Stage;

use super::pipeline::RunReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkDiff {
    pub a: String,
    pub b: String,
    /// Marks at `(a, b)` in the first and second PAG.
    pub first: (Mark, Mark),
    pub second: (Mark, Mark),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDiff {
    /// Edges of the first PAG missing from the second, as name pairs.
    pub only_in_first: Vec<(String, String)>,
    pub only_in_second: Vec<(String, String)>,
    pub marks: Vec<MarkDiff>,
    /// Second minus first, per stage.
    pub query_delta: BTreeMap<Stage, i64>,
}

impl RunDiff {
    /// Whether the two PAGs are identical; query deltas are informational.
    pub fn pags_equal(&self) -> bool {
        self.only_in_first.is_empty() && self.only_in_second.is_empty() && self.marks.is_empty()
    }
}

/// Structural difference between two PAGs over the same variables.
pub fn diff_graphs(a: &MixedGraph, b: &MixedGraph) -> Result<RunDiff> {
    if a.names() != b.names() {
        return Err(Error::Input(format!(
            "variable tables differ: {:?} vs {:?}",
            a.names(),
            b.names()
        )));
    }
    let mut diff = RunDiff::default();
    let name = |v: VarId| a.name(v).to_string();
    for (x, y) in a
        .vars()
        .flat_map(|x| a.vars().filter(move |&y| y > x).map(move |y| (x, y)))
    {
        match (a.adjacent(x, y), b.adjacent(x, y)) {
            (true, false) => diff.only_in_first.push((name(x), name(y))),
            (false, true) => diff.only_in_second.push((name(x), name(y))),
            (true, true) => {
                let first = (a.mark(x, y).unwrap(), a.mark(y, x).unwrap());
                let second = (b.mark(x, y).unwrap(), b.mark(y, x).unwrap());
                if first != second {
                    diff.marks.push(MarkDiff {
                        a: name(x),
                        b: name(y),
                        first,
                        second,
                    });
                }
            }
            (false, false) => {}
        }
    }
    Ok(diff)
}

pub fn compare_runs(a: &RunReport, b: &RunReport) -> Result<RunDiff> {
    let ga = GraphJson::to_graph(&a.pag)?;
    let gb = GraphJson::to_graph(&b.pag)?;
    let mut diff = diff_graphs(&ga, &gb)?;
    for stage in Stage::ALL {
        let qa = a.stats.stage(stage).queries as i64;
        let qb = b.stats.stage(stage).queries as i64;
        diff.query_delta.insert(stage, qb - qa);
    }
    Ok(diff)
}
