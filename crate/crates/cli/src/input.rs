use std::fmt::Write as _;
use std::path::Path;

use fciplus::graph::io::GraphJson;
use fciplus::graph::{CausalDag, Mag, Mark, MixedGraph};
use fciplus::harness::graph_hash;
use fciplus::oracle::{DsepOracle, IndependenceOracle, MagOracle};
use fciplus::{Error, Result};

/// A ground-truth graph read from graph JSON.
pub enum Truth {
    Dag(CausalDag),
    /// A MAG over observed variables only; no invariant checks are possible.
    Mag(Mag),
}

pub struct LoadedGraph {
    pub truth: Truth,
    pub hash: String,
}

impl LoadedGraph {
    pub fn oracle(&self) -> Box<dyn IndependenceOracle> {
        match &self.truth {
            Truth::Dag(d) => Box::new(DsepOracle::from_dag(d.clone())),
            Truth::Mag(m) => Box::new(MagOracle::from_mag(m.clone())),
        }
    }
}

/// Reads a DAG, or failing that a MAG when no variable is latent or selected.
pub fn load_graph(path: &Path) -> Result<LoadedGraph> {
    let json = GraphJson::read(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let hash = graph_hash(&json);
    let as_dag = json.to_dag();
    let truth = match as_dag {
        Ok(d) => Truth::Dag(d),
        Err(dag_err) => {
            if !json.latent.is_empty() || !json.selection.is_empty() {
                return Err(Error::Input(format!("{}: {dag_err}", path.display())));
            }
            let mag = json.to_graph().and_then(Mag::new).map_err(|mag_err| {
                Error::Input(format!(
                    "{}: neither a DAG ({dag_err}) nor a MAG ({mag_err})",
                    path.display()
                ))
            })?;
            Truth::Mag(mag)
        }
    };
    Ok(LoadedGraph { truth, hash })
}

fn mark_chars(m: Mark, left: bool) -> char {
    match (m, left) {
        (Mark::Tail, _) => '-',
        (Mark::Circle, _) => 'o',
        (Mark::Arrow, true) => '<',
        (Mark::Arrow, false) => '>',
    }
}

/// One edge per line, e.g. `X1 o-> X2`.
pub fn edge_list(g: &MixedGraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {} {}-{} {}",
            g.name(e.a),
            mark_chars(e.mark_a, true),
            mark_chars(e.mark_b, false),
            g.name(e.b)
        );
    }
    out
}

pub fn format_mark_pair(first: Mark, second: Mark) -> String {
    format!("{}-{}", mark_chars(first, true), mark_chars(second, false))
}
