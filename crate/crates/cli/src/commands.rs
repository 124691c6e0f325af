use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fciplus::graph::io::{dag_to_dot, to_dot, GraphJson};
use fciplus::graph::{latent_project, VarSet};
use fciplus::harness::{
    canonical_examples, check_invariants, compare_runs, content_hash, random_sparse_dag, read_reports, run_on_dag,
    run_pipeline, write_reports, Algorithm, GenConfig, RunConfig, RunOutput, RunReport,
};
use fciplus::oracle::{CountingOracle, GaussOracle, GaussTest, Stage};
use fciplus::{Error, Result};

use crate::input::{edge_list, format_mark_pair, load_graph, Truth};
use crate::{BenchArgs, CompareArgs, GenerateArgs, RunArgs, ShowArgs, Status};

fn write_graph(json: &GraphJson, out: Option<&PathBuf>) -> Result<()> {
    match out {
        None => println!("{}", serde_json::to_string_pretty(json)?),
        Some(path) => json.write(path)?,
    }
    Ok(())
}

pub fn generate(a: GenerateArgs) -> Result<Status> {
    if let Some(name) = &a.example {
        let ex = canonical_examples()?
            .into_iter()
            .find(|e| e.name == name)
            .ok_or_else(|| {
                Error::Input(format!(
                    "unknown example `{name}` (expected figure4b, figure5 or figure6)"
                ))
            })?;
        write_graph(&GraphJson::from_dag(&ex.dag), a.out.as_ref())?;
        for fact in &ex.facts {
            eprintln!("verified: {fact}");
        }
        return Ok(Status::Ok);
    }
    let n = a.n.expect("clap requires --n without --example");
    if a.count == 0 {
        return Err(Error::Input("--count must be at least 1".into()));
    }
    if a.count > 1 && a.out.is_none() {
        return Err(Error::Input("--count above 1 needs an --out directory".into()));
    }
    if a.count > 1 {
        std::fs::create_dir_all(a.out.as_ref().expect("checked above"))?;
    }
    for i in 0..a.count {
        let mut cfg = GenConfig::new(n, a.k, a.seed.wrapping_add(i as u64));
        cfg.n_latent = a.latents;
        cfg.n_selection = a.selection;
        cfg.density = a.density.unwrap_or(2.5 / (n + a.latents + a.selection) as f64);
        cfg.max_attempts = a.max_attempts;
        cfg.planted_links = a.planted;
        let dag = random_sparse_dag(&cfg)?;
        let json = GraphJson::from_dag(&dag);
        let degree = latent_project(&dag)?.graph().max_degree();
        let path = a.out.as_ref().map(|out| {
            if a.count > 1 {
                out.join(format!("graph_{i:04}.json"))
            } else {
                out.clone()
            }
        });
        write_graph(&json, path.as_ref())?;
        if let Some(path) = path {
            eprintln!(
                "wrote {} (seed {}, {} edges, MAG degree {degree})",
                path.display(),
                cfg.seed,
                json.edges.len()
            );
        }
    }
    Ok(Status::Ok)
}

pub fn run(a: RunArgs) -> Result<Status> {
    let config = RunConfig::new(a.alg)
        .with_max_level(a.k)
        .with_intersect_pdsep(a.intersect_pdsep);
    let (output, report) = match (&a.graph, &a.data) {
        (Some(path), _) => {
            let g = load_graph(path)?;
            match &g.truth {
                Truth::Dag(dag) => run_on_dag(dag, config, a.seed)?,
                Truth::Mag(_) => {
                    let mut oracle = g.oracle();
                    let out = run_pipeline(oracle.as_mut(), config)?;
                    let report = RunReport::new(&out, g.hash.clone(), a.seed);
                    (out, report)
                }
            }
        }
        (None, Some(path)) => {
            let test = GaussTest::from_csv(path, a.alpha)?;
            let hash = content_hash(&std::fs::read(path)?);
            let mut oracle: GaussOracle = CountingOracle::new(test);
            let out = run_pipeline(&mut oracle, config)?;
            let failures = oracle.backend().failures();
            if failures > 0 {
                eprintln!("warning: {failures} tests could not be evaluated and were treated as dependent");
            }
            let report = RunReport::new(&out, hash, a.seed);
            (out, report)
        }
        (None, None) => return Err(Error::Input("one of --graph or --data is required".into())),
    };
    print_run(&output, &report);
    if let Some(path) = &a.report {
        write_reports(path, std::slice::from_ref(&report))?;
    }
    Ok(if report.invariants_passed() {
        Status::Ok
    } else {
        Status::Failed
    })
}

fn names(g: &fciplus::graph::MixedGraph, s: &VarSet) -> String {
    s.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(", ")
}

fn print_run(out: &RunOutput, report: &RunReport) {
    let g = &out.pag;
    println!(
        "{} on {} variables: {} edges",
        out.config.algorithm,
        g.n(),
        g.num_edges()
    );
    print!("{}", edge_list(g));
    let total = out.stats.total();
    println!("queries: {} ({} distinct)", total.queries, total.distinct);
    for (stage, s) in out.stats.iter().filter(|(_, s)| s.queries > 0) {
        println!("  {stage}: {}", s.queries);
    }
    if let Some(log) = &out.dsep_log {
        for r in &log.resolutions {
            println!(
                "removed {} - {}: separated by {{{}}}",
                g.name(r.x),
                g.name(r.y),
                names(g, &r.separator)
            );
        }
    }
    if report.invariants.is_empty() {
        return;
    }
    let failed: Vec<_> = report.invariants.iter().filter(|c| !c.passed).collect();
    if failed.is_empty() {
        let checks: u64 = report.invariants.iter().map(|c| c.checked).sum();
        println!("invariants: {} suites, {checks} checks passed", report.invariants.len());
    }
    for c in failed {
        println!("invariant {} FAILED:", c.name);
        for v in c.violations.iter().take(5) {
            println!("  {v}");
        }
    }
}

pub fn compare(a: CompareArgs) -> Result<Status> {
    let first = read_reports(&a.a)?;
    let second = read_reports(&a.b)?;
    if first.len() != second.len() {
        return Err(Error::Input(format!(
            "{} has {} reports but {} has {}",
            a.a.display(),
            first.len(),
            a.b.display(),
            second.len()
        )));
    }
    let mut differ = false;
    for (i, (ra, rb)) in first.iter().zip(&second).enumerate() {
        let d = compare_runs(ra, rb)?;
        let label = format!("run {i} ({} vs {})", ra.algorithm, rb.algorithm);
        if ra.input_hash != rb.input_hash {
            println!("{label}: note, the inputs differ");
        }
        if d.pags_equal() {
            println!("{label}: PAGs identical");
        } else {
            differ = true;
            println!("{label}: PAGs differ");
            for (x, y) in &d.only_in_first {
                println!("  only in a: {x} - {y}");
            }
            for (x, y) in &d.only_in_second {
                println!("  only in b: {x} - {y}");
            }
            for m in &d.marks {
                println!(
                    "  {} {} {}  vs  {} {} {}",
                    m.a,
                    format_mark_pair(m.first.0, m.first.1),
                    m.b,
                    m.a,
                    format_mark_pair(m.second.0, m.second.1),
                    m.b
                );
            }
        }
        let deltas: Vec<String> = d
            .query_delta
            .iter()
            .filter(|(_, &q)| q != 0)
            .map(|(s, q)| format!("{s} {q:+}"))
            .collect();
        if !deltas.is_empty() {
            println!("  query delta (b - a): {}", deltas.join(", "));
        }
    }
    Ok(if differ { Status::Failed } else { Status::Ok })
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Input(format!("no .json graphs in {}", dir.display())));
    }
    Ok(files)
}

#[derive(Default)]
struct Totals {
    runs: usize,
    queries: u64,
    ms: f64,
}

pub fn bench(a: BenchArgs) -> Result<Status> {
    if a.algs.is_empty() {
        return Err(Error::Input("--algs is empty".into()));
    }
    let files = corpus_files(&a.corpus)?;
    let mut reports = Vec::new();
    let mut totals: BTreeMap<Algorithm, Totals> = BTreeMap::new();
    let mut problems = Vec::new();
    println!(
        "{:<24} {:<8} {:>4} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "graph", "alg", "n", "queries", "pc", "augment", "dsep", "pdsep", "ms"
    );
    for file in &files {
        let g = load_graph(file)?;
        let label = file
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut pags = BTreeMap::new();
        for &alg in &a.algs {
            let config = RunConfig::new(alg)
                .with_max_level(a.k)
                .with_intersect_pdsep(a.intersect_pdsep);
            let mut oracle = g.oracle();
            let start = Instant::now();
            let out = run_pipeline(oracle.as_mut(), config)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let mut report = RunReport::new(&out, g.hash.clone(), None);
            if let (true, Truth::Dag(dag)) = (a.check, &g.truth) {
                report.invariants = check_invariants(dag, &out)?;
                for c in report.invariants.iter().filter(|c| !c.passed) {
                    problems.push(format!("{label} {alg}: invariant {} failed", c.name));
                }
            }
            let q = |s: Stage| out.stats.stage(s).queries;
            let total = out.stats.total().queries;
            println!(
                "{:<24} {:<8} {:>4} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10.2}",
                label,
                alg.as_str(),
                out.pag.n(),
                total,
                q(Stage::PcSearch),
                q(Stage::Augment),
                q(Stage::DsepSearch) + q(Stage::MinimalDsep),
                q(Stage::Reference),
                ms
            );
            let t = totals.entry(alg).or_default();
            t.runs += 1;
            t.queries += total;
            t.ms += ms;
            pags.insert(alg, out.pag);
            reports.push(report);
        }
        if let (Some(fci), Some(plus)) = (pags.get(&Algorithm::Fci), pags.get(&Algorithm::Fciplus)) {
            if fci != plus {
                problems.push(format!("{label}: FCI and FCI+ PAGs differ"));
            }
        }
    }
    println!();
    for (alg, t) in &totals {
        println!(
            "{:<8} {} runs, mean {:.1} queries, mean {:.2} ms",
            alg.as_str(),
            t.runs,
            t.queries as f64 / t.runs as f64,
            t.ms / t.runs as f64
        );
    }
    if let Some(path) = &a.report {
        write_reports(path, &reports)?;
    }
    for p in &problems {
        println!("{p}");
    }
    Ok(if problems.is_empty() {
        Status::Ok
    } else {
        Status::Failed
    })
}

pub fn show(a: ShowArgs) -> Result<Status> {
    let dot = match (&a.graph, &a.report) {
        (Some(path), _) => match load_graph(path)?.truth {
            Truth::Dag(dag) => dag_to_dot(&dag),
            Truth::Mag(mag) => to_dot(mag.graph()),
        },
        (None, Some(path)) => {
            let reports = read_reports(path)?;
            let report = reports.get(a.index).ok_or_else(|| {
                Error::Input(format!(
                    "{} has {} reports, no index {}",
                    path.display(),
                    reports.len(),
                    a.index
                ))
            })?;
            to_dot(&report.pag.to_graph()?)
        }
        (None, None) => return Err(Error::Input("one of --graph or --report is required".into())),
    };
    match &a.out {
        Some(path) => std::fs::write(path, dot)?,
        None => print!("{dot}"),
    }
    Ok(Status::Ok)
}
