use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use fciplus::graph::io::GraphJson;
use fciplus::graph::GraphBuilder;
use fciplus::harness::read_reports;

fn fciplus(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fciplus"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "generate",
        "--n",
        "10",
        "--latents",
        "2",
        "--selection",
        "1",
        "--seed",
        "5",
    ];
    let a = fciplus(&args, dir.path());
    let b = fciplus(&args, dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let g: GraphJson = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!((g.observed.len(), g.latent.len(), g.selection.len()), (10, 2, 1));
}

#[test]
fn figure4b_diff_between_pc_and_fciplus() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        code(&fciplus(&["generate", "--example", "figure4b", "--out", "g.json"], d)),
        0
    );
    assert_eq!(
        code(&fciplus(
            &["run", "--alg", "pc", "--graph", "g.json", "--report", "pc.jsonl"],
            d
        )),
        0
    );
    let plus = fciplus(
        &[
            "run",
            "--alg",
            "fciplus",
            "--graph",
            "g.json",
            "--k",
            "3",
            "--report",
            "plus.jsonl",
        ],
        d,
    );
    assert_eq!(code(&plus), 0);
    assert!(stdout(&plus).contains("removed X - Y: separated by {U, V, Z}"));

    let diff = fciplus(&["compare", "--a", "pc.jsonl", "--b", "plus.jsonl"], d);
    assert_eq!(code(&diff), 1);
    let text = stdout(&diff);
    assert!(text.contains("only in a: X - Y"), "{text}");
    assert!(!text.contains("only in b"));

    let same = fciplus(&["compare", "--a", "plus.jsonl", "--b", "plus.jsonl"], d);
    assert_eq!(code(&same), 0);
    assert!(stdout(&same).contains("PAGs identical"));
}

#[test]
fn reports_replay_apart_from_timings() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fciplus(
        &[
            "generate",
            "--n",
            "9",
            "--latents",
            "2",
            "--planted",
            "1",
            "--seed",
            "3",
            "--out",
            "g.json",
        ],
        d,
    );
    for name in ["a.jsonl", "b.jsonl"] {
        let o = fciplus(
            &[
                "run", "--alg", "fciplus", "--graph", "g.json", "--seed", "3", "--report", name,
            ],
            d,
        );
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let a = read_reports(&d.join("a.jsonl")).unwrap();
    let b = read_reports(&d.join("b.jsonl")).unwrap();
    assert_eq!(a.len(), 1);
    assert!(a[0].invariants_passed() && !a[0].invariants.is_empty());
    assert_eq!(a[0].seed, Some(3));
    assert_eq!(a[0].without_timings(), b[0].without_timings());
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.json"), "{ not json").unwrap();
    std::fs::write(d.join("empty.jsonl"), "").unwrap();
    fciplus(&["generate", "--example", "figure5", "--out", "g.json"], d);
    fciplus(
        &["run", "--alg", "fci", "--graph", "g.json", "--report", "one.jsonl"],
        d,
    );
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--alg", "fci", "--graph", "missing.json"],
        vec!["run", "--alg", "fci", "--graph", "bad.json"],
        vec!["run", "--alg", "nope", "--graph", "g.json"],
        vec!["run", "--alg", "fci"],
        vec!["compare", "--a", "one.jsonl", "--b", "empty.jsonl"],
        vec!["generate", "--example", "figure9"],
        vec!["generate", "--n", "1"],
        vec!["show", "--report", "one.jsonl", "--index", "4"],
        vec!["bench", "--corpus", "."],
    ];
    for args in cases {
        let o = fciplus(&args, d);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn generation_failure_is_not_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = fciplus(
        &[
            "generate",
            "--n",
            "8",
            "--k",
            "1",
            "--density",
            "1",
            "--max-attempts",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeded degree 1"));
}

#[test]
fn bench_runs_every_algorithm_on_a_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let gen = fciplus(
        &[
            "generate",
            "--n",
            "9",
            "--latents",
            "2",
            "--count",
            "3",
            "--seed",
            "20",
            "--out",
            "corpus",
        ],
        d,
    );
    assert_eq!(code(&gen), 0);
    let o = fciplus(&["bench", "--corpus", "corpus", "--check", "--report", "all.jsonl"], d);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    for alg in ["pc", "fci", "fciplus"] {
        assert!(text.contains(&format!("{alg:<8} 3 runs")), "{text}");
    }
    let reports = read_reports(&d.join("all.jsonl")).unwrap();
    assert_eq!(reports.len(), 9);
    assert!(reports.iter().all(|r| r.invariants_passed()));
}

#[test]
fn show_prints_dot() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fciplus(&["generate", "--example", "figure6", "--out", "g.json"], d);
    let g = fciplus(&["show", "--graph", "g.json"], d);
    assert_eq!(code(&g), 0);
    let dot = stdout(&g);
    assert!(dot.starts_with("digraph G {") && dot.contains("style=dashed"));

    fciplus(
        &["run", "--alg", "fciplus", "--graph", "g.json", "--report", "r.jsonl"],
        d,
    );
    let p = fciplus(&["show", "--report", "r.jsonl", "--out", "pag.dot"], d);
    assert_eq!(code(&p), 0);
    let pag = std::fs::read_to_string(d.join("pag.dot")).unwrap();
    assert!(pag.contains("arrowtail=") && !pag.contains("style=dashed"));
}

#[test]
fn runs_on_a_mag() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mag = GraphBuilder::named(["A", "B", "C", "D"])
        .directed(0, 1)
        .bidirected(1, 2)
        .directed(3, 2)
        .build()
        .unwrap();
    GraphJson::from_graph(&mag).write(&d.join("mag.json")).unwrap();
    let o = fciplus(&["run", "--alg", "fciplus", "--graph", "mag.json"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("B <-> C"), "{text}");
    assert!(!text.contains("invariants"));
}

#[test]
fn runs_on_gaussian_data() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // a -> b -> c
    let mut rng = ChaCha8Rng::seed_from_u64(12345);
    let mut noise = || -> f64 { rng.sample(StandardNormal) };
    let mut csv = String::from("a,b,c\n");
    for _ in 0..2000 {
        let a = noise();
        let b = 0.8 * a + noise();
        let c = 0.8 * b + noise();
        csv.push_str(&format!("{a},{b},{c}\n"));
    }
    std::fs::write(d.join("d.csv"), csv).unwrap();
    let o = fciplus(
        &[
            "run", "--alg", "fciplus", "--data", "d.csv", "--alpha", "0.01", "--report", "r.jsonl",
        ],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(
        text.contains("a o-o b") && text.contains("b o-o c") && !text.contains("a o-o c"),
        "{text}"
    );
    assert_eq!(read_reports(&d.join("r.jsonl")).unwrap().len(), 1);
}
