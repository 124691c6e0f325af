mod common;

use proptest::prelude::*;
use proptest::sample::subsequence;

use common::*;
use fciplus::augment::arrowheads;
use fciplus::graph::io::GraphJson;
use fciplus::graph::{latent_project, Mark, VarId, VarSet};
use fciplus::harness::{
    diff_graphs, random_sparse_dag, read_reports, run_on_dag, write_reports, Algorithm, GenConfig, RunConfig,
};
use fciplus::oracle::{DsepOracle, IndependenceOracle, Stage};
use fciplus::orientation::{apply_rules_in_order, Rule};
use fciplus::{apply_fci_rules, hie, orient_v_structures, pc_adjacency_search, SepsetMap};

fn sepset_maps() -> impl Strategy<Value = SepsetMap> {
    prop::collection::vec(
        (0usize..8, 0usize..8, subsequence((0usize..8).collect::<Vec<_>>(), 0..4)),
        0..10,
    )
    .prop_map(|entries| {
        let mut m = SepsetMap::new();
        for (x, y, set) in entries {
            if x == y {
                continue;
            }
            let set: VarSet = set.into_iter().filter(|&v| v != x && v != y).map(VarId).collect();
            let level = set.len();
            m.insert(VarId(x), VarId(y), set, level, Stage::PcSearch);
        }
        m
    })
}

fn instances() -> impl Strategy<Value = (u64, usize, usize, usize)> {
    (0u64..1_000_000, 6usize..11, 0usize..4, 0usize..2)
}

fn instance((seed, n, latents, selection): (u64, usize, usize, usize)) -> fciplus::graph::CausalDag {
    small_instance(seed, n, latents, selection)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hierarchy_is_a_closure(seed in subsequence((0usize..8).collect::<Vec<_>>(), 1..4), sepsets in sepset_maps()) {
        let seed: VarSet = seed.into_iter().map(VarId).collect();
        let h = hie(&seed, &sepsets);
        prop_assert!(seed.is_subset(&h.closure));
        prop_assert_eq!(&hie(&h.closure, &sepsets).closure, &h.closure);
        for v in h.closure.difference(&seed) {
            let justified = sepsets.iter().any(|((a, b), e)| {
                h.closure.contains(&a) && h.closure.contains(&b) && e.set.contains(v)
            });
            prop_assert!(justified);
        }
    }

    #[test]
    fn orientation_reaches_an_order_independent_fixpoint(inst in instances(), order in Just(Rule::ALL.to_vec()).prop_shuffle()) {
        let dag = instance(inst);
        let mut o = DsepOracle::from_dag(dag);
        let (skel, sepsets) = pc_adjacency_search(&mut o, None).unwrap();
        let start = orient_v_structures(&skel, &sepsets).unwrap();
        let pag = apply_fci_rules(&start, &sepsets).unwrap();
        prop_assert_eq!(&apply_fci_rules(&pag, &sepsets).unwrap(), &pag);
        prop_assert_eq!(&apply_rules_in_order(&start, &sepsets, &order).unwrap(), &pag);
    }

    #[test]
    fn fciplus_matches_fci_and_passes_invariants(inst in instances()) {
        let dag = instance(inst);
        let (plus, report) = run_on_dag(&dag, RunConfig::new(Algorithm::Fciplus), None).unwrap();
        let (fci, _) = run_on_dag(&dag, RunConfig::new(Algorithm::Fci), None).unwrap();
        prop_assert!(diff_graphs(&plus.pag, &fci.pag).unwrap().pags_equal());
        for c in &report.invariants {
            prop_assert!(c.passed, "{} {:?}", c.name, c.violations);
        }
        prop_assert!(plus.skeleton().same_skeleton(latent_project(&dag).unwrap().graph()));
    }

    #[test]
    fn augmented_arrowheads_survive_orientation(inst in instances()) {
        let dag = instance(inst);
        let (out, _) = run_on_dag(&dag, RunConfig::new(Algorithm::Fciplus), None).unwrap();
        for (at, other) in arrowheads(out.gplus.as_ref().unwrap()) {
            prop_assert_eq!(out.pag.mark(at, other), Some(Mark::Arrow));
        }
    }

    #[test]
    fn hierarchy_search_terminates_within_bounds(inst in instances()) {
        let dag = instance(inst);
        let (out, _) = run_on_dag(&dag, RunConfig::new(Algorithm::Fciplus), None).unwrap();
        let log = out.dsep_log.unwrap();
        let resolutions = log.resolutions.len() as u64;
        prop_assert!(resolutions <= out.pc_skeleton.num_edges() as u64);
        prop_assert!(log.reactivations <= resolutions * log.detected.len() as u64);
        let mut pairs: Vec<_> = log.resolutions.iter().map(|r| (r.x, r.y)).collect();
        pairs.sort();
        pairs.dedup();
        prop_assert_eq!(pairs.len() as u64, resolutions);
    }

    #[test]
    fn stage_counts_add_up(inst in instances()) {
        let dag = instance(inst);
        let mut o = DsepOracle::from_dag(dag);
        fciplus::harness::run_pipeline(&mut o, RunConfig::new(Algorithm::Fciplus)).unwrap();
        let s = o.stats();
        let sum: u64 = Stage::ALL.iter().map(|&st| s.stage(st).queries).sum();
        prop_assert_eq!(sum, s.total().queries);
        prop_assert!(s.total().distinct <= s.total().queries);
        prop_assert_eq!(s.stage(Stage::Orientation).queries, 0);
    }

    #[test]
    fn memoization_does_not_change_answers(inst in instances()) {
        let dag = instance(inst);
        let mut memo = DsepOracle::from_dag(dag.clone());
        let mut raw = DsepOracle::from_dag(dag).without_memo();
        let a = pc_adjacency_search(&mut memo, None).unwrap();
        let b = pc_adjacency_search(&mut raw, None).unwrap();
        prop_assert_eq!(a.0, b.0);
        prop_assert_eq!(memo.stats(), raw.stats());
    }

    #[test]
    fn generator_is_deterministic_and_degree_bounded(seed in 0u64..1_000_000, n in 2usize..15, latents in 0usize..4, selection in 0usize..2) {
        let mut cfg = GenConfig::new(n, 3, seed);
        cfg.n_latent = latents;
        cfg.n_selection = selection;
        cfg.density = 2.0 / (n + latents + selection) as f64;
        if let Ok(a) = random_sparse_dag(&cfg) {
            let b = random_sparse_dag(&cfg).unwrap();
            prop_assert_eq!(a.graph(), b.graph());
            prop_assert_eq!(a.observed().len(), n);
            prop_assert!(latent_project(&a).unwrap().graph().max_degree() <= 3);
        }
    }

    #[test]
    fn graph_json_round_trips(inst in instances()) {
        let dag = instance(inst);
        let j = GraphJson::from_dag(&dag);
        let back = j.to_dag().unwrap();
        prop_assert_eq!(back.graph(), dag.graph());
        prop_assert_eq!(back.roles(), dag.roles());
        let text = serde_json::to_string(&j).unwrap();
        prop_assert_eq!(serde_json::from_str::<GraphJson>(&text).unwrap(), j);
    }

    #[test]
    fn reports_round_trip_with_arbitrary_timings(inst in instances(), times in prop::collection::vec(any::<f64>().prop_filter("finite", |t| t.is_finite()), 1..5)) {
        let dag = instance(inst);
        let (_, mut report) = run_on_dag(&dag, RunConfig::new(Algorithm::Fciplus), Some(inst.0)).unwrap();
        report.timings_ms = times.iter().enumerate().map(|(i, &t)| (format!("t{i}"), t)).collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        write_reports(&path, std::slice::from_ref(&report)).unwrap();
        prop_assert_eq!(read_reports(&path).unwrap(), vec![report]);
    }
}
