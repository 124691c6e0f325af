use fciplus::graph::latent_project;
use fciplus_bench::instance;

#[test]
fn fixtures_generate_at_every_benchmarked_size() {
    for n in [10, 14, 20, 40] {
        for variant in [0, 1] {
            let dag = instance(n, variant);
            assert_eq!(dag.observed().len(), n);
            assert!(latent_project(&dag).unwrap().graph().max_degree() <= 3);
        }
    }
}
