use irrdec_core::factor::{
    find_degree_set_subgraph, find_modular_subgraph, DegreeTargetSpec, FactorError,
    ModularTargetSpec, SolveOptions,
};
use irrdec_core::graph::{gnp, Graph};
use proptest::prelude::*;

fn brute_force(g: &Graph, spec: &DegreeTargetSpec) -> bool {
    let m = g.edge_count();
    (0u32..1 << m).any(|bits| {
        let mut deg = vec![0usize; g.n()];
        for e in 0..m {
            if bits >> e & 1 == 1 {
                let (u, v) = g.edge(e);
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        (0..g.n()).all(|v| spec.allowed(v).contains(&deg[v]))
    })
}

fn graph_and_sets() -> impl Strategy<Value = (Graph, Vec<Vec<usize>>)> {
    (3usize..9, 0.2f64..0.9, any::<u64>())
        .prop_map(|(n, p, seed)| gnp(n, p, seed).unwrap())
        .prop_filter("at most 20 edges", |g| g.edge_count() <= 20)
        .prop_flat_map(|g| {
            let sets: Vec<_> = (0..g.n())
                .map(|v| prop::collection::btree_set(0..=g.degree(v), 1..=g.degree(v) + 1))
                .collect();
            (Just(g), sets)
        })
        .prop_map(|(g, sets)| {
            (
                g,
                sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_mode_matches_brute_force((g, sets) in graph_and_sets()) {
        let spec = DegreeTargetSpec::explicit(&g, sets).unwrap();
        let expected = brute_force(&g, &spec);
        match find_degree_set_subgraph(&g, &spec, &SolveOptions::exact()) {
            Ok(sol) => {
                prop_assert!(expected);
                let h = sol.subgraph(&g);
                prop_assert!((0..g.n()).all(|v| spec.allowed(v).contains(&h.degree(v))));
            }
            Err(FactorError::Infeasible { .. }) => prop_assert!(!expected),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn heuristic_answers_are_verified((g, sets) in graph_and_sets(), seed in any::<u64>()) {
        let spec = DegreeTargetSpec::explicit(&g, sets).unwrap();
        let opts = SolveOptions::heuristic(seed).with_budget(20_000);
        match find_degree_set_subgraph(&g, &spec, &opts) {
            Ok(sol) => {
                let h = sol.subgraph(&g);
                prop_assert!((0..g.n()).all(|v| spec.allowed(v).contains(&h.degree(v))));
            }
            Err(FactorError::BudgetExhausted { spent }) => prop_assert_eq!(spent, 20_000),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn modular_targets_on_dense_graphs() {
    let mut solved = 0;
    for seed in 0..30u64 {
        let g = gnp(20, 0.9, seed).unwrap();
        if g.min_degree() < 12 {
            continue;
        }
        let spec = ModularTargetSpec {
            t: (0..20).map(|v| (v as i64 * 7 + seed as i64) % 2).collect(),
            lambda: vec![2; 20],
        };
        let exact = find_modular_subgraph(&g, &spec, &SolveOptions::exact()).unwrap();
        let h = exact.subgraph(&g);
        for v in 0..20 {
            let (d, x) = (g.degree(v), h.degree(v));
            assert!(3 * x >= d && 3 * x <= 2 * d);
            assert!(matches!((x as i64 - spec.t[v]).rem_euclid(2), 0 | 1));
        }
        let heuristic = find_modular_subgraph(&g, &spec, &SolveOptions::heuristic(seed)).unwrap();
        assert_eq!(heuristic.keep.len(), g.edge_count());
        solved += 1;
    }
    assert!(solved >= 10);
}

#[test]
fn precondition_names_small_degree_vertices() {
    let g = gnp(12, 0.4, 3).unwrap();
    let spec = ModularTargetSpec {
        t: vec![0; 12],
        lambda: vec![2; 12],
    };
    let small: Vec<usize> = (0..12).filter(|&v| g.degree(v) < 12).collect();
    assert_eq!(
        find_modular_subgraph(&g, &spec, &SolveOptions::exact()),
        Err(FactorError::Precondition { vertices: small })
    );
}
