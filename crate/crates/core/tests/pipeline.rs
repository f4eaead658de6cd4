use irrdec_core::decompose::{
    check_trace_invariants, congruence_separation_check, decompose3, window_report, Diagnostic,
    PipelineConfig, SeparationCase, Stage,
};
use irrdec_core::factor::SolveMode;
use irrdec_core::graph::{complete, gnp, is_locally_irregular_decomposition, random_regular, star};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn no_unverified_success(n in 2usize..30, p in 0.05f64..1.0, gseed in any::<u64>(), seed in any::<u64>()) {
        let g = gnp(n, p, gseed).unwrap();
        let out = decompose3(&g, &PipelineConfig { seed, ..Default::default() });
        match &out.result {
            Ok(dec) => {
                prop_assert!(is_locally_irregular_decomposition(&g, dec).unwrap());
                let bad = check_trace_invariants(&g, &out.trace);
                prop_assert!(bad.is_empty(), "{:?}", bad);
                prop_assert_eq!(window_report(&g, &out.trace).len(), n);
            }
            Err(d) => {
                let last = out.trace.stages.last().unwrap();
                prop_assert!(!last.ok);
                prop_assert_eq!(last.stage, d.stage());
                prop_assert!(out.trace.stages[..out.trace.stages.len() - 1].iter().all(|s| s.ok));
            }
        }
    }
}

#[test]
fn deterministic_given_seed() {
    let g = random_regular(40, 8, 3).unwrap();
    let cfg = PipelineConfig {
        seed: 11,
        ..Default::default()
    };
    let (a, b) = (decompose3(&g, &cfg), decompose3(&g, &cfg));
    assert_eq!(a.result, b.result);
    assert_eq!(a.trace.summary_json(), b.trace.summary_json());
}

#[test]
fn separation_records_on_successes() {
    let g = star(20);
    let mut checked = 0;
    for seed in 0..60 {
        let out = decompose3(
            &g,
            &PipelineConfig {
                seed,
                ..Default::default()
            },
        );
        let Ok(dec) = &out.result else { continue };
        for e in 0..g.edge_count() {
            let rec = congruence_separation_check(&g, &out.trace, dec.colour[e], e).unwrap();
            // Degree 1 against degree 20 never passes the ratio gate.
            assert!(matches!(rec.case, SeparationCase::WindowSeparation { .. }));
            assert!(rec.separated);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn heuristic_mode_and_diagnostics_serialize() {
    let g = complete(30);
    let cfg = PipelineConfig {
        seed: 5,
        solver_mode: SolveMode::Heuristic,
        ..Default::default()
    };
    let out = decompose3(&g, &cfg);
    let d = out.result.unwrap_err();
    assert_eq!(d.stage(), Stage::FirstFactor);
    let v = serde_json::to_value(&d).unwrap();
    assert_eq!(v["diagnostic"], "FactorPreconditionViolated");
    let summary = out.trace.summary_json();
    assert!(summary["edges"]["g_prime"].is_u64());
    assert!(summary["edges"]["h1"].is_null());
}

#[test]
fn timeout_is_reported_as_unachieved_bounds() {
    // A tiny slack makes every F bound fail; one round is never enough.
    let g = random_regular(40, 12, 1).unwrap();
    let cfg = PipelineConfig {
        seed: 2,
        slack: 1e-3,
        max_rounds: 1,
        ..Default::default()
    };
    match decompose3(&g, &cfg).result {
        Err(Diagnostic::ClaimBoundsUnachieved {
            rounds: 1,
            violated,
        }) => assert!(violated > 0),
        other => panic!("unexpected {other:?}"),
    }
}
