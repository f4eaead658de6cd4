//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Run with `cargo test --test acceptance`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use irrdec_core::decompose::{check_trace_invariants, decompose3, PipelineConfig};
use irrdec_core::factor::{
    find_modular_subgraph, verify_factor, window_cardinality_holds, ModularTargetSpec, SolveOptions,
};
use irrdec_core::graph::{
    complete, complete_bipartite, cycle, gnp, is_locally_irregular_decomposition, path,
    random_regular, recognize_exception, spider, star, ExceptionClass, Graph,
};
use irrdec_core::labeling::{bounds_hold, classify, ratio_gate};
use irrdec_core::lll::{
    audit_constants, check_conditional_bound, moser_tardos, moser_tardos_observed,
    ConditionalBound, MtOutcome, Slot,
};
use irrdec_core::oracle::{connected_graphs, min_parts, sweep, t_family_members, OracleConfig};

type Criterion = (&'static str, Option<Duration>, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let mut v = f();
    let elapsed = start.elapsed();
    v.detail = match limit {
        Some(limit) => {
            v.pass &= elapsed <= limit;
            format!("{}; {:.2?} (limit {:?})", v.detail, elapsed, limit)
        }
        None => format!("{}; {:.2?}", v.detail, elapsed),
    };
    v
}

fn constants_audit() -> Verdict {
    let report = audit_constants();
    let failed: Vec<&str> = report
        .claims
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.claim_id.as_str())
        .collect();
    Verdict {
        pass: report.all_pass && report.claims.len() == 11,
        detail: format!("{} claims, failed {:?}", report.claims.len(), failed),
    }
}

fn probability_bounds() -> Verdict {
    let mut pairs: Vec<(u64, u64)> = (2..=200u64)
        .flat_map(|du| (2..=200u64).map(move |dv| (du, dv)))
        .filter(|&(du, dv)| ratio_gate(du, dv))
        .collect();
    let grid = pairs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut extra = 0;
    while extra < 50 {
        let (du, dv) = (rng.gen_range(2..=5000u64), rng.gen_range(2..=5000u64));
        if ratio_gate(du, dv) {
            pairs.push((du, dv));
            extra += 1;
        }
    }
    let violations: Vec<(u64, u64, ConditionalBound)> = pairs
        .par_iter()
        .flat_map_iter(|&(du, dv)| {
            ConditionalBound::ALL.into_iter().filter_map(move |b| {
                let check = check_conditional_bound(du, dv, b).expect("gated pair");
                (!check.holds).then_some((du, dv, b))
            })
        })
        .collect();
    Verdict {
        pass: violations.is_empty(),
        detail: format!(
            "{grid} gated grid pairs + 50 random pairs, 5 bounds each, {} violations",
            violations.len()
        ),
    }
}

fn oracle_ground_truth() -> Verdict {
    let mut wrong = Vec::new();
    let expect = [
        ("path(2)", path(2), Some(1)),
        ("cycle(4)", cycle(4).unwrap(), Some(2)),
        ("spider(2)", spider(2).unwrap(), Some(3)),
        ("path(3)", path(3), None),
        ("cycle(3)", cycle(3).unwrap(), None),
        ("cycle(5)", cycle(5).unwrap(), None),
        ("K2", path(1), None),
    ];
    for (name, g, want) in &expect {
        let r = min_parts(g, g.edge_count().max(3)).unwrap();
        if r.feasible_k != *want || !r.exhausted {
            wrong.push(name.to_string());
        }
    }
    let members = t_family_members(12);
    for g in &members {
        let r = min_parts(g, g.edge_count()).unwrap();
        if r.feasible_k.is_some() || !r.exhausted {
            wrong.push(format!("family member {:?}", g.edges()));
        }
    }
    let graphs = connected_graphs(7);
    let others: Vec<Graph> = graphs
        .into_iter()
        .filter(|g| recognize_exception(g).unwrap() == ExceptionClass::None)
        .collect();
    let results = sweep(&others, 3, &OracleConfig::default());
    let mut by_k = BTreeMap::new();
    for (g, r) in others.iter().zip(&results) {
        let r = r.as_ref().expect("at most 21 edges");
        match (&r.feasible_k, &r.witness) {
            (Some(k), Some(w)) if is_locally_irregular_decomposition(g, w).unwrap() => {
                *by_k.entry(*k).or_insert(0) += 1
            }
            _ => wrong.push(format!("non-exception {:?}", g.edges())),
        }
    }
    Verdict {
        pass: wrong.is_empty(),
        detail: format!(
            "{} fixed cases, {} family members, {} non-exceptions by least k {:?}, mismatches {:?}",
            expect.len(),
            members.len(),
            others.len(),
            by_k,
            wrong
        ),
    }
}

fn factor_solver() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut instances = 0;
    let mut failures = Vec::new();
    let mut seed = 0;
    while instances < 100 {
        seed += 1;
        let n = rng.gen_range(8..=24usize);
        let g = gnp(n, rng.gen_range(0.5..1.0), seed).unwrap();
        if g.min_degree() < 6 {
            continue;
        }
        let lambda: Vec<u64> = (0..n)
            .map(|v| rng.gen_range(1..=g.degree(v) as u64 / 6))
            .collect();
        let t: Vec<i64> = lambda.iter().map(|&l| rng.gen_range(0..l as i64)).collect();
        let spec = ModularTargetSpec { t, lambda };
        instances += 1;
        match find_modular_subgraph(&g, &spec, &SolveOptions::exact()) {
            Ok(sol) => {
                if !verify_factor(&g, &sol.subgraph(&g), &spec).unwrap().ok {
                    failures.push(seed);
                }
            }
            Err(_) => failures.push(seed),
        }
    }
    let windows_bad = (1..=1_000_000u64).find(|&d| d >= 6 && !window_cardinality_holds(d, d / 6));
    Verdict {
        pass: failures.is_empty() && windows_bad.is_none(),
        detail: format!(
            "{instances} instances, failures {failures:?}; window cardinality for d <= 1e6 with lambda = d/6: first failure {windows_bad:?}"
        ),
    }
}

fn moser_tardos_contract() -> Verdict {
    let g = random_regular(60, 12, 1).unwrap();
    let runs: Vec<MtOutcome> = (0..100u64)
        .into_par_iter()
        .map(|seed| moser_tardos(&g, seed, 3.0, 100_000).unwrap())
        .collect();
    let successes: Vec<&MtOutcome> = runs.iter().filter(|o| o.is_success()).collect();
    let exact_ok = successes.iter().all(|o| {
        let labels = &o.run().labels;
        bounds_hold(&g, &classify(&g, labels), 3.0).all_hold
    });
    let rounds: u64 = runs.iter().map(|o| o.run().rounds).sum();

    // Instrumented run at a slack tight enough to force resampling.
    let mut observed = 0u64;
    let mut frame_breaks = 0u64;
    let instrumented = moser_tardos_observed(&g, 7, 0.15, 5_000, &mut |step| {
        observed += 1;
        for v in 0..g.n() {
            for (slot, changed) in [
                (Slot::C1, step.before.c1[v] != step.after.c1[v]),
                (Slot::C2, step.before.c2[v] != step.after.c2[v]),
            ] {
                if changed && !step.event.scope.contains(&(v, slot)) {
                    frame_breaks += 1;
                }
            }
        }
    })
    .unwrap();
    Verdict {
        pass: successes.len() >= 95 && exact_ok && frame_breaks == 0 && observed > 0,
        detail: format!(
            "{} / 100 successes at slack 3 ({} resampling rounds in total), exact bounds on successes: {}; instrumented run at slack 0.15: {} rounds ({}), {} frame breaks",
            successes.len(),
            rounds,
            exact_ok,
            observed,
            if instrumented.is_success() { "success" } else { "timeout" },
            frame_breaks
        ),
    }
}

fn pipeline_soundness() -> Verdict {
    let cases: Vec<(String, Graph, u64)> = (0..50u64)
        .map(|i| {
            if i % 2 == 0 {
                let n = 40 + (i as usize * 41 / 50);
                (format!("K{n}"), complete(n), i)
            } else {
                let n = 60 + 2 * (i as usize % 21);
                let d = 20 + 2 * (i as usize % 10);
                (format!("rr({n},{d})"), random_regular(n, d, i).unwrap(), i)
            }
        })
        .collect();
    let rows: Vec<Result<String, String>> = cases
        .par_iter()
        .map(|(name, g, seed)| {
            let out = decompose3(
                g,
                &PipelineConfig {
                    seed: *seed,
                    ..Default::default()
                },
            );
            match &out.result {
                Ok(dec) => {
                    let valid = is_locally_irregular_decomposition(g, dec).unwrap();
                    let invariants = check_trace_invariants(g, &out.trace);
                    if valid && invariants.is_empty() {
                        Ok("success".into())
                    } else {
                        Err(format!("{name}: unverified success {invariants:?}"))
                    }
                }
                Err(d) => Ok(format!("{:?}", d.stage())),
            }
        })
        .collect();
    let mut tally = BTreeMap::new();
    let mut bad = Vec::new();
    for r in rows {
        match r {
            Ok(k) => *tally.entry(k).or_insert(0) += 1,
            Err(e) => bad.push(e),
        }
    }
    Verdict {
        pass: bad.is_empty(),
        detail: format!("50 relaxed runs, outcomes {tally:?}, unverified {bad:?}"),
    }
}

fn cross_oracle() -> Verdict {
    let mut graphs: Vec<Graph> = vec![
        complete(4),
        complete(5),
        complete(6),
        complete_bipartite(3, 3),
        complete_bipartite(3, 5),
        complete_bipartite(4, 5),
        random_regular(8, 5, 1).unwrap(),
        random_regular(10, 4, 2).unwrap(),
    ];
    graphs.extend((3..=22).map(star));
    graphs.extend(connected_graphs(7));
    let rows: Vec<(usize, usize)> = graphs
        .par_iter()
        .map(|g| {
            let mut successes = 0;
            let mut confirmed = 0;
            for seed in 0..5 {
                let out = decompose3(
                    g,
                    &PipelineConfig {
                        seed,
                        ..Default::default()
                    },
                );
                if out.result.is_ok() {
                    successes += 1;
                    let r = min_parts(g, 3).unwrap();
                    if r.feasible_k.is_some_and(|k| k <= 3) {
                        confirmed += 1;
                    }
                }
            }
            (successes, confirmed)
        })
        .collect();
    let successes: usize = rows.iter().map(|r| r.0).sum();
    let confirmed: usize = rows.iter().map(|r| r.1).sum();
    Verdict {
        pass: successes == confirmed && successes > 0,
        detail: format!(
            "{} graphs with at most 22 edges x 5 seeds: {successes} pipeline successes, {confirmed} confirmed by the oracle",
            graphs.len()
        ),
    }
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 7] = [
        ("constants audit", secs(1), constants_audit),
        ("probability-bound suite", secs(60), probability_bounds),
        ("oracle ground truth", secs(300), oracle_ground_truth),
        ("factor solver", secs(300), factor_solver),
        ("Moser-Tardos contract", None, moser_tardos_contract),
        ("pipeline soundness", None, pipeline_soundness),
        ("cross-oracle", None, cross_oracle),
    ];
    let mut all = true;
    for (name, limit, check) in criteria {
        let v = timed(limit, check);
        all &= v.pass;
        println!(
            "{} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
