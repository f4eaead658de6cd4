//! The three-part construction: `H₁` from a modular factor of `G - R₁`,
//! `H′₂ = H₂ ∪ C` from a modular factor of `G₁ - (R₂ ∪ R₃)`, and `H′₃` the
//! rest. Every stage checks its own preconditions, and a success is only
//! returned after all three parts pass the local irregularity check.

mod colouring;
mod validity;

pub use colouring::{greedy_proper_colouring, is_proper, ColouringFailure};
pub use validity::{
    check_trace_invariants, congruence_separation_check, window_report, SeparationCase,
    SeparationRecord, VertexWindows,
};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::factor::{
    find_degree_set_subgraph, find_modular_subgraph, DegreeTargetSpec, FactorError,
    ModularTargetSpec, SolveMode, SolveOptions,
};
use crate::graph::{
    irregular_conflicts, recognize_exception, Decomposition, ExceptionClass, Graph,
};
use crate::labeling::{
    bounds_hold, classify, exponents, BoundsReport, LabelPair, RiskType, RiskyClassification,
};
use crate::lll::{moser_tardos, MtOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Multiplier on the per-vertex risky-set bounds the labels must meet.
    pub slack: f64,
    pub solver_mode: SolveMode,
    /// Node cap (exact) or flip cap (heuristic) per factor stage.
    pub solver_budget: Option<u64>,
    pub strict: bool,
    /// Resampling rounds allowed when searching for labels.
    pub max_rounds: u64,
    /// Minimum degree required in strict mode.
    pub strict_min_degree: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            slack: 1.0,
            solver_mode: SolveMode::Exact,
            solver_budget: Some(200_000),
            strict: false,
            max_rounds: 100_000,
            strict_min_degree: 10_000_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Stage {
    Preflight,
    Labels,
    FirstFactor,
    Colouring,
    SecondFactor,
    Windows,
    FinalGate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[serde(tag = "diagnostic")]
pub enum Diagnostic {
    #[error("invalid configuration: {message}")]
    InvalidConfig { message: String },
    #[error("component {vertices:?} is exceptional ({class:?})")]
    ExceptionalComponent {
        vertices: Vec<usize>,
        class: ExceptionClass,
    },
    #[error("minimum degree {min_degree} is below the required {required}")]
    MinDegreeTooSmall { min_degree: usize, required: u64 },
    #[error("labels still violate {violated} risky-set bounds after {rounds} rounds")]
    ClaimBoundsUnachieved { rounds: u64, violated: usize },
    #[error("{stage:?}: no admissible degree at vertices {vertices:?}")]
    FactorPreconditionViolated { stage: Stage, vertices: Vec<usize> },
    #[error("{stage:?}: factor solver failed: {reason}")]
    FactorSolverFailure { stage: Stage, reason: String },
    #[error("no colour within the cap at vertex {vertex}")]
    ColouringFailed { vertex: usize },
    #[error("degree windows fail at vertices {vertices:?}")]
    WindowViolation { vertices: Vec<usize> },
    #[error("part {part} is not locally irregular at edges {edges:?}")]
    PartNotIrregular {
        part: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl Diagnostic {
    pub fn stage(&self) -> Stage {
        match self {
            Diagnostic::InvalidConfig { .. }
            | Diagnostic::ExceptionalComponent { .. }
            | Diagnostic::MinDegreeTooSmall { .. } => Stage::Preflight,
            Diagnostic::ClaimBoundsUnachieved { .. } => Stage::Labels,
            Diagnostic::FactorPreconditionViolated { stage, .. }
            | Diagnostic::FactorSolverFailure { stage, .. } => *stage,
            Diagnostic::ColouringFailed { .. } => Stage::Colouring,
            Diagnostic::WindowViolation { .. } => Stage::Windows,
            Diagnostic::PartNotIrregular { .. } => Stage::FinalGate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub stage: Stage,
    pub ok: bool,
    pub detail: String,
}

/// Everything the pipeline computed, stage by stage. Subgraphs are edge masks
/// over the input graph's edge ids; stages that did not run are `None`.
#[derive(Debug, Clone, Default)]
pub struct PipelineTrace {
    pub strict: bool,
    pub labels: Option<LabelPair>,
    pub mt_rounds: u64,
    pub classification: Option<RiskyClassification>,
    pub bounds: Option<BoundsReport>,
    /// `⌈log_β d(v)⌉` from the input degrees.
    pub exponent: Vec<u32>,
    /// `3·4^⌈log_β d(v)⌉`.
    pub modulus: Vec<u64>,
    /// `3·2^⌈log_β d(v)⌉·c1(v)` reduced mod the modulus.
    pub t1: Vec<u64>,
    /// `3·2^⌈log_β d(v)⌉·c2(v) + 3h(v) - c_v` reduced mod the modulus.
    pub t2: Vec<u64>,
    pub g_prime: Option<Vec<bool>>,
    pub h1: Option<Vec<bool>>,
    pub g1: Option<Vec<bool>>,
    pub g_second: Option<Vec<bool>>,
    pub c: Option<Vec<bool>>,
    pub f: Option<Vec<bool>>,
    pub c_v: Vec<usize>,
    pub h: Option<Vec<usize>>,
    /// Whether `h` respects `h(v) <= 2^(⌈log_β d(v)⌉-1) - 1`.
    pub h_capped: bool,
    pub h2: Option<Vec<bool>>,
    pub h2_prime: Option<Vec<bool>>,
    pub h3_prime: Option<Vec<bool>>,
    pub stages: Vec<StageReport>,
}

fn count(mask: &Option<Vec<bool>>) -> Option<usize> {
    mask.as_ref().map(|m| m.iter().filter(|&&b| b).count())
}

impl PipelineTrace {
    /// Stage summaries and per-stage edge counts.
    pub fn summary_json(&self) -> Value {
        json!({
            "strict": self.strict,
            "resampling_rounds": self.mt_rounds,
            "bounds_hold": self.bounds.as_ref().map(|b| b.all_hold),
            "risky_edges": self.classification.as_ref().map(|c| json!({
                "r1": c.r1().len(), "r2": c.r2().len(), "r3": c.r3().len(),
            })),
            "edges": {
                "g_prime": count(&self.g_prime),
                "h1": count(&self.h1),
                "g1": count(&self.g1),
                "g_second": count(&self.g_second),
                "c": count(&self.c),
                "f": count(&self.f),
                "h2": count(&self.h2),
                "h2_prime": count(&self.h2_prime),
                "h3_prime": count(&self.h3_prime),
            },
            "h_capped": self.h_capped,
            "stages": self.stages,
        })
    }

    fn pass(&mut self, stage: Stage, detail: impl Into<String>) {
        self.stages.push(StageReport {
            stage,
            ok: true,
            detail: detail.into(),
        });
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub result: Result<Decomposition, Diagnostic>,
    pub trace: PipelineTrace,
}

/// Cap on `h(v)`: `2^(k-1) - 1`, or 0 when `k = 0`.
pub fn h_cap(exponent: u32) -> usize {
    if exponent == 0 {
        0
    } else {
        (1usize << (exponent - 1)) - 1
    }
}

/// Degrees `x <= host` with `x ≡ target or target+1 (mod modulus)`, restricted
/// to `[host/3, 2·host/3]` when that leaves any, else to `[0, host]`.
fn relaxed_allowed(host: usize, target: u64, modulus: u64) -> Vec<usize> {
    let fits = |x: &usize| {
        let r = (*x as u64 % modulus + modulus - target) % modulus;
        r == 0 || r == 1
    };
    let window: Vec<usize> = (host.div_ceil(3)..=2 * host / 3).filter(fits).collect();
    if !window.is_empty() {
        return window;
    }
    (0..=host).filter(fits).collect()
}

fn mask_not(base: &[bool], remove: &[bool]) -> Vec<bool> {
    base.iter().zip(remove).map(|(&a, &b)| a && !b).collect()
}

struct Ctx<'a> {
    g: &'a Graph,
    cfg: &'a PipelineConfig,
    trace: PipelineTrace,
}

impl Ctx<'_> {
    fn fail(self, d: Diagnostic) -> PipelineOutcome {
        let mut trace = self.trace;
        trace.stages.push(StageReport {
            stage: d.stage(),
            ok: false,
            detail: d.to_string(),
        });
        PipelineOutcome {
            result: Err(d),
            trace,
        }
    }

    /// Factor of the host `mask` with targets `target` modulo the trace moduli.
    fn factor(&self, stage: Stage, mask: &[bool], target: &[u64]) -> Result<Vec<bool>, Diagnostic> {
        let g = self.g;
        let (host, map) = g.edge_subgraph_with_map(mask);
        let opts = SolveOptions {
            mode: self.cfg.solver_mode,
            budget: self.cfg.solver_budget,
            seed: self.cfg.seed,
        };
        let solved = if self.cfg.strict {
            let spec = ModularTargetSpec {
                t: target.iter().map(|&t| t as i64).collect(),
                lambda: self.trace.modulus.clone(),
            };
            find_modular_subgraph(&host, &spec, &opts)
        } else {
            let allowed: Vec<Vec<usize>> = (0..g.n())
                .map(|v| relaxed_allowed(host.degree(v), target[v], self.trace.modulus[v]))
                .collect();
            let empty: Vec<usize> = (0..g.n()).filter(|&v| allowed[v].is_empty()).collect();
            if !empty.is_empty() {
                return Err(Diagnostic::FactorPreconditionViolated {
                    stage,
                    vertices: empty,
                });
            }
            let spec = DegreeTargetSpec::explicit(&host, allowed)
                .expect("relaxed sets are nonempty subsets of 0..=d");
            find_degree_set_subgraph(&host, &spec, &opts)
        };
        match solved {
            Ok(sol) => {
                let mut keep = vec![false; g.edge_count()];
                for (he, &k) in sol.keep.iter().enumerate() {
                    keep[map[he]] = k;
                }
                Ok(keep)
            }
            Err(FactorError::Precondition { vertices }) => {
                Err(Diagnostic::FactorPreconditionViolated { stage, vertices })
            }
            Err(e) => Err(Diagnostic::FactorSolverFailure {
                stage,
                reason: e.to_string(),
            }),
        }
    }
}

/// Runs the construction on `g`. See [`PipelineConfig`] for the knobs; the
/// trace is returned on success and on failure.
pub fn decompose3(g: &Graph, cfg: &PipelineConfig) -> PipelineOutcome {
    let mut ctx = Ctx {
        g,
        cfg,
        trace: PipelineTrace {
            strict: cfg.strict,
            ..Default::default()
        },
    };
    if cfg.slack.is_nan() || cfg.slack <= 0.0 {
        return ctx.fail(Diagnostic::InvalidConfig {
            message: format!("slack must be positive, got {}", cfg.slack),
        });
    }
    if cfg.max_rounds == 0 {
        return ctx.fail(Diagnostic::InvalidConfig {
            message: "max_rounds must be at least 1".into(),
        });
    }

    // Preflight: exceptional components and, in strict mode, the minimum degree.
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let class = recognize_exception(&g.induced(&comp)).expect("components are connected");
        if class != ExceptionClass::None {
            return ctx.fail(Diagnostic::ExceptionalComponent {
                vertices: comp,
                class,
            });
        }
    }
    if cfg.strict && (g.n() == 0 || (g.min_degree() as u64) < cfg.strict_min_degree) {
        return ctx.fail(Diagnostic::MinDegreeTooSmall {
            min_degree: g.min_degree(),
            required: cfg.strict_min_degree,
        });
    }
    ctx.trace.pass(Stage::Preflight, "no exceptional component");

    // Labels meeting the risky-set bounds, by resampling.
    let slack = if cfg.strict { 1.0 } else { cfg.slack };
    let outcome = moser_tardos(g, cfg.seed, slack, cfg.max_rounds).expect("parameters checked");
    let labels = match outcome {
        MtOutcome::Success(run) => {
            ctx.trace.mt_rounds = run.rounds;
            run.labels
        }
        MtOutcome::Timeout(run) => {
            ctx.trace.mt_rounds = run.rounds;
            let violated = *run.trajectory.last().unwrap_or(&0);
            ctx.trace.labels = Some(run.labels);
            return ctx.fail(Diagnostic::ClaimBoundsUnachieved {
                rounds: run.rounds,
                violated,
            });
        }
    };
    let cls = classify(g, &labels);
    let bounds = bounds_hold(g, &cls, slack);
    let exponent = exponents(&g.degrees());
    let modulus: Vec<u64> = exponent.iter().map(|&k| 3u64 << (2 * k)).collect();
    let t1: Vec<u64> = (0..g.n())
        .map(|v| (3u64 << exponent[v]) * labels.c1[v] % modulus[v])
        .collect();
    ctx.trace.pass(
        Stage::Labels,
        format!(
            "{} rounds; R1 {}, R2 {}, R3 {}",
            ctx.trace.mt_rounds,
            cls.r1().len(),
            cls.r2().len(),
            cls.r3().len()
        ),
    );
    let in_r =
        |t: RiskType| -> Vec<bool> { (0..g.edge_count()).map(|e| cls.is_in(t, e)).collect() };
    let (r1, r2, r3) = (
        in_r(RiskType::One),
        in_r(RiskType::Two),
        in_r(RiskType::Three),
    );
    ctx.trace.exponent = exponent.clone();
    ctx.trace.modulus = modulus;
    ctx.trace.t1 = t1.clone();
    ctx.trace.labels = Some(labels.clone());
    ctx.trace.bounds = Some(bounds);
    ctx.trace.classification = Some(cls);

    // H1: factor of G' = G - R1 with targets t1.
    let all = vec![true; g.edge_count()];
    let g_prime = mask_not(&all, &r1);
    ctx.trace.g_prime = Some(g_prime.clone());
    let h1 = match ctx.factor(Stage::FirstFactor, &g_prime, &t1) {
        Ok(h) => h,
        Err(d) => return ctx.fail(d),
    };
    ctx.trace.h1 = Some(h1.clone());
    ctx.trace.pass(Stage::FirstFactor, "H1 found");

    // G1 = G - H1; G'' = G1 - (R2 ∪ R3); C = G1 ∩ R3; F = G1 ∩ R2 ∩ R3.
    let g1 = mask_not(&all, &h1);
    let c: Vec<bool> = (0..g.edge_count()).map(|e| g1[e] && r3[e]).collect();
    let f: Vec<bool> = (0..g.edge_count()).map(|e| c[e] && r2[e]).collect();
    let g_second: Vec<bool> = (0..g.edge_count())
        .map(|e| g1[e] && !r2[e] && !r3[e])
        .collect();
    let c_graph = g.edge_subgraph(&c);
    let c_v = c_graph.degrees();
    ctx.trace.g1 = Some(g1);
    ctx.trace.c = Some(c.clone());
    ctx.trace.f = Some(f.clone());
    ctx.trace.g_second = Some(g_second.clone());
    ctx.trace.c_v = c_v.clone();

    // h: proper colouring of F with h(v) <= 2^(k-1) - 1.
    let f_graph = g.edge_subgraph(&f);
    let caps: Vec<usize> = exponent.iter().map(|&k| h_cap(k)).collect();
    let h = match greedy_proper_colouring(&f_graph, &caps) {
        Ok(h) => {
            ctx.trace.h_capped = true;
            ctx.trace.pass(Stage::Colouring, "within caps");
            h
        }
        Err(fail) if cfg.strict => {
            return ctx.fail(Diagnostic::ColouringFailed {
                vertex: fail.vertex,
            })
        }
        Err(fail) => {
            let h = greedy_proper_colouring(&f_graph, &vec![usize::MAX; g.n()])
                .expect("uncapped greedy colouring always succeeds");
            ctx.trace.pass(
                Stage::Colouring,
                format!(
                    "cap exceeded at vertex {}; used uncapped greedy colouring",
                    fail.vertex
                ),
            );
            h
        }
    };
    ctx.trace.h = Some(h.clone());

    // H2: factor of G'' with targets 3·2^k·c2 + 3h - c_v.
    let t2: Vec<u64> = (0..g.n())
        .map(|v| {
            let m = ctx.trace.modulus[v] as i128;
            let raw =
                (3i128 << exponent[v]) * labels.c2[v] as i128 + 3 * h[v] as i128 - c_v[v] as i128;
            raw.rem_euclid(m) as u64
        })
        .collect();
    ctx.trace.t2 = t2.clone();
    let h2 = match ctx.factor(Stage::SecondFactor, &g_second, &t2) {
        Ok(h) => h,
        Err(d) => return ctx.fail(d),
    };
    let h2_prime: Vec<bool> = (0..g.edge_count()).map(|e| h2[e] || c[e]).collect();
    let h3_prime: Vec<bool> = (0..g.edge_count())
        .map(|e| !h1[e] && !h2_prime[e])
        .collect();
    ctx.trace.h2 = Some(h2);
    ctx.trace.h2_prime = Some(h2_prime.clone());
    ctx.trace.h3_prime = Some(h3_prime);
    ctx.trace.pass(Stage::SecondFactor, "H2 found");

    if cfg.strict {
        let bad: Vec<usize> = window_report(g, &ctx.trace)
            .iter()
            .filter(|w| !w.final_window)
            .map(|w| w.vertex)
            .collect();
        if !bad.is_empty() {
            return ctx.fail(Diagnostic::WindowViolation { vertices: bad });
        }
        ctx.trace
            .pass(Stage::Windows, "all part degrees in [4d/37, 2d/3]");
    }

    // Final gate, independent of everything above.
    let colour: Vec<usize> = (0..g.edge_count())
        .map(|e| {
            if h1[e] {
                1
            } else if h2_prime[e] {
                2
            } else {
                3
            }
        })
        .collect();
    let dec = Decomposition::new(3, colour);
    for part in 1..=3 {
        let keep: Vec<bool> = dec.colour.iter().map(|&c| c == part).collect();
        let conflicts = irregular_conflicts(&g.edge_subgraph(&keep));
        if !conflicts.is_empty() {
            return ctx.fail(Diagnostic::PartNotIrregular {
                part,
                edges: conflicts,
            });
        }
    }
    ctx.trace
        .pass(Stage::FinalGate, "all three parts locally irregular");
    PipelineOutcome {
        result: Ok(dec),
        trace: ctx.trace,
    }
}
