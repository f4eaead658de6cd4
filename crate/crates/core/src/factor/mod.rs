//! Spanning subgraphs with prescribed degree sets.
//!
//! Two target forms are supported: explicit allowed-degree sets (including
//! the four-value sets `{a⁻, a⁻+1, a⁺, a⁺+1}`), and modular targets
//! `d_H(v) ≡ t(v) or t(v)+1 (mod λ_v)` with `d_H(v) ∈ [d(v)/3, 2d(v)/3]`.
//! Every returned subgraph is verified before it leaves this module.

mod exact;
mod local_search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("malformed spec: {0}")]
    MalformedSpec(String),
    #[error("6·lambda <= d fails at vertices {vertices:?}")]
    Precondition { vertices: Vec<usize> },
    #[error("no subgraph exists (exhaustive search, {nodes} nodes)")]
    Infeasible { nodes: u64 },
    #[error("search budget exhausted after {spent} steps")]
    BudgetExhausted { spent: u64 },
    #[error("candidate is not a spanning subgraph of the host graph")]
    NotASubgraph,
    #[error("solver output failed verification at vertices {vertices:?}")]
    VerificationFailed { vertices: Vec<usize> },
}

/// Per-vertex sets of allowed degrees, each sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeTargetSpec {
    allowed: Vec<Vec<usize>>,
}

impl DegreeTargetSpec {
    /// Checks that every set is a nonempty subset of `0..=d(v)`.
    pub fn explicit(g: &Graph, allowed: Vec<Vec<usize>>) -> Result<Self, FactorError> {
        if allowed.len() != g.n() {
            return Err(FactorError::MalformedSpec(format!(
                "{} allowed sets for {} vertices",
                allowed.len(),
                g.n()
            )));
        }
        let mut sets = Vec::with_capacity(g.n());
        for (v, mut set) in allowed.into_iter().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(FactorError::MalformedSpec(format!(
                    "vertex {v}: empty allowed set"
                )));
            }
            if *set.last().unwrap() > g.degree(v) {
                return Err(FactorError::MalformedSpec(format!(
                    "vertex {v}: allowed degree {} exceeds d(v) = {}",
                    set.last().unwrap(),
                    g.degree(v)
                )));
            }
            sets.push(set);
        }
        Ok(Self { allowed: sets })
    }

    /// `{a⁻, a⁻+1, a⁺, a⁺+1} ∩ [0, d(v)]`, with `a⁻ ∈ [d/3 - 1, d/2]` and
    /// `a⁺ ∈ [d/2 - 1, 2d/3]`.
    pub fn from_pairs(g: &Graph, pairs: &[(i64, i64)]) -> Result<Self, FactorError> {
        if pairs.len() != g.n() {
            return Err(FactorError::MalformedSpec(format!(
                "{} pairs for {} vertices",
                pairs.len(),
                g.n()
            )));
        }
        let mut allowed = Vec::with_capacity(g.n());
        for (v, &(lo, hi)) in pairs.iter().enumerate() {
            let d = g.degree(v) as i64;
            if !(3 * lo >= d - 3 && 2 * lo <= d) {
                return Err(FactorError::MalformedSpec(format!(
                    "vertex {v}: a- = {lo} outside [d/3 - 1, d/2] for d = {d}"
                )));
            }
            if !(2 * hi >= d - 2 && 3 * hi <= 2 * d) {
                return Err(FactorError::MalformedSpec(format!(
                    "vertex {v}: a+ = {hi} outside [d/2 - 1, 2d/3] for d = {d}"
                )));
            }
            let set: Vec<usize> = [lo, lo + 1, hi, hi + 1]
                .into_iter()
                .filter(|&x| (0..=d).contains(&x))
                .map(|x| x as usize)
                .collect();
            if set.is_empty() {
                return Err(FactorError::MalformedSpec(format!(
                    "vertex {v}: empty allowed set"
                )));
            }
            allowed.push(set);
        }
        Self::explicit(g, allowed)
    }

    pub fn allowed(&self, v: usize) -> &[usize] {
        &self.allowed[v]
    }

    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    /// `{"allowed": {"v": [values], ...}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, &Vec<usize>> = self
            .allowed
            .iter()
            .enumerate()
            .map(|(v, s)| (v.to_string(), s))
            .collect();
        serde_json::json!({ "allowed": map })
    }

    pub fn from_json(g: &Graph, value: &serde_json::Value) -> Result<Self, FactorError> {
        #[derive(Deserialize)]
        struct Raw {
            allowed: BTreeMap<String, Vec<usize>>,
        }
        let raw: Raw = serde_json::from_value(value.clone())
            .map_err(|e| FactorError::MalformedSpec(e.to_string()))?;
        let mut allowed = vec![Vec::new(); g.n()];
        for (key, set) in raw.allowed {
            let v: usize = key
                .parse()
                .map_err(|_| FactorError::MalformedSpec(format!("bad vertex key {key:?}")))?;
            if v >= g.n() {
                return Err(FactorError::MalformedSpec(format!(
                    "vertex {v} out of range"
                )));
            }
            allowed[v] = set;
        }
        Self::explicit(g, allowed)
    }

    /// Distance from `x` to the allowed set of `v`.
    pub(crate) fn distance(&self, v: usize, x: usize) -> usize {
        let set = &self.allowed[v];
        let i = set.partition_point(|&a| a < x);
        let above = set.get(i).map_or(usize::MAX, |&a| a - x);
        let below = if i > 0 { x - set[i - 1] } else { usize::MAX };
        above.min(below)
    }
}

/// Targets `t(v)` and moduli `λ_v`. Serializes as `{"t": [..], "lambda": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularTargetSpec {
    pub t: Vec<i64>,
    pub lambda: Vec<u64>,
}

impl ModularTargetSpec {
    pub fn validate(&self, g: &Graph) -> Result<(), FactorError> {
        if self.t.len() != g.n() || self.lambda.len() != g.n() {
            return Err(FactorError::MalformedSpec(format!(
                "expected {} targets and moduli, got {} and {}",
                g.n(),
                self.t.len(),
                self.lambda.len()
            )));
        }
        if let Some(v) = self.lambda.iter().position(|&l| l == 0) {
            return Err(FactorError::MalformedSpec(format!(
                "vertex {v}: lambda must be positive"
            )));
        }
        let vertices: Vec<usize> = (0..g.n())
            .filter(|&v| 6 * self.lambda[v] > g.degree(v) as u64)
            .collect();
        if vertices.is_empty() {
            Ok(())
        } else {
            Err(FactorError::Precondition { vertices })
        }
    }
}

/// A per-vertex degree contract checked by [`verify_factor`].
pub trait DegreeContract {
    fn admits(&self, g: &Graph, v: usize, degree: usize) -> bool;
}

impl DegreeContract for DegreeTargetSpec {
    fn admits(&self, _g: &Graph, v: usize, degree: usize) -> bool {
        self.allowed[v].binary_search(&degree).is_ok()
    }
}

impl DegreeContract for ModularTargetSpec {
    /// `d(v)/3 <= x <= 2d(v)/3` and `x - t(v) ≡ 0 or 1 (mod λ_v)`.
    fn admits(&self, g: &Graph, v: usize, x: usize) -> bool {
        let d = g.degree(v);
        let residue = (x as i64 - self.t[v]).rem_euclid(self.lambda[v] as i64);
        3 * x >= d && 3 * x <= 2 * d && (residue == 0 || residue == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub ok: bool,
    /// `(vertex, d_H(vertex))` for every vertex outside its contract.
    pub violations: Vec<(usize, usize)>,
}

/// Checks that `h` is a spanning subgraph of `g` meeting `contract` everywhere.
pub fn verify_factor(
    g: &Graph,
    h: &Graph,
    contract: &dyn DegreeContract,
) -> Result<FactorReport, FactorError> {
    if h.n() != g.n() || !g.contains_subgraph(h) {
        return Err(FactorError::NotASubgraph);
    }
    let violations: Vec<(usize, usize)> = (0..g.n())
        .map(|v| (v, h.degree(v)))
        .filter(|&(v, x)| !contract.admits(g, v, x))
        .collect();
    Ok(FactorReport {
        ok: violations.is_empty(),
        violations,
    })
}

/// Window sizes used to choose targets: `⌊d/2⌋ - ⌊d/3⌋ >= λ` and
/// `⌊2d/3⌋ - ⌊d/2⌋ >= λ`.
pub fn window_cardinality_holds(d: u64, lambda: u64) -> bool {
    d / 2 - d / 3 >= lambda && 2 * d / 3 - d / 2 >= lambda
}

fn least_congruent(lo: u64, hi: u64, t: i64, lambda: u64) -> Option<u64> {
    if lo > hi {
        return None;
    }
    let shift = (t - lo as i64).rem_euclid(lambda as i64) as u64;
    let x = lo + shift;
    (x <= hi).then_some(x)
}

/// For each vertex the least `a⁻ ∈ {⌊d/3⌋+1, ..., ⌊d/2⌋}` and least
/// `a⁺ ∈ {⌊d/2⌋, ..., ⌊2d/3⌋-1}` congruent to `t(v)` modulo `λ_v`.
pub fn choose_window_targets(
    g: &Graph,
    spec: &ModularTargetSpec,
) -> Result<Vec<(u64, u64)>, FactorError> {
    spec.validate(g)?;
    (0..g.n())
        .map(|v| {
            let d = g.degree(v) as u64;
            let (t, l) = (spec.t[v], spec.lambda[v]);
            let lo = least_congruent(d / 3 + 1, d / 2, t, l);
            let hi = least_congruent(d / 2, (2 * d / 3).saturating_sub(1), t, l);
            match (lo, hi) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(FactorError::Precondition { vertices: vec![v] }),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub mode: SolveMode,
    /// Exact mode: search-node cap (`None` for unlimited). Heuristic mode:
    /// edge-flip cap (`None` for [`SolveOptions::DEFAULT_FLIPS`]).
    pub budget: Option<u64>,
    /// Seed for heuristic restarts.
    pub seed: u64,
}

impl SolveOptions {
    pub const DEFAULT_FLIPS: u64 = 2_000_000;

    pub fn exact() -> Self {
        Self {
            mode: SolveMode::Exact,
            budget: None,
            seed: 0,
        }
    }

    pub fn heuristic(seed: u64) -> Self {
        Self {
            mode: SolveMode::Heuristic,
            budget: None,
            seed,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSolution {
    /// Edge mask over the host graph's edge ids.
    pub keep: Vec<bool>,
    /// Search nodes (exact) or edge flips (heuristic) spent.
    pub spent: u64,
}

impl FactorSolution {
    pub fn subgraph(&self, g: &Graph) -> Graph {
        g.edge_subgraph(&self.keep)
    }
}

/// A spanning subgraph with every degree in its allowed set. The result is
/// verified before it is returned.
pub fn find_degree_set_subgraph(
    g: &Graph,
    spec: &DegreeTargetSpec,
    opts: &SolveOptions,
) -> Result<FactorSolution, FactorError> {
    if spec.len() != g.n() {
        return Err(FactorError::MalformedSpec(format!(
            "spec covers {} vertices, graph has {}",
            spec.len(),
            g.n()
        )));
    }
    let solution = match opts.mode {
        SolveMode::Exact => exact::solve(g, spec, opts.budget)?,
        SolveMode::Heuristic => local_search::solve(
            g,
            spec,
            opts.budget.unwrap_or(SolveOptions::DEFAULT_FLIPS),
            opts.seed,
        )?,
    };
    let report = verify_factor(g, &solution.subgraph(g), spec)?;
    if !report.ok {
        return Err(FactorError::VerificationFailed {
            vertices: report.violations.iter().map(|&(v, _)| v).collect(),
        });
    }
    Ok(solution)
}

/// A spanning subgraph with `d_H(v) ∈ [d(v)/3, 2d(v)/3]` and
/// `d_H(v) ≡ t(v) or t(v)+1 (mod λ_v)`, through window targets.
pub fn find_modular_subgraph(
    g: &Graph,
    spec: &ModularTargetSpec,
    opts: &SolveOptions,
) -> Result<FactorSolution, FactorError> {
    let pairs: Vec<(i64, i64)> = choose_window_targets(g, spec)?
        .into_iter()
        .map(|(a, b)| (a as i64, b as i64))
        .collect();
    let degree_spec = DegreeTargetSpec::from_pairs(g, &pairs)?;
    let solution = find_degree_set_subgraph(g, &degree_spec, opts)?;
    let report = verify_factor(g, &solution.subgraph(g), spec)?;
    if !report.ok {
        return Err(FactorError::VerificationFailed {
            vertices: report.violations.iter().map(|&(v, _)| v).collect(),
        });
    }
    Ok(solution)
}
