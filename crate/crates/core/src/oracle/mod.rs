//! Exact minimum number of locally irregular parts on small graphs, and
//! sweeps over enumerated families.

mod search;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{
    canonical_form, cycle, is_locally_irregular_decomposition, path, recognize_exception, t_family,
    CanonicalForm, Decomposition, ExceptionClass, Graph, TStep,
};
use search::{bfs_edge_order, colour_with, Search};

pub const DEFAULT_EDGE_LIMIT: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub edge_limit: usize,
    /// Cap on colour assignments tried across all `k`; `None` for no cap.
    pub node_limit: Option<u64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            edge_limit: DEFAULT_EDGE_LIMIT,
            node_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {edges} edges, above the oracle limit of {limit}")]
    TooManyEdges { edges: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Least `k <= k_max` admitting a decomposition.
    pub feasible_k: Option<usize>,
    pub witness: Option<Decomposition>,
    /// Every smaller `k` (all `k <= k_max` when infeasible) was ruled out by
    /// complete search. False only when the node limit cut the search short.
    pub exhausted: bool,
    pub nodes_explored: u64,
}

impl OracleResult {
    /// `{"k": int|null, "witness": colour map|null, "exhausted": bool, "nodes_explored": int}`.
    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "k": self.feasible_k,
            "witness": self.witness.as_ref().map(|w| w.to_json(g)["colour"].clone()),
            "exhausted": self.exhausted,
            "nodes_explored": self.nodes_explored,
        })
    }
}

pub fn min_parts(g: &Graph, k_max: usize) -> Result<OracleResult, OracleError> {
    min_parts_with(g, k_max, &OracleConfig::default())
}

/// Iterative deepening over `k = 1, 2, ...`. Searching beyond `|E|` colours
/// is pointless, so `k_max` is capped there.
pub fn min_parts_with(
    g: &Graph,
    k_max: usize,
    cfg: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    let edges = g.edge_count();
    if edges > cfg.edge_limit {
        return Err(OracleError::TooManyEdges {
            edges,
            limit: cfg.edge_limit,
        });
    }
    let order = bfs_edge_order(g);
    let limit = cfg.node_limit.unwrap_or(u64::MAX);
    let mut nodes = 0;
    for k in 1..=k_max.min(edges.max(1)) {
        match colour_with(g, k, &order, limit, &mut nodes) {
            Search::Found(colour) => {
                let witness = Decomposition::new(k, colour);
                debug_assert!(is_locally_irregular_decomposition(g, &witness).unwrap());
                return Ok(OracleResult {
                    feasible_k: Some(k),
                    witness: Some(witness),
                    exhausted: true,
                    nodes_explored: nodes,
                });
            }
            Search::Infeasible => {}
            Search::OutOfNodes => {
                return Ok(OracleResult {
                    feasible_k: None,
                    witness: None,
                    exhausted: false,
                    nodes_explored: nodes,
                })
            }
        }
    }
    Ok(OracleResult {
        feasible_k: None,
        witness: None,
        exhausted: true,
        nodes_explored: nodes,
    })
}

/// Whether a decomposition into exactly `k` colours exists, by direct search.
pub fn feasible_at(g: &Graph, k: usize, cfg: &OracleConfig) -> Result<Option<bool>, OracleError> {
    if g.edge_count() > cfg.edge_limit {
        return Err(OracleError::TooManyEdges {
            edges: g.edge_count(),
            limit: cfg.edge_limit,
        });
    }
    let order = bfs_edge_order(g);
    Ok(
        match colour_with(g, k, &order, cfg.node_limit.unwrap_or(u64::MAX), &mut 0) {
            Search::Found(_) => Some(true),
            Search::Infeasible => Some(false),
            Search::OutOfNodes => None,
        },
    )
}

/// One representative per isomorphism class of connected graphs on
/// `2..=max_vertices` vertices, ordered by vertex count, then canonical form.
pub fn connected_graphs(max_vertices: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 2..=max_vertices {
        let mut level: BTreeSet<CanonicalForm> = BTreeSet::from([canonical_form(&Graph::empty(n))]);
        let mut all = Vec::new();
        while !level.is_empty() {
            all.extend(level.iter().cloned());
            level = level
                .par_iter()
                .flat_map_iter(|form| {
                    let g = form.to_graph();
                    let mut next = Vec::new();
                    for u in 0..n {
                        for v in u + 1..n {
                            if !g.has_edge(u, v) {
                                let mut edges = g.edges().to_vec();
                                edges.push((u, v));
                                let h = Graph::from_edges(n, edges).expect("non-edge added");
                                next.push(canonical_form(&h));
                            }
                        }
                    }
                    next
                })
                .collect();
        }
        all.sort();
        out.extend(
            all.into_iter()
                .map(|f| f.to_graph())
                .filter(|g| g.is_connected()),
        );
    }
    out
}

/// Every member of the triangle-built exception family with at most
/// `max_edges` edges, one per isomorphism class.
pub fn t_family_members(max_edges: usize) -> Vec<Graph> {
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut frontier: Vec<Vec<TStep>> = vec![Vec::new()];
    let mut out = Vec::new();
    while let Some(script) = frontier.pop() {
        let g = t_family(&script).expect("scripts are built from legal steps");
        if g.edge_count() > max_edges || !seen.insert(canonical_form(&g)) {
            continue;
        }
        let spare = max_edges - g.edge_count();
        for attach in (0..g.n()).filter(|&v| g.degree(v) == 2 && g.on_triangle(v)) {
            for length in (2..=spare).step_by(2) {
                frontier.push(extend(&script, attach, length, false));
            }
            for length in (1..=spare.saturating_sub(3)).step_by(2) {
                frontier.push(extend(&script, attach, length, true));
            }
        }
        out.push(g);
    }
    out.sort_by_key(|g| (g.edge_count(), canonical_form(g)));
    out
}

fn extend(script: &[TStep], attach: usize, length: usize, triangle: bool) -> Vec<TStep> {
    let mut s = script.to_vec();
    s.push(TStep {
        attach,
        length,
        triangle,
    });
    s
}

/// Oracle results over `graphs` with `k_max`, computed in parallel and
/// returned in input order.
pub fn sweep(
    graphs: &[Graph],
    k_max: usize,
    cfg: &OracleConfig,
) -> Vec<Result<OracleResult, OracleError>> {
    graphs
        .par_iter()
        .map(|g| min_parts_with(g, k_max, cfg))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionCheck {
    pub class: ExceptionClass,
    pub vertices: usize,
    pub edges: usize,
    pub infeasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionReport {
    pub exceptions: Vec<ExceptionCheck>,
    pub others_checked: usize,
    /// Connected graphs skipped for exceeding the edge limit.
    pub others_over_limit: usize,
    /// Edge lists of connected non-exceptions found infeasible.
    pub others_infeasible: Vec<Vec<(usize, usize)>>,
    /// Largest least `k` seen among the non-exceptions.
    pub max_feasible_k: usize,
    /// Feasible at `k` implied feasible at `k + 1` on every swept graph.
    pub monotone: bool,
    /// Infeasible exactly when the recognizer reports an exception, over the
    /// whole connected sweep.
    pub agreement: bool,
    pub all_hold: bool,
}

/// Checks odd paths, odd cycles and family members with at most `max_edges`
/// edges for infeasibility, and every other connected graph on at most
/// `max_vertices` vertices (within the edge limit) for feasibility.
pub fn exceptions_never_decompose(
    max_edges: usize,
    max_vertices: usize,
    cfg: &OracleConfig,
) -> ExceptionReport {
    let mut listed: Vec<(ExceptionClass, Graph)> = Vec::new();
    for m in (1..=max_edges).step_by(2) {
        listed.push((ExceptionClass::OddPath, path(m)));
    }
    for m in (3..=max_edges).step_by(2) {
        listed.push((ExceptionClass::OddCycle, cycle(m).expect("m >= 3")));
    }
    listed.extend(
        t_family_members(max_edges)
            .into_iter()
            .map(|g| (ExceptionClass::TFamily, g)),
    );
    let exceptions: Vec<ExceptionCheck> = listed
        .par_iter()
        .map(|(class, g)| ExceptionCheck {
            class: *class,
            vertices: g.n(),
            edges: g.edge_count(),
            infeasible: matches!(
                min_parts_with(g, g.edge_count(), cfg),
                Ok(OracleResult {
                    feasible_k: None,
                    exhausted: true,
                    ..
                })
            ),
        })
        .collect();

    let (graphs, over): (Vec<Graph>, Vec<Graph>) = connected_graphs(max_vertices)
        .into_iter()
        .partition(|g| g.edge_count() <= cfg.edge_limit);
    let rows: Vec<(ExceptionClass, OracleResult, Option<bool>)> = graphs
        .par_iter()
        .map(|g| {
            let class = recognize_exception(g).expect("connected");
            let r = min_parts_with(g, g.edge_count(), cfg).expect("within limit");
            let next = r
                .feasible_k
                .filter(|&k| k < g.edge_count())
                .and_then(|k| feasible_at(g, k + 1, cfg).expect("within limit"));
            (class, r, next)
        })
        .collect();
    let mut others_checked = 0;
    let mut others_infeasible = Vec::new();
    let mut max_feasible_k = 0;
    let mut monotone = true;
    let mut agreement = true;
    for (g, (class, r, next)) in graphs.iter().zip(&rows) {
        let infeasible = r.feasible_k.is_none();
        agreement &= r.exhausted && infeasible == (*class != ExceptionClass::None);
        monotone &= r
            .feasible_k
            .is_none_or(|k| k == g.edge_count() || *next == Some(true));
        if *class == ExceptionClass::None {
            others_checked += 1;
            match r.feasible_k {
                Some(k) => max_feasible_k = max_feasible_k.max(k),
                None => others_infeasible.push(g.edges().to_vec()),
            }
        }
    }
    let all_hold = exceptions.iter().all(|e| e.infeasible)
        && others_infeasible.is_empty()
        && monotone
        && agreement;
    ExceptionReport {
        exceptions,
        others_checked,
        others_over_limit: over.len(),
        others_infeasible,
        max_feasible_k,
        monotone,
        agreement,
        all_hold,
    }
}
