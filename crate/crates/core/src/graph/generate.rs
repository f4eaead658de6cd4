//! Deterministic graph generators, including the spider example and the
//! exception family built from a triangle.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// One append operation of the exception family: hang a path of `length`
/// edges at `attach`, optionally closing its far end into a new triangle.
///
/// Even lengths (at least 2) are plain hanging paths; odd lengths must carry a
/// glued triangle. `attach` must currently have degree 2 and lie on a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TStep {
    pub attach: usize,
    pub length: usize,
    pub triangle: bool,
}

/// Graph families understood by [`generate`]. Lengths count edges.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    RandomRegular { n: usize, d: usize, seed: u64 },
    Gnp { n: usize, p: f64, seed: u64 },
    Spider(usize),
    TFamily(Vec<TStep>),
}

pub fn generate(family: &Family) -> Result<Graph, GraphError> {
    match family {
        Family::Path(m) => Ok(path(*m)),
        Family::Cycle(m) => cycle(*m),
        Family::Complete(n) => Ok(complete(*n)),
        Family::CompleteBipartite(a, b) => Ok(complete_bipartite(*a, *b)),
        Family::RandomRegular { n, d, seed } => random_regular(*n, *d, *seed),
        Family::Gnp { n, p, seed } => gnp(*n, *p, *seed),
        Family::Spider(l) => spider(*l),
        Family::TFamily(script) => t_family(script),
    }
}

/// Path with `m` edges on `m + 1` vertices.
pub fn path(m: usize) -> Graph {
    Graph::from_sorted_unchecked(m + 1, (0..m).map(|i| (i, i + 1)).collect())
}

/// Cycle with `m` edges. `m = 0` gives the null graph; 1 and 2 are not simple.
pub fn cycle(m: usize) -> Result<Graph, GraphError> {
    match m {
        0 => Ok(Graph::empty(0)),
        1 | 2 => Err(GraphError::InvalidParameters(format!(
            "a simple cycle needs at least 3 edges, got {m}"
        ))),
        _ => Graph::from_edges(m, (0..m).map(|i| (i, (i + 1) % m))),
    }
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_sorted_unchecked(n, edges)
}

/// K_{a,b} with the `a` side on vertices `0..a`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a)
        .flat_map(|u| (a..a + b).map(move |v| (u, v)))
        .collect();
    Graph::from_sorted_unchecked(a + b, edges)
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    complete_bipartite(1, leaves)
}

/// An edge `0-1` with two hanging paths of even length `l` at each end.
pub fn spider(l: usize) -> Result<Graph, GraphError> {
    if l < 2 || !l.is_multiple_of(2) {
        return Err(GraphError::InvalidParameters(format!(
            "spider legs must have even length >= 2, got {l}"
        )));
    }
    let mut edges = vec![(0, 1)];
    let mut next = 2;
    for root in [0, 0, 1, 1] {
        let mut prev = root;
        for _ in 0..l {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Graph::from_edges(next, edges)
}

/// G(n, p): each pair independently with probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameters(format!(
            "edge probability must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_sorted_unchecked(n, edges))
}

const REGULAR_RESTARTS: usize = 1000;

/// Uniform-ish random `d`-regular graph on `n` vertices.
///
/// Pairing model with incremental rejection (Steger–Wormald): points are paired
/// one at a time among pairs that keep the graph simple, restarting when the
/// remaining points admit no valid pair.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if !(n * d).is_multiple_of(2) {
        return Err(GraphError::InvalidParameters(format!(
            "n*d must be even, got n={n}, d={d}"
        )));
    }
    if d > 0 && d >= n {
        return Err(GraphError::InvalidParameters(format!(
            "degree {d} needs more than {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REGULAR_RESTARTS {
        if let Some(edges) = try_pairing(n, d, &mut rng) {
            return Graph::from_edges(n, edges);
        }
    }
    Err(GraphError::InvalidParameters(format!(
        "pairing model did not produce a simple {d}-regular graph on {n} vertices"
    )))
}

fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
    let mut edges = Vec::with_capacity(n * d / 2);
    while !points.is_empty() {
        let len = points.len();
        let mut chosen = None;
        for _ in 0..4 * len {
            let i = rng.gen_range(0..len);
            let j = rng.gen_range(0..len);
            let (u, v) = (points[i], points[j]);
            if i != j && u != v && !present.contains(&(u.min(v), u.max(v))) {
                chosen = Some((i, j));
                break;
            }
        }
        let (i, j) = match chosen {
            Some(p) => p,
            None => {
                // Rejection stalled: pick uniformly among the valid pairs, if any.
                let valid: Vec<(usize, usize)> = (0..len)
                    .flat_map(|i| (i + 1..len).map(move |j| (i, j)))
                    .filter(|&(i, j)| {
                        let (u, v) = (points[i], points[j]);
                        u != v && !present.contains(&(u.min(v), u.max(v)))
                    })
                    .collect();
                if valid.is_empty() {
                    return None;
                }
                valid[rng.gen_range(0..valid.len())]
            }
        };
        let (u, v) = (points[i], points[j]);
        present.insert((u.min(v), u.max(v)));
        edges.push((u.min(v), u.max(v)));
        let (hi, lo) = (i.max(j), i.min(j));
        points.swap_remove(hi);
        points.swap_remove(lo);
    }
    Some(edges)
}

/// Member of the exception family obtained from a triangle on `{0, 1, 2}` by
/// applying `script` in order. New vertices are numbered consecutively.
pub fn t_family(script: &[TStep]) -> Result<Graph, GraphError> {
    let mut g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])?;
    for (i, step) in script.iter().enumerate() {
        g = apply_t_step(&g, step).map_err(|reason| GraphError::IllegalStep { step: i, reason })?;
    }
    Ok(g)
}

fn apply_t_step(g: &Graph, step: &TStep) -> Result<Graph, String> {
    let TStep {
        attach,
        length,
        triangle,
    } = *step;
    if attach >= g.n() {
        return Err(format!("attach vertex {attach} does not exist"));
    }
    if g.degree(attach) != 2 {
        return Err(format!(
            "attach vertex {attach} has degree {}, expected 2",
            g.degree(attach)
        ));
    }
    if !g.on_triangle(attach) {
        return Err(format!("attach vertex {attach} is not on a triangle"));
    }
    match (triangle, length % 2) {
        (false, 0) if length >= 2 => {}
        (false, _) => {
            return Err(format!(
                "hanging path must have even length >= 2, got {length}"
            ))
        }
        (true, 1) => {}
        (true, _) => {
            return Err(format!(
                "path ending in a triangle must have odd length, got {length}"
            ))
        }
    }
    let mut edges = g.edges().to_vec();
    let mut n = g.n();
    let mut prev = attach;
    for _ in 0..length {
        edges.push((prev, n));
        prev = n;
        n += 1;
    }
    if triangle {
        let (a, b) = (n, n + 1);
        edges.extend([(prev, a), (prev, b), (a, b)]);
        n += 2;
    }
    Graph::from_edges(n, edges).map_err(|e| e.to_string())
}
