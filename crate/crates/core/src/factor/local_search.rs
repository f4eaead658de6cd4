//! Penalty local search over edge subsets.
//!
//! The penalty of a vertex is the distance from its current degree to its
//! allowed set. Each step picks a random unhappy vertex and flips its best
//! incident edge (ties broken at random, sideways and uphill moves allowed),
//! or a random incident edge with small probability. The search restarts from
//! a fresh random subset when it stalls; restart `i` draws from stream `i` of
//! the seeded generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DegreeTargetSpec, FactorError, FactorSolution};
use crate::graph::Graph;

const NOISE: f64 = 0.05;

struct State<'a> {
    g: &'a Graph,
    spec: &'a DegreeTargetSpec,
    keep: Vec<bool>,
    deg: Vec<usize>,
    unhappy: Vec<usize>,
    slot: Vec<usize>,
    penalty: usize,
}

impl<'a> State<'a> {
    fn new(g: &'a Graph, spec: &'a DegreeTargetSpec, keep: Vec<bool>) -> Self {
        let mut deg = vec![0; g.n()];
        for (e, &k) in keep.iter().enumerate() {
            if k {
                let (u, v) = g.edge(e);
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        let mut s = Self {
            g,
            spec,
            keep,
            deg,
            unhappy: Vec::new(),
            slot: vec![usize::MAX; g.n()],
            penalty: 0,
        };
        for v in 0..g.n() {
            let p = spec.distance(v, s.deg[v]);
            s.penalty += p;
            if p > 0 {
                s.mark(v, true);
            }
        }
        s
    }

    fn mark(&mut self, v: usize, unhappy: bool) {
        let present = self.slot[v] != usize::MAX;
        if unhappy && !present {
            self.slot[v] = self.unhappy.len();
            self.unhappy.push(v);
        } else if !unhappy && present {
            let i = self.slot[v];
            let last = *self.unhappy.last().unwrap();
            self.unhappy.swap_remove(i);
            if last != v {
                self.slot[last] = i;
            }
            self.slot[v] = usize::MAX;
        }
    }

    fn delta(&self, e: usize) -> isize {
        let (u, v) = self.g.edge(e);
        let step: isize = if self.keep[e] { -1 } else { 1 };
        [u, v]
            .iter()
            .map(|&w| {
                let now = self.spec.distance(w, self.deg[w]) as isize;
                let next = self
                    .spec
                    .distance(w, (self.deg[w] as isize + step) as usize)
                    as isize;
                next - now
            })
            .sum()
    }

    fn flip(&mut self, e: usize) {
        let (u, v) = self.g.edge(e);
        self.keep[e] = !self.keep[e];
        for w in [u, v] {
            let before = self.spec.distance(w, self.deg[w]);
            if self.keep[e] {
                self.deg[w] += 1;
            } else {
                self.deg[w] -= 1;
            }
            let after = self.spec.distance(w, self.deg[w]);
            self.penalty = self.penalty + after - before;
            self.mark(w, after > 0);
        }
    }
}

pub(super) fn solve(
    g: &Graph,
    spec: &DegreeTargetSpec,
    budget: u64,
    seed: u64,
) -> Result<FactorSolution, FactorError> {
    let stall_limit = 50 * (g.edge_count() as u64 + 1);
    let mut spent = 0u64;
    let mut restart = 0u64;
    let mut state = State::new(g, spec, vec![false; g.edge_count()]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut best = state.penalty;
        let mut since_best = 0u64;
        while state.penalty > 0 {
            if spent >= budget {
                return Err(FactorError::BudgetExhausted { spent });
            }
            if since_best >= stall_limit {
                break;
            }
            let v = state.unhappy[rng.gen_range(0..state.unhappy.len())];
            let incident = g.incident(v);
            let e = if rng.gen_bool(NOISE) {
                incident[rng.gen_range(0..incident.len())].1
            } else {
                let mut chosen = incident[0].1;
                let mut best_delta = isize::MAX;
                let mut ties = 0u32;
                for &(_, e) in incident {
                    let d = state.delta(e);
                    if d < best_delta {
                        best_delta = d;
                        chosen = e;
                        ties = 1;
                    } else if d == best_delta {
                        ties += 1;
                        if rng.gen_range(0..ties) == 0 {
                            chosen = e;
                        }
                    }
                }
                chosen
            };
            state.flip(e);
            spent += 1;
            if state.penalty < best {
                best = state.penalty;
                since_best = 0;
            } else {
                since_best += 1;
            }
        }
        if state.penalty == 0 {
            return Ok(FactorSolution {
                keep: state.keep,
                spent,
            });
        }
        restart += 1;
        rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart);
        let keep = (0..g.edge_count()).map(|_| rng.gen_bool(0.5)).collect();
        state = State::new(g, spec, keep);
    }
}
