//! Depth-first search over edges with forced-move propagation.
//!
//! A vertex with current degree `x` and `r` undecided incident edges can
//! still reach any allowed value in `[x, x + r]`. When none is left the
//! branch is cut; when only `x` (or only `x + r`) is left, the remaining
//! edges at that vertex are forced out (or in).

use super::{DegreeTargetSpec, FactorError, FactorSolution};
use crate::graph::Graph;

const UNDECIDED: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

struct Search<'a> {
    g: &'a Graph,
    spec: &'a DegreeTargetSpec,
    state: Vec<u8>,
    deg: Vec<usize>,
    rem: Vec<usize>,
    trail: Vec<usize>,
    queue: Vec<usize>,
}

struct Decision {
    edge: usize,
    alternative: u8,
    mark: usize,
    tried: bool,
}

enum Reach {
    Conflict,
    ForceOut,
    ForceIn,
    Free { options: usize, lowest: usize },
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, spec: &'a DegreeTargetSpec) -> Self {
        Self {
            g,
            spec,
            state: vec![UNDECIDED; g.edge_count()],
            deg: vec![0; g.n()],
            rem: g.degrees(),
            trail: Vec::new(),
            queue: Vec::new(),
        }
    }

    fn reach(&self, v: usize) -> Reach {
        let set = self.spec.allowed(v);
        let (x, r) = (self.deg[v], self.rem[v]);
        let lo = set.partition_point(|&a| a < x);
        let hi = set.partition_point(|&a| a <= x + r);
        if lo == hi {
            return Reach::Conflict;
        }
        if r > 0 && set[hi - 1] == x {
            Reach::ForceOut
        } else if r > 0 && set[lo] == x + r {
            Reach::ForceIn
        } else {
            Reach::Free {
                options: hi - lo,
                lowest: set[lo],
            }
        }
    }

    fn assign(&mut self, e: usize, value: u8) {
        debug_assert_eq!(self.state[e], UNDECIDED);
        self.state[e] = value;
        self.trail.push(e);
        let (u, v) = self.g.edge(e);
        for w in [u, v] {
            self.rem[w] -= 1;
            if value == IN {
                self.deg[w] += 1;
            }
            self.queue.push(w);
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().unwrap();
            let (u, v) = self.g.edge(e);
            for w in [u, v] {
                self.rem[w] += 1;
                if self.state[e] == IN {
                    self.deg[w] -= 1;
                }
            }
            self.state[e] = UNDECIDED;
        }
        self.queue.clear();
    }

    fn propagate(&mut self) -> bool {
        while let Some(v) = self.queue.pop() {
            let forced = match self.reach(v) {
                Reach::Conflict => {
                    self.queue.clear();
                    return false;
                }
                Reach::ForceOut => OUT,
                Reach::ForceIn => IN,
                Reach::Free { .. } => continue,
            };
            for i in 0..self.g.incident(v).len() {
                let e = self.g.incident(v)[i].1;
                if self.state[e] == UNDECIDED {
                    self.assign(e, forced);
                }
            }
        }
        true
    }

    /// Most constrained vertex with undecided edges, then one of its edges and
    /// the value to try first.
    fn branch(&self) -> Option<(usize, u8)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.g.n() {
            if self.rem[v] == 0 {
                continue;
            }
            if let Reach::Free { options, .. } = self.reach(v) {
                let key = (options, self.rem[v], v);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let (_, _, v) = best?;
        let &(u, e) = self
            .g
            .incident(v)
            .iter()
            .find(|&&(_, e)| self.state[e] == UNDECIDED)
            .expect("vertex has undecided edges");
        let needs = |w: usize| match self.reach(w) {
            Reach::Free { lowest, .. } => lowest > self.deg[w],
            Reach::ForceIn => true,
            _ => false,
        };
        let first = if needs(v) || needs(u) { IN } else { OUT };
        Some((e, first))
    }
}

pub(super) fn solve(
    g: &Graph,
    spec: &DegreeTargetSpec,
    budget: Option<u64>,
) -> Result<FactorSolution, FactorError> {
    let mut s = Search::new(g, spec);
    s.queue.extend(0..g.n());
    if !s.propagate() {
        return Err(FactorError::Infeasible { nodes: 0 });
    }
    let mut stack: Vec<Decision> = Vec::new();
    let mut nodes: u64 = 0;
    let limit = budget.unwrap_or(u64::MAX);
    loop {
        let Some((edge, first)) = s.branch() else {
            let keep = s.state.iter().map(|&x| x == IN).collect();
            return Ok(FactorSolution { keep, spent: nodes });
        };
        if nodes >= limit {
            return Err(FactorError::BudgetExhausted { spent: nodes });
        }
        nodes += 1;
        stack.push(Decision {
            edge,
            alternative: if first == IN { OUT } else { IN },
            mark: s.trail.len(),
            tried: false,
        });
        s.assign(edge, first);
        if s.propagate() {
            continue;
        }
        // Backtrack to the deepest decision with an untried alternative.
        loop {
            let Some(top) = stack.last_mut() else {
                return Err(FactorError::Infeasible { nodes });
            };
            if top.tried {
                let mark = top.mark;
                stack.pop();
                s.undo_to(mark);
                continue;
            }
            if nodes >= limit {
                return Err(FactorError::BudgetExhausted { spent: nodes });
            }
            nodes += 1;
            top.tried = true;
            let (edge, value, mark) = (top.edge, top.alternative, top.mark);
            s.undo_to(mark);
            s.assign(edge, value);
            if s.propagate() {
                break;
            }
        }
    }
}
