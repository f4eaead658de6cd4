//! Backtracking over edge colourings with a fixed number of colours.
//!
//! Edges are visited in BFS order so vertices become complete (all incident
//! edges coloured) early. Once both ends of an edge are complete their class
//! degrees are final, and an equal pair can never be repaired.

use std::collections::VecDeque;

use crate::graph::Graph;

pub(super) enum Search {
    Found(Vec<usize>),
    Infeasible,
    OutOfNodes,
}

/// BFS edge order from a vertex of maximum degree in each component.
pub(super) fn bfs_edge_order(g: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.edge_count());
    let mut seen_edge = vec![false; g.edge_count()];
    let mut seen = vec![false; g.n()];
    let mut starts: Vec<usize> = (0..g.n()).collect();
    starts.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut queue = VecDeque::new();
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in g.incident(x) {
                if !seen_edge[e] {
                    seen_edge[e] = true;
                    order.push(e);
                }
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

struct State<'a> {
    g: &'a Graph,
    k: usize,
    order: &'a [usize],
    colour: Vec<usize>,
    /// `class_deg[c * n + v]`, colours `1..=k` stored at `c - 1`.
    class_deg: Vec<usize>,
    rem: Vec<usize>,
    nodes: u64,
    limit: u64,
}

impl State<'_> {
    fn deg(&self, c: usize, v: usize) -> usize {
        self.class_deg[(c - 1) * self.g.n() + v]
    }

    fn bump(&mut self, c: usize, v: usize, up: bool) {
        let i = (c - 1) * self.g.n() + v;
        if up {
            self.class_deg[i] += 1;
        } else {
            self.class_deg[i] -= 1;
        }
    }

    fn settled_conflict(&self, w: usize) -> bool {
        self.rem[w] == 0
            && self.g.incident(w).iter().any(|&(x, e)| {
                let c = self.colour[e];
                c != 0 && self.rem[x] == 0 && self.deg(c, w) == self.deg(c, x)
            })
    }

    fn place(&mut self, e: usize, c: usize, on: bool) {
        let (u, v) = self.g.edge(e);
        self.colour[e] = if on { c } else { 0 };
        for w in [u, v] {
            self.bump(c, w, on);
            if on {
                self.rem[w] -= 1;
            } else {
                self.rem[w] += 1;
            }
        }
    }

    fn run(&mut self, depth: usize, used: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let e = self.order[depth];
        let (u, v) = self.g.edge(e);
        // New colours are introduced in increasing order.
        for c in 1..=(used + 1).min(self.k) {
            if self.nodes >= self.limit {
                return None;
            }
            self.nodes += 1;
            self.place(e, c, true);
            let ok = !self.settled_conflict(u) && !self.settled_conflict(v);
            if ok {
                match self.run(depth + 1, used.max(c)) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => {
                        self.place(e, c, false);
                        return None;
                    }
                }
            }
            self.place(e, c, false);
        }
        Some(false)
    }
}

/// Searches for a locally irregular colouring with colours `1..=k`. `nodes`
/// accumulates the number of colour assignments tried.
pub(super) fn colour_with(
    g: &Graph,
    k: usize,
    order: &[usize],
    limit: u64,
    nodes: &mut u64,
) -> Search {
    if g.edge_count() == 0 {
        return Search::Found(Vec::new());
    }
    if k == 0 {
        return Search::Infeasible;
    }
    let mut s = State {
        g,
        k,
        order,
        colour: vec![0; g.edge_count()],
        class_deg: vec![0; k * g.n()],
        rem: g.degrees(),
        nodes: *nodes,
        limit,
    };
    let out = match s.run(0, 0) {
        Some(true) => Search::Found(s.colour.clone()),
        Some(false) => Search::Infeasible,
        None => Search::OutOfNodes,
    };
    *nodes = s.nodes;
    out
}
