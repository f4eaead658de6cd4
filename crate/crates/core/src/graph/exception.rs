//! Recognition of the connected graphs that admit no locally irregular
//! decomposition: odd paths, odd cycles and the triangle-built family.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExceptionClass {
    OddPath,
    OddCycle,
    TFamily,
    None,
}

/// Classifies a connected graph. Disconnected input is an error; callers
/// classify per component.
pub fn recognize_exception(g: &Graph) -> Result<ExceptionClass, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let (n, m) = (g.n(), g.edge_count());
    if n == 0 {
        return Ok(ExceptionClass::None);
    }
    let max_deg = g.max_degree();
    if max_deg <= 2 && m + 1 == n {
        return Ok(if m % 2 == 1 {
            ExceptionClass::OddPath
        } else {
            ExceptionClass::None
        });
    }
    if max_deg == 2 && g.min_degree() == 2 && m == n {
        return Ok(if m % 2 == 1 {
            ExceptionClass::OddCycle
        } else {
            ExceptionClass::None
        });
    }
    if is_t_family_member(g) {
        return Ok(ExceptionClass::TFamily);
    }
    Ok(ExceptionClass::None)
}

/// Decides membership in the triangle-built family by reverse peeling.
///
/// A state is the set of surviving edges. A pendant unit is either an even
/// path hanging from a degree-3 vertex, or an odd path ending in a triangle
/// whose two far vertices have degree 2; removing it must leave its
/// attachment vertex with degree 2 on a triangle. Peeling succeeds when a lone
/// triangle remains. States already known to fail are memoized.
pub fn is_t_family_member(g: &Graph) -> bool {
    let (n, m) = (g.n(), g.edge_count());
    if n < 3 || m < n || g.max_degree() > 3 || !g.is_connected() {
        return false;
    }
    let mut peeler = Peeler {
        g,
        alive: vec![true; m],
        deg: g.degrees(),
        failed: HashSet::new(),
    };
    peeler.search()
}

struct Peeler<'a> {
    g: &'a Graph,
    alive: Vec<bool>,
    deg: Vec<usize>,
    failed: HashSet<Vec<u64>>,
}

impl Peeler<'_> {
    fn key(&self) -> Vec<u64> {
        let mut key = vec![0u64; self.alive.len().div_ceil(64)];
        for (e, &a) in self.alive.iter().enumerate() {
            if a {
                key[e / 64] |= 1 << (e % 64);
            }
        }
        key
    }

    fn live_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.g
            .incident(v)
            .iter()
            .copied()
            .filter(|&(_, e)| self.alive[e])
    }

    fn live_edge(&self, u: usize, v: usize) -> bool {
        self.g.edge_id(u, v).is_some_and(|e| self.alive[e])
    }

    fn on_live_triangle(&self, v: usize) -> bool {
        let nbrs: Vec<usize> = self.live_neighbors(v).map(|(u, _)| u).collect();
        nbrs.iter()
            .enumerate()
            .any(|(i, &a)| nbrs[i + 1..].iter().any(|&b| self.live_edge(a, b)))
    }

    fn is_lone_triangle(&self) -> bool {
        let live: Vec<usize> = (0..self.alive.len()).filter(|&e| self.alive[e]).collect();
        if live.len() != 3 {
            return false;
        }
        let mut verts: Vec<usize> = live
            .iter()
            .flat_map(|&e| {
                let (u, v) = self.g.edge(e);
                [u, v]
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        verts.len() == 3
    }

    /// Walks from `start` (entered from `from`) through degree-2 vertices.
    /// Returns the first vertex of degree 3, the number of edges walked and
    /// the edge ids, or `None` if the walk ends at a leaf.
    fn walk(
        &self,
        from: usize,
        start: usize,
        first_edge: usize,
    ) -> Option<(usize, usize, Vec<usize>)> {
        let mut prev = from;
        let mut cur = start;
        let mut used = vec![first_edge];
        loop {
            match self.deg[cur] {
                3 => return Some((cur, used.len(), used)),
                2 => {
                    let (next, e) = self.live_neighbors(cur).find(|&(w, _)| w != prev)?;
                    used.push(e);
                    prev = cur;
                    cur = next;
                }
                _ => return None,
            }
        }
    }

    fn candidates(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for v in 0..self.g.n() {
            match self.deg[v] {
                1 => {
                    let (u, e) = self.live_neighbors(v).next().expect("leaf has a neighbour");
                    if let Some((x, len, edges)) = self.walk(v, u, e) {
                        if len % 2 == 0 {
                            out.push((x, edges));
                        }
                    }
                }
                3 => {
                    // `v` as the glued corner of a pendant triangle.
                    let nbrs: Vec<(usize, usize)> = self.live_neighbors(v).collect();
                    for i in 0..3 {
                        let (b, c) = (nbrs[(i + 1) % 3], nbrs[(i + 2) % 3]);
                        let Some(bc) = self.g.edge_id(b.0, c.0).filter(|&e| self.alive[e]) else {
                            continue;
                        };
                        if self.deg[b.0] != 2 || self.deg[c.0] != 2 {
                            continue;
                        }
                        let (out_v, out_e) = nbrs[i];
                        if let Some((x, len, mut edges)) = self.walk(v, out_v, out_e) {
                            if len % 2 == 1 {
                                edges.extend([b.1, c.1, bc]);
                                out.push((x, edges));
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        out.into_iter().map(|(_, edges)| edges).collect()
    }

    fn remove(&mut self, edges: &[usize]) {
        for &e in edges {
            self.alive[e] = false;
            let (u, v) = self.g.edge(e);
            self.deg[u] -= 1;
            self.deg[v] -= 1;
        }
    }

    fn restore(&mut self, edges: &[usize]) {
        for &e in edges {
            self.alive[e] = true;
            let (u, v) = self.g.edge(e);
            self.deg[u] += 1;
            self.deg[v] += 1;
        }
    }

    fn search(&mut self) -> bool {
        if self.is_lone_triangle() {
            return true;
        }
        let key = self.key();
        if self.failed.contains(&key) {
            return false;
        }
        for unit in self.candidates() {
            // The attachment vertex is the one left with degree 2 after removal.
            self.remove(&unit);
            let attach_ok = unit.iter().any(|&e| {
                let (u, v) = self.g.edge(e);
                [u, v]
                    .into_iter()
                    .any(|x| self.deg[x] == 2 && self.on_live_triangle(x))
            });
            // Removed vertices end with degree 0; exactly one endpoint survives.
            let survivors = unit
                .iter()
                .flat_map(|&e| {
                    let (u, v) = self.g.edge(e);
                    [u, v]
                })
                .filter(|&x| self.deg[x] > 0)
                .collect::<HashSet<_>>();
            if attach_ok && survivors.len() == 1 && self.search() {
                return true;
            }
            self.restore(&unit);
        }
        self.failed.insert(key);
        false
    }
}
