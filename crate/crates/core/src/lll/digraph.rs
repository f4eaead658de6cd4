use serde::Serialize;

use crate::graph::Graph;
use crate::labeling::{floor_beta_times, within_beta_power, DegreeScales, RiskSet};

/// Dependency digraph over the `4n` bad events; event `4v + kind` belongs to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyDigraph {
    arcs: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DigraphViolation {
    OutDegree {
        event: usize,
        out_degree: usize,
        bound: u128,
    },
    TargetDegree {
        event: usize,
        target: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigraphCheck {
    pub events: usize,
    pub arcs: usize,
    pub max_out_degree: usize,
    pub violations: Vec<DigraphViolation>,
}

impl DigraphCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DependencyDigraph {
    pub fn event_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn event(id: usize) -> (usize, RiskSet) {
        (id / 4, RiskSet::ALL[id % 4])
    }

    pub fn event_id(vertex: usize, kind: RiskSet) -> usize {
        4 * vertex + kind.index()
    }

    pub fn out_arcs(&self, event: usize) -> &[usize] {
        &self.arcs[event]
    }

    pub fn out_degree(&self, event: usize) -> usize {
        self.arcs[event].len()
    }

    /// Out-degree at most `3 + 4d·⌊βd⌋` and every target vertex `w` with
    /// `d/β² < d(w) < β²·d`, where `d` is the degree of the source vertex.
    pub fn check(&self, g: &Graph) -> DigraphCheck {
        let mut violations = Vec::new();
        let mut arcs = 0;
        let mut max_out_degree = 0;
        for (event, targets) in self.arcs.iter().enumerate() {
            let v = event / 4;
            let d = g.degree(v) as u64;
            arcs += targets.len();
            max_out_degree = max_out_degree.max(targets.len());
            let bound = 3 + 4 * d as u128 * floor_beta_times(d) as u128;
            if targets.len() as u128 > bound {
                violations.push(DigraphViolation::OutDegree {
                    event,
                    out_degree: targets.len(),
                    bound,
                });
            }
            for &t in targets {
                let w = t / 4;
                if w != v && !within_beta_power(d, g.degree(w) as u64, 2) {
                    violations.push(DigraphViolation::TargetDegree { event, target: t });
                }
            }
        }
        DigraphCheck {
            events: self.arcs.len(),
            arcs,
            max_out_degree,
            violations,
        }
    }
}

/// Arcs from every event of `v` to all other events of `v`, of its gated
/// neighbours and of their gated neighbours.
pub fn build_dependency_digraph(g: &Graph) -> DependencyDigraph {
    let scales = DegreeScales::new(g);
    let gated: Vec<Vec<usize>> = (0..g.n())
        .map(|v| {
            g.incident(v)
                .iter()
                .filter(|&&(_, e)| scales.gated[e])
                .map(|&(u, _)| u)
                .collect()
        })
        .collect();
    let mut arcs = Vec::with_capacity(4 * g.n());
    let mut mark = vec![usize::MAX; g.n()];
    for v in 0..g.n() {
        let mut reach = vec![v];
        mark[v] = v;
        for &a in &gated[v] {
            for &w in std::iter::once(&a).chain(&gated[a]) {
                if mark[w] != v {
                    mark[w] = v;
                    reach.push(w);
                }
            }
        }
        reach.sort_unstable();
        for kind in 0..4 {
            let me = 4 * v + kind;
            arcs.push(
                reach
                    .iter()
                    .flat_map(|&w| 4 * w..4 * w + 4)
                    .filter(|&t| t != me)
                    .collect(),
            );
        }
    }
    DependencyDigraph { arcs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, gnp, random_regular, star, Graph};
    use proptest::prelude::*;

    #[test]
    fn edgeless() {
        let g = Graph::empty(3);
        let d = build_dependency_digraph(&g);
        assert_eq!(d.event_count(), 12);
        for e in 0..12 {
            assert_eq!(d.out_degree(e), 3);
            assert!(d.out_arcs(e).iter().all(|&t| t / 4 == e / 4));
        }
        assert!(d.check(&g).ok());
    }

    #[test]
    fn cycle4_reaches_everything() {
        let g = cycle(4).unwrap();
        let d = build_dependency_digraph(&g);
        assert!((0..16).all(|e| d.out_degree(e) == 15));
        assert_eq!(3 + 4 * 2 * floor_beta_times(2), 99);
        assert!(d.check(&g).ok());
    }

    #[test]
    fn star_gate_cuts_arcs() {
        let g = star(1000);
        let d = build_dependency_digraph(&g);
        assert!((0..d.event_count()).all(|e| d.out_degree(e) == 3));
    }

    #[test]
    fn dense_instances_respect_bounds() {
        for g in [
            complete(30),
            random_regular(60, 12, 1).unwrap(),
            gnp(50, 0.3, 2).unwrap(),
        ] {
            let check = build_dependency_digraph(&g).check(&g);
            assert!(check.ok(), "{:?}", check.violations.first());
        }
    }

    #[test]
    fn event_ids_round_trip() {
        for v in 0..5 {
            for k in RiskSet::ALL {
                assert_eq!(
                    DependencyDigraph::event(DependencyDigraph::event_id(v, k)),
                    (v, k)
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn random_graphs_respect_bounds(n in 2usize..40, p in 0.05f64..0.9, seed in any::<u64>()) {
            let g = gnp(n, p, seed).unwrap();
            prop_assert!(build_dependency_digraph(&g).check(&g).ok());
        }
    }
}
