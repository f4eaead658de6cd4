//! Canonical labelling for small graphs by colour refinement plus
//! individualisation. Used to deduplicate enumerated families; intended for
//! graphs with a few dozen vertices at most.

use super::Graph;

/// Isomorphism-invariant key: vertex count and the edge list under the
/// lexicographically least labelling found by the search.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl CanonicalForm {
    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().copied()).expect("canonical edges are simple")
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let colours = refine(g, vec![0; g.n()]);
    let mut best: Option<Vec<(usize, usize)>> = None;
    search(g, colours, &mut best);
    CanonicalForm {
        n: g.n(),
        edges: best.unwrap_or_default(),
    }
}

/// Iterated degree refinement. Colours are renumbered by sorted signature,
/// which keeps the procedure invariant under relabelling.
fn refine(g: &Graph, mut colours: Vec<usize>) -> Vec<usize> {
    let n = g.n();
    loop {
        let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).map(|u| colours[u]).collect();
                nb.sort_unstable();
                (colours[v], nb, v)
            })
            .collect();
        sigs.sort();
        let mut next = vec![0; n];
        let mut class = 0;
        for i in 0..n {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                class += 1;
            }
            next[sigs[i].2] = class;
        }
        let before = colours.iter().max().map_or(0, |&c| c + 1);
        let after = if n == 0 { 0 } else { class + 1 };
        colours = next;
        if after == before {
            return colours;
        }
    }
}

fn search(g: &Graph, colours: Vec<usize>, best: &mut Option<Vec<(usize, usize)>>) {
    let n = g.n();
    let mut cell_size = vec![0usize; n];
    for &c in &colours {
        cell_size[c] += 1;
    }
    // First non-singleton cell by colour.
    let target = (0..n).find(|&c| cell_size[c] > 1);
    let Some(target) = target else {
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (colours[u], colours[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            *best = Some(edges);
        }
        return;
    };
    for v in (0..n).filter(|&v| colours[v] == target) {
        // Individualise v: it keeps the cell's colour, everyone else shifts up.
        let split: Vec<usize> = (0..n)
            .map(|w| {
                if colours[w] > target || (colours[w] == target && w != v) {
                    colours[w] + 1
                } else {
                    colours[w]
                }
            })
            .collect();
        search(g, refine(g, split), best);
    }
}

#[cfg(test)]
mod tests {
    use super::super::generate::{complete, cycle, path};
    use super::*;

    fn relabel(g: &Graph, perm: &[usize]) -> Graph {
        Graph::from_edges(g.n(), g.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap()
    }

    #[test]
    fn isomorphic_graphs_share_a_form() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        let h = relabel(&g, &[5, 3, 1, 0, 2, 4]);
        assert_eq!(canonical_form(&g), canonical_form(&h));
        assert_eq!(canonical_form(&g).to_graph().edge_count(), 6);
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        // C6 versus two disjoint triangles: same degree sequence.
        let two_triangles =
            Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_ne!(
            canonical_form(&cycle(6).unwrap()),
            canonical_form(&two_triangles)
        );
        assert_ne!(canonical_form(&path(3)), canonical_form(&complete(4)));
    }
}
