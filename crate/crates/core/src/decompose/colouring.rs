use serde::Serialize;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColouringFailure {
    /// First vertex (in id order) with no free value within its cap.
    pub vertex: usize,
}

/// Proper vertex colouring in ascending id order, each vertex taking the least
/// value not used by an already coloured neighbour, subject to `h(v) <= cap[v]`.
pub fn greedy_proper_colouring(f: &Graph, cap: &[usize]) -> Result<Vec<usize>, ColouringFailure> {
    assert_eq!(cap.len(), f.n(), "one cap per vertex");
    let mut h = vec![usize::MAX; f.n()];
    let mut used = Vec::new();
    for v in 0..f.n() {
        used.clear();
        used.extend(f.neighbors(v).filter(|&u| u < v).map(|u| h[u]));
        used.sort_unstable();
        used.dedup();
        let mut c = 0;
        for &x in &used {
            if x == c {
                c += 1;
            } else if x > c {
                break;
            }
        }
        if c > cap[v] {
            return Err(ColouringFailure { vertex: v });
        }
        h[v] = c;
    }
    Ok(h)
}

pub fn is_proper(f: &Graph, h: &[usize]) -> bool {
    f.edges().iter().all(|&(u, v)| h[u] != h[v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, gnp, path, star, Graph};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(
            greedy_proper_colouring(&path(1), &[1, 1]).unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            greedy_proper_colouring(&Graph::empty(4), &[0; 4]).unwrap(),
            vec![0; 4]
        );
        let h = greedy_proper_colouring(&star(3), &[1; 4]).unwrap();
        assert_eq!(h, vec![0, 1, 1, 1]);
        assert!(is_proper(&star(3), &h));
    }

    #[test]
    fn cap_failure() {
        assert_eq!(
            greedy_proper_colouring(&complete(3), &[2, 2, 1]),
            Err(ColouringFailure { vertex: 2 })
        );
        assert!(greedy_proper_colouring(&complete(3), &[2; 3]).is_ok());
    }

    proptest! {
        #[test]
        fn degree_caps_always_suffice(n in 1usize..30, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = gnp(n, p, seed).unwrap();
            let h = greedy_proper_colouring(&g, &g.degrees()).unwrap();
            prop_assert!(is_proper(&g, &h));
            prop_assert!((0..n).all(|v| h[v] <= g.degree(v)));
        }
    }
}
