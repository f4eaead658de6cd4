//! Random modular labelings and risky-edge classification.
//!
//! Every vertex `v` draws two labels `c1(v), c2(v)` uniformly from
//! `0..2^k(v)` where `k(v) = ⌈log_β d(v)⌉`. An edge whose endpoint degrees are
//! within a factor β of each other is *risky* of type 1, 2 or 3 when the
//! labels satisfy the corresponding congruence; risky edges are kept out of
//! the factor stages of the decomposition.

mod beta;

pub use beta::{
    beta, ceil_log_beta, exponents, floor_beta_times, label_range, lambda_of, pow038_at_least,
    ratio_gate, within_beta_power,
};

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::guard::{self, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("window {b} must lie in 1..={k}")]
    BadWindow { b: i128, k: i128 },
    #[error("{0}-{1} is not an edge")]
    NonEdge(usize, usize),
    #[error("invalid labels: {0}")]
    InvalidLabels(String),
}

/// Labels `c1`, `c2` indexed by vertex id. Serializes as `{"c1": [..], "c2": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelPair {
    pub c1: Vec<u64>,
    pub c2: Vec<u64>,
}

impl LabelPair {
    /// Checks lengths and that every label lies in its vertex's range.
    pub fn validate(&self, g: &Graph) -> Result<(), LabelError> {
        if self.c1.len() != g.n() || self.c2.len() != g.n() {
            return Err(LabelError::InvalidLabels(format!(
                "expected {} labels per slot, got {} and {}",
                g.n(),
                self.c1.len(),
                self.c2.len()
            )));
        }
        for v in 0..g.n() {
            let range = label_range(g.degree(v) as u64);
            if self.c1[v] >= range || self.c2[v] >= range {
                return Err(LabelError::InvalidLabels(format!(
                    "vertex {v}: labels ({}, {}) outside 0..{range}",
                    self.c1[v], self.c2[v]
                )));
            }
        }
        Ok(())
    }
}

/// Independent uniform labels; `c1` for all vertices is drawn before `c2`.
pub fn sample_labels(g: &Graph, seed: u64) -> LabelPair {
    sample_labels_with(g, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_labels_with<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> LabelPair {
    let ranges: Vec<u64> = (0..g.n())
        .map(|v| label_range(g.degree(v) as u64))
        .collect();
    let c1 = ranges.iter().map(|&r| rng.gen_range(0..r)).collect();
    let c2 = ranges.iter().map(|&r| rng.gen_range(0..r)).collect();
    LabelPair { c1, c2 }
}

/// `|a| < b (mod k)`: `a` is congruent to one of `-b+1, ..., b-1` modulo `k`.
pub fn symmetric_mod_predicate(a: i128, b: i128, k: i128) -> Result<bool, LabelError> {
    if b < 1 || b > k {
        return Err(LabelError::BadWindow { b, k });
    }
    let r = a.rem_euclid(k);
    Ok(r < b || r > k - b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RiskType {
    One,
    Two,
    Three,
}

impl RiskType {
    pub const ALL: [RiskType; 3] = [RiskType::One, RiskType::Two, RiskType::Three];

    fn bit(self) -> u8 {
        match self {
            RiskType::One => 1,
            RiskType::Two => 2,
            RiskType::Three => 4,
        }
    }
}

/// The neighbour sets `A(v), B(v), C(v)` (risky of type 1, 2, 3) and
/// `F(v) = B(v) ∩ C(v)`. The order is the order of bad events per vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RiskSet {
    A,
    B,
    C,
    F,
}

impl RiskSet {
    pub const ALL: [RiskSet; 4] = [RiskSet::A, RiskSet::B, RiskSet::C, RiskSet::F];

    pub fn index(self) -> usize {
        self as usize
    }

    pub(crate) fn mask(self) -> u8 {
        match self {
            RiskSet::A => 1,
            RiskSet::B => 2,
            RiskSet::C => 4,
            RiskSet::F => 2 | 4,
        }
    }
}

/// What the congruences need to know about one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Endpoint {
    pub degree: u64,
    pub exponent: u32,
    pub c1: u64,
    pub c2: u64,
}

/// The type-specific congruence for an edge that already passed the ratio gate.
pub fn risky_congruence(kind: RiskType, u: &Endpoint, v: &Endpoint) -> bool {
    let m = u.exponent.min(v.exponent);
    let (pu, pv) = (1i128 << u.exponent, 1i128 << v.exponent);
    match kind {
        RiskType::One | RiskType::Two => {
            let (lu, lv) = if kind == RiskType::One {
                (u.c1, v.c1)
            } else {
                (u.c2, v.c2)
            };
            let modulus = 1i128 << (2 * m);
            (pu * lu as i128 - pv * lv as i128).rem_euclid(modulus) == 0
        }
        RiskType::Three => {
            let a = u.degree as i128 - 3 * pu * (u.c1 + u.c2) as i128 - v.degree as i128
                + 3 * pv * (v.c1 + v.c2) as i128;
            let window = 3 * (1i128 << m);
            let modulus = 3 * (1i128 << (2 * m));
            symmetric_mod_predicate(a, window, modulus).expect("window lies in range")
        }
    }
}

/// Per-graph degree data: degrees, exponents and which edges pass the ratio gate.
#[derive(Debug, Clone)]
pub struct DegreeScales {
    pub degree: Vec<u64>,
    pub exponent: Vec<u32>,
    pub gated: Vec<bool>,
}

impl DegreeScales {
    pub fn new(g: &Graph) -> Self {
        let degrees = g.degrees();
        let exponent = exponents(&degrees);
        let degree: Vec<u64> = degrees.iter().map(|&d| d as u64).collect();
        let mut memo: HashMap<(u64, u64), bool> = HashMap::new();
        let gated = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let key = (degree[u].min(degree[v]), degree[u].max(degree[v]));
                *memo.entry(key).or_insert_with(|| ratio_gate(key.0, key.1))
            })
            .collect();
        Self {
            degree,
            exponent,
            gated,
        }
    }

    pub fn endpoint(&self, v: usize, labels: &LabelPair) -> Endpoint {
        Endpoint {
            degree: self.degree[v],
            exponent: self.exponent[v],
            c1: labels.c1[v],
            c2: labels.c2[v],
        }
    }

    /// Bitmask of risk types (bit 0: type 1, bit 1: type 2, bit 2: type 3) of edge `e`.
    pub fn edge_mask(&self, g: &Graph, e: usize, labels: &LabelPair) -> u8 {
        if !self.gated[e] {
            return 0;
        }
        let (u, v) = g.edge(e);
        let (eu, ev) = (self.endpoint(u, labels), self.endpoint(v, labels));
        RiskType::ALL
            .iter()
            .filter(|&&t| risky_congruence(t, &eu, &ev))
            .fold(0, |acc, t| acc | t.bit())
    }
}

pub fn is_risky(
    g: &Graph,
    labels: &LabelPair,
    u: usize,
    v: usize,
    kind: RiskType,
) -> Result<bool, LabelError> {
    g.edge_id(u, v).ok_or(LabelError::NonEdge(u, v))?;
    let (du, dv) = (g.degree(u) as u64, g.degree(v) as u64);
    if !ratio_gate(du, dv) {
        return Ok(false);
    }
    let ep = |x: usize, d: u64| Endpoint {
        degree: d,
        exponent: ceil_log_beta(d).expect("edge endpoints have positive degree"),
        c1: labels.c1[x],
        c2: labels.c2[x],
    };
    Ok(risky_congruence(kind, &ep(u, du), &ep(v, dv)))
}

/// The risky edge sets `R1, R2, R3` with per-vertex counts of `A, B, C, F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiskyClassification {
    mask: Vec<u8>,
    counts: Vec<[usize; 4]>,
    degree_one_edges: Vec<usize>,
}

impl RiskyClassification {
    pub fn is_in(&self, kind: RiskType, e: usize) -> bool {
        self.mask[e] & kind.bit() != 0
    }

    /// Edge ids of `R_t`, ascending.
    pub fn edges_of(&self, kind: RiskType) -> Vec<usize> {
        (0..self.mask.len())
            .filter(|&e| self.is_in(kind, e))
            .collect()
    }

    pub fn r1(&self) -> Vec<usize> {
        self.edges_of(RiskType::One)
    }

    pub fn r2(&self) -> Vec<usize> {
        self.edges_of(RiskType::Two)
    }

    pub fn r3(&self) -> Vec<usize> {
        self.edges_of(RiskType::Three)
    }

    pub fn edge_mask(&self, e: usize) -> u8 {
        self.mask[e]
    }

    /// `|A(v)|`, `|B(v)|`, `|C(v)|` or `|F(v)|`.
    pub fn count(&self, v: usize, set: RiskSet) -> usize {
        self.counts[v][set.index()]
    }

    /// Members of the neighbour set `set` of `v`, ascending.
    pub fn neighbours(&self, g: &Graph, v: usize, set: RiskSet) -> Vec<usize> {
        let want = set.mask();
        g.incident(v)
            .iter()
            .filter(|&&(_, e)| self.mask[e] & want == want)
            .map(|&(u, _)| u)
            .collect()
    }

    pub fn a_of(&self, g: &Graph, v: usize) -> Vec<usize> {
        self.neighbours(g, v, RiskSet::A)
    }

    pub fn b_of(&self, g: &Graph, v: usize) -> Vec<usize> {
        self.neighbours(g, v, RiskSet::B)
    }

    pub fn c_of(&self, g: &Graph, v: usize) -> Vec<usize> {
        self.neighbours(g, v, RiskSet::C)
    }

    pub fn f_of(&self, g: &Graph, v: usize) -> Vec<usize> {
        self.neighbours(g, v, RiskSet::F)
    }

    /// Risky edges with an endpoint of degree 1. Only an isolated `K2`
    /// component can produce these, and such an edge is risky of every type.
    pub fn degree_one_edges(&self) -> &[usize] {
        &self.degree_one_edges
    }
}

pub fn classify(g: &Graph, labels: &LabelPair) -> RiskyClassification {
    classify_with(g, &DegreeScales::new(g), labels)
}

pub fn classify_with(g: &Graph, scales: &DegreeScales, labels: &LabelPair) -> RiskyClassification {
    let mask: Vec<u8> = (0..g.edge_count())
        .map(|e| scales.edge_mask(g, e, labels))
        .collect();
    let mut counts = vec![[0usize; 4]; g.n()];
    let mut degree_one_edges = Vec::new();
    for (e, &m) in mask.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let (u, v) = g.edge(e);
        for set in RiskSet::ALL {
            if m & set.mask() == set.mask() {
                counts[u][set.index()] += 1;
                counts[v][set.index()] += 1;
            }
        }
        if scales.degree[u] == 1 || scales.degree[v] == 1 {
            degree_one_edges.push(e);
        }
    }
    RiskyClassification {
        mask,
        counts,
        degree_one_edges,
    }
}

/// `slack·8·d^0.62` for `A, B, C`, `slack·12·d^0.24` for `F`.
pub fn claim_threshold(set: RiskSet, degree: usize, slack: f64) -> f64 {
    let d = degree as f64;
    let base = match set {
        RiskSet::A | RiskSet::B | RiskSet::C => 8.0 * d.powf(0.62),
        RiskSet::F => 12.0 * d.powf(0.24),
    };
    slack * base
}

/// Verdict of `count <= claim_threshold(set, degree, slack)`.
pub fn claim_verdict(set: RiskSet, count: usize, degree: usize, slack: f64) -> Verdict {
    if count == 0 {
        return Verdict::Holds;
    }
    guard::at_most(count as f64, claim_threshold(set, degree, slack))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexBounds {
    pub vertex: usize,
    pub degree: usize,
    /// `|A(v)|, |B(v)|, |C(v)|, |F(v)|`.
    pub counts: [usize; 4],
    pub verdicts: [Verdict; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub vertices: Vec<VertexBounds>,
    /// No comparison is violated. Comparisons inside the guard do not count
    /// as violations; they are listed in `undecided`.
    pub all_hold: bool,
    pub undecided: Vec<(usize, RiskSet)>,
    pub degree_one_vertices: Vec<usize>,
}

impl BoundsReport {
    pub fn violations(&self) -> impl Iterator<Item = (usize, RiskSet)> + '_ {
        self.vertices.iter().flat_map(|vb| {
            RiskSet::ALL
                .into_iter()
                .filter(|s| vb.verdicts[s.index()].is_violated())
                .map(move |s| (vb.vertex, s))
        })
    }
}

/// Checks `|A(v)|, |B(v)|, |C(v)| <= slack·8·d(v)^0.62` and
/// `|F(v)| <= slack·12·d(v)^0.24` at every vertex.
pub fn bounds_hold(g: &Graph, cls: &RiskyClassification, slack: f64) -> BoundsReport {
    let mut undecided = Vec::new();
    let vertices: Vec<VertexBounds> = (0..g.n())
        .map(|v| {
            let degree = g.degree(v);
            let counts = cls.counts[v];
            let verdicts = RiskSet::ALL.map(|s| claim_verdict(s, counts[s.index()], degree, slack));
            for s in RiskSet::ALL {
                if verdicts[s.index()] == Verdict::WithinGuard {
                    undecided.push((v, s));
                }
            }
            VertexBounds {
                vertex: v,
                degree,
                counts,
                verdicts,
            }
        })
        .collect();
    let all_hold = vertices
        .iter()
        .all(|vb| vb.verdicts.iter().all(|x| !x.is_violated()));
    let mut degree_one_vertices: Vec<usize> = cls
        .degree_one_edges
        .iter()
        .flat_map(|&e| {
            let (u, v) = g.edge(e);
            [u, v]
        })
        .filter(|&x| g.degree(x) == 1)
        .collect();
    degree_one_vertices.sort_unstable();
    degree_one_vertices.dedup();
    BoundsReport {
        vertices,
        all_hold,
        undecided,
        degree_one_vertices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, path, random_regular, star, Graph};
    use proptest::prelude::*;

    fn ep(degree: u64, c1: u64, c2: u64) -> Endpoint {
        Endpoint {
            degree,
            exponent: ceil_log_beta(degree).unwrap(),
            c1,
            c2,
        }
    }

    #[test]
    fn symmetric_mod_examples() {
        assert!(symmetric_mod_predicate(0, 1, 5).unwrap());
        assert!(symmetric_mod_predicate(7, 2, 8).unwrap());
        assert!(!symmetric_mod_predicate(5, 2, 8).unwrap());
        assert!(symmetric_mod_predicate(-9, 2, 8).unwrap());
        assert!(symmetric_mod_predicate(3, 4, 4).unwrap());
        assert_eq!(
            symmetric_mod_predicate(0, 0, 4),
            Err(LabelError::BadWindow { b: 0, k: 4 })
        );
        assert!(symmetric_mod_predicate(1, 5, 4).is_err());
    }

    #[test]
    fn symmetric_mod_matches_window_enumeration() {
        for k in 1..20i128 {
            for b in 1..=k {
                let window: Vec<i128> = (-b + 1..b).map(|x| x.rem_euclid(k)).collect();
                for a in -50..50 {
                    assert_eq!(
                        symmetric_mod_predicate(a, b, k).unwrap(),
                        window.contains(&a.rem_euclid(k)),
                        "a={a} b={b} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn equal_degree_100_type1_is_label_equality() {
        for x in 0..8 {
            for y in 0..8 {
                let risky = risky_congruence(RiskType::One, &ep(100, x, 0), &ep(100, y, 0));
                assert_eq!(risky, x == y);
            }
        }
    }

    #[test]
    fn degrees_6_and_7_type1() {
        for cu in 0..2 {
            for cv in 0..4 {
                let risky = risky_congruence(RiskType::One, &ep(6, cu, 0), &ep(7, cv, 0));
                assert_eq!(risky, cu == 0, "cu={cu} cv={cv}");
            }
        }
    }

    #[test]
    fn ratio_gate_blocks_unbalanced_edges() {
        let g = star(100);
        let labels = LabelPair {
            c1: vec![0; 101],
            c2: vec![0; 101],
        };
        for t in RiskType::ALL {
            assert!(!is_risky(&g, &labels, 0, 1, t).unwrap());
        }
        assert_eq!(
            is_risky(&g, &labels, 1, 2, RiskType::One),
            Err(LabelError::NonEdge(1, 2))
        );
    }

    #[test]
    fn sampling_respects_ranges_and_seed() {
        let g = star(100);
        let a = sample_labels(&g, 7);
        assert_eq!(a, sample_labels(&g, 7));
        a.validate(&g).unwrap();
        for leaf in 1..=100 {
            assert_eq!((a.c1[leaf], a.c2[leaf]), (0, 0));
        }
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["c1"].as_array().unwrap().len(), 101);
    }

    #[test]
    fn sampling_is_uniform_on_eight_values() {
        // Centre of star(100) has λ = 8.
        let g = star(100);
        let runs = 100_000;
        let mut hist = [0usize; 8];
        for seed in 0..runs {
            hist[sample_labels(&g, seed).c1[0] as usize] += 1;
        }
        for h in hist {
            let freq = h as f64 / runs as f64;
            assert!((freq - 0.125).abs() < 0.01, "{hist:?}");
        }
    }

    #[test]
    fn k2_is_risky_of_every_type() {
        let g = path(1);
        let labels = sample_labels(&g, 0);
        let cls = classify(&g, &labels);
        assert_eq!((cls.r1(), cls.r2(), cls.r3()), (vec![0], vec![0], vec![0]));
        assert_eq!(cls.degree_one_edges(), &[0]);
        let report = bounds_hold(&g, &cls, 1.0);
        assert!(report.all_hold);
        assert_eq!(report.degree_one_vertices, vec![0, 1]);
        assert_eq!(report.vertices[0].counts, [1, 1, 1, 1]);
    }

    #[test]
    fn equal_labels_make_every_gated_edge_type1() {
        let g = random_regular(30, 8, 2).unwrap();
        let labels = LabelPair {
            c1: vec![3; 30],
            c2: vec![1; 30],
        };
        let cls = classify(&g, &labels);
        assert_eq!(cls.r1().len(), g.edge_count());
        for v in 0..g.n() {
            assert_eq!(cls.a_of(&g, v).len(), 8);
            let f: Vec<usize> = cls
                .b_of(&g, v)
                .into_iter()
                .filter(|u| cls.c_of(&g, v).contains(u))
                .collect();
            assert_eq!(cls.f_of(&g, v), f);
        }
    }

    #[test]
    fn risky_fraction_matches_label_range() {
        // λ(10) = 4: a gated edge is type-1 risky with probability 1/4.
        let g = random_regular(50, 10, 5).unwrap();
        let mut total = 0.0;
        let seeds = 200;
        for seed in 0..seeds {
            let cls = classify(&g, &sample_labels(&g, seed));
            total += cls.r1().len() as f64 / g.edge_count() as f64;
        }
        let mean = total / seeds as f64;
        assert!((mean - 0.25).abs() < 0.1, "mean = {mean}");
    }

    #[test]
    fn bounds_examples() {
        let g = Graph::empty(3);
        let cls = classify(&g, &sample_labels(&g, 0));
        assert!(bounds_hold(&g, &cls, 1.0).all_hold);

        // Equal labels on K30: every edge is risky of all three types.
        // |A(v)| = 29 < 8·29^0.62 ≈ 64.5 but |F(v)| = 29 > 12·29^0.24 ≈ 26.9.
        let g = complete(30);
        let labels = LabelPair {
            c1: vec![0; 30],
            c2: vec![0; 30],
        };
        let cls = classify(&g, &labels);
        assert_eq!(cls.count(0, RiskSet::A), 29);
        assert_eq!(cls.count(0, RiskSet::F), 29);
        let report = bounds_hold(&g, &cls, 1.0);
        assert!(!report.all_hold);
        assert!(report.violations().all(|(_, s)| s == RiskSet::F));
        assert_eq!(report.violations().count(), 30);
        assert!(bounds_hold(&g, &cls, 1.1).all_hold);
        let strict = bounds_hold(&g, &cls, 0.1);
        assert!(strict.violations().any(|(v, s)| v == 0 && s == RiskSet::A));
    }

    proptest! {
        #[test]
        fn risky_is_symmetric(
            du in 1u64..3000, dv in 1u64..3000,
            a1 in any::<u64>(), a2 in any::<u64>(), b1 in any::<u64>(), b2 in any::<u64>(),
        ) {
            let (u, v) = (ep(du, 0, 0), ep(dv, 0, 0));
            let (lu, lv) = (1u64 << u.exponent, 1u64 << v.exponent);
            let u = Endpoint { c1: a1 % lu, c2: a2 % lu, ..u };
            let v = Endpoint { c1: b1 % lv, c2: b2 % lv, ..v };
            for t in RiskType::ALL {
                prop_assert_eq!(risky_congruence(t, &u, &v), risky_congruence(t, &v, &u));
            }
        }
    }
}
