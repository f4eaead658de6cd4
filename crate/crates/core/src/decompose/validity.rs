use serde::Serialize;

use super::{h_cap, is_proper, PipelineTrace};
use crate::graph::Graph;
use crate::labeling::{pow038_at_least, ratio_gate};

fn degrees_of(g: &Graph, mask: &[bool]) -> Vec<usize> {
    g.edge_subgraph(mask).degrees()
}

fn residue_ok(x: usize, target: u64, modulus: u64) -> bool {
    let r = (x as u64 % modulus + modulus - target % modulus) % modulus;
    r == 0 || r == 1
}

/// Structural checks on a completed trace. Returns one message per failed
/// check; an incomplete trace yields a single message.
pub fn check_trace_invariants(g: &Graph, trace: &PipelineTrace) -> Vec<String> {
    let (
        Some(g_prime),
        Some(h1),
        Some(g1),
        Some(g_second),
        Some(c),
        Some(f),
        Some(h2),
        Some(h2p),
        Some(h3p),
        Some(h),
        Some(cls),
    ) = (
        &trace.g_prime,
        &trace.h1,
        &trace.g1,
        &trace.g_second,
        &trace.c,
        &trace.f,
        &trace.h2,
        &trace.h2_prime,
        &trace.h3_prime,
        &trace.h,
        &trace.classification,
    )
    else {
        return vec!["trace is incomplete".into()];
    };
    let labels = trace
        .labels
        .as_ref()
        .expect("labels precede every subgraph");
    let mut bad = Vec::new();
    let m = g.edge_count();
    for e in 0..m {
        let parts = h1[e] as u8 + h2p[e] as u8 + h3p[e] as u8;
        if parts != 1 {
            bad.push(format!("edge {e} lies in {parts} parts"));
        }
        let (r1, r2, r3) = (
            cls.edge_mask(e) & 1 != 0,
            cls.edge_mask(e) & 2 != 0,
            cls.edge_mask(e) & 4 != 0,
        );
        if g_prime[e] == r1 {
            bad.push(format!("edge {e}: G' must be exactly G - R1"));
        }
        if h1[e] && !g_prime[e] {
            bad.push(format!("edge {e}: H1 not inside G'"));
        }
        if g1[e] == h1[e] {
            bad.push(format!("edge {e}: G1 must be exactly G - H1"));
        }
        if g_second[e] != (g1[e] && !r2 && !r3) {
            bad.push(format!("edge {e}: G'' must be G1 - (R2 ∪ R3)"));
        }
        if c[e] != (g1[e] && r3) || f[e] != (c[e] && r2) {
            bad.push(format!("edge {e}: C or F misdefined"));
        }
        if h2[e] && !g_second[e] {
            bad.push(format!("edge {e}: H2 not inside G''"));
        }
        if h2p[e] != (h2[e] || c[e]) {
            bad.push(format!("edge {e}: H'2 must be H2 ∪ C"));
        }
    }
    let d1 = degrees_of(g, h1);
    let d2 = degrees_of(g, h2);
    let d2p = degrees_of(g, h2p);
    let dc = degrees_of(g, c);
    let f_graph = g.edge_subgraph(f);
    if !is_proper(&f_graph, h) {
        bad.push("h is not a proper colouring of F".into());
    }
    for v in 0..g.n() {
        let (k, modulus) = (trace.exponent[v], trace.modulus[v]);
        if !residue_ok(d1[v], trace.t1[v], modulus) {
            bad.push(format!(
                "vertex {v}: d_H1 = {} off target {}",
                d1[v], trace.t1[v]
            ));
        }
        if !residue_ok(d2[v], trace.t2[v], modulus) {
            bad.push(format!(
                "vertex {v}: d_H2 = {} off target {}",
                d2[v], trace.t2[v]
            ));
        }
        let shifted = ((3u64 << k) * labels.c2[v] + 3 * h[v] as u64) % modulus;
        if !residue_ok(d2p[v], shifted, modulus) {
            bad.push(format!(
                "vertex {v}: d_H'2 = {} off target {shifted}",
                d2p[v]
            ));
        }
        if trace.c_v[v] != dc[v] {
            bad.push(format!(
                "vertex {v}: c_v = {} but d_C = {}",
                trace.c_v[v], dc[v]
            ));
        }
        if trace.h_capped && h[v] > h_cap(k) {
            bad.push(format!("vertex {v}: h = {} above cap {}", h[v], h_cap(k)));
        }
    }
    bad
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeparationCase {
    /// Part 1 on a gated edge outside `R1`.
    TypeOne,
    /// Part 2 on a gated edge outside `R2`.
    TypeTwo,
    /// Part 2 on an edge of `F`, separated by the colouring `h`.
    Properness,
    /// Part 3 on a gated edge outside `R3`.
    TypeThree,
    /// Degrees too far apart for the gate; separation comes from the degree windows.
    WindowSeparation {
        /// Both part degrees lie in `[4d/37, 2d/3]` of their vertex.
        in_window: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationRecord {
    pub edge: (usize, usize),
    pub part: usize,
    pub case: SeparationCase,
    pub part_degrees: (usize, usize),
    pub separated: bool,
}

fn part_mask(trace: &PipelineTrace, part: usize) -> Option<&Vec<bool>> {
    match part {
        1 => trace.h1.as_ref(),
        2 => trace.h2_prime.as_ref(),
        3 => trace.h3_prime.as_ref(),
        _ => None,
    }
}

fn in_final_window(x: usize, d: usize) -> bool {
    37 * x >= 4 * d && 3 * x <= 2 * d
}

/// Names the argument that separates the endpoint degrees of edge `e` in
/// `part` (1, 2 or 3) and reports whether they are in fact distinct.
pub fn congruence_separation_check(
    g: &Graph,
    trace: &PipelineTrace,
    part: usize,
    e: usize,
) -> Result<SeparationRecord, String> {
    let mask = part_mask(trace, part).ok_or_else(|| format!("part {part} unavailable"))?;
    if e >= g.edge_count() || !mask[e] {
        return Err(format!("edge {e} is not in part {part}"));
    }
    let (u, v) = g.edge(e);
    let degrees = degrees_of(g, mask);
    let (du, dv) = (degrees[u], degrees[v]);
    let case = if !ratio_gate(g.degree(u) as u64, g.degree(v) as u64) {
        SeparationCase::WindowSeparation {
            in_window: in_final_window(du, g.degree(u)) && in_final_window(dv, g.degree(v)),
        }
    } else {
        match part {
            1 => SeparationCase::TypeOne,
            2 if trace.f.as_ref().is_some_and(|f| f[e]) => SeparationCase::Properness,
            2 => SeparationCase::TypeTwo,
            _ => SeparationCase::TypeThree,
        }
    };
    Ok(SeparationRecord {
        edge: (u, v),
        part,
        case,
        part_degrees: (du, dv),
        separated: du != dv,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexWindows {
    pub vertex: usize,
    pub degree: usize,
    pub part_degrees: [usize; 3],
    /// `d_H1 ∈ [d_G'/3, 2d_G'/3]`.
    pub h1_window: bool,
    /// `d_H2 ∈ [d_G''/3, 2d_G''/3]`.
    pub h2_window: bool,
    /// Every part degree in `[4d/37, 2d/3]`.
    pub final_window: bool,
    /// `d^0.38 < 44`, where the windows are not expected to hold.
    pub below_44_threshold: bool,
}

fn third_window(x: usize, host: usize) -> bool {
    3 * x >= host && 3 * x <= 2 * host
}

/// Per-vertex degree windows of a completed trace; empty otherwise.
pub fn window_report(g: &Graph, trace: &PipelineTrace) -> Vec<VertexWindows> {
    let (Some(g_prime), Some(h1), Some(g_second), Some(h2), Some(h2p), Some(h3p)) = (
        &trace.g_prime,
        &trace.h1,
        &trace.g_second,
        &trace.h2,
        &trace.h2_prime,
        &trace.h3_prime,
    ) else {
        return Vec::new();
    };
    let [dgp, d1, dgs, d2, d2p, d3p] =
        [g_prime, h1, g_second, h2, h2p, h3p].map(|m| degrees_of(g, m));
    (0..g.n())
        .map(|v| {
            let d = g.degree(v);
            let part_degrees = [d1[v], d2p[v], d3p[v]];
            VertexWindows {
                vertex: v,
                degree: d,
                part_degrees,
                h1_window: third_window(d1[v], dgp[v]),
                h2_window: third_window(d2[v], dgs[v]),
                final_window: part_degrees.iter().all(|&x| in_final_window(x, d)),
                below_44_threshold: !pow038_at_least(d as u64, 44),
            }
        })
        .collect()
}
