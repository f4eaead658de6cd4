use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LllError;
use crate::graph::Graph;
use crate::guard;
use crate::labeling::{
    claim_threshold, classify_with, label_range, sample_labels_with, DegreeScales, LabelPair,
    RiskSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    C1,
    C2,
}

/// The event that `|A(v)|`, `|B(v)|`, `|C(v)|` or `|F(v)|` exceeds its bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadEvent {
    pub vertex: usize,
    pub kind: RiskSet,
    /// Label slots the event depends on, sorted.
    pub scope: Vec<(usize, Slot)>,
}

/// Slots of `v` and of its gated neighbours: `c1` for A, `c2` for B, both for C and F.
pub fn event_scope(
    g: &Graph,
    scales: &DegreeScales,
    v: usize,
    kind: RiskSet,
) -> Vec<(usize, Slot)> {
    let mut vertices: Vec<usize> = g
        .incident(v)
        .iter()
        .filter(|&&(_, e)| scales.gated[e])
        .map(|&(u, _)| u)
        .collect();
    vertices.push(v);
    vertices.sort_unstable();
    let slots: &[Slot] = match kind {
        RiskSet::A => &[Slot::C1],
        RiskSet::B => &[Slot::C2],
        RiskSet::C | RiskSet::F => &[Slot::C1, Slot::C2],
    };
    vertices
        .into_iter()
        .flat_map(|w| slots.iter().map(move |&s| (w, s)))
        .collect()
}

/// Events violated under `labels` at the given slack, sorted by `(vertex, kind)`.
pub fn violated_events(g: &Graph, labels: &LabelPair, slack: f64) -> Vec<BadEvent> {
    let scales = DegreeScales::new(g);
    let cls = classify_with(g, &scales, labels);
    let mut out = Vec::new();
    for v in 0..g.n() {
        for kind in RiskSet::ALL {
            let count = cls.count(v, kind);
            if count > 0
                && guard::at_most(count as f64, claim_threshold(kind, g.degree(v), slack))
                    .is_violated()
            {
                out.push(BadEvent {
                    vertex: v,
                    kind,
                    scope: event_scope(g, &scales, v, kind),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MtRun {
    pub labels: LabelPair,
    pub rounds: u64,
    /// Number of violated events before each round, then after the last one.
    pub trajectory: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MtOutcome {
    Success(MtRun),
    Timeout(MtRun),
}

impl MtOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, MtOutcome::Success(_))
    }

    pub fn run(&self) -> &MtRun {
        match self {
            MtOutcome::Success(r) | MtOutcome::Timeout(r) => r,
        }
    }
}

/// One resampling step as seen by an observer.
pub struct Resample<'a> {
    pub round: u64,
    pub event: &'a BadEvent,
    pub before: &'a LabelPair,
    pub after: &'a LabelPair,
}

/// Keeps risky masks and per-vertex counts current under local label changes.
struct Tracker<'g> {
    g: &'g Graph,
    scales: DegreeScales,
    mask: Vec<u8>,
    counts: Vec<[usize; 4]>,
    thresholds: Vec<[f64; 4]>,
    stamp: Vec<u64>,
    epoch: u64,
}

impl<'g> Tracker<'g> {
    fn new(g: &'g Graph, labels: &LabelPair, slack: f64) -> Self {
        let scales = DegreeScales::new(g);
        let cls = classify_with(g, &scales, labels);
        let mask = (0..g.edge_count()).map(|e| cls.edge_mask(e)).collect();
        let counts = (0..g.n())
            .map(|v| RiskSet::ALL.map(|s| cls.count(v, s)))
            .collect();
        let thresholds = (0..g.n())
            .map(|v| RiskSet::ALL.map(|s| claim_threshold(s, g.degree(v), slack)))
            .collect();
        Self {
            g,
            scales,
            mask,
            counts,
            thresholds,
            stamp: vec![0; g.edge_count()],
            epoch: 0,
        }
    }

    fn is_violated(&self, v: usize, kind: RiskSet) -> bool {
        let count = self.counts[v][kind.index()];
        count > 0 && guard::at_most(count as f64, self.thresholds[v][kind.index()]).is_violated()
    }

    fn first_violated(&self) -> Option<(usize, RiskSet)> {
        (0..self.g.n())
            .flat_map(|v| RiskSet::ALL.map(|k| (v, k)))
            .find(|&(v, k)| self.is_violated(v, k))
    }

    fn violated_count(&self) -> usize {
        (0..self.g.n())
            .map(|v| {
                RiskSet::ALL
                    .iter()
                    .filter(|&&k| self.is_violated(v, k))
                    .count()
            })
            .sum()
    }

    fn apply(&mut self, e: usize, m: u8, sign: isize) {
        let (u, v) = self.g.edge(e);
        for set in RiskSet::ALL {
            if m & set.mask() == set.mask() {
                for x in [u, v] {
                    let c = &mut self.counts[x][set.index()];
                    *c = c.checked_add_signed(sign).expect("count stays nonnegative");
                }
            }
        }
    }

    /// Recomputes every edge incident to one of `vertices`.
    fn refresh(&mut self, vertices: &[usize], labels: &LabelPair) {
        self.epoch += 1;
        for &w in vertices {
            for &(_, e) in self.g.incident(w) {
                if self.stamp[e] == self.epoch {
                    continue;
                }
                self.stamp[e] = self.epoch;
                let new = self.scales.edge_mask(self.g, e, labels);
                let old = self.mask[e];
                if new != old {
                    self.apply(e, old, -1);
                    self.apply(e, new, 1);
                    self.mask[e] = new;
                }
            }
        }
    }
}

/// Moser–Tardos resampling from a seeded random labeling.
pub fn moser_tardos(
    g: &Graph,
    seed: u64,
    slack: f64,
    max_rounds: u64,
) -> Result<MtOutcome, LllError> {
    run(g, seed, slack, max_rounds, None)
}

/// As [`moser_tardos`], calling `observer` after every resampling step.
pub fn moser_tardos_observed(
    g: &Graph,
    seed: u64,
    slack: f64,
    max_rounds: u64,
    observer: &mut dyn FnMut(&Resample<'_>),
) -> Result<MtOutcome, LllError> {
    run(g, seed, slack, max_rounds, Some(observer))
}

fn run(
    g: &Graph,
    seed: u64,
    slack: f64,
    max_rounds: u64,
    mut observer: Option<&mut dyn FnMut(&Resample<'_>)>,
) -> Result<MtOutcome, LllError> {
    if slack.is_nan() || slack <= 0.0 {
        return Err(LllError::InvalidParameters(format!(
            "slack must be positive, got {slack}"
        )));
    }
    if max_rounds == 0 {
        return Err(LllError::InvalidParameters(
            "max_rounds must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = sample_labels_with(g, &mut rng);
    let mut tracker = Tracker::new(g, &labels, slack);
    let ranges: Vec<u64> = (0..g.n())
        .map(|v| label_range(g.degree(v) as u64))
        .collect();
    let mut trajectory = vec![tracker.violated_count()];
    let mut rounds = 0;
    while let Some((v, kind)) = tracker.first_violated() {
        if rounds == max_rounds {
            return Ok(MtOutcome::Timeout(MtRun {
                labels,
                rounds,
                trajectory,
            }));
        }
        rounds += 1;
        let scope = event_scope(g, &tracker.scales, v, kind);
        let before = observer.as_ref().map(|_| labels.clone());
        for &(w, slot) in &scope {
            let value = rng.gen_range(0..ranges[w]);
            match slot {
                Slot::C1 => labels.c1[w] = value,
                Slot::C2 => labels.c2[w] = value,
            }
        }
        let mut touched: Vec<usize> = scope.iter().map(|&(w, _)| w).collect();
        touched.dedup();
        tracker.refresh(&touched, &labels);
        trajectory.push(tracker.violated_count());
        if let (Some(obs), Some(before)) = (observer.as_mut(), before) {
            let event = BadEvent {
                vertex: v,
                kind,
                scope,
            };
            obs(&Resample {
                round: rounds,
                event: &event,
                before: &before,
                after: &labels,
            });
        }
    }
    Ok(MtOutcome::Success(MtRun {
        labels,
        rounds,
        trajectory,
    }))
}
