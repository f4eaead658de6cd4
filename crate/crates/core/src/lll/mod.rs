//! Bad events over labelings, Moser–Tardos resampling, the dependency
//! digraph, exact conditional risk probabilities and the constants audit.

mod audit;
mod digraph;
mod events;
mod probability;

pub use audit::{
    audit_claim, audit_constants, binomial_tail_exact, chernoff_bound, AuditReport, ClaimReport,
    CLAIM_IDS,
};
pub use digraph::{build_dependency_digraph, DependencyDigraph, DigraphCheck, DigraphViolation};
pub use events::{
    event_scope, moser_tardos, moser_tardos_observed, violated_events, BadEvent, MtOutcome, MtRun,
    Resample, Slot,
};
pub use probability::{
    check_conditional_bound, exact_edge_risk_probability, BoundCheck, ConditionalBound,
    Conditioning, RiskEvent,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LllError {
    #[error("degrees {du} and {dv} do not pass the ratio gate")]
    GateFails { du: u64, dv: u64 },
    #[error("invalid conditioning: {0}")]
    InvalidConditioning(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}
