//! Decompositions of graphs into three locally irregular subgraphs.
//!
//! The crate follows a probabilistic construction end to end: random modular
//! vertex labels ([`labeling`]), constructive Local Lemma resampling
//! ([`lll`]), degree-constrained spanning subgraphs ([`factor`]) and the
//! three-part assembly with its validity diagnostics ([`decompose`]). Exact
//! small-graph ground truth lives in [`oracle`].

pub mod decompose;
pub mod factor;
pub mod graph;
pub mod guard;
pub mod labeling;
pub mod lll;
pub mod oracle;
