use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use super::{is_locally_irregular, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("colouring covers {got} edges but the graph has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("edge {edge} is uncoloured")]
    Uncoloured { edge: usize },
    #[error("edge {edge} has colour {colour} outside 1..={k}")]
    ColourOutOfRange {
        edge: usize,
        colour: usize,
        k: usize,
    },
    #[error("malformed decomposition JSON: {0}")]
    Json(String),
}

/// Edge colouring with classes `1..=k`, indexed by edge id of the host graph.
/// Colour 0 marks an uncoloured edge. Empty classes are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub k: usize,
    pub colour: Vec<usize>,
}

impl Decomposition {
    pub fn new(k: usize, colour: Vec<usize>) -> Self {
        Self { k, colour }
    }

    pub fn validate(&self, g: &Graph) -> Result<(), DecompositionError> {
        if self.colour.len() != g.edge_count() {
            return Err(DecompositionError::SizeMismatch {
                expected: g.edge_count(),
                got: self.colour.len(),
            });
        }
        for (edge, &colour) in self.colour.iter().enumerate() {
            if colour == 0 {
                return Err(DecompositionError::Uncoloured { edge });
            }
            if colour > self.k {
                return Err(DecompositionError::ColourOutOfRange {
                    edge,
                    colour,
                    k: self.k,
                });
            }
        }
        Ok(())
    }

    /// `{"k": k, "colour": {"u-v": c, ...}}`.
    pub fn to_json(&self, g: &Graph) -> Value {
        let colour: BTreeMap<String, usize> = g
            .edges()
            .iter()
            .zip(&self.colour)
            .map(|(&(u, v), &c)| (format!("{u}-{v}"), c))
            .collect();
        json!({ "k": self.k, "colour": colour })
    }

    pub fn from_json(g: &Graph, value: &Value) -> Result<Self, DecompositionError> {
        let bad = |m: &str| DecompositionError::Json(m.to_string());
        let k = value["k"].as_u64().ok_or_else(|| bad("missing k"))? as usize;
        let map = value["colour"]
            .as_object()
            .ok_or_else(|| bad("missing colour map"))?;
        let mut colour = vec![0; g.edge_count()];
        for (key, c) in map {
            let (u, v) = key
                .split_once('-')
                .ok_or_else(|| bad("edge key must be \"u-v\""))?;
            let (u, v): (usize, usize) = match (u.parse(), v.parse()) {
                (Ok(u), Ok(v)) => (u, v),
                _ => return Err(bad("edge key must be \"u-v\"")),
            };
            let e = g
                .edge_id(u, v)
                .ok_or_else(|| bad("colour map names a non-edge"))?;
            colour[e] = c.as_u64().ok_or_else(|| bad("colour must be an integer"))? as usize;
        }
        Ok(Self { k, colour })
    }
}

/// Class `i` as a spanning subgraph `(V, E_i)`.
pub fn class_subgraph(g: &Graph, d: &Decomposition, class: usize) -> Graph {
    let keep: Vec<bool> = d.colour.iter().map(|&c| c == class).collect();
    g.edge_subgraph(&keep)
}

/// True iff every class induces a locally irregular spanning subgraph.
pub fn is_locally_irregular_decomposition(
    g: &Graph,
    d: &Decomposition,
) -> Result<bool, DecompositionError> {
    d.validate(g)?;
    Ok((1..=d.k).all(|i| is_locally_irregular(&class_subgraph(g, d, i))))
}
