use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub irrdec: &'static str,
}

/// What was run and a digest of what it produced. The digest covers only the
/// result record, so reruns with the same inputs share it.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub versions: Versions,
    pub elapsed_ms: f64,
    pub result_digest: String,
}

impl RunManifest {
    pub fn new(
        command: &str,
        parameters: Value,
        seed: Option<u64>,
        elapsed_ms: f64,
        result: &Value,
    ) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            seed,
            versions: Versions {
                irrdec: env!("CARGO_PKG_VERSION"),
            },
            elapsed_ms,
            result_digest: digest(result),
        }
    }
}

/// Hex SHA-256 of the compact JSON text. Object keys are sorted by
/// `serde_json`, so equal values give equal digests.
pub fn digest(value: &Value) -> String {
    let text = serde_json::to_string(value).expect("JSON values serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}
