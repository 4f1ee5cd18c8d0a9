use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const MANIFEST_VERSION: &str = "1";

/// Sidecar describing one run; re-running with the same `params` reproduces
/// a payload with the same `output_sha256`.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub manifest_version: &'static str,
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub artifact_version: &'static str,
    pub started: String,
    pub finished: String,
    pub output_format: String,
    pub output_sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
