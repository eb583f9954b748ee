//! Run headers for the machine-readable reports every command emits.
//!
//! Each report is a stream of JSON lines whose first line identifies the
//! tool, its version, the command, a hash of the semantic configuration,
//! and the RNG seed where one is in play. Execution-only knobs (worker
//! count, timing capture) stay out of the hash so that runs differing
//! only in parallelism produce byte-identical certificates.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// First line of every report stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunHeader {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// SHA-256 over the canonical `key=value` listing of the semantic
    /// configuration, hex encoded.
    pub config_hash: String,
    /// RNG seed, for the commands that draw randomness.
    pub seed: Option<u64>,
}

impl RunHeader {
    /// Builds the header for `command`. `config` lists the semantic
    /// parameters as (key, value) pairs in a fixed order.
    pub fn new(command: &str, config: &[(&str, String)], seed: Option<u64>) -> Self {
        let mut canonical = format!("command={command}\n");
        for (key, value) in config {
            canonical.push_str(&format!("{key}={value}\n"));
        }
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        RunHeader {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_hash: format!("{:x}", hasher.finalize()),
            seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_hash_depends_on_config_not_on_seed() {
        let a = RunHeader::new("sample", &[("steps", "100".into())], Some(1));
        let b = RunHeader::new("sample", &[("steps", "100".into())], Some(2));
        let c = RunHeader::new("sample", &[("steps", "200".into())], Some(1));
        assert_eq!(a.config_hash, b.config_hash);
        assert_ne!(a.config_hash, c.config_hash);
        assert_eq!(a.config_hash.len(), 64);
        assert_eq!(a.tool, "qsd40");
    }

    #[test]
    fn header_serializes_with_stable_field_order() {
        let h = RunHeader::new("info", &[], None);
        let json = serde_json::to_string(&h).unwrap();
        assert!(json.starts_with(r#"{"tool":"qsd40","version":"#));
        assert!(json.ends_with(r#""seed":null}"#));
        let parsed: RunHeader = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, h);
    }
}
