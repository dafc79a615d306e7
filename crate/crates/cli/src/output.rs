//! Report emission: every JSON report embeds the seed, a stable hash of
//! the resolved configuration, and the artifact version, and reruns with
//! identical inputs produce byte-identical files.

use serde::Serialize;
use std::path::Path;

#[derive(Clone, Debug, Serialize)]
pub struct ReportMeta {
    pub command: String,
    pub seed: u64,
    pub config_hash: String,
    pub version: String,
}

impl ReportMeta {
    pub fn new(command: &str, seed: u64, config: &impl Serialize) -> Self {
        let canonical = serde_json::to_string(config).expect("config serialization cannot fail");
        Self {
            command: command.to_string(),
            seed,
            config_hash: format!("{:016x}", fnv1a64(canonical.as_bytes())),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    meta: &'a ReportMeta,
    report: &'a T,
}

/// Pretty JSON with fixed field order (struct order) and a trailing
/// newline.
pub fn render_json<T: Serialize>(meta: &ReportMeta, report: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Wrapped { meta, report })
        .expect("report serialization cannot fail");
    s.push('\n');
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> anyhow::Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

/// FNV-1a, 64-bit; stable across platforms and runs.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), fnv1a64(b"a"));
        assert_ne!(fnv1a64(b"a"), fnv1a64(b"b"));
    }

    #[test]
    fn meta_changes_with_config() {
        let a = ReportMeta::new("x", 1, &serde_json::json!({"epochs": 5}));
        let b = ReportMeta::new("x", 1, &serde_json::json!({"epochs": 6}));
        assert_ne!(a.config_hash, b.config_hash);
    }
}
