//! Flat `key = value` run files. Keys are long flag names of the subcommand
//! being run; `#` starts a comment.

use anyhow::{bail, Result};

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key = value", n + 1);
        };
        let key = key.trim().trim_start_matches("--").to_string();
        if key.is_empty() {
            bail!("config line {}: empty key", n + 1);
        }
        if pairs.iter().any(|(k, _)| *k == key) {
            bail!("config line {}: duplicate key {key:?}", n + 1);
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}
