//! Artifact writers and verdict lines.

use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: String,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: verdict.into(),
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass" || self.verdict == "consistent"
    }
}

/// Prints one line per check; true iff every verdict passed.
pub fn report(checks: &[Check]) -> bool {
    for c in checks {
        println!("{}: {} ({})", c.name, c.verdict, c.detail);
    }
    checks.iter().all(Check::passed)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(dir, name, &text)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}
