use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use adopt::fmt::round_sig;
use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

/// Rounds every float in a JSON tree to 12 significant digits.
fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// Writes `bytes` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Creates `dir` if needed and returns the path of `name` inside it.
pub fn in_dir(dir: &Path, name: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir.join(name))
}

/// Writes a CSV built in memory by `fill`.
pub fn csv_file<F>(path: &Path, fill: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> adopt::Result<()>,
{
    let mut buf = Vec::new();
    fill(&mut buf)?;
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}
