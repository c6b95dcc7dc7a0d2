//! Artifact plumbing shared by the commands: output-directory resolution,
//! deterministic JSON writing, and the `[re]`/`[re, im]` encoding of
//! vectors that mirrors the config schema.

use kaczmarz_core::{DVector, Field, FieldScalar};
use serde_json::Value;
use std::path::{Path, PathBuf};

use crate::Failure;

/// Environment variable used as the output root when `--out` is absent.
pub const OUT_DIR_ENV: &str = "KACZMARZ_OUT_DIR";

/// `--out` beats the environment variable beats the current directory. The
/// directory is created if missing.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let dir = flag
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|err| Failure::invalid(format!("cannot create {}: {err}", dir.display())))?;
    Ok(dir)
}

/// Serializes with sorted keys and a trailing newline; identical values
/// produce identical bytes, which the determinism contract relies on.
pub fn write_json(path: &Path, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|err| Failure::numerical(format!("cannot serialize {}: {err}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|err| Failure::invalid(format!("cannot write {}: {err}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|err| Failure::invalid(format!("cannot write {}: {err}", path.display())))
}

/// Vector as a JSON list of `[re]` or `[re, im]` entries, matching the
/// config schema for the scalar's field.
pub fn vector_value<T: FieldScalar>(v: &DVector<T>) -> Value {
    let entries: Vec<Value> = v
        .iter()
        .map(|c| {
            let (re, im) = c.parts();
            match T::FIELD {
                Field::Real => serde_json::json!([re]),
                Field::Complex => serde_json::json!([re, im]),
            }
        })
        .collect();
    Value::Array(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kaczmarz_core::Complex;

    #[test]
    fn vectors_encode_per_field() {
        let real = DVector::from_vec(vec![1.0f64, -0.5]);
        assert_eq!(vector_value(&real).to_string(), "[[1.0],[-0.5]]");
        let complex = DVector::from_vec(vec![Complex::new(0.0, 2.0)]);
        assert_eq!(vector_value(&complex).to_string(), "[[0.0,2.0]]");
    }

    #[test]
    fn out_dir_resolution_prefers_the_flag() {
        let tmp = tempfile::tempdir().unwrap();
        let target = tmp.path().join("nested");
        let resolved = resolve_out_dir(Some(target.clone())).unwrap();
        assert_eq!(resolved, target);
        assert!(target.is_dir());
    }
}
