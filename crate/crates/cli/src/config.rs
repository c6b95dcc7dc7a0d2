//! Problem configs: the JSON schema, its validation, and the conversion
//! into typed sequences. Parsing is strict (unknown fields rejected, entry
//! arity checked against the declared field) so a config either builds
//! exactly the problem it describes or fails with a message naming the
//! offending field.

use kaczmarz_core::{DVector, Extension, Field, FieldScalar, SequencePair, VectorSequence};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::path::Path;

use crate::Failure;

/// Extension tag as spelled in configs: `periodic` repeats the listed
/// vectors forever, `explicit` uses them once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionTag {
    Periodic,
    Explicit,
}

impl ExtensionTag {
    pub fn extension(self) -> Extension {
        match self {
            ExtensionTag::Periodic => Extension::Periodic,
            ExtensionTag::Explicit => Extension::Finite,
        }
    }
}

/// One coordinate: a bare number, `[re]`, or `[re, im]`. The two-element
/// form is only legal when the config declares the complex field.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Scalar(f64),
    Parts(Vec<f64>),
}

impl Entry {
    fn parts(&self, field: Field) -> Result<(f64, f64), String> {
        match self {
            Entry::Scalar(re) => Ok((*re, 0.0)),
            Entry::Parts(p) => match (field, p.as_slice()) {
                (_, [re]) => Ok((*re, 0.0)),
                (Field::Complex, [re, im]) => Ok((*re, *im)),
                (Field::Real, [_, _]) => {
                    Err("real-field entries take one component, found two".into())
                }
                _ => Err(format!("entry needs 1 or 2 components, found {}", p.len())),
            },
        }
    }
}

/// On-disk problem description. Exactly one of `e` (single-sequence
/// algorithms) or `phi` (pair algorithms; `psi` defaults to `phi`) must be
/// present, and every vector must have `dimension` coordinates.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub field: Field,
    pub dimension: usize,
    #[serde(default)]
    pub phi: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub psi: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub e: Option<Vec<Vec<Entry>>>,
    pub extension: ExtensionTag,
    #[serde(default)]
    pub x: Option<Vec<Entry>>,
    pub steps: usize,
    pub tolerance: f64,
    pub seed: u64,
}

/// Config plus the hash every artifact echoes.
pub struct LoadedConfig {
    pub config: ProblemConfig,
    pub sha256: String,
}

pub fn load(path: &Path) -> Result<LoadedConfig, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|err| Failure::invalid(format!("cannot read {}: {err}", path.display())))?;
    let config: ProblemConfig = serde_json::from_slice(&bytes)
        .map_err(|err| Failure::invalid(format!("cannot parse {}: {err}", path.display())))?;
    let sha256 = hex_digest(&bytes);
    Ok(LoadedConfig { config, sha256 })
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Sequences a validated config describes.
#[derive(Debug)]
pub enum ProblemKind<T: FieldScalar> {
    Single(VectorSequence<T>),
    Pair(SequencePair<T>),
}

/// Typed, validated problem ready for a command to consume.
#[derive(Debug)]
pub struct Problem<T: FieldScalar> {
    pub dimension: usize,
    pub kind: ProblemKind<T>,
    pub x: Option<DVector<T>>,
    pub steps: usize,
    pub tolerance: f64,
    pub seed: u64,
}

fn parse_vector<T: FieldScalar>(
    entries: &[Entry],
    dimension: usize,
    field: Field,
    label: &str,
) -> Result<DVector<T>, String> {
    if entries.len() != dimension {
        return Err(format!(
            "{label} has {} coordinates, config declares dimension {dimension}",
            entries.len()
        ));
    }
    let mut coords = Vec::with_capacity(dimension);
    for (i, entry) in entries.iter().enumerate() {
        let (re, im) = entry.parts(field).map_err(|e| format!("{label}[{i}]: {e}"))?;
        let value = T::from_parts(re, im)
            .ok_or_else(|| format!("{label}[{i}]: imaginary part in a real-field config"))?;
        coords.push(value);
    }
    Ok(DVector::from_vec(coords))
}

fn parse_sequence<T: FieldScalar>(
    vectors: &[Vec<Entry>],
    config: &ProblemConfig,
    label: &str,
) -> Result<VectorSequence<T>, String> {
    if vectors.is_empty() {
        return Err(format!("{label} lists no vectors"));
    }
    let terms = vectors
        .iter()
        .enumerate()
        .map(|(n, v)| parse_vector(v, config.dimension, config.field, &format!("{label}[{n}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorSequence::new(terms, config.extension.extension()))
}

/// Validates the config against the declared scalar type and builds the
/// sequences. All structural errors surface here as invalid-input failures;
/// commands can assume shapes are consistent afterwards.
pub fn build<T: FieldScalar>(config: &ProblemConfig) -> Result<Problem<T>, Failure> {
    assert_eq!(T::FIELD, config.field, "caller dispatched on the field tag");
    let fail = |msg: String| Failure::invalid(msg);

    if config.dimension == 0 {
        return Err(fail("dimension must be at least 1".into()));
    }
    if config.steps == 0 {
        return Err(fail("steps must be at least 1".into()));
    }
    if !config.tolerance.is_finite() || config.tolerance < 0.0 {
        return Err(fail(format!(
            "tolerance must be finite and nonnegative, got {}",
            config.tolerance
        )));
    }

    let kind = match (&config.e, &config.phi, &config.psi) {
        (Some(e), None, None) => {
            ProblemKind::Single(parse_sequence(e, config, "e").map_err(fail)?)
        }
        (None, Some(phi), psi) => {
            let analysis = parse_sequence::<T>(phi, config, "phi").map_err(fail)?;
            let synthesis = match psi {
                Some(psi) => {
                    let parsed = parse_sequence::<T>(psi, config, "psi").map_err(fail)?;
                    if parsed.generator_count() != analysis.generator_count() {
                        return Err(fail(format!(
                            "phi lists {} vectors but psi lists {}",
                            analysis.generator_count(),
                            parsed.generator_count()
                        )));
                    }
                    parsed
                }
                None => analysis.clone(),
            };
            ProblemKind::Pair(
                SequencePair::new(analysis, synthesis)
                    .map_err(|err| fail(format!("phi/psi mismatch: {err}")))?,
            )
        }
        (Some(_), Some(_), _) => {
            return Err(fail("config lists both e and phi; give exactly one".into()))
        }
        (None, None, _) => return Err(fail("config lists neither e nor phi".into())),
        (Some(_), None, Some(_)) => {
            return Err(fail("psi belongs to a phi config, not an e config".into()))
        }
    };

    let x = config
        .x
        .as_ref()
        .map(|entries| parse_vector(entries, config.dimension, config.field, "x").map_err(fail))
        .transpose()?;

    Ok(Problem {
        dimension: config.dimension,
        kind,
        x,
        steps: config.steps,
        tolerance: config.tolerance,
        seed: config.seed,
    })
}
