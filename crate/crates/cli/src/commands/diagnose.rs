//! `kaczmarz diagnose`: effectiveness verdict, Grammian positivity in both
//! orientations, partial-isometry defect of the one-period section, frame
//! bounds of both auxiliary sequences, and the equivalence report whenever
//! a relating operator can be recovered. Exit 2 flags a pair whose forward
//! direction is not effective.

use kaczmarz_core::{
    auxiliary_pair, effective_pair_oracle, equivalence_report, frame_bounds, grammian_positive,
    mixed_grammian, mixed_triangular_section, partial_isometry_test, validate, Complex, Extension,
    Field, FieldScalar, GrammianOrientation, GrammianVerdict, SequencePair, ValidationMode,
    DEFAULT_TOL,
};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

use super::core_failure;
use crate::config::{self, LoadedConfig, ProblemKind};
use crate::{output, Failure};

/// Periods of auxiliary terms behind the frame-bound report; enough to see
/// bounds tighten when the pair is effective without dominating runtime.
const BOUND_PERIODS: usize = 10;

pub fn execute(config_path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<u8, Failure> {
    let loaded = config::load(config_path)?;
    let out_dir = output::resolve_out_dir(out)?;
    match loaded.config.field {
        Field::Real => diagnose_typed::<f64>(&loaded, seed, &out_dir),
        Field::Complex => diagnose_typed::<Complex<f64>>(&loaded, seed, &out_dir),
    }
}

fn grammian_value<T: FieldScalar>(verdict: &GrammianVerdict<T>) -> Value {
    json!({
        "positive": verdict.positive,
        "failing_order": verdict.failing_order,
        "witness": verdict.witness.as_ref().map(output::vector_value),
    })
}

fn diagnose_typed<T: FieldScalar>(
    loaded: &LoadedConfig,
    seed_flag: Option<u64>,
    out_dir: &Path,
) -> Result<u8, Failure> {
    let problem = config::build::<T>(&loaded.config)?;
    let pair = match &problem.kind {
        ProblemKind::Single(e) => SequencePair::classical(e),
        ProblemKind::Pair(pair) => pair.clone(),
    };
    if pair.extension() != Extension::Periodic {
        return Err(Failure::invalid(
            "diagnose decides periodic effectiveness; this config is explicit".into(),
        ));
    }
    let seed = seed_flag.unwrap_or(problem.seed);
    let section_order = pair.generator_count();

    let verdict = effective_pair_oracle(&pair, seed).map_err(core_failure)?;
    let warnings = validate(&pair, ValidationMode::Dual, DEFAULT_TOL).warnings;

    let by_analysis = mixed_grammian(&pair, section_order, GrammianOrientation::AnalysisBySynthesis)
        .map_err(core_failure)?;
    let by_synthesis =
        mixed_grammian(&pair, section_order, GrammianOrientation::SynthesisByAnalysis)
            .map_err(core_failure)?;
    let positive_analysis = grammian_positive(&by_analysis, DEFAULT_TOL);
    let positive_synthesis = grammian_positive(&by_synthesis, DEFAULT_TOL);

    let mut gram_csv = Vec::new();
    by_analysis
        .write_csv(&mut gram_csv)
        .map_err(|err| Failure::numerical(format!("grammian serialization: {err}")))?;
    output::write_text(
        &out_dir.join("grammian.csv"),
        std::str::from_utf8(&gram_csv).expect("csv is ascii"),
    )?;

    let section = mixed_triangular_section(&pair, section_order).map_err(core_failure)?;
    let isometry = partial_isometry_test(&section, DEFAULT_TOL);

    let span = BOUND_PERIODS * section_order;
    let aux = auxiliary_pair(&pair, span).map_err(core_failure)?;
    let forward_bounds = frame_bounds(&aux.forward, span, DEFAULT_TOL).map_err(core_failure)?;
    let reverse_bounds = frame_bounds(&aux.reverse, span, DEFAULT_TOL).map_err(core_failure)?;

    // The relating operator does not exist for every pair; its absence is a
    // finding, not a failure.
    let (equivalence, equivalence_error) =
        match equivalence_report(&pair, None, section_order, 1e-6) {
            Ok(report) => (
                serde_json::to_value(&report)
                    .map_err(|err| Failure::numerical(format!("report serialization: {err}")))?,
                Value::Null,
            ),
            Err(err) => (Value::Null, Value::String(err.to_string())),
        };

    let report = json!({
        "auxiliary_span": span,
        "command": "diagnose",
        "config_sha256": loaded.sha256,
        "equivalence": equivalence,
        "equivalence_error": equivalence_error,
        "forward_auxiliary_bounds": serde_json::to_value(forward_bounds).expect("plain fields"),
        "grammian_csv": "grammian.csv",
        "grammian_positive": {
            "analysis_by_synthesis": grammian_value(&positive_analysis),
            "synthesis_by_analysis": grammian_value(&positive_synthesis),
        },
        "partial_isometry": serde_json::to_value(isometry).expect("plain fields"),
        "reverse_auxiliary_bounds": serde_json::to_value(reverse_bounds).expect("plain fields"),
        "section_order": section_order,
        "seed": seed,
        "validation_warnings": warnings,
        "verdict": serde_json::to_value(&verdict).expect("plain fields"),
    });
    output::write_json(&out_dir.join("diagnose.json"), &report)?;

    Ok(if verdict.forward_effective { 0 } else { 2 })
}
