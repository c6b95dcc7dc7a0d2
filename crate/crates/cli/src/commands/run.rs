//! `kaczmarz run`: one iteration from a config, trace.csv plus
//! verdict.json, exit 0 when the final error is at or below the tolerance
//! and 2 when it is not.

use kaczmarz_core::{
    random, run_augmented, run_classic, run_dual, synthesis_dual_from_almost_effective, Complex,
    DVector, Field, FieldScalar, DEFAULT_TOL,
};
use serde_json::json;
use std::path::{Path, PathBuf};

use super::core_failure;
use crate::config::{self, LoadedConfig, Problem, ProblemKind};
use crate::{output, Algorithm, Failure};

pub fn execute(
    config_path: &Path,
    algorithm: Option<Algorithm>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<u8, Failure> {
    let loaded = config::load(config_path)?;
    let out_dir = output::resolve_out_dir(out)?;
    match loaded.config.field {
        Field::Real => run_typed::<f64>(&loaded, algorithm, seed, &out_dir),
        Field::Complex => run_typed::<Complex<f64>>(&loaded, algorithm, seed, &out_dir),
    }
}

fn target<T: FieldScalar>(problem: &Problem<T>, seed: u64) -> (DVector<T>, &'static str) {
    match &problem.x {
        Some(x) => (x.clone(), "config"),
        None => {
            let mut rng = random::rng(seed);
            (random::vector(&mut rng, problem.dimension), "seeded")
        }
    }
}

fn run_typed<T: FieldScalar>(
    loaded: &LoadedConfig,
    algorithm: Option<Algorithm>,
    seed_flag: Option<u64>,
    out_dir: &Path,
) -> Result<u8, Failure> {
    let problem = config::build::<T>(&loaded.config)?;
    let seed = seed_flag.unwrap_or(problem.seed);
    let (x, x_source) = target(&problem, seed);
    let algorithm = algorithm.unwrap_or(match problem.kind {
        ProblemKind::Single(_) => Algorithm::Classic,
        ProblemKind::Pair(_) => Algorithm::Dual,
    });

    let mut csv = Vec::new();
    let (name, converged, final_error, extra) = match (&algorithm, &problem.kind) {
        (Algorithm::Classic, ProblemKind::Single(e)) => {
            let trace =
                run_classic(e, &x, problem.steps, problem.tolerance).map_err(core_failure)?;
            trace
                .write_csv(&mut csv)
                .map_err(|err| Failure::numerical(format!("trace serialization: {err}")))?;
            ("classic", trace.converged(), trace.final_error(), json!({}))
        }
        (Algorithm::Dual, ProblemKind::Pair(pair)) => {
            let trace =
                run_dual(pair, &x, problem.steps, problem.tolerance).map_err(core_failure)?;
            trace
                .write_csv(&mut csv)
                .map_err(|err| Failure::numerical(format!("trace serialization: {err}")))?;
            ("dual", trace.converged(), trace.final_error(), json!({}))
        }
        (Algorithm::Augmented, ProblemKind::Single(e)) => {
            let psi = synthesis_dual_from_almost_effective(e, problem.steps, DEFAULT_TOL)
                .map_err(core_failure)?;
            let run = run_augmented(e, &psi, &x, problem.steps, problem.tolerance)
                .map_err(core_failure)?;
            run.write_csv(&mut csv)
                .map_err(|err| Failure::numerical(format!("trace serialization: {err}")))?;
            let extra = json!({
                "final_classic_error": run.classic_trace.final_error(),
                "identity_defect": run.identity_defect,
            });
            (
                "augmented",
                run.augmented_trace.converged(),
                run.augmented_trace.final_error(),
                extra,
            )
        }
        (Algorithm::Classic | Algorithm::Augmented, ProblemKind::Pair(_)) => {
            return Err(Failure::invalid(format!(
                "algorithm {} needs an `e` config, this one lists phi/psi",
                match algorithm {
                    Algorithm::Classic => "classic",
                    _ => "augmented",
                }
            )));
        }
        (Algorithm::Dual, ProblemKind::Single(_)) => {
            return Err(Failure::invalid(
                "algorithm dual needs a phi config; rerun the `e` config with --algorithm classic"
                    .into(),
            ));
        }
    };

    let trace_path = out_dir.join("trace.csv");
    output::write_text(&trace_path, std::str::from_utf8(&csv).expect("csv is ascii"))?;

    let mut verdict = json!({
        "algorithm": name,
        "command": "run",
        "config_sha256": loaded.sha256,
        "converged": converged,
        "dimension": problem.dimension,
        "final_error": final_error,
        "seed": seed,
        "steps": problem.steps,
        "tolerance": problem.tolerance,
        "trace_csv": "trace.csv",
        "x": output::vector_value(&x),
        "x_source": x_source,
    });
    if let Some(map) = verdict.as_object_mut() {
        for (k, v) in extra.as_object().expect("extra is an object") {
            map.insert(k.clone(), v.clone());
        }
    }
    output::write_json(&out_dir.join("verdict.json"), &verdict)?;

    Ok(if converged { 0 } else { 2 })
}
