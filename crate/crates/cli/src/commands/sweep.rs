//! `kaczmarz sweep`: perturb an orthonormal basis over a magnitude grid,
//! and for every cell report the one-period radius of the perturbed basis
//! and of the pair built from it with a well-conditioned positive operator.
//! Rows are ordered by (delta, trial) and derive from per-cell seeds, so
//! the CSV is reproducible cell by cell.

use kaczmarz_core::{
    effective_pair_oracle, pair_from_effective, periodic_effectiveness_oracle, random, Complex,
    DMatrix, Extension, Field, FieldScalar,
};
use std::path::{Path, PathBuf};

use super::core_failure;
use crate::config::{self, LoadedConfig, ProblemKind};
use crate::{output, Failure};

/// Odd 64-bit constant spreading consecutive cell indices across the seed
/// space; the +1 keeps the first cell away from the base seed itself.
const CELL_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Condition number of the positive operator each cell pairs with.
const RELATING_CONDITION: f64 = 10.0;

pub fn execute(
    config_path: &Path,
    deltas: &[f64],
    trials: usize,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<u8, Failure> {
    if deltas.is_empty() {
        return Err(Failure::invalid("the delta grid is empty".into()));
    }
    if let Some(bad) = deltas.iter().find(|d| !d.is_finite() || **d < 0.0) {
        return Err(Failure::invalid(format!(
            "delta magnitudes must be finite and nonnegative, got {bad}"
        )));
    }
    if trials == 0 {
        return Err(Failure::invalid("trials must be at least 1".into()));
    }
    let loaded = config::load(config_path)?;
    let out_dir = output::resolve_out_dir(out)?;
    match loaded.config.field {
        Field::Real => sweep_typed::<f64>(&loaded, deltas, trials, seed, &out_dir),
        Field::Complex => sweep_typed::<Complex<f64>>(&loaded, deltas, trials, seed, &out_dir),
    }
}

fn sweep_typed<T: FieldScalar>(
    loaded: &LoadedConfig,
    deltas: &[f64],
    trials: usize,
    seed_flag: Option<u64>,
    out_dir: &Path,
) -> Result<u8, Failure> {
    let problem = config::build::<T>(&loaded.config)?;
    let base = match &problem.kind {
        ProblemKind::Single(e) => e.clone(),
        ProblemKind::Pair(_) => {
            return Err(Failure::invalid(
                "sweep perturbs a single sequence; the config must list e".into(),
            ))
        }
    };
    if base.extension() != Extension::Periodic {
        return Err(Failure::invalid("sweep needs a periodic basis".into()));
    }
    let dim = problem.dimension;
    if base.generator_count() != dim {
        return Err(Failure::invalid(format!(
            "sweep needs exactly dimension = {dim} basis vectors, found {}",
            base.generator_count()
        )));
    }
    let section = base.section_matrix(dim).map_err(core_failure)?;
    let defect = (section.adjoint() * &section - DMatrix::<T>::identity(dim, dim)).norm();
    if defect > 1e-8 {
        return Err(Failure::invalid(format!(
            "sweep needs an orthonormal e; this basis is off by {defect:e}"
        )));
    }

    let seed = seed_flag.unwrap_or(problem.seed);
    let mut csv = String::from("delta,trial,classic_radius,pair_radius\n");
    for (grid_index, delta) in deltas.iter().enumerate() {
        for trial in 0..trials {
            let cell_seed = seed.wrapping_add(
                ((grid_index * trials + trial + 1) as u64).wrapping_mul(CELL_STRIDE),
            );
            let mut rng = random::rng(cell_seed);
            let perturbed = random::perturbed_unit_sequence(&mut rng, &base, *delta);
            let classic = periodic_effectiveness_oracle(&perturbed).map_err(core_failure)?;
            let relating = random::spd_with_condition::<T, _>(&mut rng, dim, RELATING_CONDITION);
            let pair = pair_from_effective(&perturbed, &relating, 1e-12).map_err(core_failure)?;
            let verdict =
                effective_pair_oracle(&pair, cell_seed.wrapping_add(1)).map_err(core_failure)?;
            csv.push_str(&format!(
                "{delta},{trial},{:e},{:e}\n",
                classic.period_map_radius, verdict.forward_radius
            ));
        }
    }
    output::write_text(&out_dir.join("sweep.csv"), &csv)?;
    Ok(0)
}
