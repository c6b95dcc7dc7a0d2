//! The classical alternating-projection iteration, its auxiliary sequence,
//! unit-triangular inner-product sections with exact inverses, and the two
//! effectiveness diagnostics (spectral oracle for periodic sequences,
//! lower-frame-bound certificate for finite sections).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::frames::frame_bounds;
use crate::linalg::{inner, FieldScalar, DEFAULT_TOL};
use crate::sequence::{validate, SequencePair, ValidationMode, VectorSequence};
use crate::subspace::{grow_invariant_basis, restricted_spectral_radius};
use crate::{Error, Result};

/// Radii this close to 1 (or beyond) mean the iteration does not contract.
pub(crate) const EFFECTIVE_RADIUS_MARGIN: f64 = 1e-9;

/// Record of one iteration run: every iterate, its error against the target,
/// and the per-step update size.
#[derive(Debug, Clone)]
pub struct IterationTrace<T: FieldScalar> {
    target: DVector<T>,
    iterates: Vec<DVector<T>>,
    error_norms: Vec<f64>,
    update_norms: Vec<f64>,
    tolerance: f64,
    converged: bool,
}

impl<T: FieldScalar> IterationTrace<T> {
    pub(crate) fn new(
        target: DVector<T>,
        iterates: Vec<DVector<T>>,
        update_norms: Vec<f64>,
        tolerance: f64,
    ) -> Self {
        assert!(!iterates.is_empty(), "a trace records at least one step");
        assert_eq!(iterates.len(), update_norms.len());
        let error_norms: Vec<f64> = iterates.iter().map(|xn| (&target - xn).norm()).collect();
        let converged = *error_norms.last().expect("nonempty") <= tolerance;
        IterationTrace {
            target,
            iterates,
            error_norms,
            update_norms,
            tolerance,
            converged,
        }
    }

    pub fn steps(&self) -> usize {
        self.iterates.len()
    }

    pub fn target(&self) -> &DVector<T> {
        &self.target
    }

    pub fn iterates(&self) -> &[DVector<T>] {
        &self.iterates
    }

    pub fn final_iterate(&self) -> &DVector<T> {
        self.iterates.last().expect("nonempty")
    }

    pub fn error_norms(&self) -> &[f64] {
        &self.error_norms
    }

    pub fn update_norms(&self) -> &[f64] {
        &self.update_norms
    }

    pub fn final_error(&self) -> f64 {
        *self.error_norms.last().expect("nonempty")
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// CSV rows `step,error_norm,residual_norm`. The residual column is the
    /// update size ‖x_n − x_{n−1}‖ (with x_{−1} = 0), the quantity a caller
    /// can watch without knowing the target.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "step,error_norm,residual_norm")?;
        for n in 0..self.steps() {
            writeln!(
                out,
                "{},{:e},{:e}",
                n, self.error_norms[n], self.update_norms[n]
            )?;
        }
        Ok(())
    }
}

/// Runs x_0 = ⟨x, e_0⟩e_0, x_n = x_{n−1} + ⟨x − x_{n−1}, e_n⟩e_n for the
/// given number of steps, recording errors ‖x − x_n‖ against the target.
pub fn run_classic<T: FieldScalar>(
    e: &VectorSequence<T>,
    x: &DVector<T>,
    steps: usize,
    tolerance: f64,
) -> Result<IterationTrace<T>> {
    assert!(steps >= 1, "a run takes at least one step");
    assert_eq!(e.dim(), x.len(), "iteration dimension mismatch");
    e.ensure_terms(steps)?;

    let mut iterate = DVector::<T>::zeros(x.len());
    let mut iterates = Vec::with_capacity(steps);
    let mut update_norms = Vec::with_capacity(steps);
    for n in 0..steps {
        let en = e.term_at(n).expect("section checked");
        let coeff = inner(&(x - &iterate), en);
        iterate.axpy(coeff, en, T::one());
        update_norms.push(coeff.modulus() * en.norm());
        iterates.push(iterate.clone());
    }
    Ok(IterationTrace::new(
        x.clone(),
        iterates,
        update_norms,
        tolerance,
    ))
}

/// Auxiliary sequence h_0 = e_0, h_n = e_n − Σ_{k<n} ⟨e_n, e_k⟩ h_k as an
/// explicit finite sequence of `count` terms. For the classical iterates,
/// ⟨x, h_n⟩ = ⟨x − x_{n−1}, e_n⟩.
pub fn auxiliary_h<T: FieldScalar>(
    e: &VectorSequence<T>,
    count: usize,
) -> Result<VectorSequence<T>> {
    crate::dual::auxiliary_terms(e, e, count)
}

/// Unit-lower-triangular section of an inner-product matrix together with
/// its exact inverse. Leading blocks of the inverse of a unit-triangular
/// matrix equal inverses of leading blocks, so the section size only
/// truncates, never distorts.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularSection<T: FieldScalar> {
    lower: DMatrix<T>,
    inverse: DMatrix<T>,
}

impl<T: FieldScalar> TriangularSection<T> {
    /// Builds the section from the strictly-lower entry rule and inverts it
    /// by forward substitution.
    pub(crate) fn from_entries(order: usize, entry: impl Fn(usize, usize) -> T) -> Self {
        assert!(order >= 1, "a section has at least one row");
        let mut lower = DMatrix::<T>::identity(order, order);
        for n in 1..order {
            for k in 0..n {
                lower[(n, k)] = entry(n, k);
            }
        }
        let mut inverse = DMatrix::<T>::identity(order, order);
        for i in 1..order {
            for j in 0..i {
                let mut sum = T::zero();
                for k in j..i {
                    sum += lower[(i, k)] * inverse[(k, j)];
                }
                inverse[(i, j)] = -sum;
            }
        }
        TriangularSection { lower, inverse }
    }

    pub fn order(&self) -> usize {
        self.lower.nrows()
    }

    /// The unit-lower-triangular section itself (identity plus the strictly
    /// lower inner-product entries).
    pub fn lower_block(&self) -> &DMatrix<T> {
        &self.lower
    }

    /// Its exact inverse, also unit lower triangular.
    pub fn inverse_block(&self) -> &DMatrix<T> {
        &self.inverse
    }

    /// Strictly lower part of the section (the matrix added to the
    /// identity).
    pub fn strict_lower(&self) -> DMatrix<T> {
        let n = self.order();
        &self.lower - DMatrix::identity(n, n)
    }

    /// Strictly lower part of the inverse; the object whose partial-isometry
    /// behavior the dual diagnostics examine.
    pub fn strict_inverse(&self) -> DMatrix<T> {
        let n = self.order();
        &self.inverse - DMatrix::identity(n, n)
    }

    /// ‖lower · inverse − I‖; zero up to roundoff by construction.
    pub fn product_defect(&self) -> f64 {
        let n = self.order();
        (&self.lower * &self.inverse - DMatrix::identity(n, n)).norm()
    }
}

/// Order-`count` section with strictly-lower entries ⟨e_n, e_k⟩.
pub fn triangular_section<T: FieldScalar>(
    e: &VectorSequence<T>,
    count: usize,
) -> Result<TriangularSection<T>> {
    e.ensure_terms(count)?;
    Ok(TriangularSection::from_entries(count, |n, k| {
        inner(
            e.term_at(n).expect("section checked"),
            e.term_at(k).expect("section checked"),
        )
    }))
}

/// Spectral verdict for a periodic sequence.
#[derive(Debug, Clone, Serialize)]
pub struct SequenceVerdict {
    /// True when the restricted one-period radius is below 1 − 1e-9.
    pub effective: bool,
    /// Spectral radius of the one-period error map on the subspace actually
    /// reachable from first-step errors.
    pub period_map_radius: f64,
    /// False when classical validation (unit norms, linear density) failed;
    /// the radius is still reported but the effectiveness theory does not
    /// cover the input.
    pub reliable: bool,
    /// Validation warnings when not reliable.
    pub warnings: Vec<String>,
}

/// Decides effectiveness of a periodic sequence from the one-period error
/// map P = (I − e_{m−1}e_{m−1}*)···(I − e_0e_0*), restricted to the smallest
/// P-invariant subspace containing range(I − e_0e_0*). First-step errors
/// never have a component along e_0, so the radius on all of H would
/// overstate the observable decay rate.
pub fn periodic_effectiveness_oracle<T: FieldScalar>(
    e: &VectorSequence<T>,
) -> Result<SequenceVerdict> {
    if e.extension() != crate::sequence::Extension::Periodic {
        return Err(Error::NotPeriodic);
    }
    let dim = e.dim();
    let id = DMatrix::<T>::identity(dim, dim);
    let factor = |k: usize| -> DMatrix<T> {
        let ek = e.term_at(k).expect("periodic");
        &id - ek * ek.adjoint()
    };
    let mut period_map = id.clone();
    for k in 0..e.generator_count() {
        period_map = factor(k) * period_map;
    }
    let seed = factor(0);
    let basis = grow_invariant_basis(&period_map, &seed, 1e-10);
    let period_map_radius = restricted_spectral_radius(&period_map, &basis);

    let report = validate(
        &SequencePair::classical(e),
        ValidationMode::Classical,
        DEFAULT_TOL,
    );
    let reliable = report.warnings.is_empty();

    Ok(SequenceVerdict {
        effective: period_map_radius < 1.0 - EFFECTIVE_RADIUS_MARGIN,
        period_map_radius,
        reliable,
        warnings: report.warnings,
    })
}

/// Lower-frame-bound certificate at a finite section.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlmostEffectiveBound {
    /// Lower frame bound A of the auxiliary section.
    pub lower_frame_bound: f64,
    /// 1 − A: the guaranteed cap on the limiting relative error.
    pub error_bound: f64,
    /// True when A clears the tolerance, i.e. the section certifies a
    /// nontrivial bound.
    pub almost_effective: bool,
    /// Section length the certificate was computed at.
    pub section: usize,
}

/// Frame bounds of the auxiliary sequence over `count` terms: the lower
/// bound A caps the limiting error at (1 − A)‖x‖, and A near 1 certifies
/// effectiveness of the section. For non-periodic inputs this is a
/// section-level estimate only.
pub fn almost_effective_bound<T: FieldScalar>(
    e: &VectorSequence<T>,
    count: usize,
    tol: f64,
) -> Result<AlmostEffectiveBound> {
    let h = auxiliary_h(e, count)?;
    let bounds = frame_bounds(&h, count, tol)?;
    Ok(AlmostEffectiveBound {
        lower_frame_bound: bounds.lower,
        error_bound: 1.0 - bounds.lower,
        almost_effective: bounds.lower > tol,
        section: count,
    })
}
