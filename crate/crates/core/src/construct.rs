//! Constructive machinery: invertible transforms of pairs, pairs built from
//! an effective sequence, half-power lifts, recovery of the relating
//! operator from a section, synthesis duals certified by an
//! almost-effectiveness bound, the augmented two-track run, and biorthogonal
//! pairs from a basis.

use nalgebra::{DMatrix, DVector};

use crate::classic::{auxiliary_h, IterationTrace};
use crate::frames::{
    frame_operator_partial, grammian_positive, mixed_grammian, GrammianOrientation,
};
use crate::linalg::{hermitian_eig, inner, pseudo_inverse, FieldScalar, DEFAULT_TOL};
use crate::sequence::{validate, SequencePair, ValidationMode, VectorSequence};
use crate::{Error, Result};

/// SVD wrapper returning (inverse, adjoint of inverse, smallest singular
/// value); errors when the smallest singular value is at or below `tol`.
fn inverse_pair<T: FieldScalar>(
    operator: &DMatrix<T>,
    tol: f64,
) -> Result<(DMatrix<T>, DMatrix<T>)> {
    assert_eq!(operator.nrows(), operator.ncols(), "inverse of a square operator");
    let svd = operator.clone().svd(true, true);
    let smallest = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if smallest <= tol {
        return Err(Error::SingularOperator {
            smallest,
            limit: tol,
        });
    }
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let mut sigma_inv = DMatrix::<T>::zeros(operator.ncols(), operator.nrows());
    for (i, s) in svd.singular_values.iter().enumerate() {
        sigma_inv[(i, i)] = T::from_real(1.0 / s);
    }
    let inverse = v_t.adjoint() * &sigma_inv * u.adjoint();
    let inverse_adjoint = inverse.adjoint();
    Ok((inverse, inverse_adjoint))
}

/// Maps a pair through an invertible operator: analysis terms through the
/// operator, synthesis terms through the adjoint of its inverse. Pairings
/// ⟨φ_n, ψ_n⟩ are preserved, and so are both effectiveness verdicts.
pub fn transform_pair<T: FieldScalar>(
    pair: &SequencePair<T>,
    operator: &DMatrix<T>,
    tol: f64,
) -> Result<SequencePair<T>> {
    assert_eq!(operator.nrows(), pair.dim(), "operator dimension mismatch");
    let (_, inverse_adjoint) = inverse_pair(operator, tol)?;
    let analysis = pair.analysis().map_generators(|v| operator * v);
    let synthesis = pair.synthesis().map_generators(|v| &inverse_adjoint * v);
    SequencePair::new(analysis, synthesis)
}

/// Builds the pair (Te_n, (T⁻¹)*e_n) from a unit-norm spanning sequence.
/// When the input drives the single-sequence iteration to zero error, the
/// resulting pair is effective in both directions.
pub fn pair_from_effective<T: FieldScalar>(
    e: &VectorSequence<T>,
    operator: &DMatrix<T>,
    tol: f64,
) -> Result<SequencePair<T>> {
    let report = validate(
        &SequencePair::classical(e),
        ValidationMode::Classical,
        DEFAULT_TOL,
    );
    if !report.warnings.is_empty() {
        return Err(Error::FailsValidation {
            detail: report.warnings.join("; "),
        });
    }
    transform_pair(&SequencePair::classical(e), operator, tol)
}

/// e_n = T^{1/2}φ_n for Hermitian positive T. The lift turns mixed pairings
/// into plain ones: ⟨e_m, e_n⟩ = ⟨φ_m, Tφ_n⟩.
pub fn lift_half_power<T: FieldScalar>(
    phi: &VectorSequence<T>,
    operator: &DMatrix<T>,
    tol: f64,
) -> Result<VectorSequence<T>> {
    assert_eq!(operator.nrows(), phi.dim(), "operator dimension mismatch");
    let eig = hermitian_eig(operator, tol)?;
    let smallest = *eig.eigenvalues.first().expect("positive dimension");
    if smallest <= tol {
        return Err(Error::NotPositiveSemidefinite {
            eigenvalue: smallest,
            tol,
        });
    }
    let root = eig.map_eigenvalues(f64::sqrt);
    Ok(phi.map_generators(|v| &root * v))
}

/// Operator recovered from a pair section, with the numeric evidence that
/// it satisfies the hypotheses an equivalence argument needs.
#[derive(Debug, Clone)]
pub struct RecoveredOperator<T: FieldScalar> {
    pub operator: DMatrix<T>,
    /// ‖W − W*‖.
    pub hermitian_defect: f64,
    /// Smallest eigenvalue of the Hermitian part; invertibility evidence is
    /// left to the caller, positivity is enforced here.
    pub psd_min_eig: f64,
    /// Worst ‖Wφ_n − ψ_n‖ over the section; doubles as the existence test
    /// for an exact relating operator.
    pub mapping_defect: f64,
}

fn section_rank<T: FieldScalar>(section: &DMatrix<T>) -> usize {
    let values = section.clone().singular_values();
    let largest = values.iter().cloned().fold(0.0_f64, f64::max);
    let limit = DEFAULT_TOL * (1.0 + largest);
    values.iter().filter(|s| **s > limit).count()
}

/// Recovers the positive operator W with Wφ_n = ψ_n from the first `terms`
/// terms of a pair.
///
/// Existence is decided by positivity of the mixed Grammian section; the
/// operator itself is the least-deviation solution (synthesis matrix of ψ
/// times the pseudoinverse of the synthesis matrix of φ), and its fit
/// residual, Hermitian defect, and smallest eigenvalue are all validated
/// against `tol` before the operator is returned.
pub fn recover_relating_operator<T: FieldScalar>(
    pair: &SequencePair<T>,
    terms: usize,
    tol: f64,
) -> Result<RecoveredOperator<T>> {
    assert!(terms >= 1, "recovery needs at least one term");
    let dim = pair.dim();
    let phi = pair.analysis().section_matrix(terms)?;
    let psi = pair.synthesis().section_matrix(terms)?;
    for section in [&phi, &psi] {
        let rank = section_rank(section);
        if rank < dim {
            return Err(Error::SpanDeficient { terms, rank, dim });
        }
    }

    let grammian = mixed_grammian(pair, terms, GrammianOrientation::AnalysisBySynthesis)?;
    let verdict = grammian_positive(&grammian, tol);
    if !verdict.positive {
        return Err(Error::GrammianNotPositive {
            order: verdict.failing_order.expect("failing verdict carries the order"),
        });
    }

    let operator = &psi * pseudo_inverse(&phi, DEFAULT_TOL);
    let mut mapping_defect = 0.0_f64;
    for n in 0..terms {
        let col = operator.clone() * pair.analysis().term_at(n)?
            - pair.synthesis().term_at(n)?;
        mapping_defect = mapping_defect.max(col.norm());
    }
    if mapping_defect > tol {
        return Err(Error::MappingDefect {
            defect: mapping_defect,
            tol,
        });
    }

    let hermitian_defect = (&operator - operator.adjoint()).norm();
    let eig = hermitian_eig(&operator, tol)?;
    let psd_min_eig = *eig.eigenvalues.first().expect("positive dimension");
    if psd_min_eig < -tol {
        return Err(Error::NotPositiveSemidefinite {
            eigenvalue: psd_min_eig,
            tol,
        });
    }

    Ok(RecoveredOperator {
        operator,
        hermitian_defect,
        psd_min_eig,
        mapping_defect,
    })
}

/// Canonical dual of the auxiliary section: ψ_n = S⁻¹h_n with S the
/// section frame operator of h. Requires the section lower frame bound to
/// clear `tol` (the almost-effectiveness certificate); the returned terms
/// reconstruct any x as Σ ⟨x, h_n⟩ψ_n exactly at this section.
pub fn synthesis_dual_from_almost_effective<T: FieldScalar>(
    e: &VectorSequence<T>,
    count: usize,
    tol: f64,
) -> Result<VectorSequence<T>> {
    let h = auxiliary_h(e, count)?;
    let s = frame_operator_partial(&h, count)?;
    let eig = hermitian_eig(&s, DEFAULT_TOL)?;
    let lower = *eig.eigenvalues.first().expect("positive dimension");
    if lower <= tol {
        return Err(Error::NotAlmostEffective { lower, tol });
    }
    let inverse = eig.map_eigenvalues(|l| 1.0 / l);
    let terms = (0..count)
        .map(|n| &inverse * h.term_at(n).expect("section checked"))
        .collect();
    Ok(VectorSequence::finite(terms))
}

/// Two synchronized traces: the stalling-prone state iteration and the
/// augmented synthesis track driven by the same coefficients.
#[derive(Debug, Clone)]
pub struct AugmentedRun<T: FieldScalar> {
    /// The state variable x_n of the single-sequence iteration.
    pub classic_trace: IterationTrace<T>,
    /// y_n = y_{n−1} + ⟨x − x_{n−1}, e_n⟩ψ_n.
    pub augmented_trace: IterationTrace<T>,
    /// Synthesis terms the y-track used.
    pub psi_used: VectorSequence<T>,
    /// Worst |⟨x − x_{n−1}, e_n⟩ − ⟨x, h_n⟩| over the run; the two
    /// coefficient formulas agree in exact arithmetic.
    pub identity_defect: f64,
}

impl<T: FieldScalar> AugmentedRun<T> {
    /// CSV rows `step,classic_error,augmented_error`.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "step,classic_error,augmented_error")?;
        for n in 0..self.classic_trace.steps() {
            writeln!(
                out,
                "{},{:e},{:e}",
                n,
                self.classic_trace.error_norms()[n],
                self.augmented_trace.error_norms()[n]
            )?;
        }
        Ok(())
    }
}

/// Runs the augmented iteration: the state x_n follows the single-sequence
/// recursion over `e`, while y_n accumulates the same coefficients along
/// `psi`. Every coefficient is cross-checked against ⟨x, h_n⟩; a gap beyond
/// 1e-10 (scaled by ‖x‖) aborts the run, since it would mean the bookkeeping
/// the reconstruction rests on has broken down.
pub fn run_augmented<T: FieldScalar>(
    e: &VectorSequence<T>,
    psi: &VectorSequence<T>,
    x: &DVector<T>,
    steps: usize,
    tolerance: f64,
) -> Result<AugmentedRun<T>> {
    assert!(steps >= 1, "a run takes at least one step");
    assert_eq!(e.dim(), x.len(), "iteration dimension mismatch");
    assert_eq!(psi.dim(), x.len(), "synthesis dimension mismatch");
    e.ensure_terms(steps)?;
    psi.ensure_terms(steps)?;
    let h = auxiliary_h(e, steps)?;

    let limit = 1e-10 * (1.0 + x.norm());
    let mut state = DVector::<T>::zeros(x.len());
    let mut augmented = DVector::<T>::zeros(x.len());
    let mut state_iterates = Vec::with_capacity(steps);
    let mut state_updates = Vec::with_capacity(steps);
    let mut aug_iterates = Vec::with_capacity(steps);
    let mut aug_updates = Vec::with_capacity(steps);
    let mut identity_defect = 0.0_f64;

    for n in 0..steps {
        let en = e.term_at(n).expect("section checked");
        let psin = psi.term_at(n).expect("section checked");
        let coeff = inner(&(x - &state), en);
        let via_h = inner(x, h.term_at(n).expect("section checked"));
        identity_defect = identity_defect.max((coeff - via_h).modulus());
        state.axpy(coeff, en, T::one());
        augmented.axpy(coeff, psin, T::one());
        state_updates.push(coeff.modulus() * en.norm());
        aug_updates.push(coeff.modulus() * psin.norm());
        state_iterates.push(state.clone());
        aug_iterates.push(augmented.clone());
    }

    if identity_defect > limit {
        return Err(Error::AuxiliaryIdentityViolated {
            defect: identity_defect,
            limit,
        });
    }

    Ok(AugmentedRun {
        classic_trace: IterationTrace::new(x.clone(), state_iterates, state_updates, tolerance),
        augmented_trace: IterationTrace::new(x.clone(), aug_iterates, aug_updates, tolerance),
        psi_used: psi.clone(),
        identity_defect,
    })
}

/// The unique dual basis ψ with ⟨φ_m, ψ_n⟩ = δ_{mn}, as a pair (φ, ψ). The
/// input must supply exactly dim independent generators; the resulting pair
/// reconstructs every vector exactly after one pass.
pub fn biorthogonal_pair<T: FieldScalar>(
    basis: &VectorSequence<T>,
    tol: f64,
) -> Result<SequencePair<T>> {
    let dim = basis.dim();
    if basis.generator_count() != dim {
        return Err(Error::FailsValidation {
            detail: format!(
                "a basis of a {dim}-dimensional space needs exactly {dim} generators, got {}",
                basis.generator_count()
            ),
        });
    }
    let phi = basis.section_matrix(dim)?;
    let svd = phi.clone().svd(true, true);
    let largest = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let smallest = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let limit = tol * largest.max(1.0);
    if smallest <= limit {
        return Err(Error::SingularOperator { smallest, limit });
    }
    // ⟨φ_m, ψ_n⟩ = δ requires Ψ*Φ = I, i.e. Ψ = (Φ*)⁻¹.
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let mut sigma_inv = DMatrix::<T>::zeros(dim, dim);
    for (i, s) in svd.singular_values.iter().enumerate() {
        sigma_inv[(i, i)] = T::from_real(1.0 / s);
    }
    let dual_matrix = u * sigma_inv * v_t;
    let duals = (0..dim).map(|n| dual_matrix.column(n).clone_owned()).collect();
    let psi = VectorSequence::new(duals, basis.extension());
    SequencePair::new(basis.clone(), psi)
}
