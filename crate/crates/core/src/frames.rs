//! Finite sections of frame-theoretic objects: analysis coefficients,
//! synthesis sums, partial frame operators and their bounds, canonical duals,
//! duality and biorthogonality checks, and mixed Grammian sections with a
//! positivity test over all leading blocks.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::linalg::{hermitian_eig, inner, is_psd, FieldScalar, DEFAULT_TOL};
use crate::sequence::{SequencePair, VectorSequence};
use crate::{Error, Result};

/// Extremal eigenvalues of a partial frame operator.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    /// Both bounds within tolerance of 1.
    pub parseval: bool,
    /// Finite upper bound; always true for a finite section, kept so reports
    /// spell the Bessel property out.
    pub bessel: bool,
}

/// Coefficients ⟨x, f_n⟩ for `n < count`.
pub fn analysis_coeffs<T: FieldScalar>(
    seq: &VectorSequence<T>,
    x: &DVector<T>,
    count: usize,
) -> Result<Vec<T>> {
    assert_eq!(seq.dim(), x.len(), "analysis vector dimension mismatch");
    seq.ensure_terms(count)?;
    Ok((0..count)
        .map(|n| inner(x, seq.term_at(n).expect("section checked")))
        .collect())
}

/// Synthesis sum Σ c_n f_n over the supplied coefficients.
pub fn synthesis_apply<T: FieldScalar>(
    seq: &VectorSequence<T>,
    coeffs: &[T],
) -> Result<DVector<T>> {
    seq.ensure_terms(coeffs.len())?;
    let mut out = DVector::zeros(seq.dim());
    for (n, &c) in coeffs.iter().enumerate() {
        out.axpy(c, seq.term_at(n).expect("section checked"), T::one());
    }
    Ok(out)
}

/// Partial frame operator Σ_{n<count} f_n f_n*; Hermitian positive
/// semidefinite by construction.
pub fn frame_operator_partial<T: FieldScalar>(
    seq: &VectorSequence<T>,
    count: usize,
) -> Result<DMatrix<T>> {
    seq.ensure_terms(count)?;
    let mut s = DMatrix::zeros(seq.dim(), seq.dim());
    for n in 0..count {
        let f = seq.term_at(n).expect("section checked");
        s += f * f.adjoint();
    }
    Ok(s)
}

/// Frame bounds of the `count`-term section: extremal eigenvalues of the
/// partial frame operator, with the Parseval flag decided at `tol`.
pub fn frame_bounds<T: FieldScalar>(
    seq: &VectorSequence<T>,
    count: usize,
    tol: f64,
) -> Result<FrameBounds> {
    let s = frame_operator_partial(seq, count)?;
    let eig = hermitian_eig(&s, DEFAULT_TOL)?;
    let lower = *eig.eigenvalues.first().expect("positive dimension");
    let upper = *eig.eigenvalues.last().expect("positive dimension");
    Ok(FrameBounds {
        lower,
        upper,
        parseval: (lower - 1.0).abs() <= tol && (upper - 1.0).abs() <= tol,
        bessel: upper.is_finite(),
    })
}

/// Canonical dual section S⁻¹ f_n, n < count, as an explicit finite sequence.
///
/// Errors when the partial frame operator is singular, i.e. the section does
/// not span.
pub fn canonical_dual<T: FieldScalar>(
    seq: &VectorSequence<T>,
    count: usize,
) -> Result<VectorSequence<T>> {
    let s = frame_operator_partial(seq, count)?;
    let eig = hermitian_eig(&s, DEFAULT_TOL)?;
    let smallest = *eig.eigenvalues.first().expect("positive dimension");
    let largest = *eig.eigenvalues.last().expect("positive dimension");
    let limit = DEFAULT_TOL * largest.max(1.0);
    if smallest <= limit {
        return Err(Error::SingularOperator { smallest, limit });
    }
    let inverse = eig.map_eigenvalues(|l| 1.0 / l);
    let duals = (0..count)
        .map(|n| &inverse * seq.term_at(n).expect("section checked"))
        .collect();
    Ok(VectorSequence::finite(duals))
}

/// Outcome of the dual-pair and biorthogonality checks over a section.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DualityReport {
    /// ‖Σ g_n f_n* − I‖ within tolerance: Σ ⟨x, f_n⟩ g_n reproduces x.
    pub dual_pair: bool,
    pub dual_defect: f64,
    /// ⟨f_m, g_n⟩ = δ_{mn} within tolerance over the section.
    pub biorthogonal: bool,
    pub biorthogonal_defect: f64,
    pub max_defect: f64,
}

/// Checks whether `g` reconstructs against `f` over `count` terms and whether
/// the two sections are biorthogonal. Symmetric in its sequence arguments.
pub fn duality_check<T: FieldScalar>(
    f: &VectorSequence<T>,
    g: &VectorSequence<T>,
    count: usize,
    tol: f64,
) -> Result<DualityReport> {
    assert_eq!(f.dim(), g.dim(), "duality check dimension mismatch");
    f.ensure_terms(count)?;
    g.ensure_terms(count)?;
    let dim = f.dim();
    let mut composition = DMatrix::<T>::zeros(dim, dim);
    for n in 0..count {
        let fv = f.term_at(n).expect("section checked");
        let gv = g.term_at(n).expect("section checked");
        composition += gv * fv.adjoint();
    }
    let dual_defect = (composition - DMatrix::identity(dim, dim)).norm();

    let mut biorthogonal_defect = 0.0_f64;
    for m in 0..count {
        for n in 0..count {
            let p = inner(
                f.term_at(m).expect("section checked"),
                g.term_at(n).expect("section checked"),
            );
            let (re, im) = p.parts();
            let target = if m == n { 1.0 } else { 0.0 };
            let defect = ((re - target).powi(2) + im.powi(2)).sqrt();
            if defect > biorthogonal_defect {
                biorthogonal_defect = defect;
            }
        }
    }

    Ok(DualityReport {
        dual_pair: dual_defect <= tol,
        dual_defect,
        biorthogonal: biorthogonal_defect <= tol,
        biorthogonal_defect,
        max_defect: dual_defect.max(biorthogonal_defect),
    })
}

/// Which inner-product order a Grammian section records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrammianOrientation {
    /// Entry (m, n) = ⟨synthesis_m, analysis_n⟩.
    SynthesisByAnalysis,
    /// Entry (m, n) = ⟨analysis_m, synthesis_n⟩.
    AnalysisBySynthesis,
}

/// Finite section of the mixed Grammian of a pair, tagged with the
/// orientation its entries follow.
#[derive(Debug, Clone, PartialEq)]
pub struct GrammianSection<T: FieldScalar> {
    orientation: GrammianOrientation,
    matrix: DMatrix<T>,
}

impl<T: FieldScalar> GrammianSection<T> {
    pub fn orientation(&self) -> GrammianOrientation {
        self.orientation
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    /// The same data in the opposite orientation (conjugate transpose).
    pub fn transposed(&self) -> GrammianSection<T> {
        let orientation = match self.orientation {
            GrammianOrientation::SynthesisByAnalysis => GrammianOrientation::AnalysisBySynthesis,
            GrammianOrientation::AnalysisBySynthesis => GrammianOrientation::SynthesisByAnalysis,
        };
        GrammianSection {
            orientation,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Writes the section as CSV rows `m,n,re,im` in row-major order.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "m,n,re,im")?;
        for m in 0..self.order() {
            for n in 0..self.order() {
                let (re, im) = self.matrix[(m, n)].parts();
                writeln!(out, "{m},{n},{re:e},{im:e}")?;
            }
        }
        Ok(())
    }
}

/// Order-`count` mixed Grammian section of a pair in the requested
/// orientation.
pub fn mixed_grammian<T: FieldScalar>(
    pair: &SequencePair<T>,
    count: usize,
    orientation: GrammianOrientation,
) -> Result<GrammianSection<T>> {
    pair.analysis().ensure_terms(count)?;
    pair.synthesis().ensure_terms(count)?;
    let entry = |m: usize, n: usize| -> T {
        let a = pair.analysis();
        let s = pair.synthesis();
        match orientation {
            GrammianOrientation::SynthesisByAnalysis => inner(
                s.term_at(m).expect("section checked"),
                a.term_at(n).expect("section checked"),
            ),
            GrammianOrientation::AnalysisBySynthesis => inner(
                a.term_at(m).expect("section checked"),
                s.term_at(n).expect("section checked"),
            ),
        }
    };
    Ok(GrammianSection {
        orientation,
        matrix: DMatrix::from_fn(count, count, entry),
    })
}

/// Positivity verdict over every leading block of a Grammian section.
#[derive(Debug, Clone)]
pub struct GrammianVerdict<T: FieldScalar> {
    pub positive: bool,
    /// Smallest failing block order, when not positive.
    pub failing_order: Option<usize>,
    /// Coefficient vector (length `failing_order`) whose quadratic form is
    /// negative.
    pub witness: Option<DVector<T>>,
}

/// Tests every leading block of the section for positive semidefiniteness of
/// its Hermitian part, reporting the smallest failing order and a witness.
pub fn grammian_positive<T: FieldScalar>(
    section: &GrammianSection<T>,
    tol: f64,
) -> GrammianVerdict<T> {
    for k in 1..=section.order() {
        let block = section.matrix.view((0, 0), (k, k)).clone_owned();
        let verdict = is_psd(&block, tol);
        if !verdict.psd {
            return GrammianVerdict {
                positive: false,
                failing_order: Some(k),
                witness: verdict.witness,
            };
        }
    }
    GrammianVerdict {
        positive: true,
        failing_order: None,
        witness: None,
    }
}
