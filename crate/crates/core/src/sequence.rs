//! Vector sequences described by finitely many generators, analysis/synthesis
//! pairs, and the advisory validation of the hypotheses the convergence
//! theory leans on.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::linalg::{inner, FieldScalar};
use crate::{Error, Result};

/// How a finite generator list extends to an infinite sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    /// Generators repeat forever.
    Periodic,
    /// Generators are the whole sequence; indexing past the end is an error.
    #[serde(rename = "explicit")]
    Finite,
}

/// Infinite vector sequence backed by a finite generator list.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSequence<T: FieldScalar> {
    dim: usize,
    generators: Vec<DVector<T>>,
    extension: Extension,
}

impl<T: FieldScalar> VectorSequence<T> {
    /// Panics on an empty generator list, a zero dimension, or generators of
    /// mixed dimensions.
    pub fn new(generators: Vec<DVector<T>>, extension: Extension) -> Self {
        assert!(
            !generators.is_empty(),
            "a sequence needs at least one generator"
        );
        let dim = generators[0].len();
        assert!(dim > 0, "sequence vectors must have positive dimension");
        assert!(
            generators.iter().all(|g| g.len() == dim),
            "sequence generators must share one dimension"
        );
        Self {
            dim,
            generators,
            extension,
        }
    }

    pub fn periodic(generators: Vec<DVector<T>>) -> Self {
        Self::new(generators, Extension::Periodic)
    }

    pub fn finite(generators: Vec<DVector<T>>) -> Self {
        Self::new(generators, Extension::Finite)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[DVector<T>] {
        &self.generators
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    /// Term `n` of the extended sequence.
    pub fn term_at(&self, n: usize) -> Result<&DVector<T>> {
        match self.extension {
            Extension::Periodic => Ok(&self.generators[n % self.generators.len()]),
            Extension::Finite if n < self.generators.len() => Ok(&self.generators[n]),
            Extension::Finite => Err(Error::TermOutOfRange {
                index: n,
                available: self.generators.len(),
            }),
        }
    }

    /// Errors unless terms `0..count` are all available.
    pub fn ensure_terms(&self, count: usize) -> Result<()> {
        if count > 0 {
            self.term_at(count - 1)?;
        }
        Ok(())
    }

    /// Dense matrix whose `count` columns are the leading terms.
    pub fn section_matrix(&self, count: usize) -> Result<DMatrix<T>> {
        self.ensure_terms(count)?;
        let mut m = DMatrix::zeros(self.dim, count);
        for j in 0..count {
            m.set_column(j, self.term_at(j).expect("section checked"));
        }
        Ok(m)
    }

    /// Applies an operator-like map to every generator, keeping the extension.
    pub fn map_generators(&self, f: impl Fn(&DVector<T>) -> DVector<T>) -> VectorSequence<T> {
        let mapped = self.generators.iter().map(f).collect();
        VectorSequence::new(mapped, self.extension)
    }
}

/// Analysis/synthesis pair for the dual iteration: measurements are taken
/// against the analysis terms, corrections applied along the synthesis terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SequencePair<T: FieldScalar> {
    analysis: VectorSequence<T>,
    synthesis: VectorSequence<T>,
}

impl<T: FieldScalar> SequencePair<T> {
    /// Both sequences must agree in dimension, generator count, and extension.
    pub fn new(analysis: VectorSequence<T>, synthesis: VectorSequence<T>) -> Result<Self> {
        if analysis.dim() != synthesis.dim() {
            return Err(Error::MismatchedPair {
                detail: format!(
                    "dimension {} vs {}",
                    analysis.dim(),
                    synthesis.dim()
                ),
            });
        }
        if analysis.generator_count() != synthesis.generator_count() {
            return Err(Error::MismatchedPair {
                detail: format!(
                    "generator count {} vs {}",
                    analysis.generator_count(),
                    synthesis.generator_count()
                ),
            });
        }
        if analysis.extension() != synthesis.extension() {
            return Err(Error::MismatchedPair {
                detail: "extension policies differ".to_string(),
            });
        }
        Ok(Self {
            analysis,
            synthesis,
        })
    }

    /// Classical view of one sequence: read and correct along the same terms.
    pub fn classical(e: &VectorSequence<T>) -> Self {
        Self {
            analysis: e.clone(),
            synthesis: e.clone(),
        }
    }

    pub fn analysis(&self) -> &VectorSequence<T> {
        &self.analysis
    }

    pub fn synthesis(&self) -> &VectorSequence<T> {
        &self.synthesis
    }

    pub fn dim(&self) -> usize {
        self.analysis.dim()
    }

    pub fn generator_count(&self) -> usize {
        self.analysis.generator_count()
    }

    pub fn extension(&self) -> Extension {
        self.analysis.extension()
    }

    /// The same data read in the opposite order.
    pub fn swapped(&self) -> SequencePair<T> {
        SequencePair {
            analysis: self.synthesis.clone(),
            synthesis: self.analysis.clone(),
        }
    }
}

/// One validation check: a flag plus the worst deviation behind it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Check {
    pub ok: bool,
    pub worst_defect: f64,
}

impl Check {
    pub fn new(worst_defect: f64, tol: f64) -> Self {
        Check {
            ok: worst_defect <= tol,
            worst_defect,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    /// One sequence read against itself; additionally checks unit norms.
    Classical,
    Dual,
}

/// Advisory report on the hypotheses behind the convergence theory. Nothing
/// here hard-fails a run; iterations execute on whatever they are given.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    /// Deviation of ⟨analysis_n, synthesis_n⟩ from 1 over one generator
    /// period.
    pub normalization: Check,
    /// Deviation of ‖e_n‖ from 1; populated in classical mode only.
    pub unit_norms: Option<Check>,
    /// Whether both sequences span the ambient space.
    pub linearly_dense: bool,
    pub warnings: Vec<String>,
}

fn section_rank<T: FieldScalar>(seq: &VectorSequence<T>, tol: f64) -> usize {
    let count = seq.generator_count();
    let m = seq.section_matrix(count).expect("generators available");
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Checks the pairing normalization, linear density, and (in classical mode)
/// unit norms, at tolerance `tol`.
pub fn validate<T: FieldScalar>(
    pair: &SequencePair<T>,
    mode: ValidationMode,
    tol: f64,
) -> ValidationReport {
    let count = pair.generator_count();
    let mut warnings = Vec::new();

    let mut worst_pairing = 0.0_f64;
    for n in 0..count {
        let p = inner(
            pair.analysis().term_at(n).expect("generator"),
            pair.synthesis().term_at(n).expect("generator"),
        );
        let (re, im) = p.parts();
        let defect = ((re - 1.0).powi(2) + im.powi(2)).sqrt();
        if defect > worst_pairing {
            worst_pairing = defect;
        }
        if defect > tol {
            warnings.push(format!(
                "pairing product at term {n} deviates from 1 by {defect:.3e}"
            ));
        }
    }
    let normalization = Check::new(worst_pairing, tol);

    let unit_norms = match mode {
        ValidationMode::Classical => {
            let mut worst = 0.0_f64;
            for n in 0..count {
                let defect =
                    (pair.analysis().term_at(n).expect("generator").norm() - 1.0).abs();
                if defect > worst {
                    worst = defect;
                }
                if defect > tol {
                    warnings.push(format!("term {n} has norm deviating from 1 by {defect:.3e}"));
                }
            }
            Some(Check::new(worst, tol))
        }
        ValidationMode::Dual => None,
    };

    let dim = pair.dim();
    let rank_a = section_rank(pair.analysis(), tol);
    let rank_s = section_rank(pair.synthesis(), tol);
    if rank_a < dim {
        warnings.push(format!(
            "analysis sequence spans only {rank_a} of {dim} dimensions"
        ));
    }
    if rank_s < dim {
        warnings.push(format!(
            "synthesis sequence spans only {rank_s} of {dim} dimensions"
        ));
    }
    let linearly_dense = rank_a == dim && rank_s == dim;

    ValidationReport {
        normalization,
        unit_norms,
        linearly_dense,
        warnings,
    }
}
