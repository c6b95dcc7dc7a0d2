//! Scalar fields and the dense-matrix primitives everything else leans on:
//! conjugate-linear inner products, Hermitian eigendecomposition, operator
//! square roots, pseudoinverses, positivity tests, and spectral radii.

use nalgebra::{Complex, ComplexField, DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default tolerance for positivity, rank, and Hermitian checks, scaled by
/// `1 + norm` of the operator under test wherever a scale is available.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Scalar field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Double-precision scalar belonging to a declared field.
///
/// All vectors and operators in one computation share a single scalar type;
/// mixing fields is a compile-time error rather than a runtime check. The
/// inner product convention throughout the crate is linear in the first slot
/// and conjugate-linear in the second.
pub trait FieldScalar: ComplexField<RealField = f64> + Copy {
    const FIELD: Field;

    /// Builds a scalar from parts; `None` when the field is real and `im` is
    /// nonzero.
    fn from_parts(re: f64, im: f64) -> Option<Self>;

    /// Real and imaginary parts (imaginary part is zero for the real field).
    fn parts(self) -> (f64, f64);

    /// Largest eigenvalue modulus of a square matrix over this field.
    fn spectral_radius_impl(matrix: &DMatrix<Self>) -> f64;

    /// One draw with standard-normal real components.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl FieldScalar for f64 {
    const FIELD: Field = Field::Real;

    fn from_parts(re: f64, im: f64) -> Option<Self> {
        (im == 0.0).then_some(re)
    }

    fn parts(self) -> (f64, f64) {
        (self, 0.0)
    }

    fn spectral_radius_impl(matrix: &DMatrix<f64>) -> f64 {
        matrix
            .complex_eigenvalues()
            .iter()
            .map(|l| l.norm())
            .fold(0.0, f64::max)
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl FieldScalar for Complex<f64> {
    const FIELD: Field = Field::Complex;

    fn from_parts(re: f64, im: f64) -> Option<Self> {
        Some(Complex::new(re, im))
    }

    fn parts(self) -> (f64, f64) {
        (self.re, self.im)
    }

    fn spectral_radius_impl(matrix: &DMatrix<Complex<f64>>) -> f64 {
        // Eigenvalues of the realification [[Re, -Im], [Im, Re]] are those of
        // the complex matrix together with their conjugates, so the largest
        // modulus carries over and the well-tested real Schur path does the
        // work.
        let n = matrix.nrows();
        let mut z = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let w = matrix[(i, j)];
                z[(i, j)] = w.re;
                z[(i, j + n)] = -w.im;
                z[(i + n, j)] = w.im;
                z[(i + n, j + n)] = w.re;
            }
        }
        z.complex_eigenvalues()
            .iter()
            .map(|l| l.norm())
            .fold(0.0, f64::max)
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }
}

/// Inner product, linear in `u`, conjugate-linear in `v`.
///
/// Panics when the dimensions differ.
pub fn inner<T: FieldScalar>(u: &DVector<T>, v: &DVector<T>) -> T {
    assert_eq!(
        u.len(),
        v.len(),
        "inner product dimension mismatch: {} vs {}",
        u.len(),
        v.len()
    );
    let mut acc = T::zero();
    for i in 0..u.len() {
        acc += u[i] * v[i].conjugate();
    }
    acc
}

/// Hermitian eigendecomposition with eigenvalues in ascending order and
/// matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigDecomposition<T: FieldScalar> {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<T>,
}

impl<T: FieldScalar> EigDecomposition<T> {
    /// Spectral calculus: assembles `Q f(diag) Q*`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> DMatrix<T> {
        let q = &self.eigenvectors;
        let n = q.nrows();
        let mut scaled = q.clone();
        for (j, lambda) in self.eigenvalues.iter().enumerate() {
            let s = T::from_real(f(*lambda));
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        scaled * q.adjoint()
    }

    /// Reassembles the decomposed matrix, for defect checks.
    pub fn reconstruct(&self) -> DMatrix<T> {
        self.map_eigenvalues(|l| l)
    }
}

fn symmetric_eig_sorted<T: FieldScalar>(h: DMatrix<T>) -> EigDecomposition<T> {
    let se = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let eigenvectors = se.eigenvectors.select_columns(&order);
    EigDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian up to `tol · (1 + ‖A‖)` in the Frobenius norm;
/// the Hermitian part is what gets decomposed, so roundoff-level asymmetry is
/// absorbed rather than amplified.
pub fn hermitian_eig<T: FieldScalar>(a: &DMatrix<T>, tol: f64) -> Result<EigDecomposition<T>> {
    assert_eq!(a.nrows(), a.ncols(), "hermitian_eig needs a square matrix");
    let defect = (a - a.adjoint()).norm();
    let limit = tol * (1.0 + a.norm());
    if defect > limit {
        return Err(Error::NotHermitian { defect, limit });
    }
    let h = (a + a.adjoint()) * T::from_real(0.5);
    Ok(symmetric_eig_sorted(h))
}

/// Positive square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero; anything below `-tol` is an
/// error.
pub fn positive_sqrt<T: FieldScalar>(a: &DMatrix<T>, tol: f64) -> Result<DMatrix<T>> {
    let eig = hermitian_eig(a, tol)?;
    if let Some(&smallest) = eig.eigenvalues.first() {
        if smallest < -tol {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: smallest,
                tol,
            });
        }
    }
    Ok(eig.map_eigenvalues(|l| l.max(0.0).sqrt()))
}

/// Outcome of a positivity test on the Hermitian part of an operator.
#[derive(Debug, Clone)]
pub struct PsdVerdict<T: FieldScalar> {
    pub psd: bool,
    /// Smallest eigenvalue of `(A + A*)/2`.
    pub min_eigenvalue: f64,
    /// Unit vector whose quadratic form `Re⟨Au, u⟩` is negative, when the
    /// verdict is false.
    pub witness: Option<DVector<T>>,
}

/// Tests `Re⟨Au, u⟩ ≥ -tol · ‖u‖²` for all `u`, via the smallest eigenvalue
/// of the Hermitian part.
pub fn is_psd<T: FieldScalar>(a: &DMatrix<T>, tol: f64) -> PsdVerdict<T> {
    assert_eq!(a.nrows(), a.ncols(), "is_psd needs a square matrix");
    if a.nrows() == 0 {
        return PsdVerdict {
            psd: true,
            min_eigenvalue: 0.0,
            witness: None,
        };
    }
    let h = (a + a.adjoint()) * T::from_real(0.5);
    let eig = symmetric_eig_sorted(h);
    let min_eigenvalue = eig.eigenvalues[0];
    let psd = min_eigenvalue >= -tol;
    let witness = (!psd).then(|| eig.eigenvectors.column(0).into_owned());
    PsdVerdict {
        psd,
        min_eigenvalue,
        witness,
    }
}

/// Moore–Penrose pseudoinverse; singular values at or below `tol · σ_max` are
/// treated as zero.
pub fn pseudo_inverse<T: FieldScalar>(a: &DMatrix<T>, tol: f64) -> DMatrix<T> {
    let (rows, cols) = a.shape();
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("svd computed with u");
    let v_t = svd.v_t.expect("svd computed with v_t");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = tol * sigma_max;
    let k = svd.singular_values.len();
    let mut inv = DMatrix::<T>::zeros(k, k);
    for i in 0..k {
        let s = svd.singular_values[i];
        if s > cutoff && s > 0.0 {
            inv[(i, i)] = T::from_real(1.0 / s);
        }
    }
    let pinv = v_t.adjoint() * inv * u.adjoint();
    debug_assert_eq!(pinv.shape(), (cols, rows));
    pinv
}

/// Largest eigenvalue modulus of a square matrix.
pub fn spectral_radius<T: FieldScalar>(a: &DMatrix<T>) -> f64 {
    assert_eq!(
        a.nrows(),
        a.ncols(),
        "spectral_radius needs a square matrix"
    );
    if a.nrows() == 0 {
        return 0.0;
    }
    T::spectral_radius_impl(a)
}
