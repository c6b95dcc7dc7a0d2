//! Seeded random inputs: probe vectors, orthonormal bases, conditioned
//! operators, and perturbed or pairing-normalized sequences. Everything is
//! driven by an explicit generator so experiments replay exactly.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{inner, FieldScalar};
use crate::sequence::{SequencePair, VectorSequence};

/// The stream cipher generator used throughout; small state, fast, and
/// stable across platforms for a fixed seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vector with independent standard-normal coordinates (real and imaginary
/// parts separately in the complex case).
pub fn vector<T: FieldScalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<T> {
    assert!(dim >= 1, "vectors need a positive dimension");
    DVector::from_fn(dim, |_, _| T::standard_normal(rng))
}

/// Normalized gaussian direction; redraws in the measure-zero event of a
/// negligible norm.
pub fn unit_vector<T: FieldScalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<T> {
    loop {
        let v = vector::<T, R>(rng, dim);
        let n = v.norm();
        if n > 1e-6 {
            return v / T::from_real(n);
        }
    }
}

/// Matrix with independent standard-normal entries.
pub fn matrix<T: FieldScalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> DMatrix<T> {
    assert!(rows >= 1 && cols >= 1, "matrices need positive dimensions");
    DMatrix::from_fn(rows, cols, |_, _| T::standard_normal(rng))
}

/// Haar-like orthonormal basis from the QR factorization of a gaussian
/// matrix.
pub fn orthonormal_basis<T: FieldScalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
) -> Vec<DVector<T>> {
    let q = matrix::<T, R>(rng, dim, dim).qr().q();
    (0..dim).map(|j| q.column(j).clone_owned()).collect()
}

/// Hermitian positive definite operator with eigenvalues log-spread over
/// [c^{-1/2}, c^{1/2}]; both extremes are pinned so the condition number is
/// the requested one (up to roundoff) whenever dim ≥ 2.
pub fn spd_with_condition<T: FieldScalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    condition: f64,
) -> DMatrix<T> {
    assert!(dim >= 1, "operators need a positive dimension");
    assert!(condition >= 1.0, "condition numbers are at least 1");
    let half_log = 0.5 * condition.ln();
    let mut eigenvalues: Vec<f64> = (0..dim)
        .map(|_| ((rng.gen::<f64>() * 2.0 - 1.0) * half_log).exp())
        .collect();
    if dim >= 2 {
        eigenvalues[0] = (-half_log).exp();
        eigenvalues[1] = half_log.exp();
    }
    let basis = orthonormal_basis::<T, R>(rng, dim);
    let mut s = DMatrix::<T>::zeros(dim, dim);
    for (b, l) in basis.iter().zip(eigenvalues) {
        s += (b * b.adjoint()).scale(l);
    }
    s
}

/// Invertible (generally non-Hermitian) operator with singular values
/// log-spread over [c^{-1/2}, c^{1/2}], extremes pinned for dim ≥ 2.
pub fn invertible_with_condition<T: FieldScalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    condition: f64,
) -> DMatrix<T> {
    assert!(dim >= 1, "operators need a positive dimension");
    assert!(condition >= 1.0, "condition numbers are at least 1");
    let half_log = 0.5 * condition.ln();
    let mut singulars: Vec<f64> = (0..dim)
        .map(|_| ((rng.gen::<f64>() * 2.0 - 1.0) * half_log).exp())
        .collect();
    if dim >= 2 {
        singulars[0] = (-half_log).exp();
        singulars[1] = half_log.exp();
    }
    let left = DMatrix::from_columns(&orthonormal_basis::<T, R>(rng, dim));
    let right = DMatrix::from_columns(&orthonormal_basis::<T, R>(rng, dim));
    let mut sigma = DMatrix::<T>::zeros(dim, dim);
    for (i, s) in singulars.into_iter().enumerate() {
        sigma[(i, i)] = T::from_real(s);
    }
    left * sigma * right.adjoint()
}

/// Unit-normalized perturbation of each generator: e_n ↦ (e_n + δ·g_n)/‖·‖
/// with fresh gaussian g_n. Extension is preserved.
pub fn perturbed_unit_sequence<T: FieldScalar, R: Rng + ?Sized>(
    rng: &mut R,
    base: &VectorSequence<T>,
    delta: f64,
) -> VectorSequence<T> {
    assert!(delta >= 0.0, "perturbation magnitudes are nonnegative");
    let dim = base.dim();
    let generators = base
        .generators()
        .iter()
        .map(|e| loop {
            let g = vector::<T, R>(rng, dim);
            let w = e + g.scale(delta);
            let n = w.norm();
            if n > 1e-6 {
                break w / T::from_real(n);
            }
        })
        .collect();
    VectorSequence::new(generators, base.extension())
}

/// Periodic pair with unit analysis terms and pairing ⟨φ_n, ψ_n⟩ = 1: the
/// synthesis term starts as φ_n plus a δ-sized gaussian and is rescaled to
/// normalize the pairing. Draws with a pairing of modulus below 0.2 are
/// rejected so the rescale stays well conditioned.
pub fn normalized_pair<T: FieldScalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    terms: usize,
    delta: f64,
) -> SequencePair<T> {
    assert!(terms >= 1, "pairs need at least one generator");
    let mut phis = Vec::with_capacity(terms);
    let mut psis = Vec::with_capacity(terms);
    for _ in 0..terms {
        let phi = unit_vector::<T, R>(rng, dim);
        let psi = loop {
            let candidate = &phi + vector::<T, R>(rng, dim).scale(delta);
            let pairing = inner(&phi, &candidate);
            if pairing.modulus() >= 0.2 {
                break candidate * (T::one() / pairing.conjugate());
            }
        };
        phis.push(phi);
        psis.push(psi);
    }
    SequencePair::new(
        VectorSequence::periodic(phis),
        VectorSequence::periodic(psis),
    )
    .expect("construction keeps dims and counts aligned")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Complex;

    #[test]
    fn seeded_draws_replay_exactly() {
        let a: DVector<f64> = vector(&mut rng(7), 5);
        let b: DVector<f64> = vector(&mut rng(7), 5);
        assert_eq!(a, b);
        let c: DVector<f64> = vector(&mut rng(8), 5);
        assert_ne!(a, c);
    }

    #[test]
    fn unit_vectors_are_unit() {
        let mut r = rng(1);
        for _ in 0..10 {
            let v: DVector<f64> = unit_vector(&mut r, 4);
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
        }
        let w: DVector<Complex<f64>> = unit_vector(&mut r, 3);
        assert_abs_diff_eq!(w.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bases_are_orthonormal() {
        let mut r = rng(2);
        for basis in [
            orthonormal_basis::<f64, _>(&mut r, 4),
            orthonormal_basis::<f64, _>(&mut r, 2),
        ] {
            for (i, u) in basis.iter().enumerate() {
                for (j, v) in basis.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(inner(u, v), target, epsilon = 1e-12);
                }
            }
        }
        let basis = orthonormal_basis::<Complex<f64>, _>(&mut r, 3);
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let p = inner(u, v);
                let target = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(p.re, target, epsilon = 1e-12);
                assert_abs_diff_eq!(p.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn spd_operators_hit_the_requested_condition() {
        let mut r = rng(3);
        let s: DMatrix<f64> = spd_with_condition(&mut r, 4, 100.0);
        assert!((s.clone() - s.adjoint()).norm() < 1e-12);
        let eig = crate::linalg::hermitian_eig(&s, 1e-10).unwrap();
        let smallest = eig.eigenvalues[0];
        let largest = eig.eigenvalues[3];
        assert!(smallest > 0.0);
        assert_abs_diff_eq!(largest / smallest, 100.0, epsilon = 1e-8);
    }

    #[test]
    fn invertible_operators_hit_the_requested_condition() {
        let mut r = rng(4);
        let a: DMatrix<f64> = invertible_with_condition(&mut r, 3, 50.0);
        let values = a.singular_values();
        let largest = values.iter().cloned().fold(0.0_f64, f64::max);
        let smallest = values.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(largest / smallest, 50.0, epsilon = 1e-8);
    }

    #[test]
    fn perturbed_sequences_stay_unit_and_keep_extension() {
        let base = VectorSequence::periodic(vec![
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
        ]);
        let mut r = rng(5);
        let seq = perturbed_unit_sequence(&mut r, &base, 0.1);
        assert_eq!(seq.extension(), base.extension());
        for g in seq.generators() {
            assert_abs_diff_eq!(g.norm(), 1.0, epsilon = 1e-12);
        }
        // Zero magnitude reproduces the base exactly.
        let same = perturbed_unit_sequence(&mut r, &base, 0.0);
        for (a, b) in same.generators().iter().zip(base.generators()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn normalized_pairs_have_unit_pairings() {
        let mut r = rng(6);
        for delta in [0.1, 0.3, 1.0] {
            let pair: SequencePair<f64> = normalized_pair(&mut r, 3, 4, delta);
            for n in 0..4 {
                let p = inner(
                    pair.analysis().term_at(n).unwrap(),
                    pair.synthesis().term_at(n).unwrap(),
                );
                assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
            }
        }
        let pair: SequencePair<Complex<f64>> = normalized_pair(&mut r, 2, 3, 0.5);
        for n in 0..3 {
            let p = inner(
                pair.analysis().term_at(n).unwrap(),
                pair.synthesis().term_at(n).unwrap(),
            );
            assert_abs_diff_eq!(p.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p.im, 0.0, epsilon = 1e-12);
        }
    }
}
