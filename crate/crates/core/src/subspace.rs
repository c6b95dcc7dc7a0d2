//! Crate-private reachable-subspace helpers shared by the effectiveness
//! oracles: grow the smallest invariant subspace containing a seed range,
//! then measure the spectral radius of the map restricted to it.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{inner, spectral_radius, FieldScalar};

/// Orthonormalizes `w` against `basis` (modified Gram-Schmidt, two passes)
/// and appends the normalized residual when it clears `rank_tol · (1 + ‖w‖)`.
/// Returns true when the basis grew.
fn absorb<T: FieldScalar>(basis: &mut Vec<DVector<T>>, w: &DVector<T>, rank_tol: f64) -> bool {
    let scale = 1.0 + w.norm();
    let mut r = w.clone();
    for _ in 0..2 {
        for b in basis.iter() {
            let c = inner(&r, b);
            r.axpy(-c, b, T::one());
        }
    }
    let n = r.norm();
    if n > rank_tol * scale {
        basis.push(r / T::from_real(n));
        true
    } else {
        false
    }
}

/// Smallest `map`-invariant subspace containing the column span of
/// `seed_columns`, as an orthonormal basis. Breadth-first growth: each basis
/// vector's image is orthogonalized back in until nothing new appears or the
/// ambient dimension is reached.
pub(crate) fn grow_invariant_basis<T: FieldScalar>(
    map: &DMatrix<T>,
    seed_columns: &DMatrix<T>,
    rank_tol: f64,
) -> Vec<DVector<T>> {
    let dim = map.nrows();
    assert_eq!(map.ncols(), dim, "invariant basis needs a square map");
    assert_eq!(seed_columns.nrows(), dim, "seed columns dimension mismatch");

    let mut basis: Vec<DVector<T>> = Vec::new();
    for j in 0..seed_columns.ncols() {
        absorb(&mut basis, &seed_columns.column(j).clone_owned(), rank_tol);
        if basis.len() == dim {
            return basis;
        }
    }

    let mut next = 0;
    while next < basis.len() && basis.len() < dim {
        let image = map * &basis[next];
        absorb(&mut basis, &image, rank_tol);
        next += 1;
    }
    basis
}

/// Spectral radius of `map` restricted to the span of an orthonormal
/// `basis`: the compressed matrix B[(a, b)] = ⟨map v_b, v_a⟩ has the same
/// spectrum as the restriction because the span is invariant. Empty basis
/// means the map acts on nothing, radius 0.
pub(crate) fn restricted_spectral_radius<T: FieldScalar>(
    map: &DMatrix<T>,
    basis: &[DVector<T>],
) -> f64 {
    if basis.is_empty() {
        return 0.0;
    }
    let k = basis.len();
    let b = DMatrix::from_fn(k, k, |a, c| inner(&(map * &basis[c]), &basis[a]));
    spectral_radius(&b)
}
