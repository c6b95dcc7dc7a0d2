//! Built-in inputs with closed-form behavior. The command-line harness
//! reproduces them by name; tests and benches reuse them as known ground
//! truth.

use nalgebra::DVector;

use crate::sequence::{SequencePair, VectorSequence};

fn v2(a: f64, b: f64) -> DVector<f64> {
    DVector::from_vec(vec![a, b])
}

/// Period-3 planar pair that reconstructs in the given order but merely
/// cycles when the roles are swapped. Errors shrink by half each period,
/// with closed-form iterates for every step.
pub fn obs15_pair() -> SequencePair<f64> {
    let analysis = VectorSequence::periodic(vec![v2(1.0, -1.0), v2(1.0, 1.0), v2(0.5, -0.5)]);
    let synthesis = VectorSequence::periodic(vec![v2(1.0, 0.0), v2(1.0, 0.0), v2(1.5, -0.5)]);
    SequencePair::new(analysis, synthesis).expect("matching shapes")
}

/// Period-3 planar pair that reconstructs exactly after three steps in both
/// orders, yet admits no relating operator: its mixed Grammian section is not
/// positive, and two synthesis terms coincide while the analysis terms do
/// not.
pub fn obs16_pair() -> SequencePair<f64> {
    let analysis = VectorSequence::periodic(vec![v2(1.0, 0.0), v2(1.0, 1.0), v2(0.0, 1.0)]);
    let synthesis = VectorSequence::periodic(vec![v2(1.0, 0.0), v2(1.0, 0.0), v2(0.0, 1.0)]);
    SequencePair::new(analysis, synthesis).expect("matching shapes")
}

/// Orthonormal analysis basis paired with its negation: after one pass the
/// dual iteration lands on `-x`, the textbook failure of an unnormalized
/// pairing.
pub fn obs14_pair(dim: usize) -> SequencePair<f64> {
    assert!(dim > 0, "dimension must be positive");
    let basis: Vec<_> = (0..dim)
        .map(|k| DVector::from_fn(dim, |i, _| if i == k { 1.0 } else { 0.0 }))
        .collect();
    let negated: Vec<_> = basis.iter().map(|v| -v).collect();
    SequencePair::new(
        VectorSequence::periodic(basis),
        VectorSequence::periodic(negated),
    )
    .expect("matching shapes")
}

/// Planar linear basis that is not orthogonal; pairing it with its
/// biorthogonal dual gives a dual iteration that is exact after one pass.
pub fn obs17_basis() -> VectorSequence<f64> {
    VectorSequence::periodic(vec![v2(1.0, 0.0), v2(1.0, 1.0)])
}

/// Unit-norm period-2 sequence `(1,0), (1,1)/√2` whose auxiliary sequence has
/// closed-form geometric decay; classically effective with one-period error
/// contraction 1/2.
pub fn period_two_unit() -> VectorSequence<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    VectorSequence::periodic(vec![v2(1.0, 0.0), v2(s, s)])
}

/// Eventually-constant unit sequence `u, v, v, …` that is almost effective
/// but not effective: the classical error freezes after two steps, while the
/// auxiliary sequence has exactly two nonzero terms and section frame bounds
/// `lower_bound` and 1.
///
/// `lower_bound` must lie strictly between 0 and 1; `terms` is the explicit
/// length (at least 2).
pub fn stalling_unit_sequence(lower_bound: f64, terms: usize) -> VectorSequence<f64> {
    assert!(
        lower_bound > 0.0 && lower_bound < 1.0,
        "lower_bound must lie strictly between 0 and 1"
    );
    assert!(terms >= 2, "need at least the two distinct directions");
    let sin = lower_bound.sqrt();
    let cos = (1.0 - lower_bound).sqrt();
    let mut generators = vec![v2(1.0, 0.0)];
    generators.resize(terms, v2(cos, sin));
    VectorSequence::finite(generators)
}
