//! Cross-module identities: every test here ties at least two public
//! surfaces together (iteration against auxiliary sequences, constructors
//! against oracles, sections against frame bounds) on inputs the unit
//! tests do not cover.

use kaczmarz_core::*;
use nalgebra::{Complex, DVector};

fn seeded_unit_sequence(seed: u64, dim: usize, terms: usize) -> VectorSequence<f64> {
    let mut r = random::rng(seed);
    let gens = (0..terms)
        .map(|_| random::unit_vector::<f64, _>(&mut r, dim))
        .collect::<Vec<_>>();
    VectorSequence::periodic(gens)
}

/// The dual iterate equals the partial sum of auxiliary coefficients against
/// synthesis terms. For well-conditioned pairs the defect at step 50 is pure
/// roundoff; for a pair whose iterates grow, the bound scales with the
/// iterate it reconstructs.
#[test]
fn partial_sum_reconstruction_tracks_dual_iterates() {
    for seed in [1u64, 2, 3] {
        let mut r = random::rng(seed);
        for dim in 2..=4usize {
            for delta in [0.1, 0.3] {
                let pair = random::normalized_pair::<f64, _>(&mut r, dim, dim + 1, delta);
                let x = random::unit_vector::<f64, _>(&mut r, dim);
                let defect = partial_sum_identity_check(&pair, &x, 50).unwrap();
                assert!(defect <= 1e-10, "seed {seed} dim {dim} delta {delta}: {defect:e}");
            }
            let wild = random::normalized_pair::<f64, _>(&mut r, dim, dim + 1, 1.0);
            let x = random::unit_vector::<f64, _>(&mut r, dim);
            let defect = partial_sum_identity_check(&wild, &x, 50).unwrap();
            let scale = 1.0 + run_dual(&wild, &x, 51, 0.0).unwrap().final_iterate().norm();
            assert!(defect <= 1e-10 * scale, "seed {seed} dim {dim}: {defect:e} vs scale {scale:e}");
        }
    }
}

/// The update coefficient ⟨x − x_{n−1}, e_n⟩ of the single-sequence run
/// equals ⟨x, h_n⟩ against the auxiliary sequence, step by step.
#[test]
fn classic_update_coefficient_matches_auxiliary_pairing() {
    for seed in [4u64, 5, 6] {
        let e = seeded_unit_sequence(seed, 3, 4);
        let mut r = random::rng(seed ^ 0xfeed);
        let x = random::vector::<f64, _>(&mut r, 3);
        let steps = 30;
        let trace = run_classic(&e, &x, steps, 0.0).unwrap();
        let h = auxiliary_h(&e, steps).unwrap();
        for n in 0..steps {
            let residual = if n == 0 {
                x.clone()
            } else {
                &x - &trace.iterates()[n - 1]
            };
            let direct = inner(&residual, e.term_at(n).unwrap());
            let via_h = inner(&x, h.term_at(n).unwrap());
            assert!(
                (direct - via_h).abs() <= 1e-10,
                "seed {seed} step {n}: {direct} vs {via_h}"
            );
        }
    }
}

/// Unit steps are orthogonal projections, so the squared error keeps an
/// exact energy ledger: ‖x − x_n‖² = ‖x‖² − Σ_{k≤n} |⟨x, h_k⟩|².
#[test]
fn classic_error_energy_ledger() {
    for seed in [1u64, 2, 3] {
        let e = seeded_unit_sequence(seed, 3, 4);
        let mut r = random::rng(seed ^ 0xbeef);
        let x = random::vector::<f64, _>(&mut r, 3);
        let steps = 25;
        let trace = run_classic(&e, &x, steps, 0.0).unwrap();
        let h = auxiliary_h(&e, steps).unwrap();
        let mut spent = 0.0;
        for n in 0..steps {
            let c: f64 = inner(&x, h.term_at(n).unwrap()).abs();
            spent += c * c;
            let lhs = trace.error_norms()[n] * trace.error_norms()[n];
            let rhs = x.norm_squared() - spent;
            assert!((lhs - rhs).abs() <= 1e-10, "seed {seed} step {n}: {lhs} vs {rhs}");
        }
    }
}

/// With ψ = Tφ for a positive T, the reverse auxiliary sequence is T times
/// the forward one, and the auxiliary sequence of e = T^{1/2}φ is T^{1/2}
/// times the forward one. Both transports follow from the recursions sharing
/// their coefficient table ⟨φ_n, ψ_k⟩.
#[test]
fn positive_relating_operator_links_auxiliary_sequences() {
    let mut r = random::rng(5);
    let dim = 3usize;
    let t = random::spd_with_condition::<f64, _>(&mut r, dim, 25.0);
    let half = positive_sqrt(&t, 1e-12).unwrap();
    let phi = seeded_unit_sequence(50, dim, dim + 1);
    let psi = phi.map_generators(|v| &t * v);
    let pair = SequencePair::new(phi.clone(), psi).unwrap();

    let count = 12;
    let aux = auxiliary_pair(&pair, count).unwrap();
    let h = auxiliary_h(&phi.map_generators(|v| &half * v), count).unwrap();
    for n in 0..count {
        let g = aux.forward.term_at(n).unwrap();
        let reverse_gap = (&t * g - aux.reverse.term_at(n).unwrap()).norm();
        let half_gap = (h.term_at(n).unwrap() - &half * g).norm();
        assert!(reverse_gap <= 1e-9, "reverse transport at {n}: {reverse_gap:e}");
        assert!(half_gap <= 1e-9, "square-root transport at {n}: {half_gap:e}");
    }

    // Hermitian T makes the cross pairings symmetric, which is the premise
    // the transports above rest on.
    for n in 0..count {
        for k in 0..count {
            let fwd = inner(
                pair.analysis().term_at(n).unwrap(),
                pair.synthesis().term_at(k).unwrap(),
            );
            let rev = inner(
                pair.synthesis().term_at(k).unwrap(),
                pair.analysis().term_at(n).unwrap(),
            );
            assert!((fwd - rev).abs() <= 1e-12);
        }
    }
}

/// Pairs built as (Tb_n, T⁻¹b_n) over an orthonormal basis: the leading
/// forward auxiliary term is orthogonal to every later reverse term and
/// vice versa, the reverse terms are T⁻² times the forward ones, and the
/// oracle confirms both directions behave identically.
#[test]
fn canonically_paired_basis_auxiliaries_are_cross_orthogonal() {
    let mut r = random::rng(77);
    let dim = 3usize;
    let basis = VectorSequence::periodic(random::orthonormal_basis::<f64, _>(&mut r, dim));
    let t = random::spd_with_condition::<f64, _>(&mut r, dim, 9.0);
    let t_inv = t.clone().try_inverse().unwrap();
    let pair = SequencePair::new(
        basis.map_generators(|v| &t * v),
        basis.map_generators(|v| &t_inv * v),
    )
    .unwrap();

    let count = 9;
    let aux = auxiliary_pair(&pair, count).unwrap();
    let g0 = aux.forward.term_at(0).unwrap().clone();
    let gt0 = aux.reverse.term_at(0).unwrap().clone();
    let w = &t_inv * &t_inv;
    for n in 0..count {
        let g = aux.forward.term_at(n).unwrap();
        let gt = aux.reverse.term_at(n).unwrap();
        assert!((&w * g - gt).norm() <= 1e-9, "W transport at {n}");
        if n >= 1 {
            assert!(inner(gt, &g0).abs() <= 1e-10, "reverse ⟂ leading forward at {n}");
            assert!(inner(g, &gt0).abs() <= 1e-10, "forward ⟂ leading reverse at {n}");
        }
    }

    let verdict = effective_pair_oracle(&pair, 7).unwrap();
    assert!(verdict.symmetric);
    assert!(verdict.forward_effective && verdict.reverse_effective);
}

/// Mapping a pair through any invertible operator (analysis side through T,
/// synthesis side through (T⁻¹)*) conjugates the one-period error map, so
/// the effectiveness verdict in both directions is unchanged.
#[test]
fn effectiveness_survives_invertible_reshaping() {
    for seed in [11u64, 12, 13, 14, 15] {
        let mut r = random::rng(seed);
        let dim = 2 + (seed as usize % 3);
        let pair = random::normalized_pair::<f64, _>(&mut r, dim, dim + 1, 0.3);
        let t = random::invertible_with_condition::<f64, _>(&mut r, dim, 20.0);
        let moved = transform_pair(&pair, &t, 1e-12).unwrap();

        let before = effective_pair_oracle(&pair, seed).unwrap();
        let after = effective_pair_oracle(&moved, seed ^ 0x5a5a).unwrap();
        assert_eq!(before.forward_effective, after.forward_effective, "seed {seed}");
        assert_eq!(before.reverse_effective, after.reverse_effective, "seed {seed}");
        assert_eq!(before.symmetric, after.symmetric, "seed {seed}");
    }
}

/// For a unit leading term, h_0 = e_0 is orthogonal to every later
/// auxiliary term: each h_n (n ≥ 1) removes its e_0 component through the
/// recursion. Checked on fixed fixtures and seeded sequences.
#[test]
fn leading_auxiliary_term_is_orthogonal_to_the_rest() {
    let mut sequences = vec![
        fixtures::period_two_unit(),
        fixtures::stalling_unit_sequence(0.36, 12),
    ];
    for seed in [31u64, 32, 33] {
        sequences.push(seeded_unit_sequence(seed, 3, 5));
    }
    for (which, e) in sequences.iter().enumerate() {
        let count = 20.min(match e.extension() {
            Extension::Periodic => 20,
            Extension::Finite => e.generator_count(),
        });
        let h = auxiliary_h(e, count).unwrap();
        let h0 = h.term_at(0).unwrap().clone();
        for n in 1..count {
            let overlap: f64 = inner(h.term_at(n).unwrap(), &h0).abs();
            assert!(overlap <= 1e-10, "sequence {which} term {n}: {overlap:e}");
        }
    }
}

/// When the single-sequence iteration is effective, the auxiliary family
/// becomes a frame with both bounds pinned to 1: the lower bound is
/// 1 − ‖P^periods‖² for the one-period map P, so 50 periods of a radius
/// < 0.6 map leave a gap far below the 1e-4 budget.
#[test]
fn auxiliary_frame_bounds_tighten_for_effective_sequences() {
    let mut r = random::rng(21);
    let mut accepted = 0u32;
    while accepted < 4 {
        let dim = 2 + (accepted as usize % 2);
        let gens = (0..dim + 1)
            .map(|_| random::unit_vector::<f64, _>(&mut r, dim))
            .collect::<Vec<_>>();
        let e = VectorSequence::periodic(gens);
        let verdict = periodic_effectiveness_oracle(&e).unwrap();
        if !verdict.reliable || !verdict.effective || verdict.period_map_radius >= 0.6 {
            continue;
        }
        accepted += 1;
        let count = 50 * e.generator_count();
        let h = auxiliary_h(&e, count).unwrap();
        let bounds = frame_bounds(&h, count, 1e-10).unwrap();
        assert!((bounds.lower - 1.0).abs() <= 1e-4, "lower {:e}", bounds.lower);
        assert!((bounds.upper - 1.0).abs() <= 1e-4, "upper {:e}", bounds.upper);
    }
}

/// Finite sections nest: the order-K blocks of the order-2K section and of
/// its inverse are exactly the order-K section and inverse.
#[test]
fn triangular_sections_nest() {
    let mut r = random::rng(8);
    let pair = random::normalized_pair::<f64, _>(&mut r, 3, 4, 0.4);
    let small = mixed_triangular_section(&pair, 6).unwrap();
    let big = mixed_triangular_section(&pair, 12).unwrap();
    let lower_gap = (big.lower_block().view((0, 0), (6, 6)) - small.lower_block()).norm();
    let inverse_gap = (big.inverse_block().view((0, 0), (6, 6)) - small.inverse_block()).norm();
    assert!(lower_gap <= 1e-15, "lower blocks disagree: {lower_gap:e}");
    assert!(inverse_gap <= 1e-15, "inverse blocks disagree: {inverse_gap:e}");
}

/// The strict inverse of the section tends to a partial isometry as the
/// section grows, and the defect decays fast for effective sequences.
#[test]
fn section_partial_isometry_defect_decays_with_order() {
    let e = fixtures::period_two_unit();
    let ladder: Vec<f64> = [4usize, 8, 16, 32]
        .iter()
        .map(|&k| {
            let tri = triangular_section(&e, k).unwrap();
            partial_isometry_test(&tri, 1e-10).defect
        })
        .collect();
    assert!(ladder[0] > 1e-2, "small sections are visibly far: {:e}", ladder[0]);
    for pair in ladder.windows(2) {
        assert!(pair[1] < pair[0], "defect failed to decay: {ladder:?}");
    }
    assert!(ladder[2] < 1e-4);
    assert!(ladder[3] < 1e-9);

    let seq = seeded_unit_sequence(11, 2, 3);
    let verdict = periodic_effectiveness_oracle(&seq).unwrap();
    assert!(verdict.effective && verdict.period_map_radius < 0.1);
    let tri = triangular_section(&seq, 12).unwrap();
    assert!(partial_isometry_test(&tri, 1e-10).defect < 1e-9);
}

/// A family whose bounds are certified inside a nearly tight window
/// reconstructs with matching accuracy: Σ ⟨x, h_n⟩ h_n returns x up to the
/// window width.
#[test]
fn near_tight_auxiliary_family_reconstructs() {
    let e = fixtures::period_two_unit();
    let count = 40;
    let h = auxiliary_h(&e, count).unwrap();
    let bounds = frame_bounds(&h, count, 1e-8).unwrap();
    assert!(bounds.parseval, "bounds {:?} should be flagged tight", bounds);

    let x = DVector::from_vec(vec![0.3, -1.7]);
    let coeffs = analysis_coeffs(&h, &x, count).unwrap();
    let back = synthesis_apply(&h, &coeffs).unwrap();
    assert!((back - &x).norm() <= 1e-8);

    // An orthonormal basis is the exact version of the same statement.
    let mut r = random::rng(9);
    let basis = VectorSequence::new(random::orthonormal_basis::<f64, _>(&mut r, 4), Extension::Finite);
    let y = random::vector::<f64, _>(&mut r, 4);
    let bounds = frame_bounds(&basis, 4, 1e-10).unwrap();
    assert!(bounds.parseval);
    let back = synthesis_apply(&basis, &analysis_coeffs(&basis, &y, 4).unwrap()).unwrap();
    assert!((back - &y).norm() <= 1e-12);
}

/// Running the pair iteration on (e, e) reproduces the single-sequence
/// iteration exactly, step by step.
#[test]
fn dual_run_on_classical_pair_matches_classic() {
    for seed in [41u64, 42, 43] {
        let e = seeded_unit_sequence(seed, 3, 4);
        let mut r = random::rng(seed ^ 0xc0de);
        let x = random::vector::<f64, _>(&mut r, 3);
        let classic = run_classic(&e, &x, 20, 0.0).unwrap();
        let dual = run_dual(&SequencePair::classical(&e), &x, 20, 0.0).unwrap();
        for n in 0..20 {
            let gap = (classic.iterates()[n].clone() - &dual.iterates()[n]).norm();
            assert!(gap <= 1e-12, "seed {seed} step {n}: {gap:e}");
        }
    }
}

/// Complex round trip: reshape a classical orthonormal pair by an arbitrary
/// invertible complex operator. One period still reconstructs exactly, the
/// oracle stays symmetric, and the recovered relating operator is (TT*)⁻¹.
#[test]
fn complex_reshaped_basis_round_trip() {
    let mut r = random::rng(61);
    let dim = 3usize;
    let basis = VectorSequence::periodic(random::orthonormal_basis::<Complex<f64>, _>(&mut r, dim));
    let t = random::invertible_with_condition::<Complex<f64>, _>(&mut r, dim, 8.0);
    let pair = transform_pair(&SequencePair::classical(&basis), &t, 1e-12).unwrap();

    let verdict = effective_pair_oracle(&pair, 3).unwrap();
    assert!(verdict.symmetric && verdict.forward_effective && verdict.reverse_effective);

    let x = random::vector::<Complex<f64>, _>(&mut r, dim);
    let trace = run_dual(&pair, &x, dim, 0.0).unwrap();
    assert!(trace.final_error() <= 1e-10 * (1.0 + x.norm()));

    let recovered = recover_relating_operator(&pair, dim, 1e-8).unwrap();
    let expected = (&t * t.adjoint()).try_inverse().unwrap();
    assert!((recovered.operator.clone() - expected).norm() <= 1e-8);
    assert!(recovered.mapping_defect <= 1e-8);
}
