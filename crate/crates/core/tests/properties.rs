//! Property tests for the linear-algebra substrate, frame operators and the
//! file format. Randomness comes from a proptest-chosen seed feeding the
//! library generators, so failures shrink to a reproducible seed.

use fusion_core::file::{load_system, save_system};
use fusion_core::fusion::{
    analysis, frame_bounds, frame_energy, frame_operator, max_member_distance, synthesis,
};
use fusion_core::linalg::{
    hermitian_eig, invert, kron, operator_norm, orthonormalize_columns, tensor_vector,
    OperatorMatrix, Scalar, TOL_COND,
};
use fusion_core::random::{
    gaussian_matrix, random_frame, random_fusion_system_with, random_unit_vector, random_vector,
    rng_from_seed, RandomSystemParams,
};
use fusion_core::CoefficientFamily;
use proptest::prelude::*;

fn rel(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    (a - b).norm() / b.norm()
}

/// Independent Kronecker oracle: entry `(i·p + k, j·q + l)` is `Q[i,j]·T[k,l]`.
fn kron_oracle(q: &OperatorMatrix, t: &OperatorMatrix) -> OperatorMatrix {
    let (p, qc) = (t.nrows(), t.ncols());
    OperatorMatrix::from_fn(q.nrows() * p, q.ncols() * qc, |r, c| {
        q[(r / p, c / qc)] * t[(r % p, c % qc)]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn kron_matches_entrywise_oracle(seed: u64, m in 1usize..=4, n in 1usize..=4, r in 1usize..=4, s in 1usize..=4) {
        let mut rng = rng_from_seed(seed);
        let q = gaussian_matrix(m, n, &mut rng);
        let t = gaussian_matrix(r, s, &mut rng);
        prop_assert_eq!(kron(&q, &t), kron_oracle(&q, &t));
    }

    #[test]
    fn kron_laws(seed: u64, n in 2usize..=4, m in 2usize..=4) {
        let mut rng = rng_from_seed(seed);
        let (q, q2) = (gaussian_matrix(n, n, &mut rng), gaussian_matrix(n, n, &mut rng));
        let (t, t2) = (gaussian_matrix(m, m, &mut rng), gaussian_matrix(m, m, &mut rng));

        let mixed = rel(&(kron(&q, &t) * kron(&q2, &t2)), &kron(&(&q * &q2), &(&t * &t2)));
        prop_assert!(mixed <= 1e-9, "mixed product {mixed:e}");

        let adjoint = rel(&kron(&q, &t).adjoint(), &kron(&q.adjoint(), &t.adjoint()));
        prop_assert!(adjoint <= 1e-9, "adjoint {adjoint:e}");

        let qt = kron(&q, &t);
        let inv = invert(&qt, TOL_COND).unwrap();
        let cond = operator_norm(&qt) * operator_norm(&inv);
        let factored = kron(&invert(&q, TOL_COND).unwrap(), &invert(&t, TOL_COND).unwrap());
        let inverse = rel(&inv, &factored);
        prop_assert!(inverse <= 1e-9 * cond, "inverse {inverse:e} at cond {cond:e}");

        let norm = (operator_norm(&qt) - operator_norm(&q) * operator_norm(&t)).abs() / operator_norm(&qt);
        prop_assert!(norm <= 1e-9, "norm {norm:e}");
    }

    #[test]
    fn tensor_vector_bilinear_and_normed(seed: u64, m in 1usize..=6, n in 1usize..=6, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let mut rng = rng_from_seed(seed);
        let f = random_vector(m, &mut rng);
        let g = random_vector(n, &mut rng);
        let alpha = Scalar::new(re, im);
        let scaled = tensor_vector(&(&f * alpha), &g);
        let expected = tensor_vector(&f, &g) * alpha;
        // Each entry is one product either way, so only reassociation differs.
        for (a, b) in scaled.iter().zip(expected.iter()) {
            prop_assert!((a - b).norm() <= 4.0 * f64::EPSILON * b.norm().max(f64::MIN_POSITIVE));
        }
        let fg = tensor_vector(&f, &g);
        prop_assert!((fg.norm() - f.norm() * g.norm()).abs() <= 1e-12 * fg.norm());
    }

    #[test]
    fn orthonormal_bases_are_orthonormal(seed: u64, n in 1usize..=12, k in 1usize..=12) {
        let mut rng = rng_from_seed(seed);
        let g = gaussian_matrix(n, k, &mut rng);
        let b = orthonormalize_columns(&g, n as f64 * f64::EPSILON).unwrap();
        prop_assert_eq!(b.sub_dim(), n.min(k));
        let gram = b.columns().adjoint() * b.columns();
        let err = (gram - OperatorMatrix::identity(b.sub_dim(), b.sub_dim())).norm();
        prop_assert!(err <= 1e-12, "‖BᴴB − I‖ = {err:e}");
    }

    #[test]
    fn hermitian_eig_reconstructs(seed: u64, n in 1usize..=36) {
        let mut rng = rng_from_seed(seed);
        let g = gaussian_matrix(n, n, &mut rng);
        let h = (&g + g.adjoint()) * Scalar::new(0.5, 0.0);
        let spec = hermitian_eig(&h).unwrap();
        prop_assert!(spec.reconstruction_residual(&h) <= 1e-10);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn frame_energy_between_optimal_bounds(seed: u64, dim in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let sys = random_frame(&RandomSystemParams::frame_defaults(dim), &mut rng);
        let b = frame_bounds(&sys);
        for _ in 0..100 {
            let f = random_unit_vector(dim, &mut rng);
            let e = frame_energy(&sys, &f).unwrap();
            prop_assert!(b.lower - 1e-9 <= e && e <= b.upper + 1e-9);
        }
        let spec = hermitian_eig(&frame_operator(&sys)).unwrap();
        let low = spec.eigenvectors.column(0).into_owned();
        let high = spec.eigenvectors.column(dim - 1).into_owned();
        prop_assert!((frame_energy(&sys, &low).unwrap() - b.lower).abs() <= 1e-8);
        prop_assert!((frame_energy(&sys, &high).unwrap() - b.upper).abs() <= 1e-8);
    }

    #[test]
    fn synthesis_is_adjoint_of_analysis(seed: u64, dim in 1usize..=6, n in 1usize..=5) {
        let mut rng = rng_from_seed(seed);
        let params = RandomSystemParams { dim, n_subspaces: n, max_subdim: dim, weight_range: (0.5, 2.0) };
        let sys = random_fusion_system_with(&params, &mut rng).unwrap();
        let f = random_vector(dim, &mut rng);
        let parts = sys
            .members()
            .iter()
            .map(|m| m.projection() * random_vector(dim, &mut rng))
            .collect();
        let coeffs = CoefficientFamily::new(&sys, parts).unwrap();
        let lhs = analysis(&sys, &f).unwrap().inner(&coeffs);
        let rhs = f.dotc(&synthesis(&sys, &coeffs).unwrap());
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn weight_scaling_scales_operator_and_bounds(seed: u64, dim in 2usize..=5, c in 0.1f64..10.0) {
        let mut rng = rng_from_seed(seed);
        let sys = random_frame(&RandomSystemParams::frame_defaults(dim), &mut rng);
        let scaled = sys.scale_weights(c).unwrap();
        let expected = frame_operator(&sys) * Scalar::new(c * c, 0.0);
        prop_assert!(rel(&frame_operator(&scaled), &expected) <= 1e-12);
        let (a, b) = (frame_bounds(&sys), frame_bounds(&scaled));
        prop_assert!((b.lower - c * c * a.lower).abs() <= 1e-10 * c * c * a.upper);
        prop_assert!((b.upper - c * c * a.upper).abs() <= 1e-10 * c * c * a.upper);
        prop_assert_eq!(a.is_tight, b.is_tight);
    }

    #[test]
    fn file_round_trip(seed: u64, dim in 1usize..=6, n in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let params = RandomSystemParams { dim, n_subspaces: n, max_subdim: dim, weight_range: (0.25, 4.0) };
        let sys = random_fusion_system_with(&params, &mut rng).unwrap();
        let text = save_system(&sys);
        let back = load_system(&text).unwrap();
        prop_assert!(max_member_distance(&sys, &back).unwrap() <= 1e-12);
        prop_assert_eq!(back.weights(), sys.weights());
        prop_assert_eq!(save_system(&back), text);
    }
}
