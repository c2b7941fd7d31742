use proptest::prelude::*;

use nary::envelope::{build_envelope, relation_space};
use nary::homology::{chain_dim, check_d_squared, homology_ranks};
use nary::lifting::{envelope_functor, NAryHom};
use nary::nary_core::{exterior_odd, generated_subalgebra, matrix_algebra, nary_from_binary, truncated_poly_nary};
use nary::nsemigroup::{
    build_sg_envelope, check_ternary_group, enumerate_groups, graded_group_degree1, graded_group_ternary, gradings,
    sg_universality_check, GradedSemigroup,
};
use nary::{Matrix, Scalar, Vector};

/// Automorphism of exterior_odd(3) permuting e1, e2, e3; e123 picks up the sign.
fn permutation_hom(p: [usize; 3]) -> NAryHom {
    let a = exterior_odd(3).unwrap();
    let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    let mut cols: Vec<Vector> = p.iter().map(|&k| Vector::unit(k)).collect();
    cols.push(Vector::scaled_unit(3, Scalar::from(sign)));
    NAryHom::new(a.clone(), a, Matrix::from_columns(4, &cols)).unwrap()
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn binary_subalgebra(seeds: &[Vec<i64>]) -> nary::NAryAlgebra {
    let gens: Vec<Vector> =
        seeds.iter().map(|s| Vector::from_dense(&s.iter().map(|&x| Scalar::from(x)).collect::<Vec<_>>())).collect();
    generated_subalgebra(&matrix_algebra(2), &gens).unwrap().algebra
}

#[test]
fn relation_spaces_stabilise_from_depth_two() {
    for a in [exterior_odd(2).unwrap(), exterior_odd(3).unwrap(), truncated_poly_nary(4, 6).unwrap()] {
        for d in 1..a.arity() {
            let dims: Vec<usize> = (1..=3).map(|k| relation_space(&a, d, k).unwrap().rank()).collect();
            assert!(dims.windows(2).all(|w| w[0] <= w[1]), "{} degree {d}: {dims:?}", a.name());
            assert_eq!(dims[1], dims[2], "{} degree {d}", a.name());
        }
    }
}

#[test]
fn even_arity_truncated_polynomials_square_to_zero() {
    for t in 4..=6 {
        let a = truncated_poly_nary(4, t).unwrap();
        assert!(check_d_squared(&a, 3).unwrap().all_zero(), "t = {t}");
    }
}

#[test]
fn graded_fibers_satisfy_universality() {
    for order in [2, 4, 6, 8] {
        for h in enumerate_groups(order).unwrap() {
            for grading in gradings(&h, 2) {
                let t = graded_group_degree1(&h, &grading, 2).unwrap();
                let g = graded_group_ternary(&h, &grading).unwrap();
                assert!(check_ternary_group(&g).unwrap().pass());
                let env = build_sg_envelope(&t, 5).unwrap();
                assert!(env.degree_one_is_bijective());
                assert!(env.congruence_is_sound());
                let target = GradedSemigroup::from_group(&h, &grading, 2).unwrap();
                let rho: Vec<usize> = t.elements().iter().map(|l| target.element_index(l).unwrap()).collect();
                let r = sg_universality_check(&t, &target, &rho, 5).unwrap();
                assert!(r.well_defined && r.commutes && r.multiplicative, "{}", h.name());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn functor_respects_composition(p in 0usize..6, q in 0usize..6) {
        let (phi, psi) = (permutation_hom(PERMS[p]), permutation_hom(PERMS[q]));
        let f_phi = envelope_functor(&phi, 2).unwrap();
        let f_psi = envelope_functor(&psi, 2).unwrap();
        let f_comp = envelope_functor(&psi.after(&phi).unwrap(), 2).unwrap();
        prop_assert_eq!(f_comp.hom, f_psi.hom.after(&f_phi.hom).unwrap());
    }

    #[test]
    fn identity_functor_is_identity(p in 0usize..6) {
        let a = exterior_odd(3).unwrap();
        let f = envelope_functor(&NAryHom::identity(&a), 2).unwrap();
        prop_assert!(f.hom.is_identity());
        let g = envelope_functor(&permutation_hom(PERMS[p]), 2).unwrap();
        prop_assert!(g.commutes);
        prop_assert!(g.hom.multiplicativity_violation().is_none());
    }

    #[test]
    fn binary_homology_is_bounded(seeds in proptest::collection::vec(proptest::collection::vec(-1i64..=1, 4), 1..=2)) {
        let b = binary_subalgebra(&seeds);
        prop_assert!(check_d_squared(&b, 3).unwrap().all_zero());
        let h = homology_ranks(&b, 3).unwrap();
        for (k, hk) in h.iter().enumerate() {
            prop_assert!(*hk as u128 <= chain_dim(&b, k));
        }
    }

    #[test]
    fn envelopes_of_binary_powers_are_injective(
        seeds in proptest::collection::vec(proptest::collection::vec(-1i64..=1, 4), 1..=2),
    ) {
        let a = nary_from_binary(&binary_subalgebra(&seeds), 3).unwrap();
        let e = build_envelope(&a, 2).unwrap();
        prop_assert_eq!(e.dims()[0], a.dim());
        prop_assert_eq!(e.embedding().rank(), a.dim());
        prop_assert!(e.well_definedness_violations().is_empty());
    }
}
