//! Property tests over randomized inputs.

use std::f64::consts::PI;

use nlwe::bound_ent::{complement_mixture, ppt_report};
use nlwe::ensembles::{canonical_circuit, local_factor_census, shift_circuit};
use nlwe::io;
use nlwe::lemma::{computational_basis, fourier_basis, preserves_orthogonality, KrausOperator, LEMMA_TOL};
use nlwe::linalg::{partial_transpose, span_dimension, ComplexMatrix, ComplexVector, DimVector, C64};
use nlwe::state::{Factor, ProductState};
use nlwe::upb::{extract_upb, search_extension};
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

fn matrix_for(dims: &[usize]) -> impl Strategy<Value = ComplexMatrix> {
    let total: usize = dims.iter().product();
    prop::collection::vec(c64(), total * total).prop_map(move |data| ComplexMatrix::new(total, total, data).unwrap())
}

/// Non-empty proper subset of `0..n` as a bit mask.
fn subset_of(n: usize, mask: u32) -> Vec<usize> {
    let m = 1 + mask % ((1 << n) - 2);
    (0..n).filter(|p| m & (1 << p) != 0).collect()
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Dense tensor product written out index by index (party 0 most significant).
fn tensor_by_index(locals: &[ComplexVector], dims: &DimVector) -> Vec<C64> {
    (0..dims.total())
        .map(|i| {
            dims.digits(i)
                .iter()
                .enumerate()
                .map(|(p, &k)| locals[p][k])
                .product()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_transpose_is_an_involution(
        (dims, rho) in dims_strategy().prop_flat_map(|d| (Just(d.clone()), matrix_for(&d))),
        mask in any::<u32>(),
    ) {
        let dv = DimVector::new(dims.clone()).unwrap();
        let subset = subset_of(dims.len(), mask);
        let once = partial_transpose(&rho, &dv, &subset).unwrap();
        let twice = partial_transpose(&once, &dv, &subset).unwrap();
        prop_assert!(twice.max_abs_diff(&rho) == 0.0);
    }

    #[test]
    fn partial_transpose_is_linear(
        (dims, a, b) in dims_strategy().prop_flat_map(|d| (Just(d.clone()), matrix_for(&d), matrix_for(&d))),
        s in c64(),
        mask in any::<u32>(),
    ) {
        let dv = DimVector::new(dims.clone()).unwrap();
        let subset = subset_of(dims.len(), mask);
        let lhs = partial_transpose(&a.scale(s).add(&b).unwrap(), &dv, &subset).unwrap();
        let rhs = partial_transpose(&a, &dv, &subset).unwrap().scale(s)
            .add(&partial_transpose(&b, &dv, &subset).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-14);
    }

    #[test]
    fn span_dimension_ignores_order_and_scale(
        vectors in prop::collection::vec(prop::collection::vec(c64(), 4), 1..6),
        repeat in 0usize..3,
        scales in prop::collection::vec((0.01..100.0f64, 0.0..2.0 * PI), 8),
        perm_seed in any::<u64>(),
    ) {
        let mut vs: Vec<ComplexVector> = vectors.into_iter().map(|v| ComplexVector::new(v).unwrap()).collect();
        // Repeated members make some sets rank-deficient.
        for i in 0..repeat.min(vs.len()) {
            let copy = vs[i].scale(C64::new(0.5, -2.0));
            vs.push(copy);
        }
        let base = span_dimension(&vs, 1e-9).unwrap();
        let mut shuffled: Vec<ComplexVector> = vs
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let (r, t) = scales[i % scales.len()];
                v.scale(C64::from_polar(r, t))
            })
            .collect();
        let k = shuffled.len();
        shuffled.rotate_left((perm_seed as usize) % k);
        shuffled.reverse();
        prop_assert_eq!(span_dimension(&shuffled, 1e-9).unwrap(), base);
        prop_assert!(base <= 4);
    }

    #[test]
    fn canonical_basis_is_order_independent_and_product(
        (dims, perm) in prop_oneof![
            prop::collection::vec(2usize..=3, 3).prop_map(|d| d),
            prop::collection::vec(3usize..=4, 4).prop_map(|d| d),
        ].prop_flat_map(|d| { let n = d.len(); (Just(d), permutation(n)) }),
    ) {
        let dv = DimVector::new(dims.clone()).unwrap();
        let circuit = canonical_circuit(dims.len(), &dv).unwrap();
        let basis = circuit.generate_basis().unwrap();
        prop_assert_eq!(&circuit.reordered(&perm).unwrap().generate_basis().unwrap(), &basis);
        prop_assert!(basis.gram_deviation().unwrap() <= 1e-10);
        for s in basis.states().iter().step_by(7) {
            let dense = tensor_by_index(&s.local_vectors(), &dv);
            let diff = s.render().entries().iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(diff <= 1e-12);
        }
        for (p, &d) in dims.iter().enumerate() {
            prop_assert!(local_factor_census(&basis, p).len() <= 2 * d);
        }
        let text = io::basis_to_string(&basis, Some(&circuit)).unwrap();
        let (back, c) = io::basis_from_str(&text).unwrap();
        prop_assert_eq!(back, basis);
        prop_assert_eq!(c.unwrap(), circuit);
    }

    #[test]
    fn unextendibility_invariant_under_member_and_party_permutation(
        excluded in prop::collection::vec(0usize..2, 3),
        members in permutation(4),
        parties in permutation(3),
    ) {
        let upb = extract_upb(&shift_circuit(), &excluded).unwrap();
        let reordered: Vec<ProductState> = members.iter().map(|&i| upb.states()[i].clone()).collect();
        let relabeled: Vec<ProductState> = reordered.iter().map(|s| s.permute_parties(&parties).unwrap()).collect();
        let dims = upb.dims().permuted(&parties).unwrap();
        prop_assert!(!search_extension(upb.states(), upb.dims(), 1e-9).unwrap().extendible);
        prop_assert!(!search_extension(&reordered, upb.dims(), 1e-9).unwrap().extendible);
        prop_assert!(!search_extension(&relabeled, &dims, 1e-9).unwrap().extendible);
    }

    #[test]
    fn leave_one_out_witness_is_orthogonal(
        excluded in prop::collection::vec(0usize..2, 3),
        drop in 0usize..4,
    ) {
        let upb = extract_upb(&shift_circuit(), &excluded).unwrap();
        let subset = upb.without(drop);
        let search = search_extension(&subset, upb.dims(), 1e-9).unwrap();
        prop_assert!(search.extendible);
        let w = search.witness.unwrap().render();
        for s in &subset {
            prop_assert!(s.render().inner(&w).norm() <= 1e-9);
        }
    }

    #[test]
    fn orthogonality_check_ignores_scale_and_basis_phases(
        entries in prop::collection::vec(c64(), 9),
        scale in (0.01..100.0f64, 0.0..2.0 * PI),
        phases in prop::collection::vec(0.0..2.0 * PI, 3),
        unitary_like in any::<bool>(),
    ) {
        let k = if unitary_like {
            // Diagonal phases: keeps both bases orthogonal.
            KrausOperator::new(ComplexMatrix::diagonal(&phases.iter().map(|&t| C64::from_polar(1.0, t)).collect::<Vec<_>>())).unwrap()
        } else {
            KrausOperator::new(ComplexMatrix::new(3, 3, entries).unwrap()).unwrap()
        };
        let scaled = k.scaled(C64::from_polar(scale.0, scale.1));
        for basis in [computational_basis(3), fourier_basis(3).unwrap()] {
            let rephased: Vec<ComplexVector> = basis.iter().zip(&phases).map(|(b, &t)| b.scale(C64::from_polar(1.0, t))).collect();
            let a = preserves_orthogonality(&k, &basis, LEMMA_TOL).unwrap();
            prop_assert_eq!(preserves_orthogonality(&scaled, &basis, LEMMA_TOL).unwrap(), a);
            prop_assert_eq!(preserves_orthogonality(&k, &rephased, LEMMA_TOL).unwrap(), a);
            if unitary_like {
                prop_assert!(a);
            }
        }
    }

    #[test]
    fn mixtures_of_product_states_are_ppt(
        picks in prop::collection::vec((0usize..2, 0usize..2, 0usize..2), 1..4),
    ) {
        // Complement of a few orthogonal computational kets is separable.
        let dims = DimVector::new(vec![2, 2, 2]).unwrap();
        let mut states: Vec<ProductState> = Vec::new();
        for (a, b, c) in picks {
            let s = ProductState::new(vec![Factor::Cb(a), Factor::Cb(b), Factor::Cb(c)], dims.clone()).unwrap();
            if !states.contains(&s) {
                states.push(s);
            }
        }
        let rho = complement_mixture(&states, &dims).unwrap();
        prop_assert!(ppt_report(&rho, 1e-10).unwrap().passed());
    }
}
