//! Property tests for the invariants each type and operation promises.

mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use profound::degen;
use profound::k3;
use profound::lefschetz::{self, hurwitz_move, total_monodromy, Direction};
use profound::linalg::{format_rational, image, int, kernel, parse_rational, ratio, Filtration, Matrix, Subspace};
use profound::mwf::{check_mwf_axioms, weight_filtration, NilpotentEndo};
use profound::pw::{self, FiberedSurfaceData};
use profound::snc::{self, torus};
use rand::Rng;

fn small_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    let density = r.gen_range(0.1..1.0);
    Matrix::from_fn(rows, cols, |_, _| if r.gen_bool(density) { int(r.gen_range(-4..=4)) } else { int(0) })
}

/// A random symmetric invertible matrix `P^T D P`.
fn nondegenerate_gram(r: &mut impl Rng, n: usize) -> Matrix {
    let p = random_unimodular(r, n);
    let d = Matrix::from_fn(n, n, |i, j| if i == j { int(if r.gen_bool(0.5) { 1 } else { -2 }) } else { int(0) });
    p.transpose().checked_mul(&d).unwrap().checked_mul(&p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rationals_stay_reduced(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let x = ratio(a, b) * ratio(c, d) + ratio(c, b);
        prop_assert!(*x.denom() > 0.into());
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn rank_nullity(seed in any::<u64>(), rows in 0usize..7, cols in 0usize..7) {
        let mut r = rng(seed);
        let m = small_matrix(&mut r, rows, cols);
        let k = kernel(&m);
        prop_assert_eq!(m.rank() + k.dim(), cols);
        prop_assert_eq!(image(&m).dim(), m.rank());
        for v in k.basis() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == int(0)));
        }
    }

    #[test]
    fn canonical_form_is_basis_independent(seed in any::<u64>(), n in 1usize..7, k in 0usize..7) {
        let mut r = rng(seed);
        let b = small_matrix(&mut r, n, k);
        let s = Subspace::from_basis_matrix(&b);
        prop_assert_eq!(&Subspace::from_basis_matrix(&s.basis_matrix()), &s);
        // column operations do not change the span
        if k > 0 {
            let q = random_unimodular(&mut r, k);
            prop_assert_eq!(&Subspace::from_basis_matrix(&b.checked_mul(&q).unwrap()), &s);
        }
        prop_assert!(s.is_subspace_of(&s.sum(&Subspace::zero(n)).unwrap()).unwrap());
    }

    #[test]
    fn orthogonal_complement_is_an_involution(seed in any::<u64>(), n in 1usize..7, k in 0usize..7) {
        let mut r = rng(seed);
        let g = nondegenerate_gram(&mut r, n);
        let s = Subspace::from_basis_matrix(&small_matrix(&mut r, n, k));
        let perp = s.ortho_complement(&g, true).unwrap();
        prop_assert_eq!(s.dim() + perp.dim(), n);
        prop_assert_eq!(perp.ortho_complement(&g, true).unwrap(), s);
    }

    #[test]
    fn intersection_and_sum_dimensions(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let a = Subspace::from_basis_matrix(&small_matrix(&mut r, n, 3));
        let b = Subspace::from_basis_matrix(&small_matrix(&mut r, n, 3));
        let (sum, meet) = (a.sum(&b).unwrap(), a.intersection(&b).unwrap());
        prop_assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        prop_assert!(meet.is_subspace_of(&a).unwrap() && a.is_subspace_of(&sum).unwrap());
    }

    #[test]
    fn preimage_of_image_contains_the_subspace(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let m = small_matrix(&mut r, n, n);
        let s = Subspace::from_basis_matrix(&small_matrix(&mut r, n, 2));
        let back = s.image_under(&m).unwrap().preimage_under(&m).unwrap();
        prop_assert!(s.is_subspace_of(&back).unwrap());
        prop_assert_eq!(back, s.sum(&kernel(&m)).unwrap());
    }

    #[test]
    fn weight_filtration_is_certified(seed in any::<u64>(), n in 1usize..8, center in -4i64..5) {
        let mut r = rng(seed);
        let op = NilpotentEndo::new(random_nilpotent(&mut r, n), center).unwrap();
        prop_assert!(op.nilpotency_index() as usize <= n);
        let m = weight_filtration(&op);
        prop_assert!(m.check_nesting());
        prop_assert!(check_mwf_axioms(&op, &m).unwrap());
        // graded pieces are symmetric about the center
        for l in 0..=(n as i64) {
            prop_assert_eq!(m.graded_dim(center + l), m.graded_dim(center - l));
        }
        prop_assert_eq!(m.graded_dims().values().sum::<usize>(), n);
    }

    #[test]
    fn weight_filtration_of_the_adjoint(seed in any::<u64>(), n in 1usize..7) {
        // the adjoint's weight filtration is the annihilator of the shifted original
        let mut r = rng(seed);
        let g = nondegenerate_gram(&mut r, n);
        let op = NilpotentEndo::new(random_nilpotent(&mut r, n), 0).unwrap();
        let adj = op.pairing_adjoint(&g).unwrap();
        let (m, ma) = (weight_filtration(&op), weight_filtration(&adj));
        for j in -(n as i64)..=(n as i64) {
            let ann = m.get(-j - 1).ortho_complement(&g, true).unwrap();
            prop_assert_eq!(ma.get(j), &ann);
        }
    }

    #[test]
    fn k3_n_is_nilpotent_and_rho_independent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = k3();
        let (beta, rho) = (vector("e1"), random_rho(&mut r));
        let n = k3::n_beta_rho(&l, &beta, &rho).unwrap();
        prop_assert!(n.pow(3).unwrap().is_zero());
        prop_assert!(!n.pow(2).unwrap().is_zero());
        let m = k3::mprime_filtration(&l, &beta, &rho).unwrap();
        prop_assert_eq!(&weight_filtration(&NilpotentEndo::new(n, 2).unwrap()), &m);
        prop_assert_eq!(m, k3::mprime_filtration(&l, &beta, &vector("e2+f2")).unwrap());
    }

    #[test]
    fn k3_pairing_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = k3();
        let g = k3_gram_oracle();
        let x = random_int_vector(&mut r, 22, 5);
        let y = random_int_vector(&mut r, 22, 5);
        let (lx, ly) = (k3::LatticeVector(x.clone()), k3::LatticeVector(y.clone()));
        prop_assert_eq!(l.pair(&lx, &ly).unwrap(), l.pair(&ly, &lx).unwrap());
        prop_assert_eq!(l.pair(&lx, &ly).unwrap(), int(pair_oracle(&g, &x, &y)));
        prop_assert_eq!(l.parse_vector(&l.format_vector(&lx)).unwrap(), lx);
    }

    #[test]
    fn type_iii_duality_for_random_rho(seed in any::<u64>()) {
        let mut r = rng(seed);
        let deg = k3::type_iii_degeneration(&vector("e1"), &random_rho(&mut r)).unwrap();
        for k in [0, 2, 4] {
            prop_assert!(degen::duality_check(&deg, k).unwrap());
        }
        prop_assert!(degen::verify_maincy(&deg, 2).unwrap());
        prop_assert!(degen::torus_span_check(&deg, 2, &dual_of_beta(&vector("e1"))).unwrap());
        prop_assert!(degen::homology_duality_check(&deg, 2).unwrap());
    }

    #[test]
    fn twist_parameters_round_trip(s in -30i64..30, t in -30i64..30) {
        prop_assume!(num_integer::Integer::gcd(&s, &t) == 1);
        let m = lefschetz::twist(s, t).unwrap();
        prop_assert_eq!(m.trace(), 2.into());
        let (ps, pt) = lefschetz::twist_params(&m).unwrap();
        prop_assert!(pt > 0.into() || (pt == 0.into() && ps > 0.into()));
        prop_assert_eq!(lefschetz::twist_matrix(&ps, &pt).unwrap(), m.clone());
        let l = lefschetz::conjugator(&m).unwrap();
        prop_assert_eq!(l.conjugate(&lefschetz::twist(1, 0).unwrap()), m);
    }

    #[test]
    fn conjugates_of_twists_are_twists(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_sl2(&mut r, 12);
        let m = a.conjugate(&random_twist(&mut r, 6));
        prop_assert!(lefschetz::is_positive_twist(&m));
        prop_assert!(!lefschetz::is_positive_twist(&m.inverse()));
    }

    #[test]
    fn hurwitz_moves_are_inverse(seed in any::<u64>(), len in 2usize..7) {
        let mut r = rng(seed);
        let w = random_word(&mut r, len);
        let i = r.gen_range(0..len - 1);
        let right = hurwitz_move(&w, i, Direction::Right).unwrap();
        prop_assert_eq!(&hurwitz_move(&right, i, Direction::Left).unwrap(), &w);
        prop_assert_eq!(total_monodromy(&right), total_monodromy(&w));
        prop_assert!(hurwitz_move(&w, len - 1, Direction::Right).is_err());
    }

    #[test]
    fn perverse_filtration_of_a_fibered_surface(seed in any::<u64>(), b1 in 0usize..5, b2 in 0usize..5) {
        let mut r = rng(seed);
        let mut restrictions = BTreeMap::from([(0, Matrix::identity(1))]);
        if b1 > 0 {
            restrictions.insert(1, small_matrix(&mut r, 2, b1));
        }
        if b2 > 0 {
            restrictions.insert(2, small_matrix(&mut r, 1, b2));
        }
        let data = FiberedSurfaceData::new(vec![1, b1, b2], restrictions).unwrap();
        let p = pw::perverse_filtration_surface(&data).unwrap();
        for (&k, f) in &p {
            let k = k as i64;
            prop_assert!(f.get(k - 2).is_zero() && f.get(k).is_full());
            prop_assert_eq!(f.get(k - 1), &kernel(&data.restriction(k as usize)));
        }
        // the perverse filtration, doubled, is a weight filtration P = W
        let w: BTreeMap<usize, Filtration> = p
            .iter()
            .map(|(&k, f)| (k, Filtration::from_steps(f.ambient_dim(), f.jumps().map(|(j, s)| (2 * j, s.clone()))).unwrap()))
            .collect();
        prop_assert!(pw::pw_compare(&p, &w).unwrap());
    }
}

#[test]
fn coordinate_simplices_are_tori() {
    for d in 1..=4 {
        let (pair, coh) = snc::coordinate_simplex(d).unwrap();
        let seq = snc::weight_spectral_sequence(&pair, &coh).unwrap();
        let table = seq.weight_table();
        assert_eq!(table.euler_characteristic(), 0, "d = {d}");
        assert_eq!(seq.e1_euler_characteristic(), 0, "d = {d}");
        assert!(table.weights_in_range());
        let st = snc::stratify(pair.nerve());
        assert_eq!(st.delta, d);
        assert_eq!(st.profound_tori.len(), binomial(d + 1, d));
        assert!(st.profound_tori.iter().all(|t| t.dim == d));
        assert!(snc::check_star_condition(&pair).holds);
        for k in 0..=d {
            let g = snc::top_weight_generators(&pair, &coh, k).unwrap();
            assert_eq!(g.kernel.dim(), binomial(d, k), "d = {d}, k = {k}");
        }
    }
}

#[test]
fn wedge_is_alternating() {
    let mut r = rng(11);
    for m in 2..=4 {
        for k in 2..=m {
            let vs: Vec<_> = (0..k).map(|_| ints(&random_int_vector(&mut r, m, 3))).collect();
            let w = torus::wedge(m, &vs).unwrap();
            let mut swapped = vs.clone();
            swapped.swap(0, 1);
            let neg: Vec<_> = w.iter().map(|x| -x).collect();
            assert_eq!(torus::wedge(m, &swapped).unwrap(), neg);
            let mut repeated = vs.clone();
            repeated[1] = repeated[0].clone();
            assert!(torus::wedge(m, &repeated).unwrap().iter().all(|x| *x == int(0)));
        }
        for k in 0..=m {
            assert!(torus::coordinate_subtori_span(m, k).unwrap());
        }
    }
}

#[test]
fn clemens_tori_have_dimension_depth_minus_one() {
    let deg = k3::type_iii_degeneration(&vector("e1"), &vector("e2+f2")).unwrap();
    for face in deg.nerve().faces() {
        assert_eq!(deg.clemens_torus_dim(face).unwrap(), face.len() - 1);
    }
    assert_eq!(deg.delta(), 2);
}
