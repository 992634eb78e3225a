use imm_core::exact::{det_division_free, det_rational, exact_rank, frac, int};
use imm_core::hessian::hessian_at;
use imm_core::imm::{coordinate_expansion, evaluate, second_partial, VarIndex};
use imm_core::quiver::{rank_matrix, realize, QuiverRep};
use imm_core::catalog::{parse_point_file, write_point_file};
use imm_core::symmetry::{apply, invariant_space_dim, GroupElement};
use imm_core::{random, Matrix, MatTuple, Modulus, QuotientScalar, Rational, Scalar};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=6).prop_map(|(a, b)| frac(a, b))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(rational(), rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, &int(0), |i, j| v[i * cols + j].clone()))
}

fn quotient_triple() -> impl Strategy<Value = (QuotientScalar, QuotientScalar, QuotientScalar)> {
    (1usize..=5, 2u64..=5).prop_flat_map(|(n, q)| {
        let m = Modulus::new(n, q).unwrap();
        let elem = move || prop::collection::vec(rational(), n).prop_map(move |c| QuotientScalar::from_coeffs(m, c));
        (elem(), elem(), elem())
    })
}

fn point(n: usize, q: usize) -> impl Strategy<Value = MatTuple<Rational>> {
    any::<u64>().prop_map(move |seed| random::point(&mut random::rng(seed), n, q, 40, 6))
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5, 1usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quotient_ring_axioms((a, b, c) in quotient_triple()) {
        prop_assert_eq!(a.plus(&b), b.plus(&a));
        prop_assert_eq!(a.times(&b), b.times(&a));
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert_eq!(a.plus(&a.negate()), a.zero_like());
        prop_assert_eq!(a.times(&a.one_like()), a.clone());
    }

    #[test]
    fn unit_inverse((a, _, _) in quotient_triple()) {
        match a.unit_inverse() {
            Some(inv) => prop_assert!(a.times(&inv).is_one()),
            None => prop_assert!(!a.is_unit()),
        }
    }

    #[test]
    fn rank_of_product_is_bounded(a in matrix(3, 4), b in matrix(4, 2)) {
        let r = exact_rank(&a.mul(&b));
        prop_assert!(r <= exact_rank(&a).min(exact_rank(&b)));
    }

    #[test]
    fn low_rank_products(a in matrix(4, 2), b in matrix(2, 4)) {
        let p = a.mul(&b);
        prop_assert!(exact_rank(&p) <= 2);
        prop_assert_eq!(det_rational(&p).unwrap(), int(0));
    }

    #[test]
    fn determinants_agree(m in (1usize..=5).prop_flat_map(|k| matrix(k, k))) {
        prop_assert_eq!(det_division_free(&m).unwrap(), det_rational(&m).unwrap());
        prop_assert_eq!(det_rational(&m).unwrap(), det_rational(&m.transpose()).unwrap());
    }

    #[test]
    fn cyclic_shift_keeps_value(x in shape().prop_flat_map(|(n, q)| point(n, q)), k in 0usize..6) {
        let y = apply(&GroupElement::CyclicShift(k), &x).unwrap();
        prop_assert_eq!(evaluate(&y), evaluate(&x));
    }

    #[test]
    fn multilinear_in_each_block(
        (x, y, alpha) in shape().prop_flat_map(|(n, q)| (point(n, q), point(n, q), 1..=n)),
        c in rational(),
    ) {
        let mut sum = x.clone();
        sum.set_block(alpha, x.block(alpha).scale(&c).add(y.block(alpha)));
        let mut other = x.clone();
        other.set_block(alpha, y.block(alpha).clone());
        prop_assert_eq!(evaluate(&sum), c * evaluate(&x) + evaluate(&other));
    }

    #[test]
    fn expansion_sums_to_trace(x in (1usize..=3, 1usize..=3).prop_flat_map(|(n, q)| point(n, q))) {
        let monomials = coordinate_expansion(x.n(), x.q()).unwrap();
        prop_assert_eq!(monomials.len(), x.q().pow(x.n() as u32));
        let total = monomials.iter().fold(int(0), |acc, m| acc + m.evaluate(&x));
        prop_assert_eq!(total, evaluate(&x));
    }

    #[test]
    fn second_partials_are_symmetric(x in (2usize..=4, 1usize..=3).prop_flat_map(|(n, q)| point(n, q)), a in any::<usize>(), b in any::<usize>()) {
        let size = x.n() * x.q() * x.q();
        let (u, v) = (VarIndex::from_position(a % size, x.q()), VarIndex::from_position(b % size, x.q()));
        prop_assert_eq!(second_partial(&x, u, v), second_partial(&x, v, u));
        if u.alpha == v.alpha {
            prop_assert_eq!(second_partial(&x, u, v), int(0));
        }
    }

    #[test]
    fn composition_is_sequential(x in (3usize..=4, 2usize..=3).prop_flat_map(|(n, q)| point(n, q)), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (n, q) = (x.n(), x.q());
        let g = imm_core::symmetry::random_phi(&mut rng, n, q);
        let h = GroupElement::CyclicShift(1).compose(&GroupElement::TransposeReversal);
        let direct = apply(&g, &apply(&h, &x).unwrap()).unwrap();
        prop_assert_eq!(apply(&g.compose(&h), &x).unwrap(), direct);
    }

    #[test]
    fn dihedral_relations(x in (1usize..=5, 1usize..=3).prop_flat_map(|(n, q)| point(n, q))) {
        let n = x.n();
        let rho = GroupElement::CyclicShift(1);
        let tau = GroupElement::TransposeReversal;
        let rho_n = GroupElement::Composite(vec![rho.clone(); n]);
        prop_assert_eq!(apply(&rho_n, &x).unwrap(), x.clone());
        let conj = GroupElement::Composite(vec![tau.clone(), rho.clone(), tau.clone()]);
        let rho_inv = GroupElement::CyclicShift(n - 1);
        prop_assert_eq!(apply(&conj, &x).unwrap(), apply(&rho_inv, &x).unwrap());
        prop_assert_eq!(apply(&GroupElement::Composite(vec![tau.clone(), tau]), &x).unwrap(), x);
    }

    #[test]
    fn scalar_tuples_scale_by_product(x in shape().prop_flat_map(|(n, q)| point(n, q)), zs in prop::collection::vec((1i64..=9, 1i64..=9), 5)) {
        let n = x.n();
        let zs: Vec<Rational> = zs[..n].iter().map(|&(a, b)| frac(a, b)).collect();
        let c = zs.iter().fold(int(1), |acc, z| acc * z);
        let y = apply(&GroupElement::Scale(zs.clone()), &x).unwrap();
        prop_assert_eq!(evaluate(&y), c.clone() * evaluate(&x));
        let mut unit = zs;
        unit[0] = unit[0].clone() / c;
        prop_assert_eq!(evaluate(&apply(&GroupElement::Scale(unit), &x).unwrap()), evaluate(&x));
    }

    #[test]
    fn hessian_entries_are_second_partials(x in (2usize..=4, 1usize..=2).prop_flat_map(|(n, q)| point(n, q))) {
        let h = hessian_at(&x);
        let size = x.n() * x.q() * x.q();
        for r in 0..size {
            for c in 0..size {
                let (u, v) = (h.row_variable(r), h.col_variable(c));
                prop_assert_eq!(h.matrix().get(r, c), &second_partial(&x, u, v));
            }
        }
    }

    #[test]
    fn point_files_round_trip(x in shape().prop_flat_map(|(n, q)| point(n, q))) {
        prop_assert_eq!(parse_point_file(&write_point_file(&x)).unwrap(), x);
    }

    #[test]
    fn rank_matrix_routes_agree(
        (n, q, picks) in (2usize..=4, 1usize..=3).prop_flat_map(|(n, q)| (Just(n), Just(q), prop::collection::vec(any::<usize>(), 8)))
    ) {
        let reps = imm_core::quiver::enumerate_decompositions(n, q).unwrap();
        for p in picks {
            let rep: &QuiverRep = &reps[p % reps.len()];
            prop_assert!(rank_matrix(rep).is_ok());
            let point = realize(rep);
            prop_assert!(imm_core::quiver::is_singular_point(&point));
        }
    }
}

#[test]
fn multilinear_invariant_is_unique() {
    for (n, q) in [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (5, 1)] {
        assert_eq!(invariant_space_dim(n, q, &vec![1; n]).unwrap(), 1, "n={n} q={q}");
    }
}
