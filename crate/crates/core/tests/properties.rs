use num_bigint::BigInt;
use proptest::prelude::*;
use semisign::num::field::{FieldElem, NumberField};
use semisign::num::{rat, PolyQ, Rational};
use semisign::relations::{multiplicative_lattice, verify_relation};
use semisign::{nonnegative_membership_diag, positive_membership, sign_set, AlgebraicNumber, RationalMatrix, Error};

fn matrix(d: usize, range: i64) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-range..=range, d * d).prop_map(move |v| {
        let rows: Vec<&[i64]> = v.chunks(d).collect();
        RationalMatrix::from_ints(&rows)
    })
}

fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
    (2usize..=3).prop_flat_map(|d| matrix(d, 3))
}

/// `A` and `p(A)` for a small polynomial `p`, so the pair commutes.
fn commuting_pair() -> impl Strategy<Value = Vec<RationalMatrix>> {
    (matrix(2, 3), -2i64..=2, -2i64..=2, 0i64..=1).prop_map(|(a, c0, c1, c2)| {
        let i = RationalMatrix::eye(2);
        let b = i.scale(&rat(c0, 1)).add(&a.scale(&rat(c1, 1))).add(&a.mul(&a).scale(&rat(c2, 1)));
        vec![a, b]
    })
}

fn brute(m: &RationalMatrix, n: u64) -> bool {
    m.pow(n).is_nonnegative()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sign_set_matches_powers(m in small_matrix()) {
        let s = sign_set(&m).unwrap();
        let mut p = m.clone();
        for n in 1..=40u64 {
            prop_assert_eq!(s.contains(n), p.is_nonnegative(), "n = {}", n);
            p = p.mul(&m);
        }
        if let Some(n) = s.min() {
            prop_assert!(brute(&m, n));
        }
    }

    #[test]
    fn nonnegative_matrices_give_every_power(m in small_matrix()) {
        let a = m.map(|x| if *x < Rational::from_integer(0.into()) { -x } else { x.clone() });
        let s = sign_set(&a).unwrap();
        prop_assert!(s.is_cofinite());
        prop_assert!((1..=20).all(|n| s.contains(n)));
    }

    #[test]
    fn positive_scaling_invariance(m in small_matrix(), p in 1i64..=5, q in 1i64..=5) {
        let a = sign_set(&m).unwrap();
        let b = sign_set(&m.scale(&rat(p, q))).unwrap();
        prop_assert!((1..=30).all(|n| a.contains(n) == b.contains(n)));
    }

    #[test]
    fn permutation_invariance(m in matrix(3, 3), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let a = sign_set(&m).unwrap();
        let b = sign_set(&m.permute(&perm)).unwrap();
        prop_assert!((1..=30).all(|n| a.contains(n) == b.contains(n)));
    }

    #[test]
    fn field_axioms(c in -5i64..=5, a0 in -4i64..=4, a1 in -4i64..=4, b0 in -4i64..=4, b1 in -4i64..=4) {
        // x^2 - c has no rational root unless c is a square
        prop_assume!(![0, 1, 4].contains(&c));
        let f = NumberField::new(&PolyQ::new(vec![rat(-c, 1), rat(0, 1), rat(1, 1)]));
        let el = |x: i64, y: i64| FieldElem::new(&f, PolyQ::new(vec![rat(x, 1), rat(y, 1)]));
        let (a, b, g) = (el(a0, a1), el(b0, b1), FieldElem::generator(&f));
        prop_assert_eq!(a.add(&b).mul(&g), a.mul(&g).add(&b.mul(&g)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(g.mul(&g), FieldElem::from_rational(&f, rat(c, 1)));
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv()), FieldElem::from_rational(&f, rat(1, 1)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relation_lattice_is_complete(raw in prop::collection::vec((1i64..=8, prop::bool::ANY), 2..=3)) {
        let nums: Vec<AlgebraicNumber> =
            raw.iter().map(|&(x, neg)| AlgebraicNumber::from_int(if neg { -x } else { x })).collect();
        let lat = multiplicative_lattice(&nums, 16);
        for v in lat.basis_i64() {
            prop_assert!(verify_relation(&nums, &v));
        }
        let k = nums.len();
        let mut v = vec![-3i64; k];
        loop {
            if verify_relation(&nums, &v) {
                prop_assert!(lat.contains(&v.iter().map(|&x| BigInt::from(x)).collect()), "{:?}", v);
            }
            let Some(i) = v.iter().position(|&x| x < 3) else { break };
            v[i] += 1;
            for x in &mut v[..i] {
                *x = -3;
            }
        }
    }

    #[test]
    fn membership_transpose_invariance(f in commuting_pair()) {
        let t: Vec<RationalMatrix> = f.iter().map(|a| a.transpose()).collect();
        let a = positive_membership(&f);
        let b = positive_membership(&t);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a.is_yes(), b.is_yes());
            prop_assert_eq!(a.is_no(), b.is_no());
        }
    }

    #[test]
    fn positive_implies_nonnegative(f in commuting_pair()) {
        let Ok(p) = positive_membership(&f) else { return Ok(()) };
        if let Some(w) = p.witness(&f) {
            prop_assert!(w.is_positive());
            match nonnegative_membership_diag(&f) {
                Ok(v) => prop_assert!(!v.is_no()),
                Err(e) => prop_assert_eq!(e, Error::NotDiagonalizable),
            }
        }
    }
}
