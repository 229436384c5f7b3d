use num_bigint::BigInt;
use proptest::prelude::*;
use weylcm::ffield::{build_field, embed_subfield};
use weylcm::intpoly::IntPoly;
use weylcm::modpoly::Zp;
use weylcm::zfactor::factor_monic_squarefree;

fn field() -> impl Strategy<Value = (u64, usize)> {
    prop::sample::select(vec![(13u64, 2usize), (3, 2), (5, 2), (7, 3), (11, 1), (3, 4)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((q, m) in field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = build_field(q, m).unwrap();
        let [a, b, c] = [a, b, c].map(|x| f.from_index(x % f.order()));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            prop_assert_eq!(f.pow(&a, f.order() - 1), f.one());
        }
    }

    #[test]
    fn embedding_is_a_ring_map(a in 0u64..25, b in 0u64..25) {
        let small = build_field(5, 2).unwrap();
        let big = build_field(5, 4).unwrap();
        let e = embed_subfield(&big, &small).unwrap();
        let (a, b) = (small.from_index(a), small.from_index(b));
        let (ea, eb) = (e.apply(&a).unwrap(), e.apply(&b).unwrap());
        prop_assert_eq!(e.apply(&small.mul(&a, &b)).unwrap(), big.mul(&ea, &eb));
        prop_assert_eq!(e.apply(&small.add(&a, &b)).unwrap(), big.add(&ea, &eb));
    }

    /// Factors over F_p multiply back, are monic irreducible, and pairwise distinct.
    #[test]
    fn modp_factorization_recombines(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 13, 101]),
        coeffs in prop::collection::vec(any::<u64>(), 2..10),
    ) {
        let zp = Zp::new(p);
        let mut f = zp.normalize(&coeffs);
        f.push(1);
        let factors = zp.factor(&f);
        let mut prod = vec![1u64];
        for (g, e) in &factors {
            prop_assert!(zp.is_irreducible(g));
            prop_assert_eq!(*g.last().unwrap(), 1);
            for _ in 0..*e {
                prod = zp.mul(&prod, g);
            }
        }
        prop_assert_eq!(prod, f);
    }

    #[test]
    fn integer_factorization_recombines(
        a in prop::collection::vec(-6i64..=6, 1..4),
        b in prop::collection::vec(-6i64..=6, 1..4),
    ) {
        let mk = |c: &[i64]| {
            let mut v = c.to_vec();
            v.push(1);
            IntPoly::from_i64(&v)
        };
        let f = mk(&a).mul(&mk(&b));
        prop_assume!(f.is_squarefree());
        let factors = factor_monic_squarefree(&f);
        let prod = factors.iter().fold(IntPoly::one(), |acc, g| acc.mul(g));
        prop_assert_eq!(prod, f);
        prop_assert!(factors.len() >= 2);
    }

    /// Sturm counts agree with sign changes of a polynomial with known roots.
    #[test]
    fn sturm_counts_known_roots(roots in prop::collection::btree_set(-20i64..20, 1..6), extra in 1i64..5) {
        let mut f = IntPoly::one();
        for r in &roots {
            f = f.mul(&IntPoly::linear(&BigInt::from(*r)));
        }
        // a positive-definite quadratic adds no real roots
        let f = f.mul(&IntPoly::from_i64(&[extra, 0, 1]));
        prop_assert_eq!(f.count_real_roots(), roots.len());
    }
}
