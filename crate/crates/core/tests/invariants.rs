mod oracles;

use num_bigint::BigInt;
use proptest::prelude::*;

use qcluster::repmod::DEFAULT_SUBSPACE_BUDGET as BUDGET;
use qcluster::seeds::check_compatible;
use qcluster::{cc_character, qbinomial, CCObject, FramedData, LaurentScalar, TorusElement};

use oracles::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qbinomial_matches_inversion_count(n in 0usize..=12, k in 0usize..=12) {
        prop_assume!(k <= n);
        let got = qbinomial(n as i64, k as i64).unwrap();
        let want = LaurentScalar::from_terms(balanced(&gaussian_by_inversions(n, k), n, k));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn mutation_paths_stay_compatible(n in 1usize..=3, path in prop::collection::vec(0usize..3, 0..12)) {
        let mut s = FramedData::type_a(n).unwrap().seed().unwrap();
        for k in path.into_iter().filter(|&k| k < n) {
            let t = s.mutate(k).unwrap();
            prop_assert_eq!(check_compatible(t.lambda(), t.exchange_matrix()).unwrap(), vec![1; n]);
            let back = t.mutate(k).unwrap();
            prop_assert_eq!(back.vars(), s.vars());
            prop_assert!(t.vars()[k].has_nonnegative_coefficients());
            s = t;
        }
    }

    #[test]
    fn mutation_agrees_with_classical_values(
        path in prop::collection::vec(0usize..3, 0..10),
        xs in prop::collection::vec((1i64..50, 1i64..50), 6),
    ) {
        let f = FramedData::type_a(3).unwrap();
        let x: Vec<_> = xs.iter().map(|&(a, b)| num_rational::BigRational::new(a.into(), b.into())).collect();
        let mut quantum = f.seed().unwrap();
        let mut classical = RationalSeed { b: exchange_matrix(6, 3, &framed_a_arrows(3)), x: x.clone() };
        for k in path {
            quantum = quantum.mutate(k).unwrap();
            classical = classical.mutate(k);
        }
        for (q, c) in quantum.vars().iter().zip(&classical.x) {
            let spec = q.specialize_commutative();
            prop_assert_eq!(&evaluate(spec.terms(), &x), c);
        }
    }

    #[test]
    fn interval_characters_specialize_classically(n in 1usize..=3, a in 0usize..3, len in 0usize..3, p in prop::sample::select(vec![2u32, 3, 5])) {
        let b = a + len;
        prop_assume!(b < n);
        let f = FramedData::type_a(n).unwrap();
        let cat = f.catalog(p).unwrap();
        let mut dims = vec![0usize; 2 * n];
        dims[a..=b].iter_mut().for_each(|x| *x = 1);
        let rep = cat.entries().iter().find(|r| r.dims() == dims.as_slice()).unwrap().clone();
        let x = cc_character(&f, &CCObject::module_only(rep).unwrap(), BUDGET).unwrap();
        let ours: Vec<(Vec<i64>, BigInt)> =
            x.specialize_commutative().terms().map(|(e, c)| (e.to_vec(), c.clone())).collect();
        prop_assert_eq!(ours, interval_character(n, a, b));
    }

    #[test]
    fn frame_products_match_oracle(
        l01 in -3i64..=3, l02 in -3i64..=3, l12 in -3i64..=3,
        c in prop::collection::vec(-3i64..=3, 3),
        d in prop::collection::vec(-3i64..=3, 3),
    ) {
        let l = vec![vec![0, l01, l02], vec![-l01, 0, l12], vec![-l02, -l12, 0]];
        let form = qcluster::SkewForm::from_rows(&l).unwrap();
        let (tw, e) = ordered_product(&l, &c);
        let ordered = TorusElement::monomial(e, LaurentScalar::v_pow(tw));
        prop_assert_eq!(form.ordered_monomial(&c).unwrap(), ordered);
        let prod = form.mul(&form.frame_monomial(&c).unwrap(), &form.frame_monomial(&d).unwrap()).unwrap();
        let sum: Vec<i64> = c.iter().zip(&d).map(|(a, b)| a + b).collect();
        prop_assert_eq!(prod, TorusElement::basis(sum).scale_v(bilinear(&l, &c, &d)));
    }
}
