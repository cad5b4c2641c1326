use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use pa_core::exactnum::{
    eigenvector, factor, is_perron, perron_root_of_matrix, Field, FieldScalar, IntPolynomial, NumberField,
    QPolynomial, Side,
};
use proptest::prelude::*;

fn golden() -> Field {
    NumberField::new(perron_root_of_matrix(&[vec![0, 1], vec![1, 1]]).unwrap())
}

fn quartic() -> Field {
    // λ ≈ 2.081, root of x^4 - x^3 - 2x^2 - x + 1.
    let m = pa_core::oddblock::from_phi(&[2, 1, 3, 5, 6, 4, 0]).unwrap();
    NumberField::new(perron_root_of_matrix(m.entries()).unwrap())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn elem(k: &Field, c: &[(i64, i64)]) -> FieldScalar {
    FieldScalar::from_rep(k, QPolynomial::new(c.iter().map(|&(n, d)| rat(n, d)).collect()))
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..=20, 1i64..=9), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_identities(a in coeffs(), b in coeffs(), c in coeffs(), which in any::<bool>()) {
        let k = if which { golden() } else { quartic() };
        let (a, b, c) = (elem(&k, &a), elem(&k, &b), elem(&k, &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
            prop_assert!((&b * &b.inverse()).is_one());
        }
    }

    #[test]
    fn comparison_is_a_total_order(a in coeffs(), b in coeffs(), c in coeffs()) {
        let k = quartic();
        let mut v = [elem(&k, &a), elem(&k, &b), elem(&k, &c)];
        let ab = v[0].cmp(&v[1]);
        prop_assert_eq!(ab.reverse(), v[1].cmp(&v[0]));
        prop_assert_eq!(ab == Ordering::Equal, v[0] == v[1]);
        v.sort_by(|x, y| x.cmp(y));
        prop_assert!(v[0].cmp(&v[1]) != Ordering::Greater);
        prop_assert!(v[1].cmp(&v[2]) != Ordering::Greater);
        prop_assert!(v[0].cmp(&v[2]) != Ordering::Greater);
        for x in &v {
            let f = x.to_f64();
            if f.abs() > 1e-6 {
                prop_assert_eq!(x.sign(), if f > 0.0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn sign_at_matches_evaluation(p in prop::collection::vec(-9i64..=9, 1..7), n in -50i64..=50, d in 1i64..=40) {
        let p = IntPolynomial::from_i64s(&p);
        let x = rat(n, d);
        let v = p.eval(&x);
        let expected = if v > BigRational::from_integer(0.into()) { 1 } else if v < BigRational::from_integer(0.into()) { -1 } else { 0 };
        prop_assert_eq!(p.sign_at(&x), expected);
    }

    #[test]
    fn factors_multiply_back(parts in prop::collection::vec(prop::collection::vec(-4i64..=4, 2..4), 1..4), content in 1i64..=3) {
        let mut p = IntPolynomial::from_i64s(&[content]);
        for q in &parts {
            let q = IntPolynomial::from_i64s(q);
            prop_assume!(!q.is_zero());
            p = &p * &q;
        }
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let mut back = IntPolynomial::one();
        for (f, m) in factor(&p) {
            for _ in 0..m {
                back = &back * &f;
            }
        }
        let prim = p.primitive_part();
        prop_assert!(back == prim || back == -&prim, "{} vs {}", back, prim);
    }

    #[test]
    fn perron_data_of_positive_matrices(m in (2usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(1i64..=3, n), n))) {
        let lambda = perron_root_of_matrix(&m).unwrap();
        prop_assert_eq!(lambda.sturm_count(), 1);
        let fine = lambda.refine(&rat(1, 1_000_000_000_000_000));
        prop_assert_eq!(fine.sturm_count(), 1);
        prop_assert!(fine.lo() >= lambda.lo() && fine.hi() <= lambda.hi());
        prop_assert!(is_perron(&lambda).unwrap());

        let k = NumberField::new(lambda);
        let l = FieldScalar::generator(&k);
        let e = eigenvector(&m, &k, Side::Right).unwrap();
        let total = e.iter().fold(FieldScalar::zero(&k), |s, x| &s + x);
        prop_assert!(total.is_one());
        for (i, row) in m.iter().enumerate() {
            let me = row.iter().zip(&e).fold(FieldScalar::zero(&k), |s, (a, x)| &s + &x.scale_int(*a));
            prop_assert_eq!(me, &l * &e[i]);
        }

        // Independent power iteration in doubles.
        let n = m.len();
        let mut v = vec![1.0 / n as f64; n];
        let mut lf = 0.0;
        for _ in 0..2000 {
            let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] as f64 * v[j]).sum()).collect();
            let s: f64 = w.iter().sum();
            lf = s / v.iter().sum::<f64>();
            v = w.iter().map(|x| x / s).collect();
        }
        prop_assert!((l.to_f64() - lf).abs() < 1e-9);
        for (x, y) in e.iter().zip(&v) {
            prop_assert!((x.to_f64() - y).abs() < 1e-9);
        }
    }
}

#[test]
fn integer_sign_at_handles_roots() {
    let p = IntPolynomial::from_i64s(&[-1, -1, 1]);
    assert_eq!(p.sign_at(&rat(0, 1)), -1);
    assert_eq!(p.sign_at(&rat(2, 1)), 1);
    let q = IntPolynomial::from_i64s(&[-2, 3]);
    assert_eq!(q.sign_at(&rat(2, 3)), 0);
    assert_eq!(q.sign_at(&rat(-2, 3)), -1);
    let big = BigInt::from(10).pow(30);
    assert_eq!(q.sign_at(&BigRational::new(big.clone() * 2 + 1, big * 3)), 1);
}
