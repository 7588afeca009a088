use num_bigint::BigInt;
use preper_algebra::roots::roots;
use preper_algebra::{
    implicit_derivative, rat, resultant, BiPoly, Complex64, CycloScalar, ExactMatrix, Field, Poly,
    Rational, Ring,
};
use proptest::prelude::*;

fn qpoly(c: &[i64]) -> Poly<Rational> {
    Poly::from_ints(c)
}

fn int_poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 2..6)
        .prop_filter("nonconstant", |v| v.iter().skip(1).any(|&c| c != 0))
}

fn cyclo() -> impl Strategy<Value = CycloScalar> {
    (
        prop::sample::select(vec![1u32, 3, 4, 5, 8, 9]),
        prop::collection::vec(-5i64..=5, 1..6),
    )
        .prop_map(|(n, c)| CycloScalar::new(n, c.into_iter().map(|x| rat(x, 1)).collect()))
}

proptest! {
    #[test]
    fn resultant_is_multiplicative(a in int_poly(), b in int_poly(), c in int_poly()) {
        let (p, r, q) = (qpoly(&a), qpoly(&b), qpoly(&c));
        let lhs = resultant(&Ring::mul(&p, &r), &q).unwrap();
        let rhs = resultant(&p, &q).unwrap().mul(&resultant(&r, &q).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_swap_sign(a in int_poly(), b in int_poly()) {
        let (p, q) = (qpoly(&a), qpoly(&b));
        let sign = if p.degree().unwrap() * q.degree().unwrap() % 2 == 1 { -1 } else { 1 };
        prop_assert_eq!(
            resultant(&p, &q).unwrap(),
            resultant(&q, &p).unwrap().mul(&rat(sign, 1))
        );
    }

    #[test]
    fn cyclotomic_field_axioms(x in cyclo(), y in cyclo(), z in cyclo()) {
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.add(&y).sub(&y), x.clone());
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inv()).is_one());
        }
        let err = (x.mul(&y).to_complex() - x.to_complex() * y.to_complex()).norm();
        prop_assert!(err < 1e-9);
    }

    #[test]
    fn roots_of_products_of_linear_factors(rs in prop::collection::vec(-9i64..=9, 1..7)) {
        let mut p = qpoly(&[1]);
        for &r in &rs {
            p = Ring::mul(&p, &qpoly(&[-r, 1]));
        }
        let rep = roots(&p, 1e-8).unwrap();
        let total: usize = rep.roots.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(total, rs.len());
        for &r in &rs {
            prop_assert!(rep.roots.iter().any(|e| (e.value - Complex64::new(r as f64, 0.0)).norm() <= e.radius.max(1e-12)));
        }
    }

    #[test]
    fn squarefree_parts_multiply_back(a in int_poly(), b in int_poly()) {
        let p = Ring::mul(&qpoly(&a).pow(2), &qpoly(&b));
        let mut back = Poly::one();
        for (g, k) in p.squarefree_decomposition() {
            back = Ring::mul(&back, &g.pow(k as u64));
        }
        prop_assert_eq!(back, p.monic());
    }
}

#[test]
fn rank_agrees_with_svd_on_random_integer_matrices() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..50 {
        let rows = rng.random_range(2..8);
        let cols = rng.random_range(2..8);
        // Low-rank products make rank deficiency common.
        let inner = rng.random_range(1..=rows.min(cols));
        let a: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..inner).map(|_| rng.random_range(-4i64..=4)).collect())
            .collect();
        let b: Vec<Vec<i64>> = (0..inner)
            .map(|_| (0..cols).map(|_| rng.random_range(-4i64..=4)).collect())
            .collect();
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| (0..inner).map(|k| a[i][k] * b[k][j]).sum())
                    .collect()
            })
            .collect();
        let exact = ExactMatrix::from_rows(
            m.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(BigInt::from(x)))
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        let dm = nalgebra::DMatrix::from_fn(rows, cols, |i, j| m[i][j] as f64);
        let svd_rank = dm.rank(1e-9 * dm.norm().max(1.0));
        assert_eq!(exact.rank_exact(), svd_rank, "trial {trial}: {m:?}");
    }
}

#[test]
fn implicit_derivative_matches_finite_differences() {
    // Period-two curve of z^2 + c: z^2 + z + c + 1 = 0.
    let p = BiPoly::from_terms(&[
        (rat(1, 1), 0, 2),
        (rat(1, 1), 0, 1),
        (rat(1, 1), 1, 0),
        (rat(1, 1), 0, 0),
    ]);
    let c0 = rat(-21, 16);
    let z0 = rat(1, 4);
    assert!(p.eval_bi(&c0, &z0).is_zero());
    let exact = implicit_derivative(&p, &c0, &z0, 0.0).unwrap();
    // Track the root branch through z = (-1 + sqrt(-3 - 4c)) / 2.
    let branch = |c: f64| (-1.0 + (-3.0 - 4.0 * c).sqrt()) / 2.0;
    let h = 1e-6;
    let c = -21.0 / 16.0;
    let fd = (branch(c + h) - branch(c - h)) / (2.0 * h);
    assert!((fd - exact.to_complex().re).abs() < 1e-5);
}
