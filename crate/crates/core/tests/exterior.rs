use odesurf::exterior::{gram_inner_pair, gram_inner_triple, wedge2_norm, wedge3_norm, ScaledVector};
use proptest::prelude::*;

fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

fn sv(x: &[f64]) -> ScaledVector {
    ScaledVector::from_values(x)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

proptest! {
    #[test]
    fn pair_is_antisymmetric(u in vector(5), v in vector(5), w in vector(5), z in vector(5)) {
        let a = gram_inner_pair(&sv(&u), &sv(&v), &sv(&w), &sv(&z)).unwrap().to_f64();
        let b = gram_inner_pair(&sv(&v), &sv(&u), &sv(&w), &sv(&z)).unwrap().to_f64();
        prop_assert!((a + b).abs() <= 1e-14 * (1.0 + a.abs()));
    }

    #[test]
    fn triple_is_antisymmetric(u in vector(6), v in vector(6), w in vector(6), x in vector(6)) {
        let (u, v, w, x) = (sv(&u), sv(&v), sv(&w), sv(&x));
        let a = gram_inner_triple([&u, &v, &w], [&x, &v, &w]).unwrap().to_f64();
        let b = gram_inner_triple([&w, &v, &u], [&x, &v, &w]).unwrap().to_f64();
        prop_assert!((a + b).abs() <= 1e-14 * (1.0 + a.abs()));
    }

    #[test]
    fn cauchy_schwarz(u in vector(4), v in vector(4), w in vector(4), z in vector(4)) {
        let (u, v, w, z) = (sv(&u), sv(&v), sv(&w), sv(&z));
        let p = gram_inner_pair(&u, &v, &w, &z).unwrap().to_f64();
        let a = wedge2_norm(&u, &v).unwrap().to_f64();
        let b = wedge2_norm(&w, &z).unwrap().to_f64();
        prop_assert!(p * p <= a * a * b * b * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn norms_are_scale_covariant(u in vector(4), v in vector(4), w in vector(4), c in -600.0f64..600.0) {
        let (u, v, w) = (sv(&u), sv(&v), sv(&w));
        let n = wedge3_norm(&u, &v, &w).unwrap();
        let big = ScaledVector::new(u.mantissa().to_vec(), u.log_scale() + c);
        let m = wedge3_norm(&big, &v, &w).unwrap();
        // a change of representation leaves the norm alone
        let same = wedge3_norm(&u.rescaled(3.0), &v, &w).unwrap();
        prop_assert!((same.ln_abs() - n.ln_abs()).abs() <= 1e-12 || n.is_zero());
        prop_assume!(!n.is_zero());
        prop_assert!((m.ln_abs() - n.ln_abs() - c).abs() <= 1e-9 * (1.0 + c.abs()));
    }

    // nearly dependent triples: the Gram determinant cancels to about the
    // square of the condition number and must still match the direct minor
    #[test]
    fn nearly_dependent_triple_in_three_dimensions(
        u in vector(3), v in vector(3), d in vector(3), eps in 1e-6f64..1e-3,
    ) {
        let w: Vec<f64> = (0..3).map(|i| 0.3 * u[i] - 0.7 * v[i] + eps * d[i]).collect();
        let direct = det3([[u[0], u[1], u[2]], [v[0], v[1], v[2]], [w[0], w[1], w[2]]]).abs();
        prop_assume!(direct > 1e-12);
        let gram = wedge3_norm(&sv(&u), &sv(&v), &sv(&w)).unwrap().to_f64();
        prop_assert!((gram - direct).abs() <= 1e-9 * direct, "{gram} vs {direct}");
    }
}
