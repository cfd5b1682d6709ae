use pgt_core::gaussian_ring::{canonical_moduli, DivisorConvention};
use pgt_core::kloosterman::*;
use pgt_core::GaussianInt;
use proptest::prelude::*;

fn g(re: i64, im: i64) -> GaussianInt {
    GaussianInt::new(re, im)
}

// brute force over exact fractions, computed independently of this crate
const ORACLE: [((i64, i64), (i64, i64), (i64, i64), f64); 7] = [
    ((1, 0), (1, 0), (3, 0), 5.0),
    ((1, 0), (1, 0), (0, 3), 2.0),
    ((1, 1), (2, 1), (2, 1), 1.2360679774997894),
    ((1, 0), (2, 1), (3, 3), -4.000000000000001),
    ((2, 1), (1, 1), (5, 0), -1.2360679774997894),
    ((1, 0), (1, 0), (4, 2), 0.7639320225002101),
    ((1, 1), (1, 0), (7, 0), -4.53318786793305),
];

#[test]
fn frozen_brute_force_values() {
    for (n, m, c, want) in ORACLE {
        let (n, m, c) = (g(n.0, n.1), g(m.0, m.1), g(c.0, c.1));
        let naive = kloosterman_sum(n, m, c).unwrap();
        let fast = kloosterman_sum_fast(n, m, c).unwrap();
        assert!((naive.re - want).abs() < 1e-12 && naive.im.abs() < 1e-12, "{n} {m} {c}: {naive}");
        assert!((fast - naive).norm() < 1e-12);
    }
}

#[test]
fn rotation_of_the_modulus_flips_a_frequency() {
    for c in canonical_moduli(60) {
        for (n, m) in [(g(1, 0), g(1, 0)), (g(1, 1), g(2, 1))] {
            let lhs = kloosterman_sum(n, m, GaussianInt::I * c).unwrap();
            let rhs = kloosterman_sum(n, -m, c).unwrap();
            assert!((lhs - rhs).norm() < 1e-9, "{c}");
        }
    }
}

fn small() -> impl Strategy<Value = GaussianInt> {
    (-4i64..=4, -4i64..=4).prop_map(|(a, b)| g(a, b))
}

fn modulus() -> impl Strategy<Value = GaussianInt> {
    (-7i64..=7, -7i64..=7).prop_map(|(a, b)| g(a, b)).prop_filter("nonzero", |z| !z.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_real_and_sign_invariant(n in small(), m in small(), c in modulus()) {
        let s = kloosterman_sum(n, m, c).unwrap();
        prop_assert!(s.im.abs() < 1e-9);
        prop_assert!((kloosterman_sum(m, n, c).unwrap() - s).norm() < 1e-9);
        prop_assert!((kloosterman_sum(n, m, -c).unwrap() - s).norm() < 1e-9);
        prop_assert!((kloosterman_sum_fast(n, m, c).unwrap() - s).norm() < 1e-9);
    }

    #[test]
    fn weil_holds(n in small(), m in small(), c in modulus()) {
        if let Some(b) = weil_bound(n, m, c, DivisorConvention::UpToUnits).unwrap() {
            let s = kloosterman_sum_fast(n, m, c).unwrap();
            prop_assert!(s.norm() <= b * (1.0 + 1e-9));
        }
    }
}

#[test]
fn records_serialize_to_fifteen_digits() {
    let r = KloostermanRecord::compute(g(1, 0), g(1, 0), g(2, 1), DivisorConvention::UpToUnits).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"c\":\"2+i\""), "{json}");
    let zero = KloostermanRecord::compute(GaussianInt::ZERO, g(1, 0), g(3, 0), DivisorConvention::UpToUnits).unwrap();
    assert!(serde_json::to_string(&zero).unwrap().contains("\"weil_ratio\":null"));
}

#[test]
fn audit_is_ordered_and_complete() {
    let a = weil_audit(g(1, 0), g(1, 0), 100).unwrap();
    let moduli = canonical_moduli(100);
    assert_eq!(a.len(), moduli.len());
    assert!(a.iter().zip(&moduli).all(|(r, c)| r.c == *c));
}
