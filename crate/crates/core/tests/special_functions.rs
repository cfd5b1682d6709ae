use num_complex::Complex64;
use pgt_core::special_functions::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

// mpmath at 30 digits
#[test]
fn gamma_against_mpmath() {
    let cases = [
        (c(0.5, 2.0), c(0.0898551767064316358142478129454, -0.0604937602928875684797676794408)),
        (c(-2.5, 0.3), c(-0.613822997437741490450584546901, -0.211232614937041776613926880368)),
        (c(10.0, -7.0), c(-27545.5815779388859115424042002, 19000.3111504226741560560929483)),
        (c(0.1, 0.0), c(9.51350769866873128580797989582, 0.0)),
    ];
    for (z, want) in cases {
        assert!(rel(complex_gamma(z).unwrap(), want) < 1e-13, "{z}");
    }
    let lg = ln_gamma(c(20.0, 30.0)).unwrap();
    assert!((lg - c(21.3450744938634448962777575028, 96.7143476895361801388908236261)).norm() < 1e-12);
}

#[test]
fn k0_against_mpmath() {
    let cases = [
        (c(1.0, 1.0), c(0.0801977269465178187269687365643, -0.35727745928533025060594569325)),
        (c(0.01, 0.0), c(4.72124473016109494432463037498, 0.0)),
        (c(30.0, 40.0), c(-1.53855349170045787211594510159e-14, -6.12793515972251177617479104904e-15)),
        (c(0.0, 100.0), c(0.121335083699666555794189703707, -0.0313937002457463478275164120284)),
        (c(0.0, 0.05), c(3.10909444966840351777180107498, -1.56981473247807636904766383399)),
        (c(2.0, -3.0), c(-0.0829685265676255149051795352059, -0.0279496036351834236297233063323)),
        (c(60.0, 0.0), c(1.41389784055910780909564629824e-27, 0.0)),
    ];
    for (w, want) in cases {
        assert!(rel(k0_complex(w).unwrap(), want) < 1e-10, "{w}");
    }
}

#[test]
fn j_star_against_mpmath() {
    let cases = [
        (c(0.0, 1.5), c(2.0, 1.0), c(1.525009055836578937126317, 0.4784181760881518013331859)),
        (c(0.0, 7.0), c(0.5, -0.3), c(4079.751117457694789073309, -8107.183858277048249400867)),
        (c(1.0, 0.0), c(3.0, 0.0), c(0.2260393056839576392836764, 0.0)),
    ];
    for (nu, z, want) in cases {
        assert!(rel(j_star(nu, z).unwrap(), want) < 1e-11, "{nu} {z}");
    }
}

#[test]
fn gamma_poles_are_errors() {
    assert!(matches!(complex_gamma(c(0.0, 0.0)), Err(SpecialError::Pole(_))));
    assert!(matches!(complex_gamma(c(-3.0, 0.0)), Err(SpecialError::Pole(_))));
    assert!(k0_complex(c(-1.0, 0.0)).is_err());
    assert!(k0_complex(c(0.0, 0.0)).is_err());
}

#[test]
fn h_limits() {
    let p = WeightParams::new(100.0, 5.0).unwrap();
    // h(0) = beta / pi
    let h0 = h_weight_real(0.0, &p);
    assert!((h0 - p.beta() / PI).norm() < 1e-14);
    assert!((h_weight_real(0.01, &p) - h0).norm() < 1e-2 * h0.norm());
    assert!(WeightParams::new(1.0, 5.0).is_err());
    assert!(WeightParams::new(10.0, 0.5).is_err());
}

proptest! {
    #[test]
    fn gamma_recurrence(re in -8.0f64..8.0, im in 0.05f64..20.0) {
        let z = c(re, im);
        let lhs = complex_gamma(z + 1.0).unwrap();
        let rhs = z * complex_gamma(z).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-11);
    }

    #[test]
    fn gamma_conjugate_symmetry(re in -5.0f64..10.0, im in 0.05f64..30.0) {
        let z = c(re, im);
        prop_assert!(rel(complex_gamma(z.conj()).unwrap(), complex_gamma(z).unwrap().conj()) < 1e-13);
    }

    #[test]
    fn phase_matches_ln_gamma(r in -60.0f64..60.0) {
        let lg = ln_gamma(c(1.0, r)).unwrap();
        prop_assert!((gamma_phase(r) - lg.im).abs() < 1e-10);
    }

    #[test]
    fn k0_conjugate_symmetry_and_bound(re in 0.0f64..100.0, im in -100.0f64..100.0) {
        let w = c(re, im);
        prop_assume!(w.norm() >= 1e-2);
        prop_assert!(rel(k0_complex(w.conj()).unwrap(), k0_complex(w).unwrap().conj()) < 1e-12);
        prop_assert!(k0_bound_ratio(w).unwrap() <= 1.0);
    }

    #[test]
    fn h_is_even_and_tracks_model(r in 1.0f64..30.0, lx in 0.5f64..10.0, t in 1.0f64..60.0) {
        let p = WeightParams::new(lx.exp(), t).unwrap();
        prop_assert!((h_weight_real(r, &p) - h_weight_real(-r, &p)).norm() <= 1e-12 * h_weight_real(r, &p).norm());
        let gap = h_model_gap(r, &p);
        prop_assert!(gap.norm() <= 2.0 * (-PI * r).exp());
        let direct = h_weight_real(r, &p) - h_model(r, &p);
        let floor = 1e-14 * h_model(r, &p).norm();
        prop_assert!((direct - gap).norm() <= floor + 1e-12 * gap.norm());
    }

    #[test]
    fn j_star_recurrence(nr in 0.0f64..3.0, ni in -5.0f64..5.0, zr in -4.0f64..4.0, zi in -4.0f64..4.0) {
        // J*_{nu-1} + J*_{nu+1} (z/2)^2 = nu J*_nu
        let (nu, z) = (c(nr + 1.0, ni), c(zr, zi));
        let lhs = j_star(nu - 1.0, z).unwrap() + j_star(nu + 1.0, z).unwrap() * (z * z / 4.0);
        let rhs = nu * j_star(nu, z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm() + lhs.norm()));
    }
}
