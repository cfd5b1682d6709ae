use num_complex::Complex64;
use pgt_core::special_functions::WeightParams;
use pgt_core::spectral_sums::*;
use proptest::prelude::*;
use std::io::Write as _;

// largest observed |E(T1) - E(T2)| min(T1, T2) / (X^2 log X) was 0.0047
const EXPLICIT_CONSISTENCY: f64 = 0.02;

fn list(v: &[f64]) -> EigenvalueList {
    EigenvalueList::new(v.to_vec()).unwrap()
}

#[test]
fn load_from_file() {
    let mut f = tempfile_in_target("spec_ok.txt");
    f.1.write_all(b"# r_j\n1.0\n2.5\n6.62\n").unwrap();
    let s = load_spectrum(&f.0).unwrap();
    assert_eq!(s.values(), &[1.0, 2.5, 6.62]);
    assert!(matches!(s.source, SpectrumSource::File(_)));
    let mut g = tempfile_in_target("spec_bad.txt");
    g.1.write_all(b"1.0\n-1.0\n").unwrap();
    assert!(matches!(load_spectrum(&g.0), Err(SpectrumError::NonPositive { line: 2, .. })));
    assert!(matches!(
        load_spectrum(std::path::Path::new("/nonexistent/spectrum.txt")),
        Err(SpectrumError::Io(_))
    ));
}

fn tempfile_in_target(name: &str) -> (std::path::PathBuf, std::fs::File) {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    let f = std::fs::File::create(&path).unwrap();
    (path, f)
}

#[test]
fn synthetic_counts() {
    for seed in 0..8 {
        let s = synth_spectrum(10.0, 0.1, seed).unwrap();
        assert!((s.len() as f64 - 100.0).abs() <= 4.0 * (0.1f64 * 1e3).sqrt(), "seed {seed}");
        assert_eq!(s, synth_spectrum(10.0, 0.1, seed).unwrap());
        assert_eq!(s.source, SpectrumSource::Synthetic { seed, c0: 0.1 });
    }
    assert_ne!(synth_spectrum(10.0, 0.1, 0).unwrap(), synth_spectrum(10.0, 0.1, 1).unwrap());
    let s = synth_spectrum(200.0, 0.05, 7).unwrap();
    let mut t = 5.0;
    while t <= 200.0 {
        assert!(s.count_up_to(t) as f64 <= 2.0 * 0.05 * t.powi(3), "t = {t}");
        t += 0.5;
    }
    // observed unit-interval constant for this list, about 3 c0 with fluctuations at small t
    let k = s.unit_interval_constant();
    assert!(k > 0.0 && k <= 1.0, "{k}");
    assert!(synth_spectrum(0.5, 0.1, 0).is_err());
    assert!(synth_spectrum(10.0, 0.0, 0).is_err());
}

#[test]
fn sharp_sum_steps_at_eigenvalues() {
    let s = synth_spectrum(15.0, 0.1, 2).unwrap();
    let x = 37.0;
    for w in s.values().windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-9 {
            continue;
        }
        let at = sharp_sum(&s, a, x);
        let mid = sharp_sum(&s, 0.5 * (a + b), x);
        let before = sharp_sum(&s, b - 1e-12 * b, x);
        assert_eq!(at, mid);
        assert_eq!(at, before);
        let jump = sharp_sum(&s, b, x) - at;
        assert!((jump - Complex64::from_polar(1.0, b * x.ln())).norm() < 1e-12);
    }
}

#[test]
fn smooth_and_h_weighted_sums() {
    let s = synth_spectrum(60.0, 0.05, 4).unwrap();
    for x in [10.0, 1e3] {
        for t in [5.0, 50.0] {
            let p = WeightParams::new(x, t).unwrap();
            let d = (smooth_sum(&s, t, x) - h_weighted_sum(&s, &p)).norm();
            assert!(d <= h_approximation_budget(&s) + 1e-12 * s.len() as f64, "{x} {t}");
        }
    }
    let p = WeightParams::new(10.0, 5.0).unwrap();
    assert_eq!(h_weighted_sum(&EigenvalueList::empty(), &p), Complex64::new(0.0, 0.0));
    let near = h_weighted_sum(&list(&[0.01]), &p);
    let lim = pgt_core::special_functions::h_weight(Complex64::new(0.0, 0.0), &p);
    assert!((near - lim).norm() < 0.05 * lim.norm());
    let full = smooth_sum_report(&s, 1.0, 10.0);
    assert!(full.complete);
    let short = smooth_sum_report(&s, 50.0, 10.0);
    assert!(!short.complete && short.residual_bound > 0.0);
}

#[test]
fn partial_summation_on_large_list() {
    let s = synth_spectrum(25.0, 0.064, 11).unwrap();
    assert!(s.count_up_to(20.0) > 400);
    let d = partial_summation_check(&s, 20.0, 1e3, 64).unwrap();
    assert!(d <= 1e-9, "{d}");
    let p = partial_summation(&s, 20.0, 1e3, 64).unwrap();
    assert!(p.numeric_deviation <= 1e-9, "{}", p.numeric_deviation);
    assert!(partial_summation_check(&s, 20.0, 1e3, 32).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_summation_identity(mut v in prop::collection::vec(0.05f64..30.0, 0..60), t in 1.0f64..30.0, x in 1.5f64..1e4) {
        v.sort_by(f64::total_cmp);
        let s = EigenvalueList::new(v).unwrap();
        prop_assert!(partial_summation_check(&s, t, x, 64).unwrap() <= 1e-9);
    }

    #[test]
    fn sharp_sum_bounded_by_count(seed in 0u64..1000, t in 1.0f64..20.0, x in 1.5f64..1e6) {
        let s = synth_spectrum(20.0, 0.1, seed).unwrap();
        prop_assert!(sharp_sum(&s, t, x).norm() <= s.count_up_to(t) as f64 + 1e-12);
    }
}

#[test]
fn moment_quadrature_matches_closed_form() {
    let s = synth_spectrum(20.0, 0.05, 3).unwrap();
    for (t, v, y) in [(8.0, 640.0, 100.0), (16.0, 2560.0, 100.0), (16.0, 2560.0, 2560.0)] {
        let q = second_moment_s(&s, t, v, y, 16).unwrap();
        let c = second_moment_s_closed(&s, t, v, y).unwrap();
        assert!((q - c).abs() <= 1e-6 * c, "{t} {v} {y}: {q} {c}");
    }
    assert!(second_moment_s(&s, 30.0, 400.0, 10.0, 16).is_err());
    assert!(second_moment_s(&s, 3.0, 100.0, 200.0, 16).is_err());
}

#[test]
fn moment_s_exponent_in_t() {
    let ts = [4.0, 8.0, 16.0, 32.0];
    let y = 100.0;
    let seeds = 8;
    let mut moment = [0.0; 4];
    let mut diagonal = [0.0; 4];
    for seed in 0..seeds {
        let s = synth_spectrum(32.0, 0.05, seed).unwrap();
        for (k, &t) in ts.iter().enumerate() {
            let v = 10.0 * t * t;
            moment[k] += second_moment_s(&s, t, v, y, 16).unwrap() * y / seeds as f64;
            diagonal[k] += s.count_up_to(t) as f64 * y / seeds as f64;
        }
    }
    let slope = loglog_slope(&ts, &moment);
    let diag = loglog_slope(&ts, &diagonal);
    assert!((2.0..=3.5).contains(&slope), "{slope}");
    assert!((diag - 3.0).abs() <= 0.5, "{diag}");
}

#[test]
fn moment_e_exponent_in_v() {
    let vs = [1e3, 1e4, 1e5];
    let seeds = 8;
    let mut avg = [0.0; 3];
    for seed in 0..seeds {
        let s = synth_spectrum(400.0, 1e-3, seed).unwrap();
        for (k, &v) in vs.iter().enumerate() {
            avg[k] += second_moment_e(&s, None, v, v, 8).unwrap() / seeds as f64;
        }
    }
    let slope = loglog_slope(&vs, &avg);
    assert!((2.5..=3.6).contains(&slope), "{slope}");
}

#[test]
fn moment_e_node_doubling() {
    let s = synth_spectrum(100.0, 0.01, 5).unwrap();
    let a = second_moment_e(&s, None, 1e4, 1e3, 8).unwrap();
    let b = second_moment_e(&s, None, 1e4, 1e3, 16).unwrap();
    assert!((a - b).abs() <= 1e-4 * b);
    assert_eq!(second_moment_e(&EigenvalueList::empty(), None, 1e4, 1e3, 8).unwrap(), 0.0);
    assert!((balanced_t(1e4, 1e3) - 1e4f64.powf(1.0 / 6.0) * 10.0).abs() < 1e-9);
}

#[test]
fn explicit_formula_consistency() {
    for seed in 0..4 {
        let s = synth_spectrum(400.0, 0.1, seed).unwrap();
        for x in [1e3f64, 1e4, 1e5] {
            let r = x.sqrt();
            for (a, b) in [(r / 8.0, r / 4.0), (r / 4.0, r / 2.0), (2.0, r / 2.0)] {
                let d = (explicit_e(&s, a, x).unwrap() - explicit_e(&s, b, x).unwrap()).abs();
                assert!(d <= EXPLICIT_CONSISTENCY * x * x * x.ln() / a, "{seed} {x} {a} {b}");
            }
        }
    }
}
