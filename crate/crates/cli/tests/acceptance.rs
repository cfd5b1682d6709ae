//! Acceptance criteria, one PASS/FAIL line each.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use pgt_core::bessel_transforms::{default_grid, log_space, omega0_grid, verify_bessel_moment};
use pgt_core::gaussian_ring::{canonical_moduli, factor};
use pgt_core::geodesic_oracle::{conjugacy_classes, enumerate_group, enumerate_group_brute_force, psi_lower};
use pgt_core::kloosterman::{kloosterman_sum, kloosterman_sum_fast, weil_audit};
use pgt_core::special_functions::{complex_gamma, h_model_gap, k0_bound_ratio, k0_derivative_check, WeightParams};
use pgt_core::spectral_sums::{loglog_slope, partial_summation_check, second_moment_s, synth_spectrum};
use pgt_core::trace_sums::k0_pair_integral_with;
use pgt_core::GaussianInt;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool")
        .install(f)
}

fn weil_sweep() -> Outcome {
    let start = Instant::now();
    let units = [GaussianInt::ONE, GaussianInt::new(1, 1), GaussianInt::new(2, 1)];
    let (mut worst, mut worst_imag, mut count) = (0.0f64, 0.0f64, 0usize);
    for &n in &units {
        for &m in &units {
            let records = single_threaded(|| weil_audit(n, m, 500)).map_err(|e| e.to_string())?;
            for r in records {
                count += 1;
                if let Some(q) = r.weil_ratio {
                    worst = worst.max(q);
                }
                worst_imag = worst_imag.max(r.imag.abs() / r.c.norm() as f64);
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1.0 + 1e-9 && worst_imag <= 1e-8 && elapsed <= Duration::from_secs(60),
        format!("{count} sums, max ratio {worst:.6}, max |imag|/N(c) {worst_imag:.1e}, {elapsed:.1?} on one thread"),
    )
}

fn fast_path() -> Outcome {
    let one = GaussianInt::ONE;
    let pairs = [(one, one), (GaussianInt::new(1, 1), GaussianInt::new(2, 1)), (GaussianInt::new(2, 1), GaussianInt::new(0, 3))];
    let mut worst = 0.0f64;
    let mut count = 0;
    for c in canonical_moduli(500) {
        let f = factor(c).map_err(|e| e.to_string())?;
        if f.primes.iter().map(|&(_, e)| e).sum::<u32>() < 2 {
            continue;
        }
        for &(n, m) in &pairs {
            let a = kloosterman_sum(n, m, c).map_err(|e| e.to_string())?;
            let b = kloosterman_sum_fast(n, m, c).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).norm());
            count += 1;
        }
    }
    check(worst <= 1e-9, format!("{count} composite cases, max |naive - fast| {worst:.1e}"))
}

fn omega_closed_form() -> Outcome {
    let start = Instant::now();
    let rows = omega0_grid(&default_grid()).map_err(|e| e.to_string())?;
    let worst = rows.iter().map(|r| r.relative_deviation()).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    check(
        rows.len() == 125 && worst <= 1e-6 && elapsed <= Duration::from_secs(120),
        format!("{} points, max relative deviation {worst:.1e}, {elapsed:.1?}", rows.len()),
    )
}

fn bessel_moment() -> Outcome {
    let mut worst = 0.0f64;
    for a in [1.0, 5.0] {
        for x in [10.0, 100.0] {
            for t in [5.0, 10.0] {
                let p = WeightParams::new(x, t).map_err(|e| e.to_string())?;
                worst = worst.max(verify_bessel_moment(a, &p).map_err(|e| e.to_string())?);
            }
        }
    }
    check(worst <= 1e-4, format!("8 cases, max relative deviation {worst:.1e}"))
}

fn k0_bounds() -> Outcome {
    let radii = log_space(1e-2, 1e2, 40);
    let mut worst_ratio = 0.0f64;
    let mut failures = 0;
    let mut points = 0;
    for &rho in &radii {
        for k in 0..25 {
            let theta = -PI / 2.0 + PI * k as f64 / 24.0;
            let w = Complex64::from_polar(rho, theta);
            worst_ratio = worst_ratio.max(k0_bound_ratio(w).map_err(|e| e.to_string())?);
            if !k0_derivative_check(w).map_err(|e| e.to_string())?.holds {
                failures += 1;
            }
            points += 1;
        }
    }
    check(
        worst_ratio <= 1.0 && failures == 0,
        format!("{points} points, max bound ratio {worst_ratio:.4}, derivative failures {failures}"),
    )
}

fn gamma_reflection() -> Outcome {
    let mut worst = 0.0f64;
    for r in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let a = complex_gamma(Complex64::new(1.0, r)).map_err(|e| e.to_string())?;
        let b = complex_gamma(Complex64::new(1.0, -r)).map_err(|e| e.to_string())?;
        let exact = PI * r / (PI * r).sinh();
        worst = worst.max(((a * b).norm() - exact).abs() / exact).max((a * b).im.abs() / exact);
    }
    check(worst <= 1e-9, format!("6 points, max relative deviation {worst:.1e}"))
}

fn partial_summation() -> Outcome {
    // c0 = 1000 / 20^3 puts about 10^3 parameters below T = 20
    let spec = synth_spectrum(20.0, 0.125, 1).map_err(|e| e.to_string())?;
    let d = partial_summation_check(&spec, 20.0, 1e3, 64).map_err(|e| e.to_string())?;
    check(d <= 1e-9, format!("{} eigenvalues, deviation {d:.1e}", spec.len()))
}

fn pair_envelope() -> Outcome {
    let (v, t) = (1e4, 5.0);
    let xs = [0.02, 0.1, 0.5];
    let ys = [10.0, 100.0, 1000.0];
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for &x1 in &xs {
        for &x2 in &xs {
            for &y in &ys {
                let a = k0_pair_integral_with(x1, x2, v, y, t, 1e-6).map_err(|e| e.to_string())?;
                let b = k0_pair_integral_with(x1, x2, v, y, t, 1e-11).map_err(|e| e.to_string())?;
                coarse = coarse.max(a.ratio);
                fine = fine.max(b.ratio);
            }
        }
    }
    let constant = PI / 2.0;
    let stable = coarse <= 2.0 * fine && fine <= 2.0 * coarse;
    check(
        fine <= constant && stable,
        format!("27 points, max ratio {fine:.4} (coarse {coarse:.4}) against recorded constant pi/2"),
    )
}

fn moment_s_slope() -> Outcome {
    let start = Instant::now();
    let ts = [4.0, 8.0, 16.0, 32.0];
    let y = 100.0;
    let seeds = 8;
    let mut moment = [0.0; 4];
    let mut diagonal = [0.0; 4];
    for seed in 0..seeds {
        let s = synth_spectrum(32.0, 0.05, seed).map_err(|e| e.to_string())?;
        for (k, &t) in ts.iter().enumerate() {
            let m = second_moment_s(&s, t, 10.0 * t * t, y, 16).map_err(|e| e.to_string())?;
            moment[k] += m * y / seeds as f64;
            diagonal[k] += s.count_up_to(t) as f64 * y / seeds as f64;
        }
    }
    let slope = loglog_slope(&ts, &moment);
    let diag = loglog_slope(&ts, &diagonal);
    let elapsed = start.elapsed();
    check(
        (2.0..=3.5).contains(&slope) && (diag - 3.0).abs() <= 0.5 && elapsed <= Duration::from_secs(300),
        format!("slope {slope:.3}, diagonal slope {diag:.3}, {elapsed:.1?}"),
    )
}

fn h_approximation() -> Outcome {
    let mut worst = 0.0f64;
    for x in [10.0, 1e3] {
        for t in [5.0, 50.0] {
            let p = WeightParams::new(x, t).map_err(|e| e.to_string())?;
            for k in 0..=290 {
                let r = 1.0 + 0.1 * k as f64;
                worst = worst.max(h_model_gap(r, &p).norm() / (2.0 * (-PI * r).exp()));
            }
        }
    }
    check(worst <= 1.0, format!("1164 points, max gap / 2e^(-pi r) {worst:.4}"))
}

fn geodesics() -> Outcome {
    let table = conjugacy_classes(2, 4);
    let three: Vec<f64> = table
        .classes
        .iter()
        .filter(|c| c.trace == GaussianInt::new(3, 0))
        .map(|c| c.norm)
        .collect();
    let norm_ok = !three.is_empty() && three.iter().all(|n| (n - 6.8541).abs() <= 1e-4);
    let psi: Vec<f64> = [2.0, 5.0, 10.0, 20.0, 50.0].iter().map(|&x| psi_lower(x, 2, 4)).collect();
    let monotone = psi.windows(2).all(|w| w[1] >= w[0]);
    let counts: Vec<usize> = [2, 3, 4, 6].iter().map(|&h| conjugacy_classes(2, h).classes.len()).collect();
    let shrinking = counts.windows(2).all(|w| w[1] <= w[0]);
    let brute = enumerate_group(2) == enumerate_group_brute_force(2);
    check(
        norm_ok && monotone && shrinking && brute,
        format!(
            "trace-3 norm {:.6}, psi monotone {monotone}, class counts {counts:?}, enumeration matches {brute}",
            three.first().copied().unwrap_or(f64::NAN)
        ),
    )
}

const SUBCOMMANDS: &[&[&str]] = &[
    &["kloosterman", "--n", "1+i", "--m", "2+i", "--c", "7"],
    &["weil-scan", "--n", "1", "--m", "1+i", "--norm-bound", "60"],
    &["omega-check", "--grid", "quick"],
    &["bessel-moment-check", "--a", "1", "--x", "10", "--t", "5"],
    &["aggregate", "--v", "100", "--y", "10", "--t", "5"],
    &["moment-ddagger", "--v", "100", "--y", "10", "--t", "5", "--nodes", "16"],
    &["k0-pair", "--x1", "0.1", "--x2", "0.3", "--v", "1e4", "--y", "100", "--t", "5"],
    &["ssum", "--t", "10", "--x", "50", "--seed", "3"],
    &["explicit-e", "--t", "10", "--x", "1000", "--seed", "3"],
    &["moment-s", "--t", "8", "--v", "640", "--y", "100", "--seed", "3", "--closed"],
    &["moment-e", "--v", "1000", "--y", "100", "--c0", "0.01", "--seed", "3", "--nodes", "8"],
    &["spectrum-gen", "--t", "10", "--seed", "3"],
    &["geodesics", "--h-rep", "2", "--h-orbit", "3"],
    &["psi-lower", "--x", "5,20", "--h-rep", "2", "--h-orbit", "3"],
];

fn determinism() -> Outcome {
    let run = |args: &[&str], threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_pgt"))
            .args(args)
            .args(["--threads", threads])
            .env_remove("PGT_CACHE")
            .output()
    };
    let mut differing = Vec::new();
    for args in SUBCOMMANDS {
        let a = run(args, "1").map_err(|e| e.to_string())?;
        let b = run(args, "4").map_err(|e| e.to_string())?;
        if !a.status.success() || a.stdout != b.stdout || a.status.code() != b.status.code() {
            differing.push(args[0]);
        }
    }
    check(
        differing.is_empty(),
        format!("{} subcommands, mismatched or failed: {differing:?}", SUBCOMMANDS.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Weil bound sweep", weil_sweep),
        ("Kloosterman fast path", fast_path),
        ("omega_0 closed form", omega_closed_form),
        ("Bessel-moment identity", bessel_moment),
        ("K_0 bounds", k0_bounds),
        ("Gamma reflection", gamma_reflection),
        ("partial summation", partial_summation),
        ("K_0 pair envelope", pair_envelope),
        ("second moment of S exponent", moment_s_slope),
        ("h approximation", h_approximation),
        ("geodesic oracle", geodesics),
        ("thread determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
