//! Gauss-Legendre and Gauss-Kronrod quadrature for complex-valued integrands.

use num_complex::Complex64;

use crate::summation::ComplexNeumaier;

/// Integral value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One 21-point Kronrod panel on `[a, b]` with the QUADPACK error heuristic.
pub fn gk21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Estimate {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut fv = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut resabs = WGK[10] * fc.norm();
    for k in 0..10 {
        let dx = half * XGK[k];
        let (lo, hi) = (f(mid - dx), f(mid + dx));
        fv[k] = (lo, hi);
        kronrod += (lo + hi) * WGK[k];
        resabs += WGK[k] * (lo.norm() + hi.norm());
        if k % 2 == 1 {
            gauss += (lo + hi) * WG[k / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).norm();
    for k in 0..10 {
        resasc += WGK[k] * ((fv[k].0 - mean).norm() + (fv[k].1 - mean).norm());
    }
    let scale = half.abs();
    let (resabs, resasc) = (resabs * scale, resasc * scale);
    let mut error = ((kronrod - gauss) * half).norm();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Estimate {
        value: kronrod * half,
        error,
    }
}

/// Sums GK21 panels over consecutive breakpoints.
pub fn panels<F: Fn(f64) -> Complex64>(f: &F, edges: &[f64]) -> Estimate {
    let mut acc = ComplexNeumaier::new();
    let mut err = 0.0;
    for w in edges.windows(2) {
        let e = gk21(f, w[0], w[1]);
        acc.add(e.value);
        err += e.error;
    }
    Estimate {
        value: acc.value(),
        error: err,
    }
}

/// `n + 1` equally spaced breakpoints on `[a, b]`.
pub fn uniform_edges(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
}

/// Tolerances and work limit for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_panels: 4000,
        }
    }
}

/// Globally adaptive GK21 starting from the given breakpoints.
///
/// Repeatedly bisects the panel with the largest error until the summed error
/// meets `max(abs, rel * |value|)` or the panel budget is exhausted. The
/// result depends only on the inputs, never on scheduling.
pub fn adaptive<F: Fn(f64) -> Complex64>(f: &F, edges: &[f64], tol: Tolerance) -> Estimate {
    let mut parts: Vec<(f64, f64, Estimate)> = edges
        .windows(2)
        .map(|w| (w[0], w[1], gk21(f, w[0], w[1])))
        .collect();
    if parts.is_empty() {
        return Estimate::zero();
    }
    loop {
        let value = parts
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, p| acc + p.2.value);
        let error: f64 = parts.iter().map(|p| p.2.error).sum();
        if error <= tol.abs.max(tol.rel * value.norm()) || parts.len() >= tol.max_panels {
            break;
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (k, p)| if p.2.error > best.1 { (k, p.2.error) } else { best });
        let (a, b, _) = parts[worst];
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        parts[worst] = (a, m, gk21(f, a, m));
        parts.insert(worst + 1, (m, b, gk21(f, m, b)));
    }
    let mut acc = ComplexNeumaier::new();
    let mut err = 0.0;
    for p in &parts {
        acc.add(p.2.value);
        err += p.2.error;
    }
    Estimate {
        value: acc.value(),
        error: err,
    }
}

/// Adaptive integral of a real integrand.
pub fn adaptive_real<F: Fn(f64) -> f64>(f: &F, edges: &[f64], tol: Tolerance) -> (f64, f64) {
    let e = adaptive(&|x| Complex64::new(f(x), 0.0), edges, tol);
    (e.value.re, e.error)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p, d)
}

/// Gauss-Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| (mid + half * xi, half * wi))
        .collect()
}
