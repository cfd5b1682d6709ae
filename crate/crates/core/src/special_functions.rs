//! Gamma, J-Bessel of complex order, `K_0`, and the spectral test function `h`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::{adaptive, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("gamma has a pole at {0}")]
    Pole(Complex64),
    #[error("{0}")]
    OutOfDomain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Parameters of the test function `h(r) = sinh((pi + 2 i alpha) r) / sinh(pi r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub x: f64,
    pub t: f64,
    /// `2 alpha = log X + i / T`.
    pub alpha: Complex64,
    /// `M = exp(-i (pi/2 - 1/(2T)))`.
    pub m: Complex64,
}

impl WeightParams {
    pub fn new(x: f64, t: f64) -> Result<Self, SpecialError> {
        if !(x.is_finite() && x > 1.0) {
            return Err(SpecialError::InvalidParameter(format!("X must exceed 1, got {x}")));
        }
        if !(t.is_finite() && t >= 1.0) {
            return Err(SpecialError::InvalidParameter(format!("T must be at least 1, got {t}")));
        }
        Ok(Self::unchecked(x, t))
    }

    /// Same construction without the `X > 1` window, for identities that hold at any `X > 0`.
    pub fn unchecked(x: f64, t: f64) -> Self {
        let alpha = Complex64::new(x.ln(), 1.0 / t) * 0.5;
        let m = (-I * (PI / 2.0 - 1.0 / (2.0 * t))).exp();
        Self { x, t, alpha, m }
    }

    /// `beta = pi + 2 i alpha = (pi - 1/T) + i log X`.
    pub fn beta(&self) -> Complex64 {
        c(PI) + 2.0 * I * self.alpha
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn pole_check(z: Complex64) -> Result<(), SpecialError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        Err(SpecialError::Pole(z))
    } else {
        Ok(())
    }
}

/// `Gamma(z)` by the Lanczos approximation, reflected for `Re z < 1/2`.
pub fn complex_gamma(z: Complex64) -> Result<Complex64, SpecialError> {
    pole_check(z)?;
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return Ok(c(PI) / (s * complex_gamma(c(1.0) - z)?));
    }
    let zm = z - 1.0;
    let mut a = c(LANCZOS[0]);
    for (k, &coef) in LANCZOS.iter().enumerate().skip(1) {
        a += coef / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    // log form keeps t^(z-1/2) e^(-t) finite for large |Im z|
    let log_val = 0.5 * f64::ln(TAU) + (zm + 0.5) * t.ln() - t;
    Ok(log_val.exp() * a)
}

const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `log Gamma(z)`, continuous on `Re z >= 1/2` (Stirling series after upward shift).
///
/// For `Re z < 1/2` the reflection formula is applied with principal logarithms.
pub fn ln_gamma(z: Complex64) -> Result<Complex64, SpecialError> {
    pole_check(z)?;
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return Ok(c(f64::ln(PI)) - s.ln() - ln_gamma(c(1.0) - z)?);
    }
    let shift = (15.0 - z.re).ceil().max(0.0) as usize;
    let mut correction = c(0.0);
    for k in 0..shift {
        correction += (z + k as f64).ln();
    }
    let w = z + shift as f64;
    let w2 = w * w;
    let mut series = c(0.0);
    let mut wp = w;
    for &b in &STIRLING {
        series += b / wp;
        wp *= w2;
    }
    Ok((w - 0.5) * w.ln() - w + 0.5 * f64::ln(TAU) + series - correction)
}

/// `Im log Gamma(1 + i r)`, continuous in `r`.
pub fn gamma_phase(r: f64) -> f64 {
    ln_gamma(Complex64::new(1.0, r)).map(|v| v.im).unwrap_or(0.0)
}

/// Controls for the J-Bessel power series.
#[derive(Debug, Clone, Copy)]
pub struct SeriesOptions {
    pub z_max: f64,
    pub max_terms: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            z_max: 30.0,
            max_terms: 400,
        }
    }
}

/// `sum_k (-z^2/4)^k / (k! (1 + nu)_k)`, i.e. `Gamma(1 + nu) J*_nu(z)`.
pub fn j_series_normalized(nu: Complex64, z: Complex64, opts: SeriesOptions) -> Result<Complex64, SpecialError> {
    if z.norm() > opts.z_max {
        return Err(SpecialError::OutOfDomain(format!(
            "|z| = {} exceeds the series limit {}",
            z.norm(),
            opts.z_max
        )));
    }
    let q = -z * z / 4.0;
    let mut term = c(1.0);
    let mut sum = c(1.0);
    let hump = (z.norm() / 2.0).ceil() as usize;
    for k in 1..opts.max_terms {
        let denom = (k as f64) * (nu + k as f64);
        if denom.norm() == 0.0 {
            return Err(SpecialError::Pole(nu));
        }
        term = term * q / denom;
        sum += term;
        if k > hump && term.norm() < 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    Ok(sum)
}

/// `J*_nu(z) = J_nu(z) (z/2)^(-nu)`, entire in `z`.
pub fn j_star(nu: Complex64, z: Complex64) -> Result<Complex64, SpecialError> {
    j_star_with(nu, z, SeriesOptions::default())
}

pub fn j_star_with(nu: Complex64, z: Complex64, opts: SeriesOptions) -> Result<Complex64, SpecialError> {
    let f = j_series_normalized(nu, z, opts)?;
    let neg_integer = nu.im == 0.0 && nu.re <= -1.0 && nu.re == nu.re.round();
    if neg_integer {
        return Err(SpecialError::OutOfDomain(format!("order {nu} needs the reflected series")));
    }
    Ok(f / complex_gamma(nu + 1.0)?)
}

/// `H_{ir}(z) = |z/2|^(2ir) J*_{ir}(z) J*_{ir}(conj z)`.
pub fn h_kernel(r: f64, z: Complex64) -> Result<Complex64, SpecialError> {
    let nu = Complex64::new(0.0, r);
    let a = j_star(nu, z)?;
    let b = j_star(nu, z.conj())?;
    let lead = if z.norm() == 0.0 {
        c(1.0)
    } else {
        (2.0 * I * r * (z.norm() / 2.0).ln()).exp()
    };
    Ok(lead * a * b)
}

/// `1 - exp(-x)` without cancellation near zero.
pub(crate) fn one_minus_exp_neg(x: Complex64) -> Complex64 {
    if x.norm() < 1e-2 {
        // x - x^2/2 + x^3/6 - ...
        let mut term = x;
        let mut sum = x;
        for k in 2..12 {
            term *= -x / k as f64;
            sum += term;
        }
        sum
    } else {
        c(1.0) - (-x).exp()
    }
}

/// `sinh(a) / sinh(b)` without overflow.
fn sinh_ratio(a: Complex64, b: Complex64) -> Complex64 {
    let sa = if a.re >= 0.0 { 1.0 } else { -1.0 };
    let sb = if b.re >= 0.0 { 1.0 } else { -1.0 };
    let (a, b) = (a * sa, b * sb);
    // sinh(a) = e^a (1 - e^{-2a}) / 2 with Re a >= 0
    (sa * sb) * (a - b).exp() * one_minus_exp_neg(2.0 * a) / one_minus_exp_neg(2.0 * b)
}

/// `h(r) = sinh(beta r) / sinh(pi r)`, with the limit `beta / pi` at `r = 0`.
pub fn h_weight(r: Complex64, p: &WeightParams) -> Complex64 {
    let beta = p.beta();
    if r.norm() < 1e-12 {
        return beta / PI * (c(1.0) + (beta * beta - PI * PI) * r * r / 6.0);
    }
    // h is even
    let r = if r.re < 0.0 { -r } else { r };
    if (beta * r).re < 0.0 {
        return sinh_ratio(beta * r, c(PI) * r);
    }
    // e^{(beta - pi) r} (1 - e^{-2 beta r}) / (1 - e^{-2 pi r}) with beta - pi = 2 i alpha exactly
    (shift(p) * r).exp() * one_minus_exp_neg(2.0 * beta * r) / one_minus_exp_neg(2.0 * PI * r)
}

fn shift(p: &WeightParams) -> Complex64 {
    2.0 * I * p.alpha
}

/// Real-argument shorthand.
pub fn h_weight_real(r: f64, p: &WeightParams) -> Complex64 {
    h_weight(c(r), p)
}

/// The model `X^{ir} e^{-r/T}` that `h` approximates.
pub fn h_model(r: f64, p: &WeightParams) -> Complex64 {
    (shift(p) * r).exp()
}

/// `h(r) - X^{ir} e^{-r/T}` for `r > 0`, evaluated without cancellation as
/// `e^{(beta - pi) r} (e^{-2 pi r} - e^{-2 beta r}) / (1 - e^{-2 pi r})`.
pub fn h_model_gap(r: f64, p: &WeightParams) -> Complex64 {
    let beta = p.beta();
    let lead = (shift(p) * r).exp();
    let num = (-2.0 * PI * r).exp() - (-2.0 * beta * r).exp();
    lead * num / one_minus_exp_neg(c(2.0 * PI * r))
}

fn check_k0_domain(w: Complex64) -> Result<(), SpecialError> {
    if w.norm() == 0.0 {
        return Err(SpecialError::OutOfDomain("K0 is singular at 0".into()));
    }
    if w.re < 0.0 {
        return Err(SpecialError::OutOfDomain(format!("K0 needs Re(w) >= 0, got {w}")));
    }
    Ok(())
}

/// Above this modulus `K_0` switches to its asymptotic series.
pub const K0_ASYMPTOTIC_THRESHOLD: f64 = 50.0;

/// `e^w K_0(w)` for `|arg w| < pi`.
///
/// Uses `e^w K_0(w) = sqrt(2/w) int_0^inf e^{-u^2} (1 + u^2/(2w))^{-1/2} du`
/// (the `t = u^2` form of the Laplace-type representation) integrated
/// adaptively, and the Hankel expansion for `|w| > 50`.
pub fn k0_scaled(w: Complex64) -> Result<Complex64, SpecialError> {
    if w.norm() == 0.0 {
        return Err(SpecialError::OutOfDomain("K0 is singular at 0".into()));
    }
    if w.im == 0.0 && w.re < 0.0 {
        return Err(SpecialError::OutOfDomain("K0 has a branch cut on the negative axis".into()));
    }
    if w.norm() > K0_ASYMPTOTIC_THRESHOLD {
        return Ok(k0_scaled_asymptotic(w));
    }
    let inv_w = 1.0 / w;
    let half_inv_w = 0.5 * inv_w;
    let f = |u: f64| (-u * u).exp() * (c(1.0) + u * u * half_inv_w).sqrt().inv();
    let split = (2.0 * w.norm()).sqrt();
    let upper = 6.5;
    let mut edges = if split < upper {
        vec![0.0, 0.5 * split, split, (2.0 * split).min(upper), upper]
    } else {
        vec![0.0, 1.5, 3.0, upper]
    };
    edges.dedup();
    let e = adaptive(&f, &edges, Tolerance::new(0.0, 1e-12));
    Ok((2.0 * inv_w).sqrt() * e.value)
}

fn k0_scaled_asymptotic(w: Complex64) -> Complex64 {
    let mut term = c(1.0);
    let mut sum = c(1.0);
    for k in 1..60 {
        let kf = k as f64;
        let next = term * (-(2.0 * kf - 1.0).powi(2)) / (8.0 * kf * w);
        if next.norm() > term.norm() {
            break;
        }
        term = next;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    (c(PI) / (2.0 * w)).sqrt() * sum
}

/// `K_0(w)` on the closed right half-plane.
pub fn k0_complex(w: Complex64) -> Result<Complex64, SpecialError> {
    check_k0_domain(w)?;
    Ok((-w).exp() * k0_scaled(w)?)
}

/// `|K_0(w)| / (2 |w|^{-1/2} e^{-Re w})`; at most 1 when the first bound holds.
pub fn k0_bound_ratio(w: Complex64) -> Result<f64, SpecialError> {
    let k = k0_scaled(w)?;
    check_k0_domain(w)?;
    // |K0(w)| e^{Re w} = |e^w K0(w)|
    Ok(k.norm() / (2.0 / w.norm().sqrt()))
}

/// Central difference of `f(w) = e^w K_0(w)` with step `1e-5 |w|`.
pub fn k0_scaled_derivative(w: Complex64) -> Result<Complex64, SpecialError> {
    let h = 1e-5 * w.norm();
    Ok((k0_scaled(w + h)? - k0_scaled(w - h)?) / (2.0 * h))
}

/// Outcome of the derivative bound test together with its two sides.
#[derive(Debug, Clone, Copy)]
pub struct DerivativeCheck {
    pub derivative: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn k0_derivative_check(w: Complex64) -> Result<DerivativeCheck, SpecialError> {
    check_k0_domain(w)?;
    if w.norm() < 1e-2 {
        return Err(SpecialError::OutOfDomain(format!("|w| = {} is below 1e-2", w.norm())));
    }
    let derivative = k0_scaled_derivative(w)?.norm();
    let a = w.norm();
    let bound = a.powf(-1.5) * (1.0 + 1.0 / a);
    Ok(DerivativeCheck {
        derivative,
        bound,
        holds: derivative <= bound + 1e-6,
    })
}

/// True iff `|f'(w)| <= |w|^{-3/2} (1 + 1/|w|)` up to `1e-6`, `f(w) = e^w K_0(w)`.
pub fn k0_derivative_bound_check(w: Complex64) -> Result<bool, SpecialError> {
    Ok(k0_derivative_check(w)?.holds)
}

/// `e / (1 + |r|)^{k + 1/2} e^{k + pi |r| / 2}`: the Stirling majorant of `|1 / Gamma(k + 1 + i r)|`.
pub fn stirling_majorant(k: u32, r: f64) -> f64 {
    (k as f64 + PI * r.abs() / 2.0).exp() / (1.0 + r.abs()).powf(k as f64 + 0.5)
}
