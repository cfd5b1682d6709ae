//! The Kuznetsov weight transforms `omega`, `omega_0` and their `K_0` closed form.
//!
//! Both transforms are integrals over `r` of `i r^2 h(r) / sinh(pi r)` against a
//! Bessel kernel. With `|Gamma(1 + ir)|^2 = pi r / sinh(pi r)` and
//! `theta(r) = arg Gamma(1 + ir)` the `omega_0` integrand becomes
//! `(ir/pi) h(r) exp(i Phi(r))`, `Phi(r) = 2r log(|z|/2) - 2 theta(r)`, which
//! never forms `sinh(pi r)` and stays finite for large `r`. Folding `r` and `-r`
//! gives the real-line integrand `-(2r/pi) h(r) sin Phi(r)` on `[0, R]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::quadrature::{gk21, Estimate};
use crate::special_functions::{
    complex_gamma, gamma_phase, h_weight_real, j_series_normalized, k0_complex, SeriesOptions, SpecialError,
    WeightParams,
};
use crate::summation::ComplexNeumaier;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("|z| = {0} is outside the supported range")]
    ArgumentOutOfRange(f64),
    #[error("a = {0} is outside [0.1, 20]")]
    MomentArgument(f64),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    ClosedForm,
    Series,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed_form",
            Method::Series => "series",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

/// Truncation and panel controls for the `r`-integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    /// Target size of the neglected tail relative to the `e^{-r/T}` envelope.
    pub eps: f64,
    /// Phase advance allowed per GK21 panel, in radians.
    pub phase_per_panel: f64,
    /// Divides every panel width; 2 doubles the node count.
    pub refine: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            eps: 1e-18,
            phase_per_panel: 4.0,
            refine: 1.0,
        }
    }
}

impl QuadratureOptions {
    pub fn radius(&self, t: f64) -> f64 {
        t * (1.0 / self.eps).ln() + 10.0
    }

    pub fn refined(self, factor: f64) -> Self {
        Self {
            refine: self.refine * factor,
            ..self
        }
    }

    pub fn with_eps(self, eps: f64) -> Self {
        Self { eps, ..self }
    }
}

/// `int_R^inf (r/pi) e^{-r/T} dr` over both half-lines.
fn envelope_tail(radius: f64, t: f64) -> f64 {
    2.0 * t / PI * (radius + t) * (-radius / t).exp()
}

/// Breakpoints on `[0, R]` with widths bounded by a local oscillation frequency.
fn phase_breakpoints(radius: f64, t: f64, opts: &QuadratureOptions, freq: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut edges = vec![0.0];
    let mut r = 0.0;
    while r < radius {
        let width = (opts.phase_per_panel / freq(r)).min(t).min(2.0) / opts.refine;
        r = (r + width).min(radius);
        edges.push(r);
    }
    edges
}

fn integrate_panels<F: Fn(f64) -> Complex64 + Sync>(f: &F, edges: &[f64]) -> Estimate {
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

fn check_radius(z: Complex64, max: f64, inclusive: bool) -> Result<f64, TransformError> {
    let a = z.norm();
    let ok = a > 0.0 && if inclusive { a <= max } else { a < max };
    if ok {
        Ok(a)
    } else {
        Err(TransformError::ArgumentOutOfRange(a))
    }
}

fn omega_frequency(abs_z: f64, p: &WeightParams) -> impl Fn(f64) -> f64 {
    let base = 2.0 * (abs_z / 2.0).ln().abs() + p.x.ln().abs() + 1.0;
    move |r: f64| base + 2.0 * (1.0 + r).ln()
}

/// `omega_0(z)` by direct quadrature, for `0 < |z| < 1`.
pub fn omega0_quadrature(z: Complex64, p: &WeightParams) -> Result<TransformResult, TransformError> {
    omega0_quadrature_with(z, p, QuadratureOptions::default())
}

pub fn omega0_quadrature_with(
    z: Complex64,
    p: &WeightParams,
    opts: QuadratureOptions,
) -> Result<TransformResult, TransformError> {
    let abs_z = check_radius(z, 1.0, false)?;
    let log_half = (abs_z / 2.0).ln();
    let integrand = |r: f64| {
        let phi = 2.0 * r * log_half - 2.0 * gamma_phase(r);
        -(2.0 * r / PI) * h_weight_real(r, p) * phi.sin()
    };
    let radius = opts.radius(p.t);
    let edges = phase_breakpoints(radius, p.t, &opts, omega_frequency(abs_z, p));
    let e = integrate_panels(&integrand, &edges);
    Ok(TransformResult {
        value: e.value,
        abs_error_estimate: e.error + envelope_tail(radius, p.t),
        method: Method::Quadrature,
    })
}

/// `I_0(x)`, the bound on `|sum (-z^2/4)^k / (k! (1+ir)_k)|` for `|z| = x`.
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..200 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `omega(z)` with the full `H_{ir}` kernel, for `0 < |z| <= 5`.
pub fn omega_quadrature(z: Complex64, p: &WeightParams) -> Result<TransformResult, TransformError> {
    omega_quadrature_with(z, p, QuadratureOptions::default())
}

pub fn omega_quadrature_with(
    z: Complex64,
    p: &WeightParams,
    opts: QuadratureOptions,
) -> Result<TransformResult, TransformError> {
    let abs_z = check_radius(z, 5.0, true)?;
    let log_half = (abs_z / 2.0).ln();
    let series = SeriesOptions::default();
    let integrand = |r: f64| {
        let nu = Complex64::new(0.0, r);
        let pair = j_series_normalized(nu, z, series).unwrap_or_default()
            * j_series_normalized(nu, z.conj(), series).unwrap_or_default();
        let phi = 2.0 * r * log_half - 2.0 * gamma_phase(r);
        let rotated = Complex64::from_polar(1.0, phi) * pair;
        -(2.0 * r / PI) * h_weight_real(r, p) * rotated.im
    };
    let radius = opts.radius(p.t);
    let edges = phase_breakpoints(radius, p.t, &opts, omega_frequency(abs_z, p));
    let e = integrate_panels(&integrand, &edges);
    let i0 = bessel_i0(abs_z);
    Ok(TransformResult {
        value: e.value,
        abs_error_estimate: e.error + envelope_tail(radius, p.t) * i0 * i0,
        method: Method::Quadrature,
    })
}

/// The two arguments `2A = M |z| X^{1/2}` and `2B = M |z| X^{-1/2}`.
pub fn closed_form_arguments(abs_z: f64, p: &WeightParams) -> (Complex64, Complex64) {
    let s = p.x.sqrt();
    (p.m * abs_z * s, p.m * abs_z / s)
}

/// `omega_0(z) = (i / 2pi) [ (2A)^2 K_0(2A) - (2B')^2 K_0(2B') ]` with `2B' = conj(2B)`.
pub fn omega0_closed(z: Complex64, p: &WeightParams) -> Result<TransformResult, TransformError> {
    let abs_z = z.norm();
    if abs_z == 0.0 {
        return Err(TransformError::ArgumentOutOfRange(0.0));
    }
    let (two_a, two_b) = closed_form_arguments(abs_z, p);
    let two_b = two_b.conj();
    assert!(two_a.re > 0.0 && two_b.re > 0.0, "K0 arguments must lie in the right half-plane");
    let term = |w: Complex64| -> Result<Complex64, TransformError> { Ok(w * w * k0_complex(w)?) };
    let value = I / (2.0 * PI) * (term(two_a)? - term(two_b)?);
    Ok(TransformResult {
        value,
        abs_error_estimate: 1e-8 * value.norm(),
        method: Method::ClosedForm,
    })
}

/// The leading term `i M^2 |z|^2 X K_0(M |z| X^{1/2}) / (2 pi)` of [`omega0_closed`].
pub fn omega0_dominant(z: Complex64, p: &WeightParams) -> Result<TransformResult, TransformError> {
    let abs_z = z.norm();
    if abs_z == 0.0 {
        return Err(TransformError::ArgumentOutOfRange(0.0));
    }
    let (two_a, _) = closed_form_arguments(abs_z, p);
    let value = I / (2.0 * PI) * two_a * two_a * k0_complex(two_a)?;
    Ok(TransformResult {
        value,
        abs_error_estimate: (abs_z.powf(1.5) * p.x.powf(-0.75)) / PI,
        method: Method::ClosedForm,
    })
}

/// The variant `(i/pi) [ (2A)^2 K_0(2A) + (2B)^2 K_0(2B) ]`, kept to document that
/// it does not reproduce the quadrature.
pub fn omega0_closed_variant_sum(z: Complex64, p: &WeightParams) -> Result<Complex64, TransformError> {
    let abs_z = z.norm();
    if abs_z == 0.0 {
        return Err(TransformError::ArgumentOutOfRange(0.0));
    }
    let (two_a, two_b) = closed_form_arguments(abs_z, p);
    let term = |w: Complex64| -> Result<Complex64, TransformError> { Ok(w * w * k0_complex(w)?) };
    Ok(I / PI * (term(two_a)? + term(two_b)?))
}

/// One evaluated grid point for the `omega_0` cross-check.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub abs_z: f64,
    pub x: f64,
    pub t: f64,
    pub quadrature: TransformResult,
    pub closed: TransformResult,
}

impl GridPoint {
    pub fn relative_deviation(&self) -> f64 {
        (self.quadrature.value - self.closed.value).norm() / self.closed.value.norm()
    }
}

/// `n` log-spaced points on `[a, b]`.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// The 5 x 5 x 5 log-spaced grid over `|z| in [0.01, 0.9]`, `X in [50, 1e4]`, `T in [2, 50]`.
pub fn default_grid() -> Vec<(f64, f64, f64)> {
    let zs = log_space(0.01, 0.9, 5);
    let xs = log_space(50.0, 1e4, 5);
    let ts = log_space(2.0, 50.0, 5);
    let mut out = Vec::with_capacity(125);
    for &z in &zs {
        for &x in &xs {
            for &t in &ts {
                out.push((z, x, t));
            }
        }
    }
    out
}

/// A coarse 2 x 2 x 2 corner grid of the same box.
pub fn quick_grid() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &z in &[0.01, 0.9] {
        for &x in &[50.0, 1e4] {
            for &t in &[2.0, 50.0] {
                out.push((z, x, t));
            }
        }
    }
    out
}

/// Evaluates quadrature and closed form at every point; output order follows the input.
pub fn omega0_grid(points: &[(f64, f64, f64)]) -> Result<Vec<GridPoint>, TransformError> {
    points
        .par_iter()
        .map(|&(abs_z, x, t)| {
            let p = WeightParams::new(x, t)?;
            let z = Complex64::new(abs_z, 0.0);
            Ok(GridPoint {
                abs_z,
                x,
                t,
                quadrature: omega0_quadrature(z, &p)?,
                closed: omega0_closed(z, &p)?,
            })
        })
        .collect()
}

/// Both sides of the Mellin pair `int_{(1)} Gamma(s)^2 A^{-2s} ds = 4 pi i K_0(2A)`.
pub fn mellin_pair(two_a: Complex64) -> Result<(Complex64, Complex64), TransformError> {
    let a = two_a / 2.0;
    let log_a = a.ln();
    let spread = PI - 2.0 * log_a.im.abs();
    let radius = 45.0 / spread + 10.0;
    let f = |t: f64| {
        let s = Complex64::new(1.0, t);
        let g = complex_gamma(s).unwrap_or_default();
        // ds = i dt on Re s = 1
        I * g * g * (-2.0 * s * log_a).exp()
    };
    let width = (1.0 / (1.0 + 2.0 * log_a.re.abs())).min(1.0);
    let n = (2.0 * radius / width).ceil() as usize;
    let edges: Vec<f64> = (0..=n).map(|k| -radius + 2.0 * radius * k as f64 / n as f64).collect();
    let lhs = integrate_panels(&f, &edges).value;
    let rhs = 4.0 * PI * I * k0_complex(two_a)?;
    Ok((lhs, rhs))
}

/// Both sides of the Bessel-moment identity together with their deviation.
#[derive(Debug, Clone, Copy)]
pub struct MomentCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_deviation: f64,
    pub rel_deviation: f64,
}

/// Right side `-(pi/8) e^{-a cosh b} (a^2 sinh^2 b - a cosh b)`, `b = alpha - i pi/2`.
pub fn bessel_moment_rhs(a: f64, p: &WeightParams) -> Complex64 {
    let b = p.alpha - I * (PI / 2.0);
    let (ch, sh) = (b.cosh(), b.sinh());
    -(PI / 8.0) * (-a * ch).exp() * (a * a * sh * sh - a * ch)
}

/// Left side `int_R r^2 cosh((pi + 2 i alpha) r) K_{2ir}(a) dr`.
///
/// With `theta = (pi - 1/T)/2` the contour shift `s -> s + i theta` in
/// `K_{2ir}(a) = (1/2) int_R e^{-a cosh s} e^{2irs} ds` gives
/// `e^{beta r} K_{2ir}(a) = (X^{ir}/2) int_R e^{-a cosh(s + i theta)} e^{2irs} ds`,
/// and the shift by `-theta` handles `e^{-beta r}`. The `s`-integrals are
/// trapezoidal sums of entire integrands, so they converge geometrically.
pub fn bessel_moment_lhs(a: f64, p: &WeightParams) -> Complex64 {
    let theta = (PI - 1.0 / p.t) / 2.0;
    let cos_t = theta.cos();
    // e^{-a cosh s cos theta} below e^{-48}
    let s_max = (48.0 / (a * cos_t)).max(1.0).acosh() + 0.5;
    // aliasing error of the trapezoid sum ~ e^{-(pi/h - 2r)(pi/2 - theta)}
    let strip = PI / 2.0 - theta;
    let r_max = p.t * 46.0 + 20.0;
    let h = PI / (2.0 * r_max + 40.0 / strip);
    let n = (s_max / h).ceil() as i64;
    let shifted: Vec<(f64, Complex64)> = (-n..=n)
        .map(|j| {
            let s = j as f64 * h;
            let w = Complex64::new(s, theta);
            (s, h * (-a * w.cosh()).exp())
        })
        .collect();
    let log_x = p.x.ln();
    let inner = |r: f64| -> Complex64 {
        let mut plus = ComplexNeumaier::new();
        let mut minus = ComplexNeumaier::new();
        // e^{2irs} along the uniform grid by rotation, resynchronised every 32 steps
        let step = Complex64::from_polar(1.0, 2.0 * r * h);
        let mut e = Complex64::new(1.0, 0.0);
        for (k, &(s, g)) in shifted.iter().enumerate() {
            if k % 32 == 0 {
                e = Complex64::from_polar(1.0, 2.0 * r * s);
            }
            plus.add(g * e);
            minus.add(g.conj() * e);
            e *= step;
        }
        let xr = Complex64::from_polar(1.0, r * log_x);
        // cosh(beta r) K = (1/2)(e^{beta r} + e^{-beta r}) K
        0.25 * (xr * plus.value() + xr.conj() * minus.value())
    };
    let freq = log_x.abs() + 2.0 * (4.0 * r_max / a).ln().max(1.0) + 2.0;
    let width = (3.0 / freq).min(1.0);
    let panels = (r_max / width).ceil() as usize;
    let edges: Vec<f64> = (0..=panels).map(|k| r_max * k as f64 / panels as f64).collect();
    let parts: Vec<Complex64> = edges
        .par_windows(2)
        .map(|w| gk21(&|r: f64| r * r * inner(r), w[0], w[1]).value)
        .collect();
    // even integrand: the real line is twice the half-line
    2.0 * parts.iter().fold(ComplexNeumaier::new(), |mut acc, &v| {
        acc.add(v);
        acc
    })
    .value()
}

pub fn verify_bessel_moment_detailed(a: f64, p: &WeightParams) -> Result<MomentCheck, TransformError> {
    if !(0.1..=20.0).contains(&a) {
        return Err(TransformError::MomentArgument(a));
    }
    let lhs = bessel_moment_lhs(a, p);
    let rhs = bessel_moment_rhs(a, p);
    let abs_deviation = (lhs - rhs).norm();
    let rel_deviation = if rhs.norm() > 0.0 {
        abs_deviation / rhs.norm()
    } else {
        abs_deviation
    };
    Ok(MomentCheck {
        lhs,
        rhs,
        abs_deviation,
        rel_deviation,
    })
}

/// Relative deviation between the two sides of the moment identity.
pub fn verify_bessel_moment(a: f64, p: &WeightParams) -> Result<f64, TransformError> {
    Ok(verify_bessel_moment_detailed(a, p)?.rel_deviation)
}
