//! Kloosterman aggregates weighted by `omega`, `omega_0` and `K_0`, their second
//! moments over `X in [V, V+Y]`, and the diagonal `U`-term.
//!
//! Sums run over every nonzero modulus. Each canonical `c` stands for the four
//! associates `c, ic, -c, -ic`; `S(n, n, -c) = S(n, n, c)` and the weights are
//! even in `z`, so a class contributes `2 S(c) w(z) + 2 S(ic) w(-iz)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bessel_transforms::{omega0_closed, omega_quadrature, TransformError};
use crate::gaussian_ring::{canonical_moduli_in, divisor_count, gcd_triple_abs, GaussianInt, RingError};
use crate::kloosterman::{KloostermanError, KloostermanSource};
use crate::quadrature::{adaptive, gauss_legendre_on, Tolerance};
use crate::special_functions::{h_weight_real, k0_complex, SpecialError, WeightParams};
use crate::summation::{sum_complex, ComplexNeumaier, Neumaier};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AggregateError {
    #[error("invalid aggregate parameters: {0}")]
    Invalid(String),
    #[error("norm cap {cap} is below the head boundary {head}")]
    NormCapTooSmall { cap: f64, head: f64 },
    #[error(transparent)]
    Kloosterman(#[from] KloostermanError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Frequency `n`, window `[V, V+Y]`, truncation `T` and the cutoffs derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AggregateSpec {
    pub n: GaussianInt,
    pub v: f64,
    pub y: f64,
    pub t: f64,
    pub c1: f64,
    pub c2: f64,
}

impl AggregateSpec {
    /// Requires `1 <= Y <= V`, `3 <= T <= V^{1/2}` and `n != 0`.
    pub fn new(n: GaussianInt, v: f64, y: f64, t: f64) -> Result<Self, AggregateError> {
        if n.is_zero() {
            return Err(AggregateError::Invalid("n must be nonzero".into()));
        }
        if !(y >= 1.0 && y <= v) {
            return Err(AggregateError::Invalid(format!("need 1 <= Y <= V, got Y = {y}, V = {v}")));
        }
        if t < 3.0 {
            return Err(AggregateError::Invalid(format!("T = {t} is below 3")));
        }
        if t > v.sqrt() {
            return Err(AggregateError::Invalid(format!("T = {t} exceeds V^(1/2) = {}", v.sqrt())));
        }
        let nn = n.norm() as f64;
        let log_t = t.ln();
        Ok(Self {
            n,
            v,
            y,
            t,
            c1: nn * v / (t * t * log_t * log_t),
            c2: nn * v,
        })
    }

    pub fn n_norm(&self) -> f64 {
        self.n.norm() as f64
    }

    /// `4 pi^2 N(n)`: above it `|2 pi n / c| < 1`.
    pub fn head_boundary(&self) -> f64 {
        4.0 * PI * PI * self.n_norm()
    }

    pub fn weight_params(&self, x: f64) -> Result<WeightParams, AggregateError> {
        Ok(WeightParams::new(x, self.t)?)
    }

    fn check_window(&self, x: f64) -> Result<(), AggregateError> {
        if x < self.v || x > self.v + self.y {
            return Err(AggregateError::Invalid(format!(
                "X = {x} lies outside [{}, {}]",
                self.v,
                self.v + self.y
            )));
        }
        Ok(())
    }
}

/// `2 pi conj(n) / c`.
pub fn kernel_argument(n: GaussianInt, c: GaussianInt) -> Complex64 {
    2.0 * PI * n.conj().to_complex() / c.to_complex()
}

/// `S(n, n, c)` and `S(n, n, ic)` for a canonical class.
fn class_sums<S: KloostermanSource + ?Sized>(
    source: &S,
    n: GaussianInt,
    c: GaussianInt,
) -> Result<(f64, f64), KloostermanError> {
    Ok((source.value(n, n, c)?, source.value(n, n, GaussianInt::I * c)?))
}

/// A partial aggregate with what was left out of it.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateValue {
    pub value: Complex64,
    /// Summed quadrature error estimates of the weights.
    pub weight_error: f64,
    /// Canonical moduli skipped because `|2 pi n / c|` exceeds the series range.
    pub excluded: Vec<GaussianInt>,
}

/// `sum_{lo < N(c) <= hi} S(n, n, c) omega(2 pi conj(n)/c) / N(c)` for `X` in the window.
pub fn s_n_omega_range<S: KloostermanSource + ?Sized>(
    spec: &AggregateSpec,
    x: f64,
    lo: f64,
    hi: f64,
    source: &S,
) -> Result<AggregateValue, AggregateError> {
    spec.check_window(x)?;
    let p = spec.weight_params(x)?;
    let moduli = canonical_moduli_in(lo.floor() as i64, hi.floor() as i64);
    let terms: Vec<Option<(Complex64, f64)>> = moduli
        .par_iter()
        .map(|&c| -> Result<Option<(Complex64, f64)>, AggregateError> {
            let z = kernel_argument(spec.n, c);
            if z.norm() > 5.0 {
                return Ok(None);
            }
            let (s_c, s_ic) = class_sums(source, spec.n, c)?;
            let w = omega_quadrature(z, &p)?;
            let w_i = omega_quadrature(-I * z, &p)?;
            let nc = c.norm() as f64;
            let value = (2.0 * s_c * w.value + 2.0 * s_ic * w_i.value) / nc;
            let err = 2.0 * (s_c.abs() * w.abs_error_estimate + s_ic.abs() * w_i.abs_error_estimate) / nc;
            Ok(Some((value, err)))
        })
        .collect::<Result<_, _>>()?;
    let mut acc = ComplexNeumaier::new();
    let mut err = Neumaier::new();
    let mut excluded = Vec::new();
    for (c, t) in moduli.iter().zip(&terms) {
        match t {
            Some((v, e)) => {
                acc.add(*v);
                err.add(*e);
            }
            None => excluded.push(*c),
        }
    }
    Ok(AggregateValue {
        value: acc.value(),
        weight_error: err.value(),
        excluded,
    })
}

/// [`s_n_omega_range`] over `0 < N(c) <= norm_cap`.
pub fn s_n_omega<S: KloostermanSource + ?Sized>(
    spec: &AggregateSpec,
    x: f64,
    norm_cap: f64,
    source: &S,
) -> Result<AggregateValue, AggregateError> {
    s_n_omega_range(spec, x, 0.0, norm_cap, source)
}

/// `sum_{4 pi^2 N(n) < N(c) <= cap} S(n, n, c) omega_0(2 pi conj(n)/c) / N(c)` from the closed form.
pub fn s_n_dagger<S: KloostermanSource + ?Sized>(
    spec: &AggregateSpec,
    x: f64,
    norm_cap: f64,
    source: &S,
) -> Result<Complex64, AggregateError> {
    let head = spec.head_boundary();
    if norm_cap < head {
        return Err(AggregateError::NormCapTooSmall { cap: norm_cap, head });
    }
    s_n_dagger_range(spec, x, head, norm_cap, source)
}

/// The `omega_0` aggregate over `lo < N(c) <= hi`.
pub fn s_n_dagger_range<S: KloostermanSource + ?Sized>(
    spec: &AggregateSpec,
    x: f64,
    lo: f64,
    hi: f64,
    source: &S,
) -> Result<Complex64, AggregateError> {
    spec.check_window(x)?;
    let p = spec.weight_params(x)?;
    let moduli = canonical_moduli_in(lo.floor() as i64, hi.floor() as i64);
    let terms: Vec<Complex64> = moduli
        .par_iter()
        .map(|&c| -> Result<Complex64, AggregateError> {
            let (s_c, s_ic) = class_sums(source, spec.n, c)?;
            // omega_0 depends on |z| only
            let w = omega0_closed(kernel_argument(spec.n, c), &p)?.value;
            Ok(2.0 * (s_c + s_ic) * w / c.norm() as f64)
        })
        .collect::<Result<_, _>>()?;
    Ok(sum_complex(terms))
}

/// Sum over `lo < N(c) <= hi` of the termwise majorant of the `omega_0` aggregate.
///
/// Uses Weil's bound for both `S(c)` and `S(ic)` and `|w^2 K_0(w)| <= 2 |w|^{3/2}`,
/// so it bounds the change of [`s_n_dagger`] when the cap moves from `lo` to `hi`.
pub fn dagger_increment_bound(spec: &AggregateSpec, x: f64, lo: f64, hi: f64) -> Result<f64, AggregateError> {
    let mut acc = Neumaier::new();
    let nn = spec.n_norm();
    for c in canonical_moduli_in(lo.floor() as i64, hi.floor() as i64) {
        let nc = c.norm() as f64;
        let weil = gcd_triple_abs(spec.n, spec.n, c)? * divisor_count(c)? as f64 * nc.sqrt();
        let abs_z = 2.0 * PI * (nn / nc).sqrt();
        let a = abs_z * x.sqrt();
        let b = abs_z / x.sqrt();
        let w = (a.powf(1.5) + b.powf(1.5)) / PI;
        acc.add(4.0 * weil * w / nc);
    }
    Ok(acc.value())
}

/// Normalization of the `K_0` aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DdaggerNormalization {
    /// Prefactor `2 i M^2 N(n) X`.
    #[default]
    Printed,
    /// Prefactor `2 pi i M^2 N(n) X`, the leading term of the `omega_0` aggregate.
    Consistent,
}

impl DdaggerNormalization {
    fn factor(self) -> f64 {
        match self {
            DdaggerNormalization::Printed => 2.0,
            DdaggerNormalization::Consistent => 2.0 * PI,
        }
    }
}

/// Per-class coefficients `w_c = 2 (S(c) + S(ic)) / N(c)^2` on `C1 < N(c) <= C2`.
pub fn ddagger_terms<S: KloostermanSource + ?Sized>(
    spec: &AggregateSpec,
    source: &S,
) -> Result<Vec<(GaussianInt, f64)>, AggregateError> {
    let moduli = canonical_moduli_in(spec.c1.floor() as i64, spec.c2.floor() as i64);
    moduli
        .par_iter()
        .map(|&c| {
            let (s_c, s_ic) = class_sums(source, spec.n, c)?;
            let nc = c.norm() as f64;
            Ok((c, 2.0 * (s_c + s_ic) / (nc * nc)))
        })
        .collect()
}

/// Evaluates the `K_0` aggregate from precomputed class coefficients.
pub fn ddagger_from_terms(
    spec: &AggregateSpec,
    terms: &[(GaussianInt, f64)],
    x: f64,
    normalization: DdaggerNormalization,
) -> Result<Complex64, AggregateError> {
    let p = WeightParams::unchecked(x, spec.t);
    let scale = 2.0 * PI * p.m * spec.n.abs() * x.sqrt();
    let parts: Vec<Complex64> = terms
        .iter()
        .map(|&(c, w)| Ok(w * k0_complex(scale / c.abs())?))
        .collect::<Result<_, AggregateError>>()?;
    let pre = normalization.factor() * I * p.m * p.m * spec.n_norm() * x;
    Ok(pre * sum_complex(parts))
}

/// `2 i M^2 N(n) X sum_{C1 < N(c) <= C2} S(n, n, c) / N(c)^2 K_0(2 pi M |n| X^{1/2} / |c|)`.
pub fn s_n_ddagger<S: KloostermanSource + ?Sized>(
    spec: &AggregateSpec,
    x: f64,
    source: &S,
) -> Result<Complex64, AggregateError> {
    s_n_ddagger_with(spec, x, source, DdaggerNormalization::Printed)
}

pub fn s_n_ddagger_with<S: KloostermanSource + ?Sized>(
    spec: &AggregateSpec,
    x: f64,
    source: &S,
    normalization: DdaggerNormalization,
) -> Result<Complex64, AggregateError> {
    spec.check_window(x)?;
    let terms = ddagger_terms(spec, source)?;
    ddagger_from_terms(spec, &terms, x, normalization)
}

/// Output record of the second-moment computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: GaussianInt,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "N")]
    pub n_norm: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub integral: f64,
    pub envelope: f64,
    pub ratio: f64,
    pub nodes: usize,
}

/// `(N V^2 + T^3 Y) (N V)^{0.1}`.
pub fn moment_envelope(spec: &AggregateSpec) -> f64 {
    let nn = spec.n_norm();
    (nn * spec.v * spec.v + spec.t.powi(3) * spec.y) * (nn * spec.v).powf(0.1)
}

/// `int_V^{V+Y} |S_n^ddagger(X)|^2 dX` by `nodes`-point Gauss-Legendre.
pub fn second_moment_ddagger<S: KloostermanSource + ?Sized>(
    spec: &AggregateSpec,
    nodes: usize,
    source: &S,
) -> Result<MomentReport, AggregateError> {
    let terms = ddagger_terms(spec, source)?;
    second_moment_from_terms(spec, &terms, nodes, DdaggerNormalization::Printed)
}

pub fn second_moment_from_terms(
    spec: &AggregateSpec,
    terms: &[(GaussianInt, f64)],
    nodes: usize,
    normalization: DdaggerNormalization,
) -> Result<MomentReport, AggregateError> {
    if nodes < 16 {
        return Err(AggregateError::Invalid(format!("need at least 16 nodes, got {nodes}")));
    }
    let rule = gauss_legendre_on(nodes, spec.v, spec.v + spec.y);
    let values: Vec<f64> = rule
        .par_iter()
        .map(|&(x, w)| Ok(w * ddagger_from_terms(spec, terms, x, normalization)?.norm_sqr()))
        .collect::<Result<_, AggregateError>>()?;
    let mut acc = Neumaier::new();
    acc.extend(values);
    let integral = acc.value();
    let envelope = moment_envelope(spec);
    Ok(MomentReport {
        n: spec.n,
        v: spec.v,
        y: spec.y,
        t: spec.t,
        n_norm: spec.n_norm(),
        c1: spec.c1,
        c2: spec.c2,
        integral,
        envelope,
        ratio: integral / envelope,
        nodes,
    })
}

/// Result of the `K_0` product integral with its envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairReport {
    pub integral: Complex64,
    pub error: f64,
    pub envelope: f64,
    pub ratio: f64,
}

/// `min(Y V^{-1/2}, L^{-1}) / (x1 x2)^{1/2}` with `L = |x1 - x2|`.
pub fn pair_envelope(x1: f64, x2: f64, v: f64, y: f64) -> f64 {
    let l = (x1 - x2).abs();
    let first = y / v.sqrt();
    let m = if l > 0.0 { first.min(1.0 / l) } else { first };
    m / (x1 * x2).sqrt()
}

/// `int_V^{V+Y} K_0(M x1 X^{1/2}) conj(K_0(M x2 X^{1/2})) dX`, `x_i in [2 V^{-1/2}, 1/2]`.
pub fn k0_pair_integral(x1: f64, x2: f64, v: f64, y: f64, t: f64) -> Result<PairReport, AggregateError> {
    k0_pair_integral_with(x1, x2, v, y, t, 1e-10)
}

pub fn k0_pair_integral_with(
    x1: f64,
    x2: f64,
    v: f64,
    y: f64,
    t: f64,
    rel_tol: f64,
) -> Result<PairReport, AggregateError> {
    let lo = 2.0 / v.sqrt();
    for x in [x1, x2] {
        if !(lo..=0.5).contains(&x) {
            return Err(AggregateError::Invalid(format!("x = {x} lies outside [{lo}, 0.5]")));
        }
    }
    if !(y > 0.0 && v > 0.0 && t >= 1.0) {
        return Err(AggregateError::Invalid("need V > 0, Y > 0, T >= 1".into()));
    }
    let m = WeightParams::unchecked(v, t).m;
    let f = |x: f64| {
        let s = x.sqrt();
        let a = k0_complex(m * x1 * s).unwrap_or_default();
        let b = k0_complex(m * x2 * s).unwrap_or_default();
        a * b.conj()
    };
    // the product oscillates like exp(i |x1 - x2| X^{1/2})
    let phase = ((x1 - x2).abs() * ((v + y).sqrt() - v.sqrt())).max(1.0);
    let n = (phase / 2.0).ceil().min(2000.0) as usize;
    let edges: Vec<f64> = (0..=n).map(|k| v + y * k as f64 / n as f64).collect();
    let mut tol = Tolerance::new(0.0, rel_tol);
    tol.max_panels = 20_000;
    let e = adaptive(&f, &edges, tol);
    let envelope = pair_envelope(x1, x2, v, y);
    Ok(PairReport {
        integral: e.value,
        error: e.error,
        envelope,
        ratio: e.value.norm() / envelope,
    })
}

/// `(delta_{m,n} + delta_{m,-n}) / pi^2 int_R r^2 h(r) dr`.
pub fn u_term(m: GaussianInt, n: GaussianInt, p: &WeightParams) -> Result<Complex64, AggregateError> {
    if m.is_zero() || n.is_zero() {
        return Err(AggregateError::Invalid("m and n must be nonzero".into()));
    }
    let multiplicity = (m == n) as u8 + (m == -n) as u8;
    if multiplicity == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(multiplicity as f64 / (PI * PI) * r2_h_integral(p))
}

/// `int_R r^2 h(r) dr` by quadrature over `[0, R]`, using that `h` is even.
pub fn r2_h_integral(p: &WeightParams) -> Complex64 {
    let radius = p.t * 46.0 + 20.0;
    let freq = p.x.ln().abs() + 1.0;
    let width = (4.0 / freq).min(2.0);
    let n = (radius / width).ceil() as usize;
    let edges: Vec<f64> = (0..=n).map(|k| radius * k as f64 / n as f64).collect();
    let f = |r: f64| r * r * h_weight_real(r, p);
    2.0 * crate::quadrature::panels(&f, &edges).value
}

/// `(1/2) tan(beta/2) sec^2(beta/2)`, the exact value of [`r2_h_integral`].
pub fn r2_h_integral_exact(p: &WeightParams) -> Complex64 {
    let half = p.beta() / 2.0;
    let sec = half.cos().inv();
    0.5 * half.tan() * sec * sec
}
