//! Spectral exponential sums over lists of spectral parameters `r_j`.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use thiserror::Error;

use crate::kloosterman::round_sig;
use crate::quadrature::gauss_legendre_on;
use crate::special_functions::{h_weight_real, WeightParams};
use crate::summation::{ComplexNeumaier, Neumaier};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("line {line}: cannot parse {text:?}")]
    Parse { line: usize, text: String },
    #[error("line {line}: value {value} is not positive")]
    NonPositive { line: usize, value: f64 },
    #[error("line {line}: value {value} does not exceed the previous entry")]
    Order { line: usize, value: f64 },
    #[error("spectrum file contains no values")]
    Empty,
    #[error("cannot read spectrum: {0}")]
    Io(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumSource {
    File(String),
    Synthetic { seed: u64, c0: f64 },
    Inline,
}

/// Sorted positive spectral parameters with optional multiplicity weights.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueList {
    values: Vec<f64>,
    weights: Option<Vec<f64>>,
    pub source: SpectrumSource,
}

impl EigenvalueList {
    /// Validates positivity and nondecreasing order.
    pub fn new(values: Vec<f64>) -> Result<Self, SpectrumError> {
        for (k, &v) in values.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SpectrumError::NonPositive { line: k + 1, value: v });
            }
            if k > 0 && v < values[k - 1] {
                return Err(SpectrumError::Order { line: k + 1, value: v });
            }
        }
        Ok(Self {
            values,
            weights: None,
            source: SpectrumSource::Inline,
        })
    }

    pub fn empty() -> Self {
        Self {
            values: Vec::new(),
            weights: None,
            source: SpectrumSource::Inline,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn weight(&self, k: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[k])
    }

    /// `(r_j, weight_j)` pairs in order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(k, &r)| (r, self.weight(k)))
    }

    /// Entries with `r_j <= t`.
    pub fn up_to(&self, t: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let end = self.values.partition_point(|&r| r <= t);
        self.iter().take(end)
    }

    /// `#{r_j <= t}` (unweighted).
    pub fn count_up_to(&self, t: f64) -> usize {
        self.values.partition_point(|&r| r <= t)
    }

    /// Largest `#{k < r_j <= k + 1} / k^2` over integers `k >= 1` below `max`.
    pub fn unit_interval_constant(&self) -> f64 {
        let max = self.values.last().copied().unwrap_or(0.0);
        let mut worst: f64 = 0.0;
        let mut k = 1.0;
        while k < max {
            let count = self.count_up_to(k + 1.0) - self.count_up_to(k);
            worst = worst.max(count as f64 / (k * k));
            k += 1.0;
        }
        worst
    }
}

/// Parses the text format: one value per line, optional weight column, `#` comments.
pub fn parse_spectrum(text: &str) -> Result<EigenvalueList, SpectrumError> {
    let mut values = Vec::new();
    let mut weights = Vec::new();
    let mut any_weight = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut cols = body.split_whitespace();
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| SpectrumError::Parse {
                line,
                text: raw.to_string(),
            })
        };
        let v = parse(cols.next().unwrap_or_default())?;
        let w = match cols.next() {
            Some(s) => {
                any_weight = true;
                parse(s)?
            }
            None => 1.0,
        };
        if cols.next().is_some() {
            return Err(SpectrumError::Parse {
                line,
                text: raw.to_string(),
            });
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(SpectrumError::NonPositive { line, value: v });
        }
        if values.last().is_some_and(|&prev| v <= prev) {
            return Err(SpectrumError::Order { line, value: v });
        }
        values.push(v);
        weights.push(w);
    }
    if values.is_empty() {
        return Err(SpectrumError::Empty);
    }
    Ok(EigenvalueList {
        values,
        weights: any_weight.then_some(weights),
        source: SpectrumSource::Inline,
    })
}

pub fn load_spectrum(path: &Path) -> Result<EigenvalueList, SpectrumError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpectrumError::Io(format!("{}: {e}", path.display())))?;
    let mut list = parse_spectrum(&text)?;
    list.source = SpectrumSource::File(path.display().to_string());
    Ok(list)
}

/// Text form with 15 significant digits; weights are written only when present.
pub fn write_spectrum(list: &EigenvalueList, header: &str) -> String {
    let mut out = String::new();
    for line in header.lines() {
        let _ = writeln!(out, "# {line}");
    }
    for (k, &r) in list.values.iter().enumerate() {
        match &list.weights {
            Some(w) => {
                let _ = writeln!(out, "{:.14e} {}", r, round_sig(w[k], 15));
            }
            None => {
                let _ = writeln!(out, "{:.14e}", r);
            }
        }
    }
    out
}

/// Poisson points with cumulative intensity `c0 t^3` on `(0, t_max]`.
///
/// With `Lambda_k` the partial sums of unit exponentials, `r_k = (Lambda_k / c0)^{1/3}`.
pub fn synth_spectrum(t_max: f64, c0: f64, seed: u64) -> Result<EigenvalueList, SpectrumError> {
    if !(t_max >= 1.0) || !(c0 > 0.0) {
        return Err(SpectrumError::Invalid(format!("need t_max >= 1 and c0 > 0, got {t_max}, {c0}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lambda = 0.0;
    let mut values = Vec::new();
    loop {
        let gap: f64 = Exp1.sample(&mut rng);
        lambda += gap;
        let r = (lambda / c0).cbrt();
        if r > t_max {
            break;
        }
        // ties have probability zero but rounding could produce one
        if values.last().is_some_and(|&p| r <= p) {
            continue;
        }
        values.push(r);
    }
    Ok(EigenvalueList {
        values,
        weights: None,
        source: SpectrumSource::Synthetic { seed, c0 },
    })
}

fn x_pow_i(x: f64, r: f64) -> Complex64 {
    Complex64::from_polar(1.0, r * x.ln())
}

/// `sum_{r_j <= T} X^{i r_j}`.
pub fn sharp_sum(spec: &EigenvalueList, t: f64, x: f64) -> Complex64 {
    let mut acc = ComplexNeumaier::new();
    for (r, w) in spec.up_to(t) {
        acc.add(w * x_pow_i(x, r));
    }
    acc.value()
}

/// Smoothed sum with a report on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothSum {
    pub value: Complex64,
    /// Estimate of the weight carried by spectrum beyond the list, from its own density.
    pub residual_bound: f64,
    /// True when the list reaches `20 T log 10` or the residual is below `1e-15` of the envelope.
    pub complete: bool,
}

/// `sum_j X^{i r_j} e^{-r_j / T}` over the whole list.
pub fn smooth_sum(spec: &EigenvalueList, t: f64, x: f64) -> Complex64 {
    smooth_sum_report(spec, t, x).value
}

pub fn smooth_sum_report(spec: &EigenvalueList, t: f64, x: f64) -> SmoothSum {
    let mut acc = ComplexNeumaier::new();
    let mut env = Neumaier::new();
    for (r, w) in spec.iter() {
        let d = (-r / t).exp();
        acc.add(w * d * x_pow_i(x, r));
        env.add(w.abs() * d);
    }
    let r_max = spec.values.last().copied().unwrap_or(0.0);
    let residual_bound = if spec.is_empty() {
        0.0
    } else {
        // density 3 c t^2 with c fitted as #list / r_max^3
        let c = spec.len() as f64 / r_max.powi(3);
        3.0 * c * t * (-r_max / t).exp() * (r_max * r_max + 2.0 * t * r_max + 2.0 * t * t)
    };
    let complete = spec.is_empty() || r_max >= 20.0 * t * std::f64::consts::LN_10 || residual_bound <= 1e-15 * env.value();
    SmoothSum {
        value: acc.value(),
        residual_bound,
        complete,
    }
}

/// `sum_j h(r_j)`.
pub fn h_weighted_sum(spec: &EigenvalueList, p: &WeightParams) -> Complex64 {
    let mut acc = ComplexNeumaier::new();
    for (r, w) in spec.iter() {
        acc.add(w * h_weight_real(r, p));
    }
    acc.value()
}

/// `2 sum_j e^{-pi r_j}`, the bound on `|smooth_sum - h_weighted_sum|`.
pub fn h_approximation_budget(spec: &EigenvalueList) -> f64 {
    2.0 * spec.iter().map(|(r, w)| w.abs() * (-std::f64::consts::PI * r).exp()).sum::<f64>()
}

/// Both sides of the partial-summation identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSummation {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Right side with the `U`-integral done by Gauss-Legendre on unit sub-panels.
    pub rhs_numeric: Complex64,
    /// `|lhs - rhs| / (X sum_j |w_j| / |1 + i r_j|)`.
    pub deviation: f64,
    pub numeric_deviation: f64,
    /// Lower end of the `U`-integral.
    pub lower: f64,
}

/// `sum_{r_j <= T} X^{1+ir_j}/(1+ir_j) = X/(1+iT) S(T,X) + iX int_{u0}^T S(U,X)/(1+iU)^2 dU`
/// with `u0 = min(1, r_1)`.
///
/// `S(U, X)` is constant between eigenvalues, and on each piece the integral of
/// `(1+iU)^{-2}` is `i/(1+iU)` evaluated at the ends.
pub fn partial_summation(spec: &EigenvalueList, t: f64, x: f64, nodes: usize) -> Result<PartialSummation, SpectrumError> {
    if t < 1.0 || nodes < 1 {
        return Err(SpectrumError::Invalid(format!("need T >= 1 and nodes >= 1, got {t}, {nodes}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let lower = spec.values.first().copied().unwrap_or(1.0).min(1.0);
    let inside: Vec<(f64, f64)> = spec.up_to(t).collect();

    let mut lhs = ComplexNeumaier::new();
    let mut scale = Neumaier::new();
    for &(r, w) in &inside {
        lhs.add(w * x * x_pow_i(x, r) / (one + i * r));
        scale.add(w.abs() * x / (1.0 + r * r).sqrt());
    }
    let s_t = sharp_sum(spec, t, x);
    let boundary = x / (one + i * t) * s_t;

    let antiderivative = |u: f64| i / (one + i * u);
    let mut exact = ComplexNeumaier::new();
    let mut numeric = ComplexNeumaier::new();
    let mut partial = Complex64::new(0.0, 0.0);
    let mut breaks: Vec<f64> = inside.iter().map(|&(r, _)| r).filter(|&r| r > lower).collect();
    breaks.push(t);
    let mut a = lower;
    let mut next = 0;
    for &b in &breaks {
        while next < inside.len() && inside[next].0 <= a {
            partial += inside[next].1 * x_pow_i(x, inside[next].0);
            next += 1;
        }
        if b > a {
            exact.add(partial * (antiderivative(b) - antiderivative(a)));
            let pieces = (b - a).ceil() as usize;
            let mut piece = ComplexNeumaier::new();
            for k in 0..pieces {
                let lo = a + (b - a) * k as f64 / pieces as f64;
                let hi = a + (b - a) * (k + 1) as f64 / pieces as f64;
                for (u, wq) in gauss_legendre_on(nodes, lo, hi) {
                    let d = one + i * u;
                    piece.add(wq / (d * d) * one);
                }
            }
            numeric.add(partial * piece.value());
        }
        a = b;
    }
    let rhs = boundary + i * x * exact.value();
    let rhs_numeric = boundary + i * x * numeric.value();
    let lhs = lhs.value();
    let denom = scale.value().max(f64::MIN_POSITIVE);
    Ok(PartialSummation {
        lhs,
        rhs,
        rhs_numeric,
        deviation: (lhs - rhs).norm() / denom,
        numeric_deviation: (lhs - rhs_numeric).norm() / denom,
        lower,
    })
}

/// Deviation between the two sides of the partial-summation identity.
pub fn partial_summation_check(spec: &EigenvalueList, t: f64, x: f64, nodes: usize) -> Result<f64, SpectrumError> {
    if nodes < 64 {
        return Err(SpectrumError::Invalid(format!("need at least 64 nodes, got {nodes}")));
    }
    Ok(partial_summation(spec, t, x, nodes)?.deviation)
}

/// `2 Re sum_{r_j <= T} X^{1+ir_j}/(1+ir_j)`, valid for `1 <= T < X^{1/2}`.
pub fn explicit_e(spec: &EigenvalueList, t: f64, x: f64) -> Result<f64, SpectrumError> {
    if t < 1.0 || t >= x.sqrt() {
        return Err(SpectrumError::Invalid(format!("need 1 <= T < X^(1/2), got T = {t}, X = {x}")));
    }
    Ok(explicit_e_unchecked(spec, t, x))
}

fn explicit_e_unchecked(spec: &EigenvalueList, t: f64, x: f64) -> f64 {
    let mut acc = Neumaier::new();
    for (r, w) in spec.up_to(t) {
        let v = x * x_pow_i(x, r) / Complex64::new(1.0, r);
        acc.add(2.0 * w * v.re);
    }
    acc.value()
}

/// Composite Gauss-Legendre rule on `[V, V+Y]` with sub-panels sized for the oscillation.
fn window_rule(v: f64, y: f64, r_max: f64, nodes: usize) -> Vec<(f64, f64)> {
    // each panel advances the fastest phase r log X by less than 0.5
    let phase = r_max * (1.0 + y / v).ln();
    let panels = ((phase / 0.5).ceil() as usize).max(1);
    let mut rule = Vec::with_capacity(panels * nodes);
    for k in 0..panels {
        let a = v + y * k as f64 / panels as f64;
        let b = v + y * (k + 1) as f64 / panels as f64;
        rule.extend(gauss_legendre_on(nodes, a, b));
    }
    rule
}

fn mean_over_window(rule: &[(f64, f64)], y: f64, f: impl Fn(f64) -> f64 + Sync) -> f64 {
    let values: Vec<f64> = rule.par_iter().map(|&(x, w)| w * f(x)).collect();
    let mut acc = Neumaier::new();
    acc.extend(values);
    acc.value() / y
}

fn check_moment_window(t: f64, v: f64, y: f64) -> Result<(), SpectrumError> {
    if !(y >= 1.0 && v >= y) {
        return Err(SpectrumError::Invalid(format!("need V >= Y >= 1, got V = {v}, Y = {y}")));
    }
    if t > v.sqrt() {
        return Err(SpectrumError::Invalid(format!("need T <= V^(1/2), got T = {t}")));
    }
    Ok(())
}

/// `(1/Y) int_V^{V+Y} |S(T, X)|^2 dX` by composite Gauss-Legendre with `nodes` per panel.
pub fn second_moment_s(spec: &EigenvalueList, t: f64, v: f64, y: f64, nodes: usize) -> Result<f64, SpectrumError> {
    check_moment_window(t, v, y)?;
    let r_max = spec.up_to(t).last().map_or(0.0, |(r, _)| r);
    let rule = window_rule(v, y, r_max, nodes.max(1));
    Ok(mean_over_window(&rule, y, |x| sharp_sum(spec, t, x).norm_sqr()))
}

/// The same moment from `int X^{i delta} dX = [X^{1+i delta}/(1+i delta)]` over all pairs.
pub fn second_moment_s_closed(spec: &EigenvalueList, t: f64, v: f64, y: f64) -> Result<f64, SpectrumError> {
    check_moment_window(t, v, y)?;
    let inside: Vec<(f64, f64)> = spec.up_to(t).collect();
    let (lv, lw) = (v.ln(), (v + y).ln());
    let rows: Vec<f64> = (0..inside.len())
        .into_par_iter()
        .map(|j| {
            let (rj, wj) = inside[j];
            let mut acc = Neumaier::new();
            // diagonal once, each off-diagonal pair twice through its real part
            acc.add(wj * wj * y);
            for &(rk, wk) in &inside[j + 1..] {
                let d = rj - rk;
                let denom = Complex64::new(1.0, d);
                let hi = (v + y) * Complex64::from_polar(1.0, d * lw) / denom;
                let lo = v * Complex64::from_polar(1.0, d * lv) / denom;
                acc.add(2.0 * wj * wk * (hi - lo).re);
            }
            acc.value()
        })
        .collect();
    let mut total = Neumaier::new();
    total.extend(rows);
    Ok(total.value() / y)
}

/// `V^{1/6} Y^{1/3}`.
pub fn balanced_t(v: f64, y: f64) -> f64 {
    v.powf(1.0 / 6.0) * y.powf(1.0 / 3.0)
}

/// `(1/Y) int_V^{V+Y} |explicit_e(T, X)|^2 dX`; `t = None` selects the balanced `T`.
pub fn second_moment_e(
    spec: &EigenvalueList,
    t: Option<f64>,
    v: f64,
    y: f64,
    nodes: usize,
) -> Result<f64, SpectrumError> {
    let t = t.unwrap_or_else(|| balanced_t(v, y));
    if !(y >= 1.0 && v >= y) {
        return Err(SpectrumError::Invalid(format!("need V >= Y >= 1, got V = {v}, Y = {y}")));
    }
    if t < 1.0 || t > v.sqrt() {
        return Err(SpectrumError::Invalid(format!("need 1 <= T <= V^(1/2), got T = {t}")));
    }
    let r_max = spec.up_to(t).last().map_or(0.0, |(r, _)| r);
    let rule = window_rule(v, y, r_max, nodes.max(1));
    Ok(mean_over_window(&rule, y, |x| explicit_e_unchecked(spec, t, x).powi(2)))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
