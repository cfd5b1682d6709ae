//! Kloosterman sums over the Gaussian integers.
//!
//! `S(n, m, c) = sum over a in (Z[i]/(c))^x of e(<m, a/c>) e(<n, a*/c>)`, with
//! `<x, y> = Re(x conj y)`. Writing `A = conj m`, `B = conj n` every phase is
//! `Re((A a + B a*) conj c) / N(c)`, an exact rational with denominator `N(c)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::gaussian_ring::{
    canonical_moduli, divisor_count_with, factor, gcd, gcd_triple_abs, mod_inverse, reduce_mod,
    unit_residues, DivisorConvention, GaussianInt, RingError,
};
use crate::summation::ComplexNeumaier;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KloostermanError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("parts {0} and {1} are not coprime")]
    NonCoprimeParts(GaussianInt, GaussianInt),
    #[error("parts multiply to {product}, expected {c}")]
    PartsMismatch { product: GaussianInt, c: GaussianInt },
}

/// `sum over units a mod c of e(Re((A a + B a*) / c))`.
fn character_sum(a_coef: GaussianInt, b_coef: GaussianInt, c: GaussianInt) -> Result<Complex64, RingError> {
    let n = c.try_norm()? as i128;
    let cb = c.conj();
    let phase = |x: GaussianInt| -> i128 {
        // Re(x * conj c) mod N(c)
        (x.re as i128 * cb.re as i128 - x.im as i128 * cb.im as i128).rem_euclid(n)
    };
    let mut acc = ComplexNeumaier::new();
    for a in unit_residues(c)? {
        let a_inv = mod_inverse(a, c)?;
        let x = reduce_mod(a_coef.checked_mul(a)?, c)?;
        let y = reduce_mod(b_coef.checked_mul(a_inv)?, c)?;
        let k = (phase(x) + phase(y)) % n;
        let theta = TAU * (k as f64) / (n as f64);
        acc.add(Complex64::new(theta.cos(), theta.sin()));
    }
    Ok(acc.value())
}

/// Direct evaluation, `O(N(c))` terms.
pub fn kloosterman_sum(n: GaussianInt, m: GaussianInt, c: GaussianInt) -> Result<Complex64, KloostermanError> {
    if c.is_zero() {
        return Err(RingError::ZeroModulus.into());
    }
    Ok(character_sum(m.conj(), n.conj(), c)?)
}

/// Evaluation through the prime-power factorization of `c`.
pub fn kloosterman_sum_fast(n: GaussianInt, m: GaussianInt, c: GaussianInt) -> Result<Complex64, KloostermanError> {
    if c.is_zero() {
        return Err(RingError::ZeroModulus.into());
    }
    let parts = factor(c)?.coprime_parts();
    kloosterman_sum_with_parts(n, m, c, &parts)
}

/// Twisted-multiplicative evaluation over caller-supplied pairwise-coprime parts.
///
/// For `c = c1 * R` with `(c1, R) = 1`,
/// `S_c(A, B) = S_{c1}(A R', B R') * S_R(A c1', B c1')` where `R'` inverts `R`
/// modulo `c1` and `c1'` inverts `c1` modulo `R`.
pub fn kloosterman_sum_with_parts(
    n: GaussianInt,
    m: GaussianInt,
    c: GaussianInt,
    parts: &[GaussianInt],
) -> Result<Complex64, KloostermanError> {
    if c.is_zero() || parts.iter().any(|p| p.is_zero()) {
        return Err(RingError::ZeroModulus.into());
    }
    let product = parts.iter().try_fold(GaussianInt::ONE, |acc, &p| acc.checked_mul(p))?;
    if product != c {
        return Err(KloostermanError::PartsMismatch { product, c });
    }
    for (i, &p) in parts.iter().enumerate() {
        for &q in &parts[i + 1..] {
            if !gcd(p, q)?.is_unit() {
                return Err(KloostermanError::NonCoprimeParts(p, q));
            }
        }
    }
    split_sum(m.conj(), n.conj(), parts)
}

fn split_sum(a_coef: GaussianInt, b_coef: GaussianInt, parts: &[GaussianInt]) -> Result<Complex64, KloostermanError> {
    match parts {
        [] => Ok(Complex64::new(1.0, 0.0)),
        [c] => Ok(character_sum(a_coef, b_coef, *c)?),
        [c1, rest @ ..] => {
            let r = rest.iter().fold(GaussianInt::ONE, |acc, &p| acc * p);
            if r.is_unit() {
                return Ok(character_sum(a_coef, b_coef, *c1 * r)?);
            }
            let r_inv = mod_inverse(r, *c1)?;
            let c1_inv = mod_inverse(*c1, r)?;
            let head = character_sum(a_coef * r_inv, b_coef * r_inv, *c1)?;
            let tail = split_sum(a_coef * c1_inv, b_coef * c1_inv, rest)?;
            Ok(head * tail)
        }
    }
}

/// Weil's majorant `|(n, m, c)| d(c) N(c)^{1/2}`; `None` when `n = m = 0`.
pub fn weil_bound(
    n: GaussianInt,
    m: GaussianInt,
    c: GaussianInt,
    convention: DivisorConvention,
) -> Result<Option<f64>, KloostermanError> {
    if n.is_zero() || m.is_zero() {
        return Ok(None);
    }
    let g = gcd_triple_abs(n, m, c)?;
    let d = divisor_count_with(c, convention)? as f64;
    Ok(Some(g * d * c.abs()))
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

fn ser_sig15<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x, 15))
}

fn ser_sig15_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_sig(*v, 15)),
        None => s.serialize_none(),
    }
}

/// One evaluated sum. `imag` is kept for audits and not serialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KloostermanRecord {
    pub n: GaussianInt,
    pub m: GaussianInt,
    pub c: GaussianInt,
    #[serde(serialize_with = "ser_sig15")]
    pub value: f64,
    #[serde(serialize_with = "ser_sig15_opt")]
    pub weil_ratio: Option<f64>,
    #[serde(skip)]
    pub imag: f64,
}

impl KloostermanRecord {
    pub fn compute(
        n: GaussianInt,
        m: GaussianInt,
        c: GaussianInt,
        convention: DivisorConvention,
    ) -> Result<Self, KloostermanError> {
        let s = kloosterman_sum_fast(n, m, c)?;
        let weil_ratio = weil_bound(n, m, c, convention)?.map(|b| s.norm() / b);
        Ok(Self {
            n,
            m,
            c,
            value: s.re,
            weil_ratio,
            imag: s.im,
        })
    }
}

/// One record per canonical `c` with `0 < N(c) <= norm_bound`, in norm order.
pub fn weil_audit(n: GaussianInt, m: GaussianInt, norm_bound: i64) -> Result<Vec<KloostermanRecord>, KloostermanError> {
    weil_audit_with(n, m, norm_bound, DivisorConvention::UpToUnits)
}

pub fn weil_audit_with(
    n: GaussianInt,
    m: GaussianInt,
    norm_bound: i64,
    convention: DivisorConvention,
) -> Result<Vec<KloostermanRecord>, KloostermanError> {
    canonical_moduli(norm_bound)
        .into_par_iter()
        .map(|c| KloostermanRecord::compute(n, m, c, convention))
        .collect()
}

/// Anything that can supply real Kloosterman values, such as a persistent cache.
pub trait KloostermanSource: Sync {
    fn value(&self, n: GaussianInt, m: GaussianInt, c: GaussianInt) -> Result<f64, KloostermanError>;
}

/// Direct evaluation on every call.
#[derive(Debug, Clone, Copy, Default)]
pub struct Naive;

/// Factorized evaluation on every call.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fast;

impl KloostermanSource for Naive {
    fn value(&self, n: GaussianInt, m: GaussianInt, c: GaussianInt) -> Result<f64, KloostermanError> {
        Ok(kloosterman_sum(n, m, c)?.re)
    }
}

impl KloostermanSource for Fast {
    fn value(&self, n: GaussianInt, m: GaussianInt, c: GaussianInt) -> Result<f64, KloostermanError> {
        Ok(kloosterman_sum_fast(n, m, c)?.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn close(a: Complex64, b: f64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn small_moduli() {
        let one = GaussianInt::ONE;
        assert!(close(kloosterman_sum(one, one, one).unwrap(), 1.0));
        assert!(close(kloosterman_sum(one, one, g(1, 1)).unwrap(), 1.0));
        assert!(close(kloosterman_sum(one, one, g(2, 0)).unwrap(), 2.0));
        assert!(kloosterman_sum(one, one, GaussianInt::ZERO).is_err());
    }

    #[test]
    fn six_splits_into_two_and_three() {
        let one = GaussianInt::ONE;
        let naive = kloosterman_sum(one, one, g(6, 0)).unwrap();
        let split = kloosterman_sum_with_parts(one, one, g(6, 0), &[g(2, 0), g(3, 0)]).unwrap();
        assert!((naive - split).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_parts() {
        let one = GaussianInt::ONE;
        assert!(matches!(
            kloosterman_sum_with_parts(one, one, g(4, 0), &[g(2, 0), g(2, 0)]),
            Err(KloostermanError::NonCoprimeParts(..))
        ));
        assert!(matches!(
            kloosterman_sum_with_parts(one, one, g(6, 0), &[g(2, 0), g(5, 0)]),
            Err(KloostermanError::PartsMismatch { .. })
        ));
    }

    #[test]
    fn audit_records() {
        let one = GaussianInt::ONE;
        let recs = weil_audit(one, one, 2).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].weil_ratio, Some(1.0));
        let r = recs[1].weil_ratio.unwrap();
        assert!((r - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn zero_frequencies_have_no_ratio() {
        let rec = KloostermanRecord::compute(GaussianInt::ZERO, GaussianInt::ONE, g(3, 0), DivisorConvention::UpToUnits)
            .unwrap();
        assert_eq!(rec.weil_ratio, None);
        // Ramanujan sum c_(3)(1) = mu(3) = -1
        assert!((rec.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn significant_digit_rounding() {
        assert_eq!(round_sig(1.0 / 3.0, 15), 0.333333333333333);
        assert_eq!(round_sig(-2.0, 15), -2.0);
        assert_eq!(round_sig(0.0, 15), 0.0);
    }
}
