//! Exact arithmetic in the Gaussian integers.
//!
//! Components are `i64` with checked arithmetic; overflow panics with a
//! descriptive message from the operator impls and surfaces as
//! [`RingError::Overflow`] from the fallible helpers. Desk-scale moduli stay
//! far below the overflow boundary (`N(c) <= 1e8`).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("{a} is not invertible modulo {c}")]
    NotInvertible { a: GaussianInt, c: GaussianInt },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("gaussian integer arithmetic overflowed")]
    Overflow,
    #[error("cannot parse gaussian integer from {0:?}")]
    Parse(String),
}

/// An element `re + im*i` of Z[i].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

/// The four units, in the order `1, i, -1, -i`.
pub const UNITS: [GaussianInt; 4] = [
    GaussianInt { re: 1, im: 0 },
    GaussianInt { re: 0, im: 1 },
    GaussianInt { re: -1, im: 0 },
    GaussianInt { re: 0, im: -1 },
];

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        matches!((self.re.abs(), self.im.abs()), (1, 0) | (0, 1))
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// `re^2 + im^2`. Panics on overflow; see [`try_norm`](Self::try_norm).
    pub fn norm(self) -> i64 {
        self.try_norm().expect("gaussian norm overflowed i64")
    }

    pub fn try_norm(self) -> Result<i64, RingError> {
        let re2 = self.re.checked_mul(self.re).ok_or(RingError::Overflow)?;
        let im2 = self.im.checked_mul(self.im).ok_or(RingError::Overflow)?;
        re2.checked_add(im2).ok_or(RingError::Overflow)
    }

    pub fn abs(self) -> f64 {
        (self.norm() as f64).sqrt()
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    /// Height used by the matrix enumerations: `max(|re|, |im|)`.
    pub fn height(self) -> i64 {
        self.re.abs().max(self.im.abs())
    }

    /// The unique associate with `re > 0, im >= 0` (zero maps to zero).
    pub fn canonical(self) -> Self {
        self.canonical_with_unit().0
    }

    /// Canonical associate together with the unit `u` such that `self = u * canonical`.
    pub fn canonical_with_unit(self) -> (Self, Self) {
        if self.is_zero() {
            return (self, Self::ONE);
        }
        let mut z = self;
        // z = u * w  <=>  w = conj(u) * z
        for u in UNITS {
            if z.re > 0 && z.im >= 0 {
                return (z, u);
            }
            // rotate by -i
            z = Self::new(z.im, -z.re);
        }
        unreachable!("one of the four rotations lies in the canonical quadrant")
    }

    /// Representative of `self` up to sign: first nonzero of (re, im) is positive.
    pub fn sign_normalized(self) -> Self {
        if self.re < 0 || (self.re == 0 && self.im < 0) {
            -self
        } else {
            self
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, RingError> {
        Ok(Self::new(
            self.re.checked_add(rhs.re).ok_or(RingError::Overflow)?,
            self.im.checked_add(rhs.im).ok_or(RingError::Overflow)?,
        ))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, RingError> {
        Ok(Self::new(
            self.re.checked_sub(rhs.re).ok_or(RingError::Overflow)?,
            self.im.checked_sub(rhs.im).ok_or(RingError::Overflow)?,
        ))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, RingError> {
        let (a, b) = (self.re as i128, self.im as i128);
        let (c, d) = (rhs.re as i128, rhs.im as i128);
        let re = i64::try_from(a * c - b * d).map_err(|_| RingError::Overflow)?;
        let im = i64::try_from(a * d + b * c).map_err(|_| RingError::Overflow)?;
        Ok(Self::new(re, im))
    }

    /// Quotient rounded to the nearest lattice point (ties toward +inf).
    pub fn div_nearest(self, d: Self) -> Self {
        let n = d.norm() as i128;
        let w_re = self.re as i128 * d.re as i128 + self.im as i128 * d.im as i128;
        let w_im = self.im as i128 * d.re as i128 - self.re as i128 * d.im as i128;
        let round = |x: i128| (2 * x + n).div_euclid(2 * n) as i64;
        Self::new(round(w_re), round(w_im))
    }

    /// True iff `d` divides `self` (zero divides only zero).
    pub fn is_divisible_by(self, d: Self) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        let n = d.norm() as i128;
        let w_re = self.re as i128 * d.re as i128 + self.im as i128 * d.im as i128;
        let w_im = self.im as i128 * d.re as i128 - self.re as i128 * d.im as i128;
        w_re % n == 0 && w_im % n == 0
    }

    /// Exact quotient; `None` if `d` does not divide `self`.
    pub fn exact_div(self, d: Self) -> Option<Self> {
        if d.is_zero() || !self.is_divisible_by(d) {
            return None;
        }
        let n = d.norm() as i128;
        let w_re = self.re as i128 * d.re as i128 + self.im as i128 * d.im as i128;
        let w_im = self.im as i128 * d.re as i128 - self.re as i128 * d.im as i128;
        Some(Self::new((w_re / n) as i64, (w_im / n) as i64))
    }

    pub fn pow(self, k: u32) -> Self {
        (0..k).fold(Self::ONE, |acc, _| acc * self)
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("gaussian integer overflow")
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("gaussian integer overflow")
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("gaussian integer overflow")
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl From<i64> for GaussianInt {
    fn from(re: i64) -> Self {
        Self::new(re, 0)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, im: i64| match im {
            1 => write!(f, "i"),
            -1 => write!(f, "-i"),
            _ => write!(f, "{im}i"),
        };
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => imag(f, im),
            (re, im) => {
                write!(f, "{re}")?;
                if im > 0 {
                    write!(f, "+")?;
                }
                imag(f, im)
            }
        }
    }
}

impl FromStr for GaussianInt {
    type Err = RingError;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with an optional sign on `a`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RingError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let coeff = |c: &str| -> Result<i64, RingError> {
            match c {
                "" | "+" => Ok(1),
                "-" => Ok(-1),
                _ => c.parse::<i64>().map_err(|_| err()),
            }
        };
        let Some(body) = t.strip_suffix('i') else {
            return t.parse::<i64>().map(Self::from).map_err(|_| err());
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            None => Ok(Self::new(0, coeff(body)?)),
            Some(k) => {
                let re = body[..k].parse::<i64>().map_err(|_| err())?;
                Ok(Self::new(re, coeff(&body[k..])?))
            }
        }
    }
}

impl Serialize for GaussianInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Orders by norm, then lexicographically by `(re, im)`.
pub fn norm_order(a: &GaussianInt, b: &GaussianInt) -> Ordering {
    a.norm().cmp(&b.norm()).then_with(|| a.cmp(b))
}

/// Greatest common divisor in canonical associate form.
pub fn gcd(a: GaussianInt, b: GaussianInt) -> Result<GaussianInt, RingError> {
    if a.is_zero() && b.is_zero() {
        return Err(RingError::BothZero);
    }
    let (mut x, mut y) = (a, b);
    while !y.is_zero() {
        let q = x.div_nearest(y);
        let r = x - q * y;
        x = y;
        y = r;
    }
    Ok(x.canonical())
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g` (g not normalized).
fn xgcd(a: GaussianInt, b: GaussianInt) -> (GaussianInt, GaussianInt, GaussianInt) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (GaussianInt::ONE, GaussianInt::ZERO);
    let (mut t0, mut t1) = (GaussianInt::ZERO, GaussianInt::ONE);
    while !r1.is_zero() {
        let q = r0.div_nearest(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// Reduces `z` into the canonical residue box of `c`.
///
/// With `g = gcd(re c, im c)` the ideal `(c)` meets `Z` in `(N(c)/g) Z` and its
/// imaginary parts form `g Z`, so every class has a unique representative
/// `x + yi` with `0 <= x < N(c)/g` and `0 <= y < g`.
pub fn reduce_mod(z: GaussianInt, c: GaussianInt) -> Result<GaussianInt, RingError> {
    if c.is_zero() {
        return Err(RingError::ZeroModulus);
    }
    let (a, b) = (c.re as i128, c.im as i128);
    // s*b + t*a = g, so s*c + t*(ic) has imaginary part g
    let (g, s, t) = integer_xgcd(b, a);
    let n_over_g = (a * a + b * b) / g;
    let w_re = s * a - t * b;
    let k = (z.im as i128).div_euclid(g);
    let re = (z.re as i128 - k * w_re).rem_euclid(n_over_g);
    let im = z.im as i128 - k * g;
    Ok(GaussianInt::new(
        i64::try_from(re).map_err(|_| RingError::Overflow)?,
        i64::try_from(im).map_err(|_| RingError::Overflow)?,
    ))
}

pub fn congruent(a: GaussianInt, b: GaussianInt, c: GaussianInt) -> Result<bool, RingError> {
    Ok(reduce_mod(a.checked_sub(b)?, c)?.is_zero())
}

/// Inverse of `a` modulo `(c)`, reduced to the canonical residue system.
pub fn mod_inverse(a: GaussianInt, c: GaussianInt) -> Result<GaussianInt, RingError> {
    if c.is_zero() {
        return Err(RingError::ZeroModulus);
    }
    let (g, s, _) = xgcd(reduce_mod(a, c)?, c);
    if !g.is_unit() {
        return Err(RingError::NotInvertible { a, c });
    }
    // s*a = g (mod c), g a unit with inverse conj(g)
    reduce_mod(s * g.conj(), c)
}

/// A complete residue system modulo `(c)`: the box of [`reduce_mod`], sorted by `(re, im)`.
pub fn residues(c: GaussianInt) -> Result<Vec<GaussianInt>, RingError> {
    if c.is_zero() {
        return Err(RingError::ZeroModulus);
    }
    let n = c.try_norm()?;
    let g = integer_gcd(c.re.unsigned_abs(), c.im.unsigned_abs()) as i64;
    let mut out = Vec::with_capacity(n as usize);
    for x in 0..n / g {
        for y in 0..g {
            out.push(GaussianInt::new(x, y));
        }
    }
    Ok(out)
}

/// Residues coprime to `c`, in the same order as [`residues`].
pub fn unit_residues(c: GaussianInt) -> Result<Vec<GaussianInt>, RingError> {
    let all = residues(c)?;
    if c.is_unit() {
        return Ok(all);
    }
    Ok(all
        .into_iter()
        .filter(|&a| !a.is_zero() && gcd(a, c).map(|g| g.is_unit()).unwrap_or(false))
        .collect())
}

fn integer_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) > 0` (not both zero).
fn integer_xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn integer_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Prime factorization `c = unit * prod p^e` with canonical primes sorted by norm order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: GaussianInt,
    pub primes: Vec<(GaussianInt, u32)>,
}

impl Factorization {
    /// Pairwise-coprime prime-power parts, the unit folded into the first part.
    pub fn coprime_parts(&self) -> Vec<GaussianInt> {
        let mut parts: Vec<GaussianInt> = self.primes.iter().map(|&(p, e)| p.pow(e)).collect();
        match parts.first_mut() {
            Some(first) => *first = *first * self.unit,
            None => parts.push(self.unit),
        }
        parts
    }

    pub fn product(&self) -> GaussianInt {
        self.primes
            .iter()
            .fold(self.unit, |acc, &(p, e)| acc * p.pow(e))
    }
}

/// Factors a nonzero Gaussian integer into canonical primes.
pub fn factor(c: GaussianInt) -> Result<Factorization, RingError> {
    if c.is_zero() {
        return Err(RingError::ZeroArgument);
    }
    let mut rest = c;
    let mut primes = Vec::new();
    for (p, e) in factor_u64(c.norm() as u64) {
        let candidates: Vec<GaussianInt> = if p == 2 {
            vec![GaussianInt::new(1, 1)]
        } else if p % 4 == 3 {
            vec![GaussianInt::new(p as i64, 0)]
        } else {
            let (a, b) = two_squares(p);
            let pi = GaussianInt::new(a as i64, b as i64).canonical();
            let pi_bar = pi.conj().canonical();
            vec![pi, pi_bar]
        };
        let _ = e;
        for q in candidates {
            let mut k = 0;
            while let Some(next) = rest.exact_div(q) {
                rest = next;
                k += 1;
            }
            if k > 0 {
                primes.push((q, k));
            }
        }
    }
    debug_assert!(rest.is_unit());
    primes.sort_by(|a, b| norm_order(&a.0, &b.0));
    Ok(Factorization { unit: rest, primes })
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `a^2 + b^2 = p` for a prime `p = 1 mod 4`.
fn two_squares(p: u64) -> (u64, u64) {
    for a in 1..=integer_sqrt(p) {
        let rest = p - a * a;
        let b = integer_sqrt(rest);
        if b * b == rest {
            return (a, b);
        }
    }
    unreachable!("prime {p} = 1 mod 4 is a sum of two squares")
}

/// Counting convention for `d(c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DivisorConvention {
    /// One divisor per associate class.
    #[default]
    UpToUnits,
    /// Every divisor, so each class counts four times.
    AllAssociates,
}

pub fn divisor_count(c: GaussianInt) -> Result<u64, RingError> {
    divisor_count_with(c, DivisorConvention::UpToUnits)
}

pub fn divisor_count_with(c: GaussianInt, convention: DivisorConvention) -> Result<u64, RingError> {
    let f = factor(c)?;
    let classes: u64 = f.primes.iter().map(|&(_, e)| e as u64 + 1).product();
    Ok(match convention {
        DivisorConvention::UpToUnits => classes,
        DivisorConvention::AllAssociates => 4 * classes,
    })
}

/// Canonical divisors of `c`, sorted by norm order.
pub fn divisors(c: GaussianInt) -> Result<Vec<GaussianInt>, RingError> {
    let f = factor(c)?;
    let mut out = vec![GaussianInt::ONE];
    for &(p, e) in &f.primes {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for &d in &out {
            let mut pk = GaussianInt::ONE;
            for _ in 0..=e {
                next.push((d * pk).canonical());
                pk = pk * p;
            }
        }
        out = next;
    }
    out.sort_by(norm_order);
    Ok(out)
}

/// `sigma_s(n) = sum over divisors d (up to units) of N(d)^s`.
pub fn divisor_sigma(n: GaussianInt, s: Complex64) -> Result<Complex64, RingError> {
    let f = factor(n)?;
    Ok(f.primes
        .iter()
        .map(|&(p, e)| {
            let base = Complex64::new(p.norm() as f64, 0.0).powc(s);
            let mut term = Complex64::new(1.0, 0.0);
            let mut acc = term;
            for _ in 0..e {
                term *= base;
                acc += term;
            }
            acc
        })
        .fold(Complex64::new(1.0, 0.0), |a, b| a * b))
}

/// Gaussian Euler totient `#(Z[i]/(c))^x`.
pub fn totient(c: GaussianInt) -> Result<u64, RingError> {
    let f = factor(c)?;
    Ok(f.primes
        .iter()
        .map(|&(p, e)| {
            let q = p.norm() as u64;
            q.pow(e - 1) * (q - 1)
        })
        .product())
}

/// `|gcd(n, m, c)|` as a real number.
pub fn gcd_triple_abs(n: GaussianInt, m: GaussianInt, c: GaussianInt) -> Result<f64, RingError> {
    if c.is_zero() {
        return Err(RingError::ZeroModulus);
    }
    let g = match gcd(n, m) {
        Ok(g) => gcd(g, c)?,
        Err(_) => c.canonical(),
    };
    Ok(g.abs())
}

/// Number of `(a, b)` in Z^2 with `a^2 + b^2 = k`, via `4 (d_1(k) - d_3(k))`.
pub fn r2_count(k: u64) -> u64 {
    if k == 0 {
        return 1;
    }
    let mut d1 = 0i64;
    let mut d3 = 0i64;
    let mut d = 1;
    while d * d <= k {
        if k % d == 0 {
            for q in [d, k / d] {
                match q % 4 {
                    1 => d1 += 1,
                    3 => d3 += 1,
                    _ => {}
                }
            }
            if d * d == k {
                // counted twice above
                match d % 4 {
                    1 => d1 -= 1,
                    3 => d3 -= 1,
                    _ => {}
                }
            }
        }
        d += 1;
    }
    (4 * (d1 - d3)) as u64
}

/// Standard inner product on R^2 identified with C.
pub fn inner_product(x: Complex64, y: Complex64) -> f64 {
    x.re * y.re + x.im * y.im
}

/// Canonical associates `c` with `0 < N(c) <= bound`, ordered by norm then `(re, im)`.
pub fn canonical_moduli(bound: i64) -> Vec<GaussianInt> {
    canonical_moduli_in(0, bound)
}

/// Canonical associates with `lower < N(c) <= upper`, in norm order.
pub fn canonical_moduli_in(lower: i64, upper: i64) -> Vec<GaussianInt> {
    if upper < 1 || upper <= lower {
        return Vec::new();
    }
    let side = integer_sqrt(upper as u64) as i64;
    let mut out = Vec::new();
    for re in 1..=side {
        for im in 0..=side {
            let n = re * re + im * im;
            if n > lower && n <= upper {
                out.push(GaussianInt::new(re, im));
            }
        }
    }
    out.sort_by(norm_order);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn norms() {
        assert_eq!(GaussianInt::ZERO.norm(), 0);
        assert_eq!(g(1, 1).norm(), 2);
        assert_eq!(g(2, 1).norm(), 5);
        assert_eq!(g(i64::MAX, 1).try_norm(), Err(RingError::Overflow));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(g(1, 1), g(2, 0)).unwrap(), g(1, 1));
        assert_eq!(gcd(g(2, 1), g(2, -1)).unwrap(), g(1, 0));
        assert_eq!(gcd(g(3, 0), GaussianInt::ZERO).unwrap(), g(3, 0));
        assert_eq!(gcd(GaussianInt::ZERO, GaussianInt::ZERO), Err(RingError::BothZero));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(GaussianInt::I, g(2, 0)).unwrap(), GaussianInt::I);
        assert_eq!(mod_inverse(g(1, 1), g(3, 0)).unwrap(), g(2, 1));
        assert_eq!(mod_inverse(g(1, 0), g(7, 3)).unwrap(), g(1, 0));
        assert_eq!(reduce_mod(g(-3, 7), g(2, 0)).unwrap(), g(1, 1));
        assert_eq!(reduce_mod(g(5, 0), g(1, 2)).unwrap(), g(0, 0));
        assert_eq!(mod_inverse(g(1, 0), GaussianInt::ZERO), Err(RingError::ZeroModulus));
        assert!(matches!(
            mod_inverse(g(1, 1), g(2, 0)),
            Err(RingError::NotInvertible { .. })
        ));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residues(g(1, 1)).unwrap(), vec![g(0, 0), g(1, 0)]);
        assert_eq!(residues(g(2, 0)).unwrap(), vec![g(0, 0), g(0, 1), g(1, 0), g(1, 1)]);
        assert_eq!(residues(GaussianInt::ONE).unwrap(), vec![GaussianInt::ZERO]);
        assert_eq!(residues(GaussianInt::ZERO), Err(RingError::ZeroModulus));
    }

    #[test]
    fn unit_residue_examples() {
        assert_eq!(unit_residues(g(1, 1)).unwrap(), vec![g(1, 0)]);
        assert_eq!(unit_residues(g(2, 0)).unwrap(), vec![g(0, 1), g(1, 0)]);
        assert_eq!(unit_residues(g(3, 0)).unwrap().len(), 8);
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisor_count(GaussianInt::ONE).unwrap(), 1);
        assert_eq!(divisor_count(g(1, 1)).unwrap(), 2);
        assert_eq!(divisor_count(g(2, 0)).unwrap(), 3);
        assert_eq!(
            divisor_count_with(g(2, 0), DivisorConvention::AllAssociates).unwrap(),
            12
        );
        assert_eq!(divisors(g(2, 0)).unwrap(), vec![g(1, 0), g(1, 1), g(2, 0)]);
        assert_eq!(divisor_count(GaussianInt::ZERO), Err(RingError::ZeroArgument));
    }

    #[test]
    fn sigma_examples() {
        let s0 = divisor_sigma(g(1, 1), Complex64::new(0.0, 0.0)).unwrap();
        assert!((s0 - 2.0).norm() < 1e-15);
        let s1 = divisor_sigma(g(1, 1), Complex64::new(1.0, 0.0)).unwrap();
        assert!((s1 - 3.0).norm() < 1e-15);
        let s = divisor_sigma(GaussianInt::ONE, Complex64::new(0.3, -2.0)).unwrap();
        assert!((s - 1.0).norm() < 1e-15);
    }

    #[test]
    fn gcd_triple_examples() {
        let one = GaussianInt::ONE;
        assert_eq!(gcd_triple_abs(one, one, g(5, 2)).unwrap(), 1.0);
        assert_eq!(gcd_triple_abs(g(2, 0), g(2, 0), g(2, 0)).unwrap(), 2.0);
        let v = gcd_triple_abs(g(1, 1), g(1, -1), g(2, 0)).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn r2_examples() {
        assert_eq!(r2_count(0), 1);
        assert_eq!(r2_count(1), 4);
        assert_eq!(r2_count(5), 8);
        assert_eq!(r2_count(3), 0);
        assert_eq!(r2_count(25), 12);
    }

    #[test]
    fn inner_product_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(inner_product(one, Complex64::i()), 0.0);
        assert_eq!(inner_product(one, Complex64::new(0.5, -0.5)), 0.5);
        let z = Complex64::new(3.0, -4.0);
        assert_eq!(inner_product(z, z), 25.0);
    }

    #[test]
    fn parse_and_display() {
        for (s, z) in [
            ("0", g(0, 0)),
            ("3", g(3, 0)),
            ("-7", g(-7, 0)),
            ("i", g(0, 1)),
            ("-i", g(0, -1)),
            ("+i", g(0, 1)),
            ("2i", g(0, 2)),
            ("1+i", g(1, 1)),
            ("-1+i", g(-1, 1)),
            ("2-3i", g(2, -3)),
            ("-4-i", g(-4, -1)),
            (" 5 + 2i ", g(5, 2)),
        ] {
            assert_eq!(s.parse::<GaussianInt>().unwrap(), z, "{s}");
        }
        for z in [g(0, 0), g(3, 0), g(0, 1), g(0, -1), g(1, 1), g(2, -3), g(-4, -1), g(0, 5)] {
            assert_eq!(z.to_string().parse::<GaussianInt>().unwrap(), z);
        }
        assert_eq!(g(1, -1).to_string(), "1-i");
        for bad in ["", "x", "1+", "1+2j", "i1", "++i"] {
            assert!(bad.parse::<GaussianInt>().is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_associates() {
        for z in [g(3, 2), g(-2, 3), g(-3, -2), g(2, -3)] {
            assert_eq!(z.canonical(), g(3, 2));
            let (w, u) = z.canonical_with_unit();
            assert_eq!(u * w, z);
        }
        assert_eq!(g(0, 4).canonical(), g(4, 0));
    }

    #[test]
    fn factorization_reassembles() {
        for z in [g(2, 0), g(6, 0), g(3, 4), g(-12, 5), g(0, 9), g(1, 0), g(0, -1), g(15, 20)] {
            let f = factor(z).unwrap();
            assert_eq!(f.product(), z, "{z}");
            let parts = f.coprime_parts();
            let prod = parts.iter().fold(GaussianInt::ONE, |a, &b| a * b);
            assert_eq!(prod, z);
        }
    }
}
