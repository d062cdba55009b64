//! Scalar fields used throughout the crate.
//!
//! Every algorithm is generic over [`Scalar`]. Exact arithmetic uses
//! arbitrary precision rationals; approximate arithmetic uses `f64` with an
//! explicit tolerance passed alongside.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational number.
pub type Rational = num_rational::BigRational;

/// Default tolerance for approximate mode.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Approx,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Approx => "approx",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "exact" => Ok(Mode::Exact),
            "approx" => Ok(Mode::Approx),
            _ => Err(()),
        }
    }
}

/// Three-way sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// A field in which the algorithms run.
///
/// For exact scalars `eps` arguments are ignored.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `n / d`, `d != 0`.
    fn from_frac(n: i64, d: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Nearest representable value; exact scalars convert `v` exactly.
    fn from_f64(v: f64) -> Self;
    fn sign(&self, eps: f64) -> Sign;
    /// Total order used for deterministic containers, not for tolerance tests.
    fn total_cmp(&self, other: &Self) -> Ordering;

    fn abs(&self) -> Self {
        if self.sign(0.0) == Sign::Negative {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn is_zero_eps(&self, eps: f64) -> bool {
        self.sign(eps) == Sign::Zero
    }

    fn is_pos(&self, eps: f64) -> bool {
        self.sign(eps) == Sign::Positive
    }

    fn is_neg(&self, eps: f64) -> bool {
        self.sign(eps) == Sign::Negative
    }

    /// Sign of `self - other` with tolerance.
    fn cmp_eps(&self, other: &Self, eps: f64) -> Sign {
        (self.clone() - other.clone()).sign(eps)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_frac(n: i64, d: i64) -> Self {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).unwrap_or_else(Zero::zero)
    }
    fn sign(&self, _eps: f64) -> Sign {
        if self.is_zero() {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const MODE: Mode = Mode::Approx;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_frac(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn sign(&self, eps: f64) -> Sign {
        if *self > eps {
            Sign::Positive
        } else if *self < -eps {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
    fn abs(&self) -> Self {
        libm::fabs(*self)
    }
}

/// Converts a rational to the nearest `f64`, robust to huge numerators and
/// denominators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both to about 60 significant bits.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    let e = (shift_n - shift_d) as i32;
    libm::ldexp(n / d, e)
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"-0.25"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut digits = alloc::string::String::from(int_part);
    digits.push_str(frac_part);
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = Rational::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Formats a rational as `"p/q"` or `"p"`.
pub fn format_rational(r: &Rational) -> alloc::string::String {
    use alloc::string::ToString;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}
