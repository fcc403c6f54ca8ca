//! Numeric backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two backends are
//! provided: [`Rational`] (arbitrary-precision, exact comparisons) and `f64`
//! (tolerance-based coincidence). The backend is fixed per scenario.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number with big-integer numerator and denominator.
pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    Rational,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float => "float",
        }
    }

    pub fn parse(s: &str) -> Option<Backend> {
        match s {
            "rational" | "exact" => Some(Backend::Rational),
            "float" | "f64" => Some(Backend::Float),
            _ => None,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Real-number abstraction shared by both backends.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// `num / den`; panics on a zero denominator.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact conversion for the rational backend; `None` for non-finite input.
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// Lossless conversion out of the exact backend (rounded for floats).
    fn from_rational(q: &Rational) -> Self;
    fn to_rational(&self) -> Option<Rational>;

    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;

    /// Default absolute tolerance for position coincidence.
    fn default_tolerance() -> Self;
    /// Default tolerance used to merge nearly simultaneous event times.
    fn default_time_tolerance() -> Self;

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Rational
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn powi(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    /// `|a - b| <= tol`; exact equality when `tol` is zero.
    fn within(&self, other: &Self, tol: &Self) -> bool {
        if tol.is_zero() {
            self == other
        } else {
            (self.clone() - other.clone()).abs() <= *tol
        }
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn to_rational(&self) -> Option<Rational> {
        rational_from_f64(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        libm::fabs(*self)
    }
    fn default_tolerance() -> Self {
        1e-9
    }
    fn default_time_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(x: f64) -> Option<Self> {
        rational_from_f64(x)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn default_tolerance() -> Self {
        Zero::zero()
    }
    fn default_time_tolerance() -> Self {
        Zero::zero()
    }
}

/// Exact value of a finite double.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(<Rational as Zero>::zero());
    }
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let mut num = BigInt::from(mantissa);
    if negative {
        num = -num;
    }
    let q = if exp >= 0 {
        Rational::from_integer(num << (exp as usize))
    } else {
        Rational::new(num, BigInt::one() << ((-exp) as usize))
    };
    Some(q)
}

/// Nearest double (up to a final rounding step) to a rational value.
pub fn rational_to_f64(q: &Rational) -> f64 {
    let numer = q.numer();
    let denom = q.denom();
    if let (Some(n), Some(d)) = (numer.to_i64(), denom.to_i64()) {
        if n.unsigned_abs() < (1u64 << 53) && d < (1i64 << 53) {
            return n as f64 / d as f64;
        }
    }
    // Scale to keep ~64 significant bits in the quotient.
    let nb = numer.bits() as i64;
    let db = denom.bits() as i64;
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 {
        (numer.clone() << (shift as usize)) / denom
    } else {
        numer / (denom.clone() << ((-shift) as usize))
    };
    let mantissa = scaled.to_f64().unwrap_or(f64::NAN);
    libm::scalbn(mantissa, -(shift as i32))
}

/// Parses `"p/q"`, an integer, or a decimal literal (`"0.25"`, `"1e-3"`) into
/// an exact rational.
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
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut all = String::from(int_part);
    all.push_str(frac_part);
    let num: BigInt = all.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if sign < 0 { -q } else { q })
}

/// Canonical `"p/q"` text with `q > 0` and `gcd(p, q) = 1`.
pub fn format_rational(q: &Rational) -> String {
    use alloc::format;
    // `Ratio` is kept reduced with a positive denominator.
    debug_assert!(q.denom().sign() == Sign::Plus);
    debug_assert!(q.numer().gcd(q.denom()).is_one() || q.numer().is_zero());
    format!("{}/{}", q.numer(), q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-7"), Some(q(-7, 1)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("1e-3"), Some(q(1, 1000)));
        assert_eq!(parse_rational("-2.5E1"), Some(q(-25, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn format_is_reduced() {
        assert_eq!(format_rational(&q(6, -4)), "-3/2");
        assert_eq!(format_rational(&q(0, 5)), "0/1");
        assert_eq!(format_rational(&q(4, 1)), "4/1");
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for x in [0.1, -3.75, 1e-300, 5e-324, 123456789.125, 1e300] {
            let r = rational_from_f64(x).unwrap();
            assert_eq!(rational_to_f64(&r), x);
        }
        assert_eq!(rational_from_f64(0.5), Some(q(1, 2)));
        assert_eq!(rational_from_f64(f64::NAN), None);
    }

    #[test]
    fn big_rational_to_f64() {
        let third = q(1, 3);
        let big = third.clone() * Rational::from_integer(BigInt::one() << 200usize)
            / Rational::from_integer(BigInt::one() << 200usize);
        assert!((rational_to_f64(&big) - 1.0 / 3.0).abs() < 1e-16);
        let huge = Rational::new(BigInt::one() << 300usize, BigInt::from(3) << 100usize);
        let expected = 2f64.powi(200) / 3.0;
        assert!((rational_to_f64(&huge) / expected - 1.0).abs() < 1e-15);
    }

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(q(1, 2).powi(10), q(1, 1024));
        assert_eq!(q(3, 1).powi(0), q(1, 1));
        assert_eq!(2.0f64.powi(5), 32.0);
    }

    #[test]
    fn within_is_exact_for_zero_tolerance() {
        assert!(q(1, 3).within(&q(2, 6), &<Rational as Zero>::zero()));
        assert!(!1.0f64.within(&(1.0 + 1e-15), &0.0));
        assert!(1.0f64.within(&(1.0 + 1e-15), &1e-12));
    }
}
