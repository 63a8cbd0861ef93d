//! Scalar fields the calculus is generic over.
//!
//! Exact work runs over [`BigRational`]; numeric work runs over
//! [`Complex64`]. A computation picks one mode and keeps it: conversions
//! only go from exact to floating, never back.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Field element usable as a polynomial coefficient or functional weight.
pub trait Scalar:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// Exact arithmetic (no rounding) when true.
    const EXACT: bool;

    fn from_int(n: i64) -> Self;

    fn to_complex(&self) -> Complex64;

    /// Ratio of two integers.
    fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_int(p) / Self::from_int(q)
    }

    /// Integer power by repeated squaring.
    fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Magnitude as a float, for tolerance checks.
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
}

/// Ordered (real) scalar, used for the deformation parameter and atom locations.
pub trait RealScalar: Scalar + PartialOrd {
    fn floor_int(&self) -> i64;

    fn to_f64(&self) -> f64;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(RealScalar::to_f64(self), 0.0)
    }
}

impl RealScalar for BigRational {
    fn floor_int(&self) -> i64 {
        self.floor()
            .to_integer()
            .to_i64()
            .expect("integer part out of i64 range")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator/denominator individually overflow f64
            let (n, d) = (self.numer(), self.denom());
            let shift = n.bits().max(d.bits()).saturating_sub(1000);
            let n = ToPrimitive::to_f64(&(n >> shift)).unwrap_or(f64::NAN);
            let d = ToPrimitive::to_f64(&(d >> shift)).unwrap_or(f64::NAN);
            n / d
        })
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl RealScalar for f64 {
    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Parse `"p/q"`, an integer, or a terminating decimal into an exact rational.
pub fn parse_rational(src: &str) -> Option<BigRational> {
    let s = src.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// `p/q` rendering (bare integer when q = 1).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Absolute value of a real scalar.
pub fn abs_real<R: RealScalar>(r: &R) -> R {
    if *r < R::zero() {
        -r.clone()
    } else {
        r.clone()
    }
}
