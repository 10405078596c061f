//! Scalar abstraction shared by the exact (rational) and floating code paths.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Ordered field used by the generic series algebra, measures and Thoma
/// parameters. Implemented for `f32`, `f64` and `BigRational`.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn to_float(&self) -> f64;
    /// Nearest representable value; exact for rationals (binary expansion of the float).
    fn from_float(v: f64) -> Self;
    fn from_rational(v: &BigRational) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_bigint(v: &BigInt) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }
    fn to_float(&self) -> f64 {
        *self
    }
    fn from_float(v: f64) -> Self {
        v
    }
    fn from_rational(v: &BigRational) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }
    fn powi(&self, exp: u32) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f32
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::NAN)
    }
    fn to_float(&self) -> f64 {
        *self as f64
    }
    fn from_float(v: f64) -> Self {
        v as f32
    }
    fn from_rational(v: &BigRational) -> Self {
        v.to_f32().unwrap_or(f32::NAN)
    }
    fn powi(&self, exp: u32) -> Self {
        f32::powi(*self, exp as i32)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn to_float(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_float(v: f64) -> Self {
        FromPrimitive::from_f64(v).unwrap_or_else(BigRational::zero)
    }
    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }
}

/// Complex number over a scalar field.
pub type ComplexOf<S> = Complex<S>;

/// Exact complex rational.
pub type ExactComplex = Complex<BigRational>;

pub fn complex_from_exact<S: Scalar>(z: &ExactComplex) -> Complex<S> {
    Complex::new(S::from_rational(&z.re), S::from_rational(&z.im))
}

pub fn complex_to_f64<S: Scalar>(z: &Complex<S>) -> Complex<f64> {
    Complex::new(z.re.to_float(), z.im.to_float())
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::from(1u8), |acc, i| acc * BigInt::from(n - i))
}

pub fn factorial(n: u64) -> BigInt {
    falling_factorial(n, n)
}

/// Renders an exact rational as `p` or `p/q`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1u8) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders an exact complex rational; purely real values print as rationals.
pub fn fmt_exact_complex(z: &ExactComplex) -> String {
    if z.im.is_zero() {
        return fmt_rational(&z.re);
    }
    if z.re.is_zero() {
        return format!("{}i", fmt_rational(&z.im));
    }
    let sign = if z.im.is_negative() { "-" } else { "+" };
    format!(
        "{}{}{}i",
        fmt_rational(&z.re),
        sign,
        fmt_rational(&z.im.abs())
    )
}
