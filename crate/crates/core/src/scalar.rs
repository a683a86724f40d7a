//! Scalar types used for edge lengths, budgets and distances.
//!
//! Everything in this crate is generic over [`Scalar`]. The exact instance is
//! [`BigRational`]; `f64` and `f32` are available for quick approximate runs,
//! but equality-based checks (`check_oplus`, `is_subclass` by lengths, budget
//! comparisons) are only meaningful for exact scalars.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{CycleError, Result};

/// Numeric type for lengths and areas.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic on this type is exact.
    const EXACT: bool;

    /// Parses a decimal-free rational string: `"p"` or `"p/q"`.
    fn parse_ratio(text: &str) -> Result<Self>;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer).expect("i64 fits") / Self::from_i64(denom).expect("i64 fits")
    }

    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("i64 fits")
    }

    /// `2^-exponent`.
    fn pow2_inv(exponent: u32) -> Self {
        let two = Self::one() + Self::one();
        let mut denom = Self::one();
        for _ in 0..exponent {
            denom = denom * two.clone();
        }
        Self::one() / denom
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal-free rendering accepted by [`Scalar::parse_ratio`]. Floats are
    /// written as their exact dyadic value.
    fn ratio_string(&self) -> String;
}

fn parse_exact(text: &str) -> Result<BigRational> {
    let trimmed = text.trim();
    let invalid = || CycleError::Parse(format!("not a rational string: {text:?}"));
    if trimmed.is_empty() || trimmed.contains(['.', 'e', 'E']) {
        return Err(invalid());
    }
    let (numer, denom) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let numer = BigInt::from_str(numer).map_err(|_| invalid())?;
    let denom = BigInt::from_str(denom).map_err(|_| invalid())?;
    if denom.is_zero() {
        return Err(invalid());
    }
    Ok(BigRational::new(numer, denom))
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn parse_ratio(text: &str) -> Result<Self> {
        parse_exact(text)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_int(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn pow2_inv(exponent: u32) -> Self {
        BigRational::new(BigInt::one(), BigInt::one() << exponent)
    }

    fn ratio_string(&self) -> String {
        self.to_string()
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn parse_ratio(text: &str) -> Result<Self> {
                let exact = parse_exact(text)?;
                exact
                    .to_f64()
                    .map(|v| v as $t)
                    .ok_or_else(|| CycleError::Parse(format!("out of range: {text:?}")))
            }

            fn ratio_string(&self) -> String {
                BigRational::from_float(*self).map_or_else(|| "NaN".to_string(), |q| q.to_string())
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

/// Sum of an iterator of scalars.
pub fn sum<S: Scalar, I: IntoIterator<Item = S>>(items: I) -> S {
    items.into_iter().fold(S::zero(), |acc, x| acc + x)
}

/// Smaller of two scalars under `PartialOrd`.
pub fn min_of<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}
