//! Scalar abstraction shared by the MAC and polytope code.
//!
//! Floating types compare against a tolerance, rationals compare exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};

pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// True when arithmetic is exact and tolerances are ignored.
    const EXACT: bool;

    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// `|self| <= tol` for floats, `self == 0` for exact types.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs().to_f64() <= tol
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Self {
        x as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    /// Exact binary value of `x`; use [`rational_approx`] to recover short fractions.
    fn from_f64(x: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(x).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Smallest-denominator fraction within `tol` of `x` (continued fractions).
pub fn rational_approx(x: f64, tol: f64) -> BigRational {
    assert!(x.is_finite(), "cannot approximate a non-finite value");
    let negative = x < 0.0;
    let target = x.abs();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = target;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from_f64(a).expect("finite");
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let approx = ToPrimitive::to_f64(&h1).unwrap() / ToPrimitive::to_f64(&k1).unwrap();
        let frac = rest - a;
        if (approx - target).abs() <= tol || frac < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    let r = BigRational::new(h1, k1);
    if negative {
        -r
    } else {
        r
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Ok(r) = s.parse::<BigRational>() {
        return Some(r);
    }
    let (int_part, frac_part) = s.split_once('.')?;
    let negative = int_part.starts_with('-');
    let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(num, den);
    Some(if negative { -r } else { r })
}
