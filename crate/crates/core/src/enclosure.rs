//! Closed intervals with exact rational endpoints.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalEnclosure {
    lo: BigRational,
    hi: BigRational,
}

impl RationalEnclosure {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InputDomain(format!(
                "empty enclosure [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: BigRational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    /// Whether `self ⊆ other`.
    pub fn within(&self, other: &RationalEnclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &RationalEnclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    /// `{ |x| : x ∈ self }`.
    pub fn abs(&self) -> RationalEnclosure {
        if self.lo.is_negative() && self.hi.is_positive() {
            let hi = self.lo.abs().max(self.hi.clone());
            Self {
                lo: BigRational::zero(),
                hi,
            }
        } else if self.hi.is_negative() || self.hi.is_zero() {
            Self {
                lo: -self.hi.clone(),
                hi: -self.lo.clone(),
            }
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, c: &BigRational) -> RationalEnclosure {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn shift(&self, c: &BigRational) -> RationalEnclosure {
        Self {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }
}

impl Add for &RationalEnclosure {
    type Output = RationalEnclosure;
    fn add(self, rhs: &RationalEnclosure) -> RationalEnclosure {
        RationalEnclosure {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &RationalEnclosure {
    type Output = RationalEnclosure;
    fn sub(self, rhs: &RationalEnclosure) -> RationalEnclosure {
        RationalEnclosure {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Neg for &RationalEnclosure {
    type Output = RationalEnclosure;
    fn neg(self) -> RationalEnclosure {
        RationalEnclosure {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl Mul for &RationalEnclosure {
    type Output = RationalEnclosure;
    fn mul(self, rhs: &RationalEnclosure) -> RationalEnclosure {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        RationalEnclosure { lo, hi }
    }
}

impl fmt::Display for RationalEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_sci(&self.lo, 12, Rounding::Down),
            format_sci(&self.hi, 12, Rounding::Up)
        )
    }
}

/// Enclosure of `√x` for `x ≥ 0`, exact when `x` is a square of a rational,
/// otherwise of relative width about `2^-bits`.
pub fn sqrt_enclosure(x: &BigRational, bits: u32) -> Result<RationalEnclosure> {
    if x.is_negative() {
        return Err(Error::InputDomain(format!("square root of negative {x}")));
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let (rn, rd) = (num.sqrt(), den.sqrt());
    if &(&rn * &rn) == num && &(&rd * &rd) == den {
        return Ok(RationalEnclosure::point(BigRational::new(
            BigInt::from(rn),
            BigInt::from(rd),
        )));
    }
    // √(n/d) = √(n·d·4^s) / (d·2^s)
    let scale = BigUint::one() << bits;
    let radicand = num * den * &scale * &scale;
    let root = radicand.sqrt();
    let denom = BigInt::from(den * &scale);
    let lo = BigRational::new(BigInt::from(root.clone()), denom.clone());
    let hi = BigRational::new(BigInt::from(root + 1u32), denom);
    RationalEnclosure::new(lo, hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Scientific notation with `digits` significant digits, rounded toward
/// `-∞` or `+∞` so that printed bounds stay valid.
pub fn format_sci(x: &BigRational, digits: usize, rounding: Rounding) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let negative = x.is_negative();
    // rounding the magnitude toward zero or away from it
    let away = matches!((negative, rounding), (false, Rounding::Up) | (true, Rounding::Down));
    let mag = x.abs();
    let num = mag.numer().clone();
    let den = mag.denom().clone();
    // estimate the decimal exponent, then correct it
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> BigInt { num_traits::pow(ten.clone(), k as usize) };
    // find e with 10^e <= mag < 10^(e+1)
    loop {
        let (a, b) = if e >= 0 {
            (num.clone(), &den * pow10(e))
        } else {
            (&num * pow10(-e), den.clone())
        };
        if a < b {
            e -= 1;
        } else if a >= &b * &ten {
            e += 1;
        } else {
            break;
        }
    }
    // mantissa = mag / 10^(e - digits + 1), an integer part with `digits` digits
    let shift = e - digits as i64 + 1;
    let (a, b) = if shift >= 0 {
        (num, den * pow10(shift))
    } else {
        (num * pow10(-shift), den)
    };
    let (q, r) = a.div_rem(&b);
    let mut m = q;
    if away && !r.is_zero() {
        m += 1;
    }
    if m.to_string().len() > digits {
        m /= &ten;
        e += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if negative { "-" } else { "" };
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

#[cfg(test)]
pub(crate) fn rational(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn integer(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `base^(-e)` as an exact rational.
pub(crate) fn inverse_power(base: &BigInt, e: u64) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(base.clone(), e as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_arithmetic() {
        let a = RationalEnclosure::new(rational(-1, 2), integer(2)).unwrap();
        let b = RationalEnclosure::new(integer(3), integer(4)).unwrap();
        let p = &a * &b;
        assert_eq!(p.lo(), &integer(-2));
        assert_eq!(p.hi(), &integer(8));
        let d = &a - &b;
        assert_eq!(d.lo(), &rational(-9, 2));
        assert_eq!(d.hi(), &integer(-1));
        assert!(a.contains_zero());
        assert_eq!(a.abs().lo(), &integer(0));
        assert!(RationalEnclosure::new(integer(1), integer(0)).is_err());
    }

    #[test]
    fn square_roots() {
        let five = sqrt_enclosure(&integer(25), 64).unwrap();
        assert!(five.is_point());
        assert_eq!(five.lo(), &integer(5));
        let r = sqrt_enclosure(&rational(9, 4), 64).unwrap();
        assert_eq!(r.lo(), &rational(3, 2));
        let s = sqrt_enclosure(&integer(5), 64).unwrap();
        assert!(!s.is_point());
        assert!(s.lo() * s.lo() <= integer(5) && s.hi() * s.hi() >= integer(5));
        assert!(s.width() < rational(1, 1u64 << 60));
    }

    #[test]
    fn sci_formatting_rounds_outward() {
        let third = rational(1, 3);
        assert_eq!(format_sci(&third, 3, Rounding::Down), "3.33e-1");
        assert_eq!(format_sci(&third, 3, Rounding::Up), "3.34e-1");
        assert_eq!(format_sci(&-third.clone(), 3, Rounding::Down), "-3.34e-1");
        assert_eq!(format_sci(&integer(1000), 4, Rounding::Up), "1e3");
        assert_eq!(format_sci(&rational(999_999, 1), 3, Rounding::Up), "1e6");
        assert_eq!(format_sci(&integer(0), 3, Rounding::Up), "0");
        assert_eq!(format_sci(&rational(1, 1024), 7, Rounding::Down), "9.765625e-4");
        assert_eq!(format_sci(&rational(1, 1024), 6, Rounding::Down), "9.76562e-4");
        assert_eq!(format_sci(&rational(1, 1024), 6, Rounding::Up), "9.76563e-4");
    }
}
