//! Outward-rounded `f64` intervals for natural logarithms of huge rationals.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::enclosure::RationalEnclosure;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Widens by a few ulps of the magnitudes involved, covering the rounding of
/// `ln` and of the `f64` operation that produced the endpoints.
fn widen(lo: f64, hi: f64, scale: f64) -> LogInterval {
    let slack = 8.0 * f64::EPSILON * scale + f64::MIN_POSITIVE;
    LogInterval {
        lo: (lo - slack).next_down(),
        hi: (hi + slack).next_up(),
    }
}

impl LogInterval {
    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn add(&self, o: &LogInterval) -> LogInterval {
        let scale = self.lo.abs().max(self.hi.abs()) + o.lo.abs().max(o.hi.abs());
        widen(self.lo + o.lo, self.hi + o.hi, scale)
    }

    pub fn sub(&self, o: &LogInterval) -> LogInterval {
        let scale = self.lo.abs().max(self.hi.abs()) + o.lo.abs().max(o.hi.abs());
        widen(self.lo - o.hi, self.hi - o.lo, scale)
    }

    /// Multiplication by a nonnegative exact constant.
    pub fn scale(&self, c: f64) -> LogInterval {
        debug_assert!(c >= 0.0);
        let (lo, hi) = (self.lo * c, self.hi * c);
        widen(lo, hi, lo.abs().max(hi.abs()))
    }

    /// Quotient by an interval of strictly positive numbers.
    pub fn div(&self, d: &LogInterval) -> Result<LogInterval> {
        if d.lo <= 0.0 {
            return Err(Error::InputDomain(format!(
                "division by interval [{}, {}] not bounded away from 0",
                d.lo, d.hi
            )));
        }
        let cands = [self.lo / d.lo, self.lo / d.hi, self.hi / d.lo, self.hi / d.hi];
        let lo = cands.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = cands.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(widen(lo, hi, lo.abs().max(hi.abs())))
    }
}

impl fmt::Display for LogInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `ln n` for `n ≥ 1`, from the top 53 bits of `n`.
pub fn ln_biguint(n: &BigUint) -> Result<LogInterval> {
    if n.is_zero() {
        return Err(Error::InputDomain("logarithm of 0".into()));
    }
    let bits = n.bits();
    if bits <= 53 {
        let x = n.to_f64().expect("fits in 53 bits");
        let l = x.ln();
        return Ok(widen(l, l, l.abs()));
    }
    let e = bits - 53;
    let m = (n >> e).to_f64().expect("53-bit mantissa");
    // n ∈ [m 2^e, (m + 1) 2^e)
    let shift = e as f64 * std::f64::consts::LN_2;
    let lo = m.ln() + shift;
    let hi = (m + 1.0).ln() + shift;
    Ok(widen(lo, hi, hi.abs()))
}

/// `ln x` for a positive rational.
pub fn ln_rational(x: &BigRational) -> Result<LogInterval> {
    if !x.is_positive() {
        return Err(Error::InputDomain(format!("logarithm of nonpositive {x}")));
    }
    let num = ln_biguint(x.numer().magnitude())?;
    let den = ln_biguint(x.denom().magnitude())?;
    Ok(num.sub(&den))
}

/// `ln` over an enclosure of positive numbers.
pub fn ln_enclosure(x: &RationalEnclosure) -> Result<LogInterval> {
    let lo = ln_rational(x.lo())?;
    let hi = ln_rational(x.hi())?;
    Ok(LogInterval {
        lo: lo.lo,
        hi: hi.hi,
    })
}
