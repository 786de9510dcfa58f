use super::Real;
use crate::error::{Error, Result};

/// Working decimal precision.
///
/// Arithmetic runs at `digits + guard` significant decimal digits; values
/// are reported and persisted at `digits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 15;
    pub const MIN_DIGITS: u32 = 16;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::contract(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(PrecisionContext { digits, guard })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    /// Binary precision backing `working_digits`, a whole number of 64-bit words.
    pub fn bits(&self) -> usize {
        let raw = (f64::from(self.working_digits()) * std::f64::consts::LOG2_10).ceil() as usize + 2;
        raw.div_ceil(64) * 64
    }

    pub fn zero(&self) -> Real {
        Real::zero(self.bits())
    }

    pub fn one(&self) -> Real {
        Real::one(self.bits())
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_i64(v, self.bits())
    }

    pub fn parse(&self, s: &str) -> Result<Real> {
        Real::parse(s, self.bits())
    }

    pub fn pow10(&self, e: i64) -> Real {
        Real::pow10(e, self.bits())
    }

    pub fn pi(&self) -> Real {
        Real::pi(self.bits())
    }

    /// `10^{-(P+g)}`, the unit roundoff of working arithmetic.
    pub fn eps(&self) -> Real {
        self.pow10(-i64::from(self.working_digits()))
    }

    /// `10^{g/2 - P}`, the solver acceptance tolerance.
    pub fn tol(&self) -> Real {
        let twice = i64::from(self.guard) - 2 * i64::from(self.digits);
        if twice % 2 == 0 {
            self.pow10(twice / 2)
        } else {
            self.pow10(twice).sqrt()
        }
    }

    /// `10^{1-P}`, the roundoff floor of a value known to `P` digits.
    pub fn roundoff_floor(&self) -> Real {
        self.pow10(1 - i64::from(self.digits))
    }

    /// `P`-digit decimal image of `x`.
    pub fn fmt(&self, x: &Real) -> String {
        x.to_sci_string(self.digits as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert!(PrecisionContext::new(15).is_err());
        assert!(PrecisionContext::new(16).is_ok());
    }

    #[test]
    fn tolerance_with_odd_guard() {
        let ctx = PrecisionContext::with_guard(40, 15).unwrap();
        let t = ctx.tol();
        let expect = ctx.pow10(-33) * ctx.parse("3.16227766016837933199889354443271853372").unwrap();
        assert!(((&t - &expect) / &expect).abs() < ctx.pow10(-30));
    }

    #[test]
    fn decimal_image_round_trips() {
        let ctx = PrecisionContext::new(30).unwrap();
        let x = ctx.one() / ctx.int(7);
        let s = ctx.fmt(&x);
        assert_eq!(ctx.fmt(&ctx.parse(&s).unwrap()), s);
    }
}
