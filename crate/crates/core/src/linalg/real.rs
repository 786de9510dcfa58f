//! Arbitrary-precision real scalar.
//!
//! Thin value type over [`astro_float::BigFloat`] that remembers its binary
//! precision, so the usual operators can be overloaded. A binary operation
//! runs at the larger of the two operand precisions and rounds to nearest,
//! ties to even.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("failed to allocate the astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Arbitrary-precision real number carrying its precision in bits.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    bits: usize,
}

impl Real {
    fn wrap(v: BigFloat, bits: usize) -> Self {
        Real { v, bits }
    }

    pub fn zero(bits: usize) -> Self {
        Self::wrap(BigFloat::from_u8(0, bits), bits)
    }

    pub fn one(bits: usize) -> Self {
        Self::wrap(BigFloat::from_u8(1, bits), bits)
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(v, bits.max(64)), bits)
    }

    pub fn from_u64(v: u64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_u64(v, bits.max(64)), bits)
    }

    /// Exact conversion of a binary64 value.
    pub fn from_f64(v: f64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_f64(v, bits.max(64)), bits)
    }

    /// `num / den`, correctly rounded.
    pub fn ratio(num: i64, den: i64, bits: usize) -> Self {
        Self::from_i64(num, bits) / Self::from_i64(den, bits)
    }

    pub fn infinity(bits: usize) -> Self {
        Self::wrap(astro_float::INF_POS, bits)
    }

    /// Parses a decimal string such as `0.125`, `-3`, or `4.07e-78`.
    pub fn parse(s: &str, bits: usize) -> Result<Self> {
        let t = s.trim();
        let valid = !t.is_empty()
            && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
            && t.chars().any(|c| c.is_ascii_digit());
        if !valid {
            return Err(Error::InvalidNumber(s.to_string()));
        }
        let v = with_consts(|cc| BigFloat::parse(t, Radix::Dec, bits, RM, cc));
        if v.is_nan() || v.is_inf() {
            return Err(Error::InvalidNumber(s.to_string()));
        }
        Ok(Self::wrap(v, bits))
    }

    /// `10^e`, correctly rounded.
    pub fn pow10(e: i64, bits: usize) -> Self {
        Self::parse(&format!("1e{e}"), bits).expect("power of ten literal")
    }

    pub fn pi(bits: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(bits, RM)), bits)
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Rounds (or widens) to a different binary precision.
    pub fn with_bits(&self, bits: usize) -> Self {
        let mut v = self.v.clone();
        if self.v.is_zero() {
            return Self::zero(bits);
        }
        if v.is_inf() || v.is_nan() {
            return Self::wrap(v, bits);
        }
        v.set_precision(bits, RM).expect("precision change");
        Self::wrap(v, bits)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_infinite(&self) -> bool {
        self.v.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.bits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.bits, RM), self.bits)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.sin(self.bits, RM, cc)), self.bits)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.cos(self.bits, RM, cc)), self.bits)
    }

    pub fn atan(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.atan(self.bits, RM, cc)), self.bits)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.exp(self.bits, RM, cc)), self.bits)
    }

    pub fn ln(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.ln(self.bits, RM, cc)), self.bits)
    }

    pub fn log10(&self) -> Self {
        let ten = Self::from_i64(10, self.bits);
        self.ln() / ten.ln()
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.v.powi(n, self.bits, RM), self.bits)
    }

    /// `self^e` for positive `self`.
    pub fn powf(&self, e: &Real) -> Self {
        (&self.ln() * e).exp()
    }

    /// Four-quadrant arctangent of `y / x` on `(-pi, pi]`.
    pub fn atan2(y: &Real, x: &Real) -> Real {
        let bits = y.bits.max(x.bits);
        if x.is_zero() {
            let half_pi = Real::pi(bits) / 2;
            return if y.is_positive() {
                half_pi
            } else if y.is_negative() {
                -half_pi
            } else {
                Real::zero(bits)
            };
        }
        if y.abs() > x.abs() {
            // |y/x| > 1: rotate by a quarter turn for a well-conditioned atan argument.
            let half_pi = Real::pi(bits) / 2;
            let r = (x / y).atan();
            if y.is_positive() {
                half_pi - r
            } else {
                -half_pi - r
            }
        } else {
            let r = (y / x).atan();
            if x.is_positive() {
                r
            } else if y.is_negative() {
                r - Real::pi(bits)
            } else {
                r + Real::pi(bits)
            }
        }
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Nearest binary64 value (via a 17-digit decimal image).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        self.to_sci_string(17).parse().unwrap_or(f64::NAN)
    }

    /// Decimal scientific notation with exactly `digits` significant digits,
    /// e.g. `5.0415486481506e-1`. Zero prints as `0`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.v.is_nan() {
            return "NaN".into();
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { "-inf".into() } else { "inf".into() };
        }
        if self.v.is_zero() {
            return "0".into();
        }
        let (sign, mut m, e) = with_consts(|cc| self.v.convert_to_radix(Radix::Dec, RoundingMode::None, cc))
            .expect("finite value converts to decimal");
        // value = 0.m1 m2 ... * 10^e
        let mut exp10 = e as i64 - 1;
        while m.first() == Some(&0) && m.len() > 1 {
            m.remove(0);
            exp10 -= 1;
        }
        let mut kept: Vec<u8> = m.iter().copied().take(digits).collect();
        kept.resize(digits, 0);
        if m.len() > digits {
            let next = m[digits];
            let tail_nonzero = m[digits + 1..].iter().any(|&d| d != 0);
            let round_up = next > 5 || (next == 5 && (tail_nonzero || kept[digits - 1] % 2 == 1));
            if round_up {
                let mut i = digits;
                loop {
                    if i == 0 {
                        kept.insert(0, 1);
                        kept.pop();
                        exp10 += 1;
                        break;
                    }
                    i -= 1;
                    if kept[i] == 9 {
                        kept[i] = 0;
                    } else {
                        kept[i] += 1;
                        break;
                    }
                }
            }
        }
        let mut out = String::with_capacity(digits + 8);
        if sign == Sign::Neg {
            out.push('-');
        }
        out.push((b'0' + kept[0]) as char);
        if digits > 1 {
            out.push('.');
            out.extend(kept[1..].iter().map(|&d| (b'0' + d) as char));
        }
        out.push('e');
        out.push_str(&exp10.to_string());
        out
    }

    /// Rounds to `digits` significant decimal digits, keeping the binary precision.
    pub fn round_decimal(&self, digits: usize) -> Real {
        if self.is_zero() || !self.is_finite() {
            return self.clone();
        }
        Real::parse(&self.to_sci_string(digits), self.bits).expect("own decimal image parses")
    }

    fn cmp_value(&self, other: &Real) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(25))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.bits as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_value(other)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.bits)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident, $op:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.bits.max(rhs.bits);
                Real::wrap(self.v.$op(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
        impl $tr<i64> for &Real {
            type Output = Real;
            fn $m(self, rhs: i64) -> Real {
                Real::wrap(self.v.$op(&BigFloat::from_i64(rhs, 64), self.bits, RM), self.bits)
            }
        }
        impl $tr<i64> for Real {
            type Output = Real;
            fn $m(self, rhs: i64) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $atr<&Real> for Real {
            fn $am(&mut self, rhs: &Real) {
                *self = (&*self).$m(rhs);
            }
        }
        impl $atr<Real> for Real {
            fn $am(&mut self, rhs: Real) {
                *self = (&*self).$m(&rhs);
            }
        }
    };
}

real_binop!(Add, add, AddAssign, add_assign, add);
real_binop!(Sub, sub, SubAssign, sub_assign, sub);
real_binop!(Mul, mul, MulAssign, mul_assign, mul);
real_binop!(Div, div, DivAssign, div_assign, div);

#[cfg(test)]
mod tests {
    use super::*;

    const B: usize = 256;

    #[test]
    fn decimal_round_trip() {
        let x = Real::parse("0.50415486481506", B).unwrap();
        assert_eq!(x.to_sci_string(14), "5.0415486481506e-1");
        let y = Real::parse(&x.to_sci_string(14), B).unwrap();
        assert_eq!(y.to_sci_string(14), x.to_sci_string(14));
    }

    #[test]
    fn rounding_carries_into_exponent() {
        let x = Real::parse("9.9999996", B).unwrap();
        assert_eq!(x.to_sci_string(3), "1.00e1");
        let y = Real::parse("-0.00012345", B).unwrap();
        assert_eq!(y.to_sci_string(4), "-1.234e-4");
        assert_eq!(Real::zero(B).to_sci_string(5), "0");
    }

    #[test]
    fn atan2_quadrants() {
        let one = Real::one(B);
        let z = Real::zero(B);
        let pi = Real::pi(B);
        let tol = Real::pow10(-70, B);
        assert!((Real::atan2(&z, &-&one) - &pi).abs() < tol);
        assert!((Real::atan2(&one, &one) - &pi / 4).abs() < tol);
        assert!((Real::atan2(&-&one, &-&one) + &pi * 3 / 4).abs() < tol);
        assert!((Real::atan2(&one, &z) - &pi / 2).abs() < tol);
        let big = Real::from_i64(1000, B);
        let expect = &pi / 2 - (Real::one(B) / &big).atan();
        assert!((Real::atan2(&big, &one) - expect).abs() < tol);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Real::parse("abc", B).is_err());
        assert!(Real::parse("", B).is_err());
        assert!(Real::parse("NaN", B).is_err());
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(Real::parse("4.07e-78", B).unwrap().to_f64(), 4.07e-78);
        assert_eq!(Real::from_f64(0.1, B).to_f64(), 0.1);
    }
}
