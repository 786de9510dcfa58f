use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::Real;

/// Arbitrary-precision complex number in Cartesian form.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: usize) -> Self {
        Complex::new(Real::zero(bits), Real::zero(bits))
    }

    pub fn one(bits: usize) -> Self {
        Complex::new(Real::one(bits), Real::zero(bits))
    }

    pub fn i(bits: usize) -> Self {
        Complex::new(Real::zero(bits), Real::one(bits))
    }

    pub fn from_real(re: Real) -> Self {
        let bits = re.bits();
        Complex::new(re, Real::zero(bits))
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &Real) -> Self {
        Complex::new(theta.cos(), theta.sin())
    }

    pub fn from_polar(r: &Real, theta: &Real) -> Self {
        Complex::new(r * theta.cos(), r * theta.sin())
    }

    pub fn bits(&self) -> usize {
        self.re.bits().max(self.im.bits())
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        Complex::new(self.re.with_bits(bits), self.im.with_bits(bits))
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.norm_sqr().sqrt()
    }

    /// `|re| + |im|`, a cheap norm used for pivoting and balancing.
    pub fn l1(&self) -> Real {
        self.re.abs() + self.im.abs()
    }

    /// Principal argument on `(-pi, pi]`.
    pub fn arg(&self) -> Real {
        Real::atan2(&self.im, &self.re)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Complex {
        if self.is_zero() {
            return Complex::zero(self.bits());
        }
        let r = self.abs();
        let re = ((&r + &self.re) / 2).sqrt();
        let im_mag = ((&r - &self.re) / 2).sqrt();
        let im = if self.im.is_negative() { -im_mag } else { im_mag };
        Complex::new(re, im)
    }

    pub fn scale(&self, s: &Real) -> Complex {
        Complex::new(&self.re * s, &self.im * s)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -&self
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Complex::from_real(&self.re * &rhs.re);
        }
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        if rhs.im.is_zero() {
            return Complex::new(&self.re / &rhs.re, &self.im / &rhs.re);
        }
        let den = rhs.norm_sqr();
        Complex::new(
            (&self.re * &rhs.re + &self.im * &rhs.im) / &den,
            (&self.im * &rhs.re - &self.re * &rhs.im) / &den,
        )
    }
}

impl Mul<&Real> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Real) -> Complex {
        self.scale(rhs)
    }
}

impl Div<&Real> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Real) -> Complex {
        Complex::new(&self.re / rhs, &self.im / rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $rhs:ty) => {
        impl $tr<$rhs> for Complex {
            type Output = Complex;
            fn $m(self, rhs: $rhs) -> Complex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$rhs> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &$rhs) -> Complex {
                (&self).$m(rhs)
            }
        }
        impl $tr<$rhs> for &Complex {
            type Output = Complex;
            fn $m(self, rhs: $rhs) -> Complex {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add, Complex);
forward_owned!(Sub, sub, Complex);
forward_owned!(Mul, mul, Complex);
forward_owned!(Div, div, Complex);
forward_owned!(Mul, mul, Real);
forward_owned!(Div, div, Real);

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<Complex> for Complex {
    fn add_assign(&mut self, rhs: Complex) {
        *self += &rhs;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, rhs: &Complex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl SubAssign<Complex> for Complex {
    fn sub_assign(&mut self, rhs: Complex) {
        *self -= &rhs;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, rhs: &Complex) {
        *self = &*self * rhs;
    }
}
