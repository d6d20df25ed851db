//! Complex numbers over [`BigFloat`], used for Gauss sums, generalized
//! Bernoulli numbers and L-values.

use num_bigint::BigInt;

use crate::bigfloat::{cos_pi, sin_pi, BigFloat};
use crate::unity::UnityValue;

#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        BigComplex { re: BigFloat::zero(prec), im: BigFloat::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        BigComplex { re: BigFloat::one(prec), im: BigFloat::zero(prec) }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.precision();
        BigComplex { re, im: BigFloat::zero(prec) }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_real(BigFloat::from_i64(v, prec))
    }

    /// e^(2 pi i q/d) for an exact root of unity; the zero marker maps to 0.
    pub fn from_unity(v: &UnityValue, prec: u32) -> Self {
        match v.exponent() {
            None => Self::zero(prec),
            Some((q, d)) => BigComplex {
                re: cos_pi(2 * q as i128, d, prec),
                im: sin_pi(2 * q as i128, d, prec),
            },
        }
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().min(self.im.precision())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        BigComplex { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BigComplex { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn mul_real(&self, s: &BigFloat) -> Self {
        BigComplex { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn conjugate(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, other: &Self) -> Self {
        let d = other.norm_sqr();
        let num = self.mul(&other.conjugate());
        BigComplex { re: num.re.div(&d), im: num.im.div(&d) }
    }

    pub fn div_real(&self, s: &BigFloat) -> Self {
        BigComplex { re: self.re.div(s), im: self.im.div(s) }
    }

    /// Multiply by i.
    pub fn mul_i(&self) -> Self {
        BigComplex { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        Self::from_real(BigFloat::from_ratio(&BigInt::from(num), &BigInt::from(den), prec))
    }
}
