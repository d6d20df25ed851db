//! Binary floating point with explicit precision in bits, plus the
//! trigonometric kernel used by every matrix entry and character sum.
//!
//! All angles that occur in this crate are rational multiples of pi, so the
//! trig entry points take an exact fraction a/b and reduce it in integer
//! arithmetic before any rounding happens. Pi itself comes from a Machin
//! arctangent series evaluated in fixed point with guard bits; sine and
//! cosine use Taylor series after exact halving of the argument.
//!
//! Rounding is round-half-up on the dropped bits, applied after every
//! operation; results carry the minimum precision of the operands.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

/// Extra bits carried through internal computations before final rounding.
pub const GUARD_BITS: u32 = 32;

/// Arbitrary-precision binary float: sign * mant * 2^exp at `prec` bits.
#[derive(Clone)]
pub struct BigFloat {
    sign: i8,
    mant: BigUint,
    exp: i64,
    prec: u32,
}

impl std::fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_decimal_string(20))
    }
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { sign: 0, mant: BigUint::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_u64(1, prec)
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        let sign = match v.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        let mut r = BigFloat { sign, mant: v.magnitude().clone(), exp: 0, prec };
        r.normalize();
        r
    }

    /// num/den at the given precision.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "denominator must be nonzero");
        Self::from_bigint(num, prec + GUARD_BITS)
            .div(&Self::from_bigint(den, prec + GUARD_BITS))
            .with_prec(prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign < 0
    }

    pub fn signum(&self) -> i8 {
        self.sign
    }

    /// Round the mantissa to the stored precision (half-up on dropped bits).
    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.sign = 0;
            self.exp = 0;
            return;
        }
        let bits = self.mant.bits();
        if bits > self.prec as u64 {
            let drop = (bits - self.prec as u64) as u64;
            let half = BigUint::one() << (drop - 1);
            let rem = &self.mant & ((BigUint::one() << drop) - BigUint::one());
            self.mant >>= drop;
            if rem >= half {
                self.mant += BigUint::one();
            }
            self.exp += drop as i64;
            // The round-up can lengthen the mantissa by one bit; that is fine,
            // it only means one extra bit of headroom until the next rounding.
        }
    }

    /// Same value re-rounded to precision p.
    pub fn with_prec(&self, p: u32) -> Self {
        let mut r = self.clone();
        r.prec = p;
        r.normalize();
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        r.sign = -r.sign;
        r
    }

    pub fn abs(&self) -> Self {
        let mut r = self.clone();
        r.sign = r.sign.abs();
        r
    }

    /// Multiply by 2^k exactly.
    pub fn scale_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut r = self.clone();
        r.exp += k;
        r
    }

    /// floor(log2 |x|) + 1, i.e. the position of the top bit; None for zero.
    pub fn magnitude_bits(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    /// Exact signed sum before rounding. Exponent gaps beyond any realistic
    /// precision short-circuit to the dominant operand.
    fn add_exact(&self, other: &Self) -> (i8, BigUint, i64) {
        if self.is_zero() {
            return (other.sign, other.mant.clone(), other.exp);
        }
        if other.is_zero() {
            return (self.sign, self.mant.clone(), self.exp);
        }
        let top_a = self.exp + self.mant.bits() as i64;
        let top_b = other.exp + other.mant.bits() as i64;
        let limit = self.prec.max(other.prec) as i64 + 2 * GUARD_BITS as i64 + 16;
        if top_a - top_b > limit {
            return (self.sign, self.mant.clone(), self.exp);
        }
        if top_b - top_a > limit {
            return (other.sign, other.mant.clone(), other.exp);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        if self.sign == other.sign {
            (self.sign, a + b, e)
        } else {
            match a.cmp(&b) {
                Ordering::Equal => (0, BigUint::zero(), 0),
                Ordering::Greater => (self.sign, a - b, e),
                Ordering::Less => (other.sign, b - a, e),
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (sign, mant, exp) = self.add_exact(other);
        let mut r = BigFloat { sign, mant, exp, prec: self.prec.min(other.prec) };
        r.normalize();
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = BigFloat {
            sign: self.sign * other.sign,
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
            prec: self.prec.min(other.prec),
        };
        r.normalize();
        r
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&BigFloat::from_i64(k, self.prec))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero BigFloat");
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let want = prec as i64 + GUARD_BITS as i64 + 1;
        let s = (want + other.mant.bits() as i64 - self.mant.bits() as i64).max(0) as u64;
        let q = (&self.mant << s) / &other.mant;
        let mut r = BigFloat {
            sign: self.sign * other.sign,
            mant: q,
            exp: self.exp - s as i64 - other.exp,
            prec,
        };
        r.normalize();
        r
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec).div(self)
    }

    /// Square root (rejects negative input).
    pub fn sqrt(&self) -> Self {
        assert!(self.sign >= 0, "sqrt of negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let mut mant = self.mant.clone();
        let mut exp = self.exp;
        if exp.rem_euclid(2) == 1 {
            mant <<= 1u32;
            exp -= 1;
        }
        let want = self.prec as i64 + GUARD_BITS as i64 + 1;
        let have = (mant.bits() as i64 + 1) / 2;
        let t = (want - have).max(0) as u64;
        let scaled = mant << (2 * t);
        let root = num_integer::Roots::sqrt(&scaled);
        let mut r = BigFloat {
            sign: 1,
            mant: root,
            exp: exp / 2 - t as i64,
            prec: self.prec,
        };
        r.normalize();
        r
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let (sign, _, _) = self.add_exact(&other.neg());
        match sign {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    pub fn max_by_value(self, other: Self) -> Self {
        if self.cmp_value(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Nearest integer (half away from zero) and the absolute residual.
    pub fn to_nearest_integer(&self) -> (BigInt, BigFloat) {
        let int = if self.is_zero() {
            BigInt::zero()
        } else if self.exp >= 0 {
            let mag = BigInt::from(self.mant.clone()) << self.exp as u64;
            if self.sign < 0 {
                -mag
            } else {
                mag
            }
        } else {
            let shift = (-self.exp) as u64;
            let rounded = if shift > self.mant.bits() + 1 {
                BigUint::zero()
            } else {
                (&self.mant + (BigUint::one() << (shift - 1))) >> shift
            };
            let mag = BigInt::from(rounded);
            if self.sign < 0 {
                -mag
            } else {
                mag
            }
        };
        let back = BigFloat::from_bigint(&int, self.prec.max(self.mant.bits() as u32 + 8));
        let residual = self.sub(&back).abs();
        (int, residual)
    }

    /// Decimal string with the given number of significant digits, in
    /// scientific notation `d.ddd...e{+-}k`. Deterministic.
    pub fn to_decimal_string(&self, sig_digits: u32) -> String {
        assert!(sig_digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        // First estimate of the decimal exponent from the binary magnitude.
        let top = self.exp + self.mant.bits() as i64;
        let mut e10 = ((top as f64 - 0.5) * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            // scaled = |x| * 10^(sig-1-e10), rounded half-up to an integer.
            let k = sig_digits as i64 - 1 - e10;
            let num = if k >= 0 {
                &self.mant * BigUint::from(10u32).pow(k as u32)
            } else {
                self.mant.clone()
            };
            let den_pow10 = if k < 0 { (-k) as u32 } else { 0 };
            let scaled: BigUint = if self.exp >= 0 {
                let shifted = num << self.exp as u64;
                if den_pow10 > 0 {
                    let d = BigUint::from(10u32).pow(den_pow10);
                    (shifted + (&d >> 1u32)) / d
                } else {
                    shifted
                }
            } else {
                let shift = (-self.exp) as u64;
                if den_pow10 > 0 {
                    let d = BigUint::from(10u32).pow(den_pow10) << shift;
                    ((num << 1u32) + &d) / (d << 1u32)
                } else {
                    (num + (BigUint::one() << (shift - 1))) >> shift
                }
            };
            let digits = scaled.to_str_radix(10);
            let want = sig_digits as usize;
            if digits.len() > want {
                e10 += digits.len() as i64 - want as i64;
                continue;
            }
            if digits.len() < want {
                e10 -= want as i64 - digits.len() as i64;
                continue;
            }
            let sign = if self.sign < 0 { "-" } else { "" };
            let (head, tail) = digits.split_at(1);
            let esign = if e10 < 0 { "-" } else { "+" };
            return format!("{sign}{head}.{tail}e{esign}{}", e10.abs());
        }
    }

    /// Parse a decimal string of the form produced by `to_decimal_string`
    /// (also accepts plain integers and fixed-point decimals).
    pub fn from_decimal_str(s: &str, prec: u32) -> Option<Self> {
        let s = s.trim();
        if s == "0" {
            return Some(Self::zero(prec));
        }
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1i8, r),
            None => (1i8, s.strip_prefix('+').unwrap_or(s)),
        };
        let (mant_str, exp10) = match rest.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i64>().ok()?),
            None => (rest, 0),
        };
        let (int_part, frac_part) = match mant_str.split_once('.') {
            Some((i, f)) => (i, f),
            None => (mant_str, ""),
        };
        let digits: String = format!("{int_part}{frac_part}");
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mantissa: BigInt = digits.parse().ok()?;
        let k = exp10 - frac_part.len() as i64;
        let ten = BigInt::from(10);
        let v = if k >= 0 {
            Self::from_bigint(&(&mantissa * ten.pow(k as u32)), prec)
        } else {
            Self::from_ratio(&mantissa, &ten.pow((-k) as u32), prec)
        };
        Some(if sign < 0 { v.neg() } else { v })
    }

    /// Approximate conversion for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (top, shift) = if bits > 53 {
            ((&self.mant >> (bits - 53)).to_u64().unwrap(), bits - 53)
        } else {
            (self.mant.to_u64().unwrap_or(u64::MAX), 0)
        };
        self.sign as f64 * top as f64 * 2f64.powi((self.exp + shift as i64) as i32)
    }
}

/// Shared pi cache, one entry per requested precision.
static PI_CACHE: OnceLock<Mutex<HashMap<u32, Arc<BigFloat>>>> = OnceLock::new();

/// Pi at the given precision (Machin: 16 atan(1/5) - 4 atan(1/239), summed
/// in fixed point with guard bits).
pub fn pi(prec: u32) -> Arc<BigFloat> {
    let cache = PI_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return Arc::clone(v);
    }
    let w = prec as u64 + GUARD_BITS as u64 + 16;
    // atan(1/q) * 2^w by the alternating series sum (-1)^k / ((2k+1) q^(2k+1)).
    let atan_inv = |q: u64| -> BigInt {
        let q2 = BigInt::from(q) * BigInt::from(q);
        let mut power = (BigInt::one() << w) / BigInt::from(q);
        let mut sum = power.clone();
        let mut k = 1u64;
        while !power.is_zero() {
            power /= &q2;
            let term = &power / BigInt::from(2 * k + 1);
            if term.is_zero() && power.bits() < 2 {
                break;
            }
            if k % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            k += 1;
        }
        sum
    };
    let fixed = atan_inv(5) * BigInt::from(16) - atan_inv(239) * BigInt::from(4);
    let mut v = BigFloat::from_bigint(&fixed, prec);
    v.exp -= w as i64;
    let v = Arc::new(v);
    cache.lock().unwrap().insert(prec, Arc::clone(&v));
    v
}

/// sin and cos of x in [0, pi/2], both at working precision w, via Taylor
/// series after halving x below 1/8.
fn sin_cos_core(x: &BigFloat, w: u32) -> (BigFloat, BigFloat) {
    let mut y = x.with_prec(w);
    let mut halvings = 0u32;
    let eighth = BigFloat::from_ratio(&BigInt::one(), &BigInt::from(8), w);
    while y.cmp_value(&eighth) == Ordering::Greater {
        y = y.scale_pow2(-1); // exact
        halvings += 1;
    }
    let y2 = y.mul(&y);
    let cutoff = -(w as i64 + 8);
    // sin series
    let mut sin = y.clone();
    let mut term = y.clone();
    let mut k = 1u64;
    loop {
        term = term.mul(&y2).div(&BigFloat::from_u64(2 * k * (2 * k + 1), w)).neg();
        if term.is_zero() || term.magnitude_bits().unwrap() < cutoff {
            break;
        }
        sin = sin.add(&term);
        k += 1;
    }
    // cos series
    let mut cos = BigFloat::one(w);
    let mut term = BigFloat::one(w);
    let mut k = 1u64;
    loop {
        term = term.mul(&y2).div(&BigFloat::from_u64((2 * k - 1) * 2 * k, w)).neg();
        if term.is_zero() || term.magnitude_bits().unwrap() < cutoff {
            break;
        }
        cos = cos.add(&term);
        k += 1;
    }
    // Undo the halvings with double-angle steps.
    for _ in 0..halvings {
        let s2 = sin.mul(&cos).scale_pow2(1);
        let c2 = BigFloat::one(w).sub(&sin.mul(&sin).scale_pow2(1));
        sin = s2;
        cos = c2;
    }
    (sin, cos)
}

/// Reduced angle: theta = r * pi / den with 0 <= 2r <= den, plus the sign to
/// apply to the requested function.
struct Reduced {
    r: u64,
    sign: i8,
}

/// Reduce a mod 2b for sine: sin((a + 2b) pi/b) = sin(a pi/b),
/// sin((a+b) pi/b) = -sin(a pi/b), sin((b-a) pi/b) = sin(a pi/b).
fn reduce_sin(a: i128, b: u64) -> Reduced {
    let mut r = a.rem_euclid(2 * b as i128) as u64;
    let mut sign = 1i8;
    if r >= b {
        r -= b;
        sign = -sign;
    }
    if 2 * r > b {
        r = b - r;
    }
    Reduced { r, sign }
}

/// Reduce for cosine: cos((a+b) pi/b) = -cos, cos((b-a) pi/b) = -cos.
fn reduce_cos(a: i128, b: u64) -> Reduced {
    let mut r = a.rem_euclid(2 * b as i128) as u64;
    let mut sign = 1i8;
    if r >= b {
        r = 2 * b - r; // cos is even around pi: cos(2pi - x) = cos(x)
    }
    if 2 * r > b {
        r = b - r;
        sign = -sign;
    }
    Reduced { r, sign }
}

fn angle(r: u64, b: u64, w: u32) -> BigFloat {
    pi(w).mul_i64(r as i64).div(&BigFloat::from_u64(b, w))
}

/// sin(a*pi/b) at the given precision; exact zeros at multiples of pi.
pub fn sin_pi(a: i128, b: u64, prec: u32) -> BigFloat {
    assert!(b >= 1);
    let red = reduce_sin(a, b);
    if red.r == 0 {
        return BigFloat::zero(prec);
    }
    if 2 * red.r == b {
        return if red.sign < 0 { BigFloat::one(prec).neg() } else { BigFloat::one(prec) };
    }
    let w = prec + GUARD_BITS;
    let (s, _) = sin_cos_core(&angle(red.r, b, w), w);
    let s = s.with_prec(prec);
    if red.sign < 0 {
        s.neg()
    } else {
        s
    }
}

/// cos(a*pi/b) at the given precision; exact values at quarter turns.
pub fn cos_pi(a: i128, b: u64, prec: u32) -> BigFloat {
    assert!(b >= 1);
    let red = reduce_cos(a, b);
    if 2 * red.r == b {
        return BigFloat::zero(prec);
    }
    if red.r == 0 {
        return if red.sign < 0 { BigFloat::one(prec).neg() } else { BigFloat::one(prec) };
    }
    let w = prec + GUARD_BITS;
    let (_, c) = sin_cos_core(&angle(red.r, b, w), w);
    let c = c.with_prec(prec);
    if red.sign < 0 {
        c.neg()
    } else {
        c
    }
}

/// tan(a*pi/b); panics on poles (callers enforce the parity constraints
/// that keep the paper's matrices finite).
pub fn tan_pi(a: i128, b: u64, prec: u32) -> BigFloat {
    // Period pi: reduce a mod b, then fold tan(pi - x) = -tan(x).
    let mut r = a.rem_euclid(b as i128) as u64;
    let mut sign = 1i8;
    if 2 * r > b {
        r = b - r;
        sign = -sign;
    }
    if r == 0 {
        return BigFloat::zero(prec);
    }
    assert!(2 * r != b, "tan pole at pi/2");
    let w = prec + GUARD_BITS;
    let (s, c) = sin_cos_core(&angle(r, b, w), w);
    let t = s.div(&c).with_prec(prec);
    if sign < 0 {
        t.neg()
    } else {
        t
    }
}

/// cot(a*pi/b); panics at multiples of pi (never hit for reduced residues).
pub fn cot_pi(a: i128, b: u64, prec: u32) -> BigFloat {
    let mut r = a.rem_euclid(b as i128) as u64;
    let mut sign = 1i8;
    if 2 * r > b {
        r = b - r;
        sign = -sign;
    }
    assert!(r != 0, "cot pole at multiple of pi");
    if 2 * r == b {
        return BigFloat::zero(prec);
    }
    let w = prec + GUARD_BITS;
    let (s, c) = sin_cos_core(&angle(r, b, w), w);
    let t = c.div(&s).with_prec(prec);
    if sign < 0 {
        t.neg()
    } else {
        t
    }
}

/// csc(a*pi/b) = 1/sin(a*pi/b); panics at multiples of pi.
pub fn csc_pi(a: i128, b: u64, prec: u32) -> BigFloat {
    let w = prec + GUARD_BITS;
    let s = sin_pi(a, b, w);
    assert!(!s.is_zero(), "csc pole at multiple of pi");
    s.recip().with_prec(prec)
}
