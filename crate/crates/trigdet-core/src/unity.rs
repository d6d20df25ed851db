//! Exact roots of unity and exact sums of roots of unity.
//!
//! Character values are kept as rational exponents e^(2*pi*i*q/d) for as long
//! as possible; conversion to floating point happens only at the analytic
//! boundary. Sums of roots of unity are decided exactly by reduction modulo
//! the cyclotomic polynomial, so orthogonality-style identities can be
//! checked with no numerics at all.

use std::collections::BTreeMap;

use crate::arith::gcd;

/// A root of unity e^(2*pi*i*numerator/denominator) in lowest terms, or the
/// distinguished zero (character value off of the unit group).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnityValue {
    Zero,
    /// 0 <= numerator < denominator, gcd(numerator, denominator) = 1.
    Root { numerator: u64, denominator: u64 },
}

impl UnityValue {
    pub fn one() -> Self {
        UnityValue::Root { numerator: 0, denominator: 1 }
    }

    pub fn minus_one() -> Self {
        UnityValue::Root { numerator: 1, denominator: 2 }
    }

    /// Build from an unreduced fraction q/d (mod 1).
    pub fn from_fraction(q: i128, d: u64) -> Self {
        assert!(d > 0);
        let q = q.rem_euclid(d as i128) as u64;
        let g = gcd(q, d);
        UnityValue::Root { numerator: q / g, denominator: d / g }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, UnityValue::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, UnityValue::Root { numerator: 0, .. })
    }

    /// Multiplication adds exponents mod 1. Zero absorbs.
    pub fn mul(&self, other: &UnityValue) -> UnityValue {
        match (self, other) {
            (UnityValue::Zero, _) | (_, UnityValue::Zero) => UnityValue::Zero,
            (
                UnityValue::Root { numerator: q1, denominator: d1 },
                UnityValue::Root { numerator: q2, denominator: d2 },
            ) => {
                let g = gcd(*d1, *d2);
                let l = d1 / g * d2;
                let q = (*q1 as u128 * (l / d1) as u128 + *q2 as u128 * (l / d2) as u128)
                    % l as u128;
                UnityValue::from_fraction(q as i128, l)
            }
        }
    }

    /// k-th power.
    pub fn pow(&self, k: u64) -> UnityValue {
        match self {
            UnityValue::Zero => UnityValue::Zero,
            UnityValue::Root { numerator, denominator } => {
                UnityValue::from_fraction(*numerator as i128 * k as i128, *denominator)
            }
        }
    }

    /// Complex conjugate: negate the exponent mod 1.
    pub fn conjugate(&self) -> UnityValue {
        match self {
            UnityValue::Zero => UnityValue::Zero,
            UnityValue::Root { numerator, denominator } => {
                UnityValue::from_fraction(-(*numerator as i128), *denominator)
            }
        }
    }

    /// Multiplicative order (1 for the value 1); None for zero.
    pub fn order(&self) -> Option<u64> {
        match self {
            UnityValue::Zero => None,
            UnityValue::Root { numerator: 0, .. } => Some(1),
            UnityValue::Root { denominator, .. } => Some(*denominator),
        }
    }

    /// The exponent as a reduced fraction (numerator, denominator); None for zero.
    pub fn exponent(&self) -> Option<(u64, u64)> {
        match self {
            UnityValue::Zero => None,
            UnityValue::Root { numerator, denominator } => Some((*numerator, *denominator)),
        }
    }
}

/// An exact integer combination of roots of unity, kept as a multiset of
/// exponents. Zero-ness (and integer-ness) is decided by reducing the
/// associated polynomial modulo the cyclotomic polynomial of the common
/// denominator.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnitySum {
    /// (numerator, denominator) -> integer coefficient.
    terms: BTreeMap<(u64, u64), i64>,
}

impl UnitySum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: &UnityValue) {
        self.add_scaled(v, 1);
    }

    pub fn add_scaled(&mut self, v: &UnityValue, coeff: i64) {
        if let UnityValue::Root { numerator, denominator } = v {
            let e = self.terms.entry((*numerator, *denominator)).or_insert(0);
            *e += coeff;
            if *e == 0 {
                self.terms.remove(&(*numerator, *denominator));
            }
        }
    }

    fn common_denominator(&self) -> u64 {
        self.terms.keys().fold(1u64, |l, &(_, d)| l / gcd(l, d) * d)
    }

    /// Exact zero test: collapse to coefficients of powers of a primitive
    /// D-th root and check divisibility by the D-th cyclotomic polynomial.
    pub fn is_zero(&self) -> bool {
        self.is_integer(0)
    }

    /// Exact test that the sum equals the given integer.
    pub fn is_integer(&self, value: i64) -> bool {
        let d = self.common_denominator();
        let mut coeffs = vec![0i64; d as usize];
        for (&(q, den), &c) in &self.terms {
            coeffs[(q * (d / den)) as usize] += c;
        }
        coeffs[0] -= value;
        let phi = cyclotomic_polynomial(d);
        poly_rem_is_zero(&coeffs, &phi)
    }
}

/// Coefficients (ascending degree) of the d-th cyclotomic polynomial,
/// computed by exact division of x^d - 1 by the lower cyclotomic factors.
pub fn cyclotomic_polynomial(d: u64) -> Vec<i64> {
    assert!(d >= 1);
    if d == 1 {
        return vec![-1, 1]; // x - 1
    }
    // x^d - 1
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d % e == 0 {
            num = poly_div_exact(&num, &cyclotomic_polynomial(e));
        }
    }
    num
}

/// Exact division of integer polynomials (panics if not exact). Both inputs
/// ascending-degree; divisor must be monic up to sign of leading coefficient.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i64> = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    assert!(lead == 1 || lead == -1, "divisor must have unit leading coefficient");
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        if c != 0 {
            for (i, &dc) in den.iter().enumerate() {
                rem[k + i] -= c * dc;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "polynomial division was not exact");
    quot
}

/// Whether the remainder of num modulo the monic polynomial den is zero.
fn poly_rem_is_zero(num: &[i64], den: &[i64]) -> bool {
    let dd = den.len() - 1;
    debug_assert_eq!(*den.last().unwrap(), 1);
    let mut rem: Vec<i64> = num.to_vec();
    while rem.len() > dd {
        let c = *rem.last().unwrap();
        let k = rem.len() - 1 - dd;
        if c != 0 {
            for (i, &dc) in den.iter().enumerate() {
                rem[k + i] -= c * dc;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}
