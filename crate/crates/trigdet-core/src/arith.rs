//! Exact integer arithmetic: factorization, residue systems, and the
//! multiplicative structure of (Z/nZ)^x.
//!
//! Everything here is deterministic and pure; moduli stay at "desk scale"
//! (n up to ~10^6), so trial division and exhaustive searches are fine.

use std::collections::HashMap;

use crate::error::ArithError;

/// Prime factorization of a positive integer, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// (prime, exponent) pairs with primes strictly increasing, exponents >= 1.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn num_prime_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Factorize by trial division up to sqrt(n). n = 1 yields an empty list.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut factors = Vec::new();
    let mut rem = n;
    let mut d = 2u64;
    while d * d <= rem {
        if rem % d == 0 {
            let mut e = 0u32;
            while rem % d == 0 {
                rem /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rem > 1 {
        factors.push((rem, 1));
    }
    Factorization { n, factors }
}

/// Euler totient via the multiplicative formula.
pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    for &(p, _) in &factorize(n).factors {
        r = r / p * (p - 1);
    }
    r
}

/// Moebius function: 0 unless n is square-free, else (-1)^(number of primes).
pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if !f.is_square_free() {
        0
    } else if f.num_prime_factors() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Least positive residue of m mod n, in [1, n]: multiples of n map to n
/// rather than 0, so the value is always positive.
pub fn least_positive_residue(m: i128, n: u64) -> u64 {
    assert!(n >= 1);
    let r = m.rem_euclid(n as i128) as u64;
    if r == 0 {
        n
    } else {
        r
    }
}

/// Modular exponentiation with u128 intermediates.
pub fn mod_pow(mut base: u64, mut exp: u64, n: u64) -> u64 {
    assert!(n >= 1);
    if n == 1 {
        return 0;
    }
    base %= n;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % n as u128) as u64;
        }
        base = ((base as u128 * base as u128) % n as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of a mod n, in [1, n-1]. Rejects non-coprime pairs.
pub fn mod_inverse(a: i128, n: u64) -> Result<u64, ArithError> {
    if n < 2 {
        return Err(ArithError::ModulusTooSmall { n, minimum: 2 });
    }
    let a_red = a.rem_euclid(n as i128) as u64;
    if gcd(a_red, n) != 1 {
        return Err(ArithError::NotCoprime { a: a_red, n });
    }
    // Extended Euclid on (a_red, n).
    let (mut r0, mut r1) = (a_red as i128, n as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    Ok(s0.rem_euclid(n as i128) as u64)
}

/// The reduced residue systems attached to n: the "half" system S of
/// residues in (0, n/2) coprime to n, and the symmetric system U of
/// residues in (-n/2, n/2) coprime to n. Both ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSystems {
    pub n: u64,
    /// S: a with 1 <= a < n/2 and gcd(a, n) = 1, ascending.
    pub half: Vec<u64>,
    /// U: a with -n/2 < a < n/2 and gcd(a, n) = 1, ascending; equals S and -S.
    pub centered: Vec<i64>,
}

pub fn residue_systems(n: u64) -> Result<ResidueSystems, ArithError> {
    if n < 3 {
        return Err(ArithError::ModulusTooSmall { n, minimum: 3 });
    }
    let half: Vec<u64> = (1..n)
        .take_while(|&a| 2 * a < n)
        .filter(|&a| gcd(a, n) == 1)
        .collect();
    let mut centered: Vec<i64> = half.iter().map(|&a| -(a as i64)).rev().collect();
    centered.extend(half.iter().map(|&a| a as i64));
    Ok(ResidueSystems { n, half, centered })
}

/// Multiplicative order of a mod n. Rejects gcd(a, n) != 1.
pub fn multiplicative_order(a: u64, n: u64) -> Result<u64, ArithError> {
    if n < 1 {
        return Err(ArithError::ModulusTooSmall { n, minimum: 1 });
    }
    if n == 1 {
        return Ok(1);
    }
    if gcd(a % n, n) != 1 {
        return Err(ArithError::NotCoprime { a: a % n, n });
    }
    // The order divides phi(n); walk the divisors of phi(n) in ascending order.
    let phi = euler_phi(n);
    let mut divisors: Vec<u64> = Vec::new();
    let mut d = 1;
    while d * d <= phi {
        if phi % d == 0 {
            divisors.push(d);
            if d != phi / d {
                divisors.push(phi / d);
            }
        }
        d += 1;
    }
    divisors.sort_unstable();
    for k in divisors {
        if mod_pow(a, k, n) == 1 {
            return Ok(k);
        }
    }
    unreachable!("order divides phi(n)");
}

/// Jacobi symbol (a|n) for odd positive n, extended to all integers a.
pub fn jacobi_symbol(a: i128, n: u64) -> Result<i64, ArithError> {
    if n == 0 || n % 2 == 0 {
        return Err(ArithError::EvenModulus { n });
    }
    let mut a = a.rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Canonical generator/order decomposition of (Z/nZ)^x.
///
/// Odd prime power factors contribute their smallest primitive root; the
/// factor 4 contributes a generator of order 2; factors 2^k (k >= 3)
/// contribute -1 (order 2) and 5 (order 2^(k-2)). Generators are lifted to
/// mod n by the CRT so that each is congruent to 1 modulo the complementary
/// factor. The choices are fixed so character labels are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    pub n: u64,
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
}

impl GroupStructure {
    /// phi(n) as the product of the generator orders.
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Map each unit a mod n to its exponent vector over the generators.
    /// Built by full enumeration; the table is the discrete logarithm.
    pub fn discrete_log_table(&self) -> HashMap<u64, Vec<u32>> {
        let mut table = HashMap::with_capacity(self.order() as usize);
        let t = self.generators.len();
        let mut exps = vec![0u32; t];
        let mut value = 1u64 % self.n.max(1);
        if self.n == 1 {
            table.insert(0, exps);
            return table;
        }
        loop {
            table.insert(value, exps.clone());
            // Odometer increment; maintain `value` incrementally.
            let mut i = 0;
            loop {
                if i == t {
                    debug_assert_eq!(table.len() as u64, self.order());
                    return table;
                }
                exps[i] += 1;
                value = ((value as u128 * self.generators[i] as u128) % self.n as u128) as u64;
                if (exps[i] as u64) < self.orders[i] {
                    break;
                }
                // Wrapped: value was multiplied g^orders[i] = 1 times total,
                // so it is already back where this digit started.
                exps[i] = 0;
                i += 1;
            }
        }
    }

    /// Recombine an exponent vector to the unit it represents.
    pub fn compose(&self, exps: &[u32]) -> u64 {
        assert_eq!(exps.len(), self.generators.len());
        let mut v: u64 = 1 % self.n.max(1);
        for (&g, &e) in self.generators.iter().zip(exps) {
            v = ((v as u128 * mod_pow(g, e as u64, self.n) as u128) % self.n as u128) as u64;
        }
        v
    }
}

/// Smallest primitive root of an odd prime power q = p^e.
fn primitive_root(q: u64) -> u64 {
    let phi = euler_phi(q);
    let prime_factors: Vec<u64> = factorize(phi).factors.iter().map(|&(p, _)| p).collect();
    for g in 2..q {
        if gcd(g, q) != 1 {
            continue;
        }
        if prime_factors.iter().all(|&r| mod_pow(g, phi / r, q) != 1) {
            return g;
        }
    }
    unreachable!("odd prime powers have primitive roots");
}

pub fn group_structure(n: u64) -> GroupStructure {
    assert!(n >= 1);
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    // CRT lift: g mod q and 1 mod n/q.
    let lift = |g: u64, q: u64| -> u64 {
        let rest = n / q;
        if rest == 1 {
            return g % n;
        }
        let qinv = mod_inverse(q as i128, rest).expect("prime power factors are coprime");
        let t = ((1 + rest as i128 - g as i128 % rest as i128) * qinv as i128)
            .rem_euclid(rest as i128) as u64;
        ((g as u128 + q as u128 * t as u128) % n as u128) as u64
    };
    for &(p, e) in &factorize(n).factors {
        let q = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => {
                    generators.push(lift(3, 4));
                    orders.push(2);
                }
                _ => {
                    generators.push(lift(q - 1, q));
                    orders.push(2);
                    generators.push(lift(5, q));
                    orders.push(1 << (e - 2));
                }
            }
        } else {
            generators.push(lift(primitive_root(q), q));
            orders.push(euler_phi(q));
        }
    }
    GroupStructure { n, generators, orders }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).factors, vec![]);
        assert_eq!(factorize(45).factors, vec![(3, 2), (5, 1)]);
        assert_eq!(factorize(43).factors, vec![(43, 1)]);
        assert!(factorize(43).is_prime());
        assert!(factorize(49).is_prime_power());
        assert!(!factorize(49).is_prime());
    }

    #[test]
    fn euler_phi_examples() {
        assert_eq!(euler_phi(15), 8);
        assert_eq!(euler_phi(43), 42);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(1), 1);
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(9), 0);
        assert_eq!(moebius(15), 1);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn least_positive_residue_examples() {
        assert_eq!(least_positive_residue(7, 5), 2);
        assert_eq!(least_positive_residue(-1, 5), 4);
        // Boundary convention: multiples of n return n, not 0.
        assert_eq!(least_positive_residue(10, 5), 5);
        assert_eq!(least_positive_residue(0, 7), 7);
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(2, 5).unwrap(), 3);
        assert_eq!(mod_inverse(1, 9).unwrap(), 1);
        assert_eq!(mod_inverse(7, 15).unwrap(), 13);
        assert!(mod_inverse(6, 15).is_err());
    }

    #[test]
    fn residue_systems_examples() {
        let r = residue_systems(5).unwrap();
        assert_eq!(r.half, vec![1, 2]);
        assert_eq!(r.centered, vec![-2, -1, 1, 2]);
        assert_eq!(residue_systems(15).unwrap().half, vec![1, 2, 4, 7]);
        assert_eq!(residue_systems(4).unwrap().half, vec![1]);
        assert!(residue_systems(2).is_err());
    }

    #[test]
    fn half_system_has_phi_over_two_elements() {
        for n in 3..=500u64 {
            let r = residue_systems(n).unwrap();
            assert_eq!(r.half.len() as u64 * 2, euler_phi(n), "n = {n}");
            assert_eq!(r.centered.len() as u64, euler_phi(n), "n = {n}");
        }
    }

    #[test]
    fn multiplicative_order_examples() {
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        // 2^7 = 128 = 3*43 - 1, so the order of 2 mod 43 is 14.
        assert_eq!(multiplicative_order(2, 43).unwrap(), 14);
        assert_eq!(multiplicative_order(2, 11).unwrap(), 10);
        assert!(multiplicative_order(6, 15).is_err());
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(-2, 5).unwrap(), -1);
        assert_eq!(jacobi_symbol(-2, 3).unwrap(), 1);
        assert_eq!(jacobi_symbol(1, 9).unwrap(), 1);
        assert_eq!(jacobi_symbol(3, 9).unwrap(), 0);
        assert!(jacobi_symbol(1, 4).is_err());
    }

    #[test]
    fn jacobi_matches_euler_criterion_for_primes() {
        for p in (3..=200u64).filter(|&p| factorize(p).is_prime()) {
            for a in 0..p as i128 {
                let j = jacobi_symbol(a, p).unwrap();
                let e = mod_pow(a as u64, (p - 1) / 2, p);
                let e = if e == p - 1 { -1 } else { e as i64 };
                assert_eq!(j, e, "a = {a}, p = {p}");
            }
        }
    }

    #[test]
    fn group_structure_examples() {
        let g5 = group_structure(5);
        assert_eq!(g5.orders, vec![4]);
        assert_eq!(g5.generators, vec![2]);

        let mut o15 = group_structure(15).orders.clone();
        o15.sort_unstable();
        assert_eq!(o15, vec![2, 4]);

        assert_eq!(group_structure(8).orders, vec![2, 2]);
        assert_eq!(group_structure(1).orders, vec![]);
        assert_eq!(group_structure(2).orders, vec![]);
    }

    #[test]
    fn group_decomposition_round_trips() {
        for n in 3..=200u64 {
            let g = group_structure(n);
            assert_eq!(g.order(), euler_phi(n), "n = {n}");
            let table = g.discrete_log_table();
            assert_eq!(table.len() as u64, euler_phi(n), "n = {n}");
            for (a, exps) in &table {
                assert_eq!(gcd(*a, n), 1);
                assert_eq!(g.compose(exps), *a, "n = {n}, a = {a}");
            }
        }
    }

    #[test]
    fn inverse_map_permutes_half_system_up_to_sign() {
        // k -> representative of +-k' in S_n is a permutation of S_n for odd n.
        for n in (3..=201u64).step_by(2) {
            let r = residue_systems(n).unwrap();
            let mut images: Vec<u64> = r
                .half
                .iter()
                .map(|&k| {
                    let inv = mod_inverse(k as i128, n).unwrap();
                    if 2 * inv < n {
                        inv
                    } else {
                        n - inv
                    }
                })
                .collect();
            images.sort_unstable();
            assert_eq!(images, r.half, "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn lpr_is_congruent_and_in_range(m in -100_000i128..100_000, n in 1u64..5000) {
            let r = least_positive_residue(m, n);
            prop_assert!(r >= 1 && r <= n);
            prop_assert_eq!((m - r as i128).rem_euclid(n as i128), 0);
        }

        #[test]
        fn mod_inverse_is_inverse(a in 1u64..5000, n in 2u64..5000) {
            prop_assume!(gcd(a, n) == 1);
            let inv = mod_inverse(a as i128, n).unwrap();
            prop_assert!(inv >= 1 && inv < n);
            prop_assert_eq!((a as u128 * inv as u128) % n as u128, 1);
        }
    }
}
