//! Dirichlet characters mod n with exact root-of-unity values.
//!
//! Characters are labeled by their exponent vector relative to the canonical
//! generators of (Z/nZ)^x from [`crate::arith::group_structure`], so the same
//! character always gets the same label across runs. Parity and conductor are
//! computed once at construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::{self, gcd, group_structure, GroupStructure};
use crate::error::CharacterError;
use crate::unity::UnityValue;

/// The unit group (Z/nZ)^x with its discrete-log table, shared by all
/// characters of the modulus. Immutable once built.
#[derive(Debug)]
pub struct CharacterGroup {
    n: u64,
    structure: GroupStructure,
    dlog: HashMap<u64, Vec<u32>>,
    /// lcm of the generator orders (exponent of the group).
    exponent: u64,
}

impl CharacterGroup {
    pub fn new(n: u64) -> Arc<Self> {
        assert!(n >= 1, "modulus must be positive");
        let structure = group_structure(n);
        let dlog = structure.discrete_log_table();
        let exponent = structure
            .orders
            .iter()
            .fold(1u64, |l, &o| l / gcd(l, o) * o);
        Arc::new(CharacterGroup { n, structure, dlog, exponent })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn structure(&self) -> &GroupStructure {
        &self.structure
    }

    pub fn phi(&self) -> u64 {
        self.structure.order()
    }

    /// Units mod n in ascending order.
    pub fn units(&self) -> Vec<u64> {
        let mut u: Vec<u64> = self.dlog.keys().copied().collect();
        u.sort_unstable();
        u
    }

    pub fn character(self: &Arc<Self>, exponents: Vec<u32>) -> DirichletCharacter {
        assert_eq!(exponents.len(), self.structure.generators.len());
        for (&e, &o) in exponents.iter().zip(&self.structure.orders) {
            assert!((e as u64) < o, "exponent {e} out of range for order {o}");
        }
        DirichletCharacter::new(Arc::clone(self), exponents)
    }

    pub fn principal(self: &Arc<Self>) -> DirichletCharacter {
        let t = self.structure.generators.len();
        self.character(vec![0; t])
    }

    /// All phi(n) characters, ordered lexicographically by exponent vector.
    pub fn all_characters(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        let orders = &self.structure.orders;
        let t = orders.len();
        let mut out = Vec::with_capacity(self.phi() as usize);
        let mut exps = vec![0u32; t];
        loop {
            out.push(self.character(exps.clone()));
            // Lexicographic odometer, last coordinate fastest.
            let mut i = t;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                exps[i] += 1;
                if (exps[i] as u64) < orders[i] {
                    break;
                }
                exps[i] = 0;
                if i == 0 {
                    return out;
                }
            }
        }
    }

    /// The phi(n)/2 odd characters (chi(-1) = -1); rejects n <= 2 where none exist.
    pub fn odd_characters(self: &Arc<Self>) -> Result<Vec<DirichletCharacter>, CharacterError> {
        if self.n <= 2 {
            return Err(CharacterError::ModulusTooSmall { n: self.n, minimum: 3 });
        }
        Ok(self
            .all_characters()
            .into_iter()
            .filter(|c| c.is_odd())
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A Dirichlet character mod n: exponent vector over the canonical group
/// generators, with cached parity and conductor.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    exponents: Vec<u32>,
    parity: Parity,
    conductor: u64,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl DirichletCharacter {
    fn new(group: Arc<CharacterGroup>, exponents: Vec<u32>) -> Self {
        let mut chi = DirichletCharacter {
            group,
            exponents,
            parity: Parity::Even,
            conductor: 1,
        };
        chi.parity = if chi.value_at_unit(chi.group.n.wrapping_sub(1) % chi.group.n.max(1))
            == Some(UnityValue::minus_one())
        {
            Parity::Odd
        } else {
            Parity::Even
        };
        chi.conductor = chi.compute_conductor();
        chi
    }

    pub fn modulus(&self) -> u64 {
        self.group.n
    }

    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Smallest f dividing the modulus through which the character factors.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus()
    }

    /// chi(a) for a unit a (already reduced mod n); None if a is not a unit.
    fn value_at_unit(&self, a: u64) -> Option<UnityValue> {
        let exps = self.group.dlog.get(&a)?;
        let l = self.group.exponent;
        let mut num: u128 = 0;
        for ((&e, &v), &o) in self
            .exponents
            .iter()
            .zip(exps)
            .zip(&self.group.structure.orders)
        {
            num += e as u128 * v as u128 * (l / o) as u128;
        }
        Some(UnityValue::from_fraction((num % l as u128) as i128, l))
    }

    /// chi(a) as an exact root of unity; the zero marker off the unit group.
    pub fn eval(&self, a: i128) -> UnityValue {
        if self.group.n == 1 {
            return UnityValue::one();
        }
        let a = a.rem_euclid(self.group.n as i128) as u64;
        self.value_at_unit(a).unwrap_or(UnityValue::Zero)
    }

    /// Pointwise complex conjugate: negate the exponent vector mod the orders.
    pub fn conjugate(&self) -> DirichletCharacter {
        let exps = self
            .exponents
            .iter()
            .zip(&self.group.structure.orders)
            .map(|(&e, &o)| ((o - e as u64) % o) as u32)
            .collect();
        self.group.character(exps)
    }

    /// Pointwise product with another character of the same modulus.
    pub fn mul(&self, other: &DirichletCharacter) -> DirichletCharacter {
        assert_eq!(self.modulus(), other.modulus());
        let exps = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .zip(&self.group.structure.orders)
            .map(|((&a, &b), &o)| ((a as u64 + b as u64) % o) as u32)
            .collect();
        self.group.character(exps)
    }

    fn compute_conductor(&self) -> u64 {
        let n = self.group.n;
        let mut divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        divisors.sort_unstable();
        'next: for &f in &divisors {
            // chi factors through f iff chi(a) = 1 whenever a = 1 mod f.
            for (&a, _) in &self.group.dlog {
                if a % f == 1 % f && !self.value_at_unit(a).unwrap().is_one() {
                    continue 'next;
                }
            }
            return f;
        }
        n
    }

    /// The unique primitive character mod conductor inducing this one.
    pub fn to_primitive(&self) -> (u64, DirichletCharacter) {
        let f = self.conductor;
        let n = self.modulus();
        if f == n {
            return (f, self.clone());
        }
        let fgroup = CharacterGroup::new(f);
        // Part of n coprime to f: prime powers of n whose primes do not divide f.
        let mut coprime_part = 1u64;
        for &(p, e) in &arith::factorize(n).factors {
            if f % p != 0 {
                coprime_part *= p.pow(e);
            }
        }
        let exps = fgroup
            .structure
            .generators
            .iter()
            .zip(&fgroup.structure.orders)
            .map(|(&g, &o)| {
                // Lift g to a residue that is g mod f, 1 mod the coprime part,
                // hence a unit mod n with the same chi-value class.
                let a = crt_lift(g, f, 1, coprime_part);
                let v = self.eval(a as i128);
                exponent_of_value(&v, o)
            })
            .collect();
        (f, fgroup.character(exps))
    }
}

/// x with x = a mod m, x = b mod r, for coprime m, r.
fn crt_lift(a: u64, m: u64, b: u64, r: u64) -> u64 {
    if r == 1 {
        return a % m;
    }
    if m == 1 {
        return b % r;
    }
    let minv = arith::mod_inverse(m as i128, r).expect("moduli must be coprime");
    let t = ((b as i128 - a as i128) * minv as i128).rem_euclid(r as i128) as u64;
    ((a as u128 + m as u128 * t as u128) % (m as u128 * r as u128)) as u64
}

/// Solve value = e^(2 pi i k / order) for k; the value's order must divide `order`.
fn exponent_of_value(v: &UnityValue, order: u64) -> u32 {
    let (q, d) = v.exponent().expect("character values on units are roots of unity");
    assert_eq!(order % d, 0, "value order must divide the generator order");
    (q * (order / d)) as u32
}

/// The unique character mod n agreeing with chi_star on residues coprime to n.
pub fn induce(
    chi_star: &DirichletCharacter,
    n: u64,
) -> Result<DirichletCharacter, CharacterError> {
    let f = chi_star.modulus();
    if f == 0 || n % f != 0 {
        return Err(CharacterError::NotADivisor { f, n });
    }
    let group = CharacterGroup::new(n);
    let exps = group
        .structure
        .generators
        .iter()
        .zip(&group.structure.orders)
        .map(|(&g, &o)| exponent_of_value(&chi_star.eval(g as i128), o))
        .collect();
    Ok(group.character(exps))
}

/// All phi(n) Dirichlet characters mod n.
pub fn all_characters(n: u64) -> Vec<DirichletCharacter> {
    CharacterGroup::new(n).all_characters()
}

/// The odd characters mod n (empty only for errors; rejects n <= 2).
pub fn odd_characters(n: u64) -> Result<Vec<DirichletCharacter>, CharacterError> {
    CharacterGroup::new(n).odd_characters()
}

impl DirichletCharacter {
    /// Canonical report label, e.g. `chi[n=15; e=(1,2); f=15; odd]`.
    pub fn label(&self) -> String {
        let exps = self
            .exponents
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "chi[n={}; e=({}); f={}; {}]",
            self.modulus(),
            exps,
            self.conductor,
            if self.is_odd() { "odd" } else { "even" }
        )
    }
}
