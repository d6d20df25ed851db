//! Analytic special values: Gauss sums, generalized Bernoulli numbers,
//! L(1, chi) by two independent routes, Euler-factor corrections, and the
//! relative class number of the n-th cyclotomic field.
//!
//! The two L-value routes share nothing but the character table: one is the
//! finite cotangent sum, the other goes through the Gauss sum and the
//! generalized Bernoulli number of the primitive core. Their agreement is a
//! strong end-to-end check and is enforced by the property suites.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::arith::{euler_phi, factorize, multiplicative_order, residue_systems};
use crate::bigcomplex::BigComplex;
use crate::bigfloat::{cot_pi, csc_pi, pi, tan_pi, BigFloat, GUARD_BITS};
use crate::characters::DirichletCharacter;
use crate::error::SpecialError;
use crate::unity::UnityValue;

/// G(l, chi) = sum_{j=1..n} chi(j) e^(2 pi i l j / n); G(1, chi) is the
/// classical Gauss sum tau(chi). Each term is an exact root of unity before
/// conversion, so only the final additions are inexact.
pub fn gauss_sum(chi: &DirichletCharacter, l: i64, prec: u32) -> BigComplex {
    let n = chi.modulus();
    let w = prec + GUARD_BITS;
    let mut acc = BigComplex::zero(w);
    for j in 1..=n {
        let cv = chi.eval(j as i128);
        if cv.is_zero() {
            continue;
        }
        let root = cv.mul(&UnityValue::from_fraction(l as i128 * j as i128, n));
        acc = acc.add(&BigComplex::from_unity(&root, w));
    }
    BigComplex { re: acc.re.with_prec(prec), im: acc.im.with_prec(prec) }
}

/// tau(chi) = G(1, chi).
pub fn tau(chi: &DirichletCharacter, prec: u32) -> BigComplex {
    gauss_sum(chi, 1, prec)
}

/// Generalized Bernoulli number B_{1,chi} = (1/f) sum_{a=1..f} a chi*(a)
/// over the primitive core chi* of conductor f. Rejects the principal
/// character; even characters give exactly zero (a <-> f-a pairing).
pub fn bernoulli_b1(chi: &DirichletCharacter, prec: u32) -> Result<BigComplex, SpecialError> {
    if chi.is_principal() {
        return Err(crate::error::CharacterError::PrincipalCharacterRequired.into());
    }
    if !chi.is_odd() {
        return Ok(BigComplex::zero(prec));
    }
    let (f, star) = chi.to_primitive();
    let w = prec + GUARD_BITS;
    let mut acc = BigComplex::zero(w);
    for a in 1..=f {
        let cv = star.eval(a as i128);
        if cv.is_zero() {
            continue;
        }
        acc = acc.add(&BigComplex::from_unity(&cv, w).mul_real(&BigFloat::from_u64(a, w)));
    }
    let acc = acc.div_real(&BigFloat::from_u64(f, w));
    Ok(BigComplex { re: acc.re.with_prec(prec), im: acc.im.with_prec(prec) })
}

fn require_odd(chi: &DirichletCharacter) -> Result<(), SpecialError> {
    if !chi.is_odd() {
        return Err(crate::error::CharacterError::OddCharacterRequired.into());
    }
    Ok(())
}

fn require_odd_modulus(n: u64) -> Result<(), SpecialError> {
    if n % 2 == 0 {
        return Err(SpecialError::EvenModulus { n });
    }
    Ok(())
}

/// sum_{j in U_n} chi(j) cot(j pi / n) for odd chi; equals (2n/pi) L(1, chi).
pub fn cot_character_sum(
    chi: &DirichletCharacter,
    prec: u32,
) -> Result<BigComplex, SpecialError> {
    require_odd(chi)?;
    let n = chi.modulus();
    let w = prec + GUARD_BITS;
    let systems = residue_systems(n).expect("odd characters exist only for n >= 3");
    let mut acc = BigComplex::zero(w);
    for &j in &systems.centered {
        let cv = chi.eval(j as i128);
        if cv.is_zero() {
            continue;
        }
        let kernel = cot_pi(j as i128, n, w);
        acc = acc.add(&BigComplex::from_unity(&cv, w).mul_real(&kernel));
    }
    Ok(BigComplex { re: acc.re.with_prec(prec), im: acc.im.with_prec(prec) })
}

/// sum_{j in U_n} chi(j) tan(j pi / n) for odd chi mod odd n.
pub fn tan_character_sum(
    chi: &DirichletCharacter,
    prec: u32,
) -> Result<BigComplex, SpecialError> {
    require_odd(chi)?;
    require_odd_modulus(chi.modulus())?;
    let n = chi.modulus();
    let w = prec + GUARD_BITS;
    let systems = residue_systems(n).expect("n >= 3");
    let mut acc = BigComplex::zero(w);
    for &j in &systems.centered {
        let cv = chi.eval(j as i128);
        if cv.is_zero() {
            continue;
        }
        acc = acc.add(&BigComplex::from_unity(&cv, w).mul_real(&tan_pi(j as i128, n, w)));
    }
    Ok(BigComplex { re: acc.re.with_prec(prec), im: acc.im.with_prec(prec) })
}

/// sum_{j in U_n} chi(j) csc(2 j pi / n) for odd chi mod odd n.
pub fn csc_character_sum(
    chi: &DirichletCharacter,
    prec: u32,
) -> Result<BigComplex, SpecialError> {
    require_odd(chi)?;
    require_odd_modulus(chi.modulus())?;
    let n = chi.modulus();
    let w = prec + GUARD_BITS;
    let systems = residue_systems(n).expect("n >= 3");
    let mut acc = BigComplex::zero(w);
    for &j in &systems.centered {
        let cv = chi.eval(j as i128);
        if cv.is_zero() {
            continue;
        }
        acc = acc.add(&BigComplex::from_unity(&cv, w).mul_real(&csc_pi(2 * j as i128, n, w)));
    }
    Ok(BigComplex { re: acc.re.with_prec(prec), im: acc.im.with_prec(prec) })
}

/// prod over p | n, p not dividing f_chi of (1 - chi*(p)/p); empty product is 1.
pub fn euler_factor_product(chi: &DirichletCharacter, prec: u32) -> BigComplex {
    let n = chi.modulus();
    let (f, star) = chi.to_primitive();
    let w = prec + GUARD_BITS;
    let mut acc = BigComplex::one(w);
    for &(p, _) in &factorize(n).factors {
        if f % p == 0 {
            continue;
        }
        let factor = BigComplex::one(w).sub(
            &BigComplex::from_unity(&star.eval(p as i128), w)
                .div_real(&BigFloat::from_u64(p, w)),
        );
        acc = acc.mul(&factor);
    }
    BigComplex { re: acc.re.with_prec(prec), im: acc.im.with_prec(prec) }
}

/// Route selector for [`l1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L1Route {
    /// (pi / 2n) * cotangent character sum. The paper-side route.
    CotSum,
    /// L(1, chi*) from tau and B_1 on the primitive core, times the Euler
    /// factors for the primes of n away from the conductor. The independent
    /// oracle route.
    EulerPrimitive,
}

/// L(1, chi*) for a primitive odd character: pi * i * tau(chi*) * B_{1, conj chi*} / f.
fn l_value_primitive(star: &DirichletCharacter, prec: u32) -> Result<BigComplex, SpecialError> {
    let w = prec + GUARD_BITS;
    let f = star.modulus();
    let t = tau(star, w);
    let b1_bar = bernoulli_b1(&star.conjugate(), w)?;
    let v = t
        .mul(&b1_bar)
        .mul_i()
        .mul_real(&pi(w))
        .div_real(&BigFloat::from_u64(f, w));
    Ok(BigComplex { re: v.re.with_prec(prec), im: v.im.with_prec(prec) })
}

/// L(1, chi) for an odd character, by the requested route.
pub fn l1(
    chi: &DirichletCharacter,
    prec: u32,
    route: L1Route,
) -> Result<BigComplex, SpecialError> {
    if chi.is_principal() {
        return Err(crate::error::CharacterError::PrincipalCharacterRequired.into());
    }
    require_odd(chi)?;
    match route {
        L1Route::CotSum => {
            let w = prec + GUARD_BITS;
            let s = cot_character_sum(chi, w)?;
            let scale = pi(w).div(&BigFloat::from_u64(2 * chi.modulus(), w));
            let v = s.mul_real(&scale);
            Ok(BigComplex { re: v.re.with_prec(prec), im: v.im.with_prec(prec) })
        }
        L1Route::EulerPrimitive => {
            let w = prec + GUARD_BITS;
            let (_, star) = chi.to_primitive();
            let v = l_value_primitive(&star, w)?.mul(&euler_factor_product(chi, w));
            Ok(BigComplex { re: v.re.with_prec(prec), im: v.im.with_prec(prec) })
        }
    }
}

/// prod over odd chi mod p of (1 - chi(2)): 2^((p-1)/l) if the order l of
/// 2 mod p is even, 0 if l is odd.
pub fn one_minus_chi2_product(p: u64) -> Result<BigUint, SpecialError> {
    if p < 3 || p % 2 == 0 || !factorize(p).is_prime() {
        return Err(SpecialError::NotOddPrime { n: p });
    }
    let l = multiplicative_order(2, p).expect("2 is a unit mod odd p");
    if l % 2 == 0 {
        Ok(BigUint::one() << ((p - 1) / l))
    } else {
        Ok(BigUint::ZERO)
    }
}

/// Relative class number data for the n-th cyclotomic field.
#[derive(Debug, Clone)]
pub struct ClassNumberData {
    pub n: u64,
    pub h_minus: BigUint,
    /// Unit index: 1 for prime-power n, else 2.
    pub q: u8,
    /// Number of roots of unity in the n-th cyclotomic field.
    pub w: u64,
    /// Product of the conductors of the odd characters mod n.
    pub conductor_product: BigUint,
    /// Product of L(1, chi*) over the odd characters mod n.
    pub l_product: BigComplex,
}

/// Tolerance for integer rounding inside the class-number computation,
/// relative to max(1, value): 1e-10.
fn rounding_tolerance(scale: &BigFloat, prec: u32) -> BigFloat {
    let tol = BigFloat::from_ratio(&BigInt::one(), &BigInt::from(10u64).pow(10), prec);
    tol.mul(&scale.abs().max_by_value(BigFloat::one(prec)))
}

/// h_n^- as the nearest integer to Q * w * prod over odd chi of (-B_{1,chi*}/2),
/// with all supporting data. Rejects n = 2 mod 4, where the field coincides
/// with the one for n/2; callers should normalize first.
pub fn relative_class_number(n: u64, prec: u32) -> Result<ClassNumberData, SpecialError> {
    if n < 3 {
        return Err(crate::error::CharacterError::ModulusTooSmall { n, minimum: 3 }.into());
    }
    if n % 4 == 2 {
        return Err(SpecialError::TwoModFour { n });
    }
    let w_bits = prec + GUARD_BITS;
    let odd = crate::characters::odd_characters(n).expect("n >= 3");
    let mut b_product = BigComplex::one(w_bits);
    let mut l_product = BigComplex::one(w_bits);
    let mut conductor_product = BigUint::one();
    for chi in &odd {
        let (f, star) = chi.to_primitive();
        conductor_product *= BigUint::from(f);
        let b1 = bernoulli_b1(&star, w_bits)?;
        b_product = b_product.mul(&b1.neg().mul_real(&BigFloat::from_ratio(
            &BigInt::one(),
            &BigInt::from(2),
            w_bits,
        )));
        l_product = l_product.mul(&l_value_primitive(&star, w_bits)?);
    }
    let q: u8 = if factorize(n).is_prime_power() { 1 } else { 2 };
    let w_roots = if n % 2 == 1 { 2 * n } else { n };
    let value = b_product.mul_real(&BigFloat::from_u64(q as u64 * w_roots, w_bits));
    let tol = rounding_tolerance(&value.re, w_bits);
    let (h_int, residual) = value.re.to_nearest_integer();
    let im_ok = value.im.abs().cmp_value(&tol) != std::cmp::Ordering::Greater;
    let res_ok = residual.cmp_value(&tol) != std::cmp::Ordering::Greater;
    if !res_ok || !im_ok || h_int.sign() != num_bigint::Sign::Plus {
        return Err(SpecialError::PrecisionInsufficient {
            precision_bits: prec,
            residual: residual.max_by_value(value.im.abs()).to_decimal_string(6),
            tolerance: tol.to_decimal_string(6),
        });
    }
    let h_minus = h_int.magnitude().clone();
    // Cross-check the analytic identity
    //   prod L(1, chi*) = (2 pi)^(phi(n)/2) h^- / (Q w sqrt(prod f)).
    let m = euler_phi(n) / 2;
    let rhs = pi(w_bits)
        .scale_pow2(1)
        .powi(m)
        .mul(&BigFloat::from_bigint(&BigInt::from(h_minus.clone()), w_bits))
        .div(
            &BigFloat::from_u64(q as u64 * w_roots, w_bits)
                .mul(&BigFloat::from_bigint(&BigInt::from(conductor_product.clone()), w_bits).sqrt()),
        );
    let diff = l_product.re.sub(&rhs).abs().max_by_value(l_product.im.abs());
    let gate = BigFloat::from_ratio(&BigInt::one(), &BigInt::from(10u64).pow(12), w_bits)
        .mul(&rhs.abs());
    if diff.cmp_value(&gate) == std::cmp::Ordering::Greater {
        return Err(SpecialError::PrecisionInsufficient {
            precision_bits: prec,
            residual: diff.to_decimal_string(6),
            tolerance: gate.to_decimal_string(6),
        });
    }
    Ok(ClassNumberData {
        n,
        h_minus,
        q,
        w: w_roots,
        conductor_product,
        l_product: BigComplex {
            re: l_product.re.with_prec(prec),
            im: l_product.im.with_prec(prec),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;
    use crate::characters::{all_characters, odd_characters, CharacterGroup};
    use num_traits::Zero;

    fn assert_close(a: &BigFloat, b: &BigFloat, tol_log2: i64, what: &str) {
        let d = a.sub(b).abs();
        assert!(
            d.is_zero() || d.magnitude_bits().unwrap() < tol_log2,
            "{what}: {} vs {}",
            a.to_decimal_string(25),
            b.to_decimal_string(25),
        );
    }

    #[test]
    fn gauss_sum_quadratic_mod_3() {
        let p = 192;
        let chi = odd_characters(3).unwrap().remove(0);
        let t = tau(&chi, p);
        // tau = i sqrt(3)
        assert!(t.re.abs().magnitude_bits().unwrap_or(i64::MIN) < -(p as i64) + 16);
        assert_close(&t.im, &BigFloat::from_u64(3, p).sqrt(), -(p as i64) + 16, "tau(chi_3)");
    }

    #[test]
    fn gauss_sum_twisting_identity() {
        // G(l, chi) = conj(chi)(l) tau(chi) for primitive chi; spot check mod 5.
        let p = 160;
        for chi in odd_characters(5).unwrap() {
            let t = tau(&chi, p);
            let g2 = gauss_sum(&chi, 2, p);
            let expect = BigComplex::from_unity(&chi.conjugate().eval(2), p).mul(&t);
            let d = g2.sub(&expect).abs();
            assert!(d.magnitude_bits().unwrap_or(i64::MIN) < -(p as i64) + 20);
        }
    }

    #[test]
    fn gauss_sum_vanishes_for_non_squarefree_induction() {
        // chi mod 9 induced from mod 3: tau(chi) = chi*(3) mu(3) tau(chi*) = 0.
        let p = 160;
        let quad3 = odd_characters(3).unwrap().remove(0);
        let chi9 = crate::characters::induce(&quad3, 9).unwrap();
        let t = tau(&chi9, p);
        assert!(t.abs().magnitude_bits().unwrap_or(i64::MIN) < -(p as i64) + 20);
    }

    #[test]
    fn bernoulli_examples() {
        let p = 160;
        let quad3 = odd_characters(3).unwrap().remove(0);
        let b = bernoulli_b1(&quad3, p).unwrap();
        assert_close(&b.re, &BigFloat::from_ratio(&BigInt::from(-1), &BigInt::from(3), p), -150, "B1 mod 3");
        assert!(b.im.is_zero() || b.im.magnitude_bits().unwrap() < -150);

        let quad4 = odd_characters(4).unwrap().remove(0);
        let b = bernoulli_b1(&quad4, p).unwrap();
        assert_close(&b.re, &BigFloat::from_ratio(&BigInt::from(-1), &BigInt::from(2), p), -150, "B1 mod 4");

        // Even non-principal characters give exactly zero.
        let even_non_principal: Vec<_> = all_characters(5)
            .into_iter()
            .filter(|c| !c.is_principal() && !c.is_odd())
            .collect();
        assert!(!even_non_principal.is_empty());
        assert!(bernoulli_b1(&even_non_principal[0], p).unwrap().is_zero());
        assert!(bernoulli_b1(&CharacterGroup::new(5).principal(), p).is_err());
    }

    #[test]
    fn cot_sum_examples() {
        let p = 192;
        let quad3 = odd_characters(3).unwrap().remove(0);
        let s = cot_character_sum(&quad3, p).unwrap();
        // 2 cot(pi/3) = 2/sqrt(3)
        let expect = BigFloat::from_u64(3, p).sqrt().recip().scale_pow2(1);
        assert_close(&s.re, &expect, -(p as i64) + 16, "cot sum mod 3");

        // Equality with (2n/pi) L(1, chi) on the independent route, mod 5.
        for chi in odd_characters(5).unwrap() {
            let s = cot_character_sum(&chi, p).unwrap();
            let l = l1(&chi, p, L1Route::EulerPrimitive).unwrap();
            let expect = l.mul_real(&BigFloat::from_u64(10, p).div(&pi(p)));
            let d = s.sub(&expect).abs();
            assert!(d.magnitude_bits().unwrap_or(i64::MIN) < -(p as i64) + 24);
        }

        // Even characters rejected.
        let even = all_characters(5).into_iter().find(|c| !c.is_odd() && !c.is_principal()).unwrap();
        assert!(cot_character_sum(&even, p).is_err());
    }

    #[test]
    fn tan_sum_examples() {
        let p = 192;
        let quad3 = odd_characters(3).unwrap().remove(0);
        let s = tan_character_sum(&quad3, p).unwrap();
        // 2 tan(pi/3) = 2 sqrt(3)
        assert_close(&s.re, &BigFloat::from_u64(3, p).sqrt().scale_pow2(1), -(p as i64) + 16, "tan sum mod 3");

        // Factor identity: tan sum = (1 - 2 conj(chi)(2)) cot sum.
        for n in [3u64, 5, 9, 15] {
            for chi in odd_characters(n).unwrap() {
                let t = tan_character_sum(&chi, p).unwrap();
                let c = cot_character_sum(&chi, p).unwrap();
                let factor = BigComplex::one(p).sub(
                    &BigComplex::from_unity(&chi.conjugate().eval(2), p)
                        .mul_real(&BigFloat::from_u64(2, p)),
                );
                let d = t.sub(&factor.mul(&c)).abs();
                assert!(
                    d.magnitude_bits().unwrap_or(i64::MIN) < -(p as i64) + 32,
                    "n = {n}"
                );
            }
        }
        // Even modulus rejected (poles).
        let quad4 = odd_characters(4).unwrap().remove(0);
        assert!(tan_character_sum(&quad4, p).is_err());
    }

    #[test]
    fn csc_sum_examples() {
        let p = 192;
        let quad3 = odd_characters(3).unwrap().remove(0);
        let s = csc_character_sum(&quad3, p).unwrap();
        // 2 csc(2 pi/3) = 4/sqrt(3)
        let expect = BigFloat::from_u64(3, p).sqrt().recip().scale_pow2(2);
        assert_close(&s.re, &expect, -(p as i64) + 16, "csc sum mod 3");

        // Factor identity, and exact vanishing when chi(2) = 1 (mod 7 quadratic).
        for n in [3u64, 5, 7, 9, 15] {
            for chi in odd_characters(n).unwrap() {
                let s = csc_character_sum(&chi, p).unwrap();
                let c = cot_character_sum(&chi, p).unwrap();
                let factor = BigComplex::one(p)
                    .sub(&BigComplex::from_unity(&chi.conjugate().eval(2), p));
                let d = s.sub(&factor.mul(&c)).abs();
                assert!(
                    d.magnitude_bits().unwrap_or(i64::MIN) < -(p as i64) + 32,
                    "n = {n}"
                );
            }
        }
        let quad7 = odd_characters(7)
            .unwrap()
            .into_iter()
            .find(|c| c.eval(2).is_one())
            .expect("(2|7) = 1 so the quadratic character mod 7 has chi(2) = 1");
        let s = csc_character_sum(&quad7, p).unwrap();
        assert!(s.abs().magnitude_bits().unwrap_or(i64::MIN) < -(p as i64) + 32);
    }

    #[test]
    fn l1_route_agreement_examples() {
        let p = 192;
        // Classical value for the quadratic character mod 3: pi / (3 sqrt(3)).
        let quad3 = odd_characters(3).unwrap().remove(0);
        let want = pi(p).div(&BigFloat::from_u64(3, p).mul(&BigFloat::from_u64(3, p).sqrt()));
        for route in [L1Route::CotSum, L1Route::EulerPrimitive] {
            let l = l1(&quad3, p, route).unwrap();
            assert_close(&l.re, &want, -(p as i64) + 24, "L(1) mod 3");
        }

        // chi mod 9 induced from mod 3: empty Euler correction, L = L(1, chi*).
        let chi9 = crate::characters::induce(&quad3, 9).unwrap();
        let l9 = l1(&chi9, p, L1Route::EulerPrimitive).unwrap();
        assert_close(&l9.re, &want, -(p as i64) + 24, "induced mod 9");

        // Odd chi mod 15 with conductor 3: L = L(1, chi*)(1 - chi*(5)/5) = 6/5 L*.
        let chi15 = crate::characters::induce(&quad3, 15).unwrap();
        let l15 = l1(&chi15, p, L1Route::EulerPrimitive).unwrap();
        let want15 = want.mul(&BigFloat::from_ratio(&BigInt::from(6), &BigInt::from(5), p));
        assert_close(&l15.re, &want15, -(p as i64) + 24, "induced mod 15");
        let l15_cot = l1(&chi15, p, L1Route::CotSum).unwrap();
        assert_close(&l15_cot.re, &want15, -(p as i64) + 24, "cot route mod 15");
    }

    #[test]
    fn euler_factor_examples() {
        let p = 160;
        // Primitive character: empty product.
        for chi in odd_characters(5).unwrap() {
            let e = euler_factor_product(&chi, p);
            assert_close(&e.re, &BigFloat::one(p), -150, "primitive");
            assert!(e.im.is_zero() || e.im.magnitude_bits().unwrap() < -150);
        }
        // Conductor-3 character mod 15: single factor 1 + 1/5 = 6/5.
        let quad3 = odd_characters(3).unwrap().remove(0);
        let chi15 = crate::characters::induce(&quad3, 15).unwrap();
        let e = euler_factor_product(&chi15, p);
        assert_close(
            &e.re,
            &BigFloat::from_ratio(&BigInt::from(6), &BigInt::from(5), p),
            -150,
            "mod 15, f = 3",
        );
        // Conductor-5 core mod 15: factor 1 - chi*(3)/3 with chi*(3) = +-i.
        let f5: Vec<_> = odd_characters(15)
            .unwrap()
            .into_iter()
            .filter(|c| c.conductor() == 5)
            .collect();
        assert_eq!(f5.len(), 2);
        for chi in &f5 {
            let e = euler_factor_product(chi, p);
            assert_close(&e.re, &BigFloat::one(p), -150, "re part");
            assert_close(
                &e.im.abs(),
                &BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(3), p),
                -150,
                "im part",
            );
        }
    }

    #[test]
    fn one_minus_chi2_examples() {
        assert_eq!(one_minus_chi2_product(7).unwrap(), BigUint::ZERO);
        assert_eq!(one_minus_chi2_product(43).unwrap(), BigUint::from(8u32));
        assert_eq!(one_minus_chi2_product(11).unwrap(), BigUint::from(2u32));
        assert!(one_minus_chi2_product(9).is_err());
        assert!(one_minus_chi2_product(2).is_err());
    }

    #[test]
    fn class_numbers_small() {
        let d5 = relative_class_number(5, 192).unwrap();
        assert_eq!(d5.h_minus, BigUint::from(1u32));
        assert_eq!(d5.q, 1);
        assert_eq!(d5.w, 10);
        assert_eq!(d5.conductor_product, BigUint::from(25u32));

        let d23 = relative_class_number(23, 256).unwrap();
        assert_eq!(d23.h_minus, BigUint::from(3u32));

        let d43 = relative_class_number(43, 384).unwrap();
        assert_eq!(d43.h_minus, BigUint::from(211u32));

        let d12 = relative_class_number(12, 192).unwrap();
        assert_eq!(d12.h_minus, BigUint::from(1u32));
        assert_eq!(d12.q, 2);
        assert_eq!(d12.w, 12);

        assert!(relative_class_number(6, 192).is_err());
        assert!(relative_class_number(2, 192).is_err());
    }

    #[test]
    fn class_number_table_matches_oracle() {
        // Frozen from an independent high-precision B1-product computation.
        let table: &[(u64, u32)] = &[
            (3, 1), (4, 1), (7, 1), (8, 1), (9, 1), (11, 1), (13, 1), (15, 1),
            (16, 1), (19, 1), (20, 1), (21, 1), (24, 1), (29, 8), (31, 9),
            (33, 1), (35, 1), (37, 37), (39, 2), (40, 1), (41, 121), (44, 1),
            (45, 1),
        ];
        for &(n, h) in table {
            let d = relative_class_number(n, (8 * n as u32).max(192)).unwrap();
            assert_eq!(d.h_minus, BigUint::from(h), "n = {n}");
        }
    }

    #[test]
    fn l_product_is_real_positive() {
        for n in [5u64, 9, 12, 15, 16, 21] {
            let d = relative_class_number(n, 256).unwrap();
            assert!(!d.l_product.re.is_negative(), "n = {n}");
            assert!(!d.l_product.re.is_zero(), "n = {n}");
            if let Some(im_bits) = d.l_product.im.abs().magnitude_bits() {
                let ratio_bits = im_bits - d.l_product.re.magnitude_bits().unwrap();
                assert!(ratio_bits < -200, "n = {n}");
            }
        }
    }

    #[test]
    fn tau_modulus_is_sqrt_conductor_for_primitive() {
        let p = 192;
        for n in 3..=24u64 {
            for chi in all_characters(n) {
                if !chi.is_primitive() || chi.is_principal() {
                    continue;
                }
                let t = tau(&chi, p).abs();
                assert_close(
                    &t,
                    &BigFloat::from_u64(n, p).sqrt(),
                    -(p as i64) / 2,
                    &format!("|tau| for {}", chi.label()),
                );
            }
        }
    }

    #[test]
    fn tau_induction_identity_small() {
        // tau(chi) = chi*(n/n*) mu(n/n*) tau(chi*), checked numerically.
        let p = 192;
        for n in 3..=24u64 {
            for chi in all_characters(n) {
                if chi.is_principal() {
                    continue;
                }
                let (f, star) = chi.to_primitive();
                let ratio = n / f;
                let t = tau(&chi, p);
                let expect = BigComplex::from_unity(&star.eval(ratio as i128), p)
                    .mul_real(&BigFloat::from_i64(crate::arith::moebius(ratio), p))
                    .mul(&tau(&star, p));
                let d = t.sub(&expect).abs();
                assert!(
                    d.magnitude_bits().unwrap_or(i64::MIN) < -(p as i64) / 2,
                    "n = {n}, chi = {}",
                    chi.label()
                );
            }
        }
    }

    #[test]
    fn gauss_twisting_for_non_coprime_l_uses_definition() {
        // For gcd(l, n) > 1 the sum is still well-defined; sanity check that
        // it stays bounded by phi(n).
        let p = 128;
        for chi in all_characters(12) {
            for l in 0..12i64 {
                let g = gauss_sum(&chi, l, p);
                assert!(
                    g.abs().cmp_value(&BigFloat::from_u64(13, p)) == std::cmp::Ordering::Less
                );
            }
        }
    }

    #[test]
    fn cot_sum_even_modulus_allowed() {
        // The cotangent sum has no pole obstruction at even n; check the
        // mod-4 value 2 cot(pi/4) = 2.
        let p = 160;
        let quad4 = odd_characters(4).unwrap().remove(0);
        let s = cot_character_sum(&quad4, p).unwrap();
        assert_close(&s.re, &BigFloat::from_u64(2, p), -(p as i64) + 16, "cot sum mod 4");
    }

    #[test]
    fn unit_sums_respect_coprimality() {
        // Everything above silently skips non-units; make sure eval agrees.
        for n in [9u64, 12, 15] {
            for chi in all_characters(n) {
                for a in 0..n {
                    assert_eq!(chi.eval(a as i128).is_zero(), gcd(a, n) != 1);
                }
            }
        }
    }
}
