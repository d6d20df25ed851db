//! Cross-module property suites: indexing invariance, sign transfer,
//! positivity, the sine vanishing/halving laws, and the prime Maillet
//! identity. These are the lemma-level facts the verification drivers rely
//! on, checked over the ranges where they are cheap enough to sweep.

use num_bigint::BigInt;
use num_traits::Zero;

use trigdet_core::arith::factorize;
use trigdet_core::bigfloat::BigFloat;
use trigdet_core::matrices::{
    build, determinant, epsilon_sign, epsilon_sign_direct, maillet_determinant_exact, DetResult,
    Indexing, MatrixKind, TrigMatrixSpec,
};
use trigdet_core::special::relative_class_number;

const PREC: u32 = 224;

fn det_of(kind: MatrixKind, n: u64, indexing: Indexing) -> DetResult {
    let spec = TrigMatrixSpec::new(kind, n, indexing).unwrap();
    determinant(&build(&spec, PREC).unwrap())
}

fn le(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp_value(b) != std::cmp::Ordering::Greater
}

/// Combined error budget for comparing two determinants.
fn budget(a: &DetResult, b: &DetResult) -> BigFloat {
    let scale = a.value.abs().max_by_value(b.value.abs()).max_by_value(BigFloat::one(PREC));
    a.error
        .add(&b.error)
        .scale_pow2(4)
        .add(&scale.scale_pow2(-((PREC / 2) as i64)))
}

fn trig_kinds_for(n: u64) -> Vec<MatrixKind> {
    let mut kinds = vec![MatrixKind::Cot, MatrixKind::Sin];
    if n % 2 == 1 {
        kinds.push(MatrixKind::Tan);
        kinds.push(MatrixKind::Csc);
    }
    kinds
}

#[test]
fn indexing_preserves_absolute_determinant_to_60() {
    for n in 3..=60u64 {
        for kind in trig_kinds_for(n) {
            let dp = det_of(kind, n, Indexing::Product);
            let di = det_of(kind, n, Indexing::InverseProduct);
            let diff = dp.value.abs().sub(&di.value.abs()).abs();
            assert!(
                le(&diff, &budget(&dp, &di)),
                "kind {kind:?}, n = {n}: |{}| vs |{}|",
                dp.value.to_decimal_string(20),
                di.value.to_decimal_string(20)
            );
        }
    }
}

#[test]
fn sign_transfer_matches_epsilon_for_odd_n_to_45() {
    for n in (3..=45u64).step_by(2) {
        let eps = epsilon_sign(n).unwrap().epsilon;
        for kind in trig_kinds_for(n) {
            let dp = det_of(kind, n, Indexing::Product);
            let di = det_of(kind, n, Indexing::InverseProduct);
            let rhs = if eps < 0 { di.value.neg() } else { di.value.clone() };
            let diff = dp.value.sub(&rhs).abs();
            assert!(
                le(&diff, &budget(&dp, &di)),
                "kind {kind:?}, n = {n}, eps = {eps:+}"
            );
        }
    }
}

#[test]
fn inverse_indexed_cotangent_determinant_is_positive_to_60() {
    for n in 3..=60u64 {
        let d = det_of(MatrixKind::Cot, n, Indexing::InverseProduct);
        assert_eq!(d.value.signum(), 1, "n = {n}");
        // Positivity must be resolved, not noise.
        assert!(le(&d.error.scale_pow2(4), &d.value.abs()), "n = {n}");
    }
}

#[test]
fn sine_determinant_vanishing_cases_to_60() {
    for n in 3..=60u64 {
        let fac = factorize(n);
        let vanishes = (n % 4 == 0 && n > 4) || (n % 2 == 1 && !fac.is_square_free());
        if !vanishes {
            continue;
        }
        let d = det_of(MatrixKind::Sin, n, Indexing::Product);
        assert!(
            le(&d.value.abs(), &d.error.mul_i64(10)),
            "n = {n}: |det| = {} error = {}",
            d.value.abs().to_decimal_string(10),
            d.error.to_decimal_string(10)
        );
    }
}

#[test]
fn sine_determinant_halving_for_even_n() {
    for n1 in (3..=30u64).step_by(2) {
        let odd = det_of(MatrixKind::Sin, n1, Indexing::Product);
        let doubled = det_of(MatrixKind::Sin, 2 * n1, Indexing::Product);
        let diff = odd.value.abs().sub(&doubled.value.abs()).abs();
        assert!(le(&diff, &budget(&odd, &doubled)), "n1 = {n1}");
    }
}

#[test]
fn maillet_prime_identity_small_primes() {
    // |D_p| = p^((p-3)/2) h_p^-, with h_p^- = 1 for these primes.
    for p in [5u64, 7, 11, 13] {
        let h = relative_class_number(p, 256).unwrap().h_minus;
        assert_eq!(h, 1u32.into(), "p = {p}");
        let d = maillet_determinant_exact(p).unwrap();
        let expect = BigInt::from(p).pow(((p - 3) / 2) as u32);
        assert_eq!(d.magnitude().clone(), expect.magnitude().clone(), "p = {p}");
    }
}

#[test]
fn maillet_determinants_frozen_values() {
    // Independently computed with exact integer elimination at word size.
    let expect: &[(u64, &str)] = &[
        (17, "-410338673"),
        (19, "16983563041"),
        (25, "-3814697265625"),
        (27, "282429536481"),
        (29, "-82085029703668817512"),
        (31, "6812495416987166882889"),
        (33, "0"),
        (35, "-193098314746093750"),
        (39, "0"),
        (43, "98548851401030959947062957685234211"),
        (45, "-3064556602441406250"),
    ];
    for &(n, v) in expect {
        let d = maillet_determinant_exact(n).unwrap();
        assert_eq!(d, v.parse::<BigInt>().unwrap(), "n = {n}");
    }
}

#[test]
fn maillet_vanishes_iff_some_character_sum_vanishes() {
    // The only odd n <= 45 with D_n = 0 are 21, 33, 39.
    let zero_n: Vec<u64> = (3..=45)
        .step_by(2)
        .filter(|&n| maillet_determinant_exact(n).unwrap().is_zero())
        .collect();
    assert_eq!(zero_n, vec![21, 33, 39]);
}

#[test]
fn centered_maillet_builds_and_matches_dimension() {
    let spec =
        TrigMatrixSpec::new(MatrixKind::MailletCentered, 15, Indexing::InverseProduct).unwrap();
    let m = build(&spec, 128).unwrap();
    assert_eq!(m.dim(), 4);
    // Entries are half-integers R - n/2; spot check the (1,1) corner:
    // R_15(1*1) - 15/2 = 1 - 7.5 = -6.5.
    let expect = BigFloat::from_i64(-13, 128).scale_pow2(-1);
    assert_eq!(m.get(0, 0).cmp_value(&expect), std::cmp::Ordering::Equal);
}

#[test]
fn epsilon_components_match_closed_forms_to_201() {
    // sign(tau) and the inversion-count parity each follow their own closed
    // form; epsilon is their product.
    for n in (3..=201u64).step_by(2) {
        let d = epsilon_sign_direct(n).unwrap();
        let f = factorize(n);
        let m = trigdet_core::arith::euler_phi(n) / 2;
        let r = f.num_prime_factors();
        let (p1, e1) = f.factors[0];
        let tau_negative = match r {
            1 => p1 % 8 == 1 || p1 % 8 == (4 * e1 as u64 + 3) % 8,
            2 => (p1 + f.factors[1].0) % 4 == 0,
            _ => false,
        };
        assert_eq!(d.tau_sign < 0, tau_negative, "tau sign at n = {n}");
        let delta = if r == 1 { 1 } else { 0 };
        assert_eq!(
            d.inversion_parity as u64,
            (m + 2 - delta) % 2,
            "inversion parity at n = {n}"
        );
        assert_eq!(d.epsilon, epsilon_sign(n).unwrap().epsilon);
    }
}
