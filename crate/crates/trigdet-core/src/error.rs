//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("modulus {n} is below the minimum {minimum} for this operation")]
    ModulusTooSmall { n: u64, minimum: u64 },
    #[error("{a} is not coprime to {n}")]
    NotCoprime { a: u64, n: u64 },
    #[error("modulus {n} must be odd")]
    EvenModulus { n: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("modulus {n} is below the minimum {minimum} for this operation")]
    ModulusTooSmall { n: u64, minimum: u64 },
    #[error("operation requires an odd character (chi(-1) = -1)")]
    OddCharacterRequired,
    #[error("operation requires a non-principal character")]
    PrincipalCharacterRequired,
    #[error("{f} does not divide {n}; cannot induce a character")]
    NotADivisor { f: u64, n: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecialError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("modulus {n} must be odd for this sum (tangent/cosecant poles)")]
    EvenModulus { n: u64 },
    #[error("n = {n} is rejected: congruent to 2 mod 4 (same cyclotomic field as n/2)")]
    TwoModFour { n: u64 },
    #[error("{n} is not an odd prime")]
    NotOddPrime { n: u64 },
    #[error(
        "precision {precision_bits} bits is insufficient: rounding residual {residual} exceeds \
         tolerance {tolerance}"
    )]
    PrecisionInsufficient {
        precision_bits: u32,
        residual: String,
        tolerance: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("ill-posed matrix spec: {reason}")]
    IllPosed { reason: String },
    #[error("closed-form sign {closed_form} disagrees with direct permutation sign {direct} at n = {n}")]
    SignMismatch { n: u64, closed_form: i8, direct: i8 },
    #[error(transparent)]
    Character(#[from] CharacterError),
}
