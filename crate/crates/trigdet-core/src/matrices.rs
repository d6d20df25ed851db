//! The trigonometric and Maillet matrix families, their determinants, and
//! the permutation sign relating product and inverse-product indexing.
//!
//! Rows and columns are always taken in ascending order of the half residue
//! system (1..(n-1)/2 for the full tangent matrix); every sign statement in
//! this crate is relative to that single canonical order.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{factorize, mod_inverse, residue_systems, euler_phi, least_positive_residue};
use crate::bigcomplex::BigComplex;
use crate::bigfloat::{cot_pi, csc_pi, pi, sin_pi, tan_pi, BigFloat, GUARD_BITS};
use crate::characters::DirichletCharacter;
use crate::error::MatrixError;
use crate::special::{l1, tau, L1Route};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// cot(j k pi / n), j, k in the half system.
    Cot,
    /// tan(j k pi / n), j, k in the half system (odd n).
    Tan,
    /// tan(j k pi / n), j, k in 1..(n-1)/2 (odd n); includes non-units.
    TanFull,
    /// csc(2 j k pi / n), j, k in the half system (odd n).
    Csc,
    /// sin(2 j k pi / n), j, k in the half system.
    Sin,
    /// Least positive residue of j k' mod n (inverse-product only).
    MailletResidue,
    /// Least positive residue minus n/2 (inverse-product only).
    MailletCentered,
}

impl MatrixKind {
    pub fn name(&self) -> &'static str {
        match self {
            MatrixKind::Cot => "cot",
            MatrixKind::Tan => "tan",
            MatrixKind::TanFull => "tan-full",
            MatrixKind::Csc => "csc",
            MatrixKind::Sin => "sin",
            MatrixKind::MailletResidue => "maillet-residue",
            MatrixKind::MailletCentered => "maillet-centered",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indexing {
    /// Entry argument j * k.
    Product,
    /// Entry argument j * k' with k k' = 1 mod n.
    InverseProduct,
}

/// Declarative description of one matrix: which family, which n, which
/// column indexing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrigMatrixSpec {
    pub kind: MatrixKind,
    pub n: u64,
    pub indexing: Indexing,
}

impl TrigMatrixSpec {
    /// Validate the parity/indexing constraints that keep every entry finite
    /// and well-defined.
    pub fn new(kind: MatrixKind, n: u64, indexing: Indexing) -> Result<Self, MatrixError> {
        if n < 3 {
            return Err(MatrixError::IllPosed {
                reason: format!("n = {n} leaves an empty index set; need n >= 3"),
            });
        }
        match kind {
            MatrixKind::Tan | MatrixKind::Csc | MatrixKind::TanFull => {
                if n % 2 == 0 {
                    return Err(MatrixError::IllPosed {
                        reason: format!("{} requires odd n (pole at pi/2), got {n}", kind.name()),
                    });
                }
            }
            _ => {}
        }
        if kind == MatrixKind::TanFull && indexing == Indexing::InverseProduct {
            return Err(MatrixError::IllPosed {
                reason: "tan-full indexes non-units, which have no inverse mod n".into(),
            });
        }
        if matches!(kind, MatrixKind::MailletResidue | MatrixKind::MailletCentered)
            && indexing == Indexing::Product
        {
            return Err(MatrixError::IllPosed {
                reason: format!("{} is defined with inverse-product indexing", kind.name()),
            });
        }
        Ok(TrigMatrixSpec { kind, n, indexing })
    }

    /// Row/column index set.
    pub fn indices(&self) -> Vec<u64> {
        match self.kind {
            MatrixKind::TanFull => (1..=(self.n - 1) / 2).collect(),
            _ => residue_systems(self.n).expect("n >= 3").half,
        }
    }
}

/// Row-major dense matrix of BigFloat entries.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<BigFloat>,
    prec: u32,
}

impl DenseMatrix {
    pub fn from_entries(dim: usize, entries: Vec<BigFloat>, prec: u32) -> Self {
        assert_eq!(entries.len(), dim * dim);
        DenseMatrix { dim, entries, prec }
    }

    pub fn identity(dim: usize, prec: u32) -> Self {
        let mut entries = vec![BigFloat::zero(prec); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigFloat::one(prec);
        }
        DenseMatrix { dim, entries, prec }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn get(&self, i: usize, j: usize) -> &BigFloat {
        &self.entries[i * self.dim + j]
    }

    fn with_prec(&self, prec: u32) -> Self {
        DenseMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.with_prec(prec)).collect(),
            prec,
        }
    }
}

/// Realize a matrix spec at the given precision.
pub fn build(spec: &TrigMatrixSpec, prec: u32) -> Result<DenseMatrix, MatrixError> {
    let n = spec.n;
    let idx = spec.indices();
    let dim = idx.len();
    let cols: Vec<u64> = match spec.indexing {
        Indexing::Product => idx.clone(),
        Indexing::InverseProduct => idx
            .iter()
            .map(|&k| mod_inverse(k as i128, n).expect("half-system entries are units"))
            .collect(),
    };
    let mut entries = Vec::with_capacity(dim * dim);
    for &j in &idx {
        for &kp in &cols {
            let arg = j as i128 * kp as i128;
            let e = match spec.kind {
                MatrixKind::Cot => cot_pi(arg, n, prec),
                MatrixKind::Tan | MatrixKind::TanFull => tan_pi(arg, n, prec),
                MatrixKind::Csc => csc_pi(2 * arg, n, prec),
                MatrixKind::Sin => sin_pi(2 * arg, n, prec),
                MatrixKind::MailletResidue => {
                    BigFloat::from_u64(least_positive_residue(arg, n), prec)
                }
                MatrixKind::MailletCentered => {
                    let r = least_positive_residue(arg, n);
                    // r - n/2 = (2r - n)/2, exact as a dyadic rational.
                    BigFloat::from_i64(2 * r as i64 - n as i64, prec).scale_pow2(-1)
                }
            };
            entries.push(e);
        }
    }
    Ok(DenseMatrix { dim, entries, prec })
}

/// Determinant with an error estimate from recomputation at half precision.
#[derive(Debug, Clone)]
pub struct DetResult {
    pub value: BigFloat,
    pub error: BigFloat,
}

fn lu_determinant(m: &DenseMatrix) -> BigFloat {
    let dim = m.dim;
    let prec = m.prec;
    if dim == 0 {
        return BigFloat::one(prec);
    }
    let mut a = m.entries.clone();
    let mut sign = 1i8;
    let mut det = BigFloat::one(prec);
    for col in 0..dim {
        // Partial pivoting on |entry|.
        let mut pivot_row = col;
        let mut pivot_mag = a[col * dim + col].abs();
        for row in col + 1..dim {
            let mag = a[row * dim + col].abs();
            if mag.cmp_value(&pivot_mag) == std::cmp::Ordering::Greater {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if a[pivot_row * dim + col].is_zero() {
            return BigFloat::zero(prec);
        }
        if pivot_row != col {
            for k in 0..dim {
                a.swap(col * dim + k, pivot_row * dim + k);
            }
            sign = -sign;
        }
        let pivot = a[col * dim + col].clone();
        det = det.mul(&pivot);
        for row in col + 1..dim {
            if a[row * dim + col].is_zero() {
                continue;
            }
            let factor = a[row * dim + col].div(&pivot);
            for k in col + 1..dim {
                let delta = factor.mul(&a[col * dim + k]);
                a[row * dim + k] = a[row * dim + k].sub(&delta);
            }
            a[row * dim + col] = BigFloat::zero(prec);
        }
    }
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}

/// LU with partial pivoting at the matrix precision; the error estimate is
/// the difference against a recomputation at half precision. dim 0 gives 1.
pub fn determinant(m: &DenseMatrix) -> DetResult {
    let value = lu_determinant(m);
    let half = m.with_prec((m.prec / 2).max(32));
    let check = lu_determinant(&half);
    let error = value.sub(&check).abs();
    DetResult { value, error }
}

/// Exact integer Maillet determinant by fraction-free (Bareiss) elimination.
pub fn maillet_determinant_exact(n: u64) -> Result<BigInt, MatrixError> {
    let spec = TrigMatrixSpec::new(MatrixKind::MailletResidue, n, Indexing::InverseProduct)?;
    let idx = spec.indices();
    let dim = idx.len();
    let mut a: Vec<BigInt> = Vec::with_capacity(dim * dim);
    for &j in &idx {
        for &k in &idx {
            let kp = mod_inverse(k as i128, n).expect("units");
            a.push(BigInt::from(least_positive_residue(j as i128 * kp as i128, n)));
        }
    }
    Ok(bareiss_determinant(&mut a, dim))
}

/// Fraction-free Gaussian elimination; consumes the buffer.
pub fn bareiss_determinant(a: &mut [BigInt], dim: usize) -> BigInt {
    if dim == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for col in 0..dim - 1 {
        if a[col * dim + col].is_zero() {
            let swap = (col + 1..dim).find(|&r| !a[r * dim + col].is_zero());
            match swap {
                None => return BigInt::zero(),
                Some(r) => {
                    for k in 0..dim {
                        a.swap(col * dim + k, r * dim + k);
                    }
                    sign = -sign;
                }
            }
        }
        for row in col + 1..dim {
            for k in col + 1..dim {
                let v = (&a[row * dim + k] * &a[col * dim + col]
                    - &a[row * dim + col] * &a[col * dim + k])
                    / &prev;
                a[row * dim + k] = v;
            }
            a[row * dim + col] = BigInt::zero();
        }
        prev = a[col * dim + col].clone();
    }
    let det = a[(dim - 1) * dim + (dim - 1)].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Sign data for the column permutation k -> k~ with k k~ = +-1 mod n on the
/// half system: the permutation sign, the parity of the number of columns
/// needing a -1 (those with k k~ = -1), and their product epsilon(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignData {
    pub n: u64,
    pub epsilon: i8,
    pub tau_sign: i8,
    pub inversion_parity: u8,
}

/// Direct computation: build the permutation, take its sign from the cycle
/// decomposition, and count the sign-flipped columns.
pub fn epsilon_sign_direct(n: u64) -> Result<SignData, MatrixError> {
    if n % 2 == 0 || n < 3 {
        return Err(MatrixError::IllPosed {
            reason: format!("epsilon(n) is defined for odd n >= 3, got {n}"),
        });
    }
    let half = residue_systems(n).expect("n >= 3").half;
    let pos: std::collections::HashMap<u64, usize> =
        half.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut perm = vec![0usize; half.len()];
    let mut inversions = 0u64;
    for (i, &k) in half.iter().enumerate() {
        let inv = mod_inverse(k as i128, n).expect("unit");
        let (image, flipped) = if 2 * inv < n { (inv, false) } else { (n - inv, true) };
        if flipped {
            inversions += 1;
        }
        perm[i] = pos[&image];
    }
    let mut seen = vec![false; perm.len()];
    let mut tau_sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur];
            len += 1;
        }
        if len % 2 == 0 {
            tau_sign = -tau_sign;
        }
    }
    let inversion_parity = (inversions % 2) as u8;
    let epsilon = if inversion_parity == 1 { -tau_sign } else { tau_sign };
    Ok(SignData { n, epsilon, tau_sign, inversion_parity })
}

/// Closed-form epsilon(n) from the factorization cases, cross-checked
/// against the direct permutation computation. The direct computation is
/// ground truth; a mismatch is reported as an error, never silently trusted.
pub fn epsilon_sign(n: u64) -> Result<SignData, MatrixError> {
    let direct = epsilon_sign_direct(n)?;
    let f = factorize(n);
    let m = euler_phi(n) / 2;
    let r = f.num_prime_factors();
    let (p1, e1) = f.factors[0];
    let flip = match r {
        1 => !(p1 % 8 == 1 || p1 % 8 == (4 * e1 as u64 + 3) % 8),
        2 => (p1 + f.factors[1].0) % 4 == 0,
        _ => false,
    };
    let closed: i8 = if (m % 2 == 1) ^ flip { -1 } else { 1 };
    if closed != direct.epsilon {
        return Err(MatrixError::SignMismatch { n, closed_form: closed, direct: direct.epsilon });
    }
    Ok(direct)
}

/// Which eigenvector relation to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralKind {
    /// Inverse-product cotangent matrix, eigenvalue (n/pi) L(1, conj chi).
    Cot,
    /// Inverse-product sine matrix, eigenvalue tau(conj chi) / (2i).
    Sin,
}

/// Residual of the eigenvector relation M v = lambda v with v = (chi(k)) over
/// the half system: returns max |M v - lambda v| / max |v|.
pub fn spectral_check(
    n: u64,
    kind: SpectralKind,
    chi: &DirichletCharacter,
    prec: u32,
) -> Result<BigFloat, MatrixError> {
    if !chi.is_odd() {
        return Err(crate::error::CharacterError::OddCharacterRequired.into());
    }
    assert_eq!(chi.modulus(), n, "character modulus must match n");
    let w = prec + GUARD_BITS;
    let matrix_kind = match kind {
        SpectralKind::Cot => MatrixKind::Cot,
        SpectralKind::Sin => MatrixKind::Sin,
    };
    let spec = TrigMatrixSpec::new(matrix_kind, n, Indexing::InverseProduct)?;
    let m = build(&spec, w)?;
    let half = spec.indices();
    let v: Vec<BigComplex> = half
        .iter()
        .map(|&k| BigComplex::from_unity(&chi.eval(k as i128), w))
        .collect();
    let lambda = match kind {
        SpectralKind::Cot => {
            let l = l1(&chi.conjugate(), w, L1Route::CotSum).map_err(|_| MatrixError::IllPosed {
                reason: "spectral cot eigenvalue needs an odd character".into(),
            })?;
            l.mul_real(&BigFloat::from_u64(n, w).div(&pi(w)))
        }
        SpectralKind::Sin => {
            // tau(conj chi) / (2i) = -i tau(conj chi) / 2.
            tau(&chi.conjugate(), w).mul_i().neg().mul_real(
                &BigFloat::from_u64(1, w).scale_pow2(-1),
            )
        }
    };
    let dim = v.len();
    let mut worst = BigFloat::zero(w);
    for i in 0..dim {
        let mut acc = BigComplex::zero(w);
        for j in 0..dim {
            acc = acc.add(&v[j].mul_real(m.get(i, j)));
        }
        let resid = acc.sub(&lambda.mul(&v[i])).abs();
        worst = worst.max_by_value(resid);
    }
    let scale = v
        .iter()
        .map(|z| z.abs())
        .fold(BigFloat::zero(w), BigFloat::max_by_value);
    Ok(worst.div(&scale).with_prec(prec))
}
