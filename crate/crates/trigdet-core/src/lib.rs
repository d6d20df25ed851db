//! Core library for verifying closed-form identities that connect
//! determinants of cotangent, tangent, cosecant, sine and Maillet matrices
//! over reduced residue systems with Dirichlet L-values, Gauss sums,
//! conductors and relative class numbers.
//!
//! Layering, bottom up:
//!
//! - [`arith`]: residue systems and the structure of (Z/nZ)^x, exact.
//! - [`unity`]: exact roots of unity and exact zero tests for their sums.
//! - [`characters`]: Dirichlet characters, conductors, primitive cores.
//! - [`bigfloat`] / [`bigcomplex`]: arbitrary-precision numerics and the
//!   trigonometric kernel for rational multiples of pi.
//! - [`special`]: Gauss sums, Bernoulli numbers, L(1, chi) by two routes,
//!   relative class numbers.
//! - [`matrices`]: matrix builders, determinants (floating and exact),
//!   permutation signs and spectral residuals.
//!
//! Everything is deterministic: same inputs and precision give bit-identical
//! results.

pub mod arith;
pub mod bigcomplex;
pub mod bigfloat;
pub mod characters;
pub mod error;
pub mod matrices;
pub mod special;
pub mod unity;

pub use bigcomplex::BigComplex;
pub use bigfloat::BigFloat;
pub use characters::{CharacterGroup, DirichletCharacter};
pub use error::{ArithError, CharacterError, MatrixError, SpecialError};
pub use matrices::{DenseMatrix, Indexing, MatrixKind, TrigMatrixSpec};
pub use special::ClassNumberData;
pub use unity::UnityValue;
