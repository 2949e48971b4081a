//! Exact computations in finitely generated torsion-free 2-step nilpotent
//! groups given by commutator structure constants.
//!
//! The crate covers normal-form element arithmetic, endomorphisms and
//! automorphisms given by generator images, Reidemeister numbers through the
//! determinant product formula, bounded searches of the Reidemeister
//! spectrum, the small-rank classification machinery (alternating forms,
//! `I(3,2)` presentation reduction, binary quadratic forms up to
//! `lambda`-equivalence), and brute-force twisted conjugacy counts in finite
//! quotients that check the formulas independently.
//!
//! All arithmetic is exact. The linear algebra in [`intlin`] is generic over
//! the scalar; the aliases below fix the types the rest of the crate uses.

pub mod canonical;
pub mod error;
pub mod families;
pub mod group;
pub mod intlin;
pub mod io;
pub mod morphism;
pub mod oracle;
pub mod reidemeister;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupInvariants, TwoStepGroup};
pub use intlin::{ExtNat, Matrix, Poly};
pub use morphism::EndoData;
pub use reidemeister::{ReidemeisterResult, SpectrumSample};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Integer matrix.
pub type IntMatrix = intlin::Matrix<Int>;
/// Rational matrix.
pub type RatMatrix = intlin::Matrix<Rational>;
/// Integer polynomial, lowest degree first.
pub type IntPolynomial = intlin::Poly<Int>;
/// Rational polynomial, lowest degree first.
pub type RatPolynomial = intlin::Poly<Rational>;
/// Smith normal form over the integers.
pub type IntSnf = intlin::Snf<Int>;
