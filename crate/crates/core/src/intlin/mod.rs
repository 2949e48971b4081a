//! Exact integer and rational linear algebra.
//!
//! Everything here is generic over the scalar. The library instantiates it
//! with [`BigInt`](num_bigint::BigInt) and [`BigRational`](num_rational::BigRational);
//! the enumeration kernels use `i64` where an entry bound proves that no
//! intermediate value can overflow.

mod extnat;
mod matrix;
mod poly;
mod skew;
mod snf;

use std::fmt::Debug;

use num_integer::Integer;
use num_traits::{FromPrimitive, Num, Signed};

pub use extnat::{ext_abs, ExtNat};
pub use matrix::{adjugate, det, Matrix};
pub use poly::{charpoly, has_root_on_unit_circle, Poly, SturmSequence};
pub use skew::{skew_normal_form, SkewForm};
pub use snf::{integer_kernel, inverse_unimodular, smith_normal_form, solve_exact, solve_with_snf, Snf};

/// Exact ring elements: machine integers, big integers, rationals.
pub trait Scalar: Clone + Debug + PartialEq + Num + Signed + FromPrimitive + Send + Sync {}

impl<T> Scalar for T where T: Clone + Debug + PartialEq + Num + Signed + FromPrimitive + Send + Sync {}

/// Scalars with Euclidean division, needed for Smith and skew normal forms.
pub trait Integral: Scalar + Integer + Ord {}

impl<T> Integral for T where T: Scalar + Integer + Ord {}
