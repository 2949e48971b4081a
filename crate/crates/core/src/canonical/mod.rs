//! Classification tools: the `I(3,2)` presentation reduction, the `I(n,1)`
//! normal form, and `lambda`-equivalence of binary quadratic forms for
//! `I(4,2)`.

mod bqf;
mod i32;
mod i42;
mod in1;

pub use bqf::{bqf_lambda_equivalent, choose_k0, psi_k, psi_matrix, BinaryQuadraticForm, LambdaWitness};
pub use i32::{apply_trail, reduce_i32, GeneratorChange, I32Intermediate, I32Reduction};
pub use i42::{i42_isomorphic, I42Comparison};
pub use in1::{classify_in1, In1Class};
