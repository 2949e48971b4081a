use crate::canonical::bqf::{bqf_lambda_equivalent, LambdaWitness};
use crate::error::{Error, Result};
use crate::families::i42_parameters;
use crate::group::TwoStepGroup;
use crate::Int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum I42Comparison {
    /// `(delta, lambda)` differ, so the groups are not isomorphic.
    DifferentInvariants { left: (Int, Int), right: (Int, Int) },
    /// The recovered forms are `lambda`-equivalent via the witness.
    Isomorphic(LambdaWitness),
    /// Same invariants, no equivalence found within the bound.
    NotFoundWithinBound,
}

fn class_42(g: &TwoStepGroup) -> Result<(Int, Int)> {
    let inv = g.invariants();
    if (inv.class_n, inv.class_m) != (4, 2) || !g.is_normalized() {
        return Err(Error::InvalidInput(format!("group has class ({}, {}), expected (4, 2)", inv.class_n, inv.class_m)));
    }
    Ok((inv.delta.expect("m = 2"), inv.lambda.expect("m = 2")))
}

/// Compares two `G(delta, lambda, Phi)` template groups.
pub fn i42_isomorphic(g: &TwoStepGroup, h: &TwoStepGroup, bound: u32) -> Result<I42Comparison> {
    let left = class_42(g)?;
    let right = class_42(h)?;
    if left != right {
        return Ok(I42Comparison::DifferentInvariants { left, right });
    }
    let (_, lambda, phi) = i42_parameters(g)?;
    let (_, _, psi) = i42_parameters(h)?;
    Ok(match bqf_lambda_equivalent(&phi, &psi, &lambda, bound)? {
        Some(w) => I42Comparison::Isomorphic(w),
        None => I42Comparison::NotFoundWithinBound,
    })
}
