use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::TwoStepGroup;
use crate::intlin::inverse_unimodular;
use crate::{Int, IntMatrix};

/// The presentation `[x_1, x_2] = z_1^alpha z_2^beta`, `[x_1, x_3] = z_2^t13`,
/// `[x_2, x_3] = z_2^t23`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct I32Intermediate {
    pub alpha: Int,
    pub beta: Int,
    pub t13: Int,
    pub t23: Int,
}

impl I32Intermediate {
    pub fn new(alpha: Int, beta: Int, t13: Int, t23: Int) -> Self {
        I32Intermediate { alpha, beta, t13, t23 }
    }

    pub fn from_i64(alpha: i64, beta: i64, t13: i64, t23: i64) -> Self {
        Self::new(Int::from(alpha), Int::from(beta), Int::from(t13), Int::from(t23))
    }

    pub fn group(&self) -> Result<TwoStepGroup> {
        let z = Int::zero();
        TwoStepGroup::new(
            3,
            2,
            [
                (0, 1, vec![self.alpha.clone(), self.beta.clone()]),
                (0, 2, vec![z.clone(), self.t13.clone()]),
                (1, 2, vec![z, self.t23.clone()]),
            ],
        )
    }
}

/// A change of generators: the columns of `x` are the new x-generators in
/// terms of the old ones (as exponent vectors), the columns of `z` are the
/// new central generators in terms of the old ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorChange {
    pub x: IntMatrix,
    pub z: IntMatrix,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct I32Reduction {
    pub alpha: Int,
    pub beta: Int,
    pub gamma: Int,
    pub trail: Vec<GeneratorChange>,
}

fn elementary(i: usize, j: usize, k: &Int) -> IntMatrix {
    let mut x = IntMatrix::identity(3);
    x[(i, j)] = k.clone();
    x
}

/// Reduces to `[x_1, x_2] = z_1^alpha z_2^beta`, `[x_1, x_3] = z_2^gamma`
/// with `gamma = gcd(t13, t23) > 0`, by Euclid's algorithm on the two
/// exponents of `z_2`.
pub fn reduce_i32(p: &I32Intermediate) -> Result<I32Reduction> {
    if p.alpha.is_zero() {
        return Err(Error::InvalidInput("alpha must be nonzero".into()));
    }
    if p.t13.is_zero() && p.t23.is_zero() {
        return Err(Error::NotInI32);
    }
    let (alpha, mut beta, mut t13, mut t23) = (p.alpha.clone(), p.beta.clone(), p.t13.clone(), p.t23.clone());
    let mut trail = Vec::new();
    let id3 = IntMatrix::identity(3);
    let id2 = IntMatrix::identity(2);

    if t13.is_negative() || (t13.is_zero() && t23.is_negative()) {
        beta = -beta;
        t13 = -t13;
        t23 = -t23;
        trail.push(GeneratorChange {
            x: id3.clone(),
            z: IntMatrix::diagonal(&[Int::from(1), Int::from(-1)]),
            description: "z2' = z2^-1".into(),
        });
    }

    while !t13.is_zero() {
        // [x1^k x2, x3] = z2^(k t13 + t23)
        let k = -t23.div_floor(&t13);
        if !k.is_zero() {
            t23 += &k * &t13;
            trail.push(GeneratorChange { x: elementary(0, 1, &k), z: id2.clone(), description: format!("x2' = x1^{k} x2") });
        }
        if t23.is_zero() {
            break;
        }
        // [x2^l x1, x3] = z2^(l t23 + t13)
        let l = -t13.div_floor(&t23);
        t13 += &l * &t23;
        trail.push(GeneratorChange { x: elementary(1, 0, &l), z: id2.clone(), description: format!("x1' = x2^{l} x1") });
    }

    let gamma = if t23.is_zero() {
        t13
    } else {
        // [x2, x1^-1] = [x1, x2], [x2, x3] moves to [x1', x3]
        let mut x = IntMatrix::zeros(3, 3);
        x[(1, 0)] = Int::from(1);
        x[(0, 1)] = Int::from(-1);
        x[(2, 2)] = Int::from(1);
        trail.push(GeneratorChange { x, z: id2, description: "x1' = x2, x2' = x1^-1".into() });
        t23
    };
    Ok(I32Reduction { alpha, beta, gamma, trail })
}

/// Applies the composite generator change to the presentation of `p` and
/// recomputes all commutators.
pub fn apply_trail(p: &I32Intermediate, trail: &[GeneratorChange]) -> Result<TwoStepGroup> {
    let g = p.group()?;
    let mut x = IntMatrix::identity(3);
    let mut z = IntMatrix::identity(2);
    for step in trail {
        x = x.mul(&step.x);
        z = z.mul(&step.z);
    }
    let z_inv = inverse_unimodular(&z).ok_or_else(|| Error::InvalidInput("central change not unimodular".into()))?;
    if inverse_unimodular(&x).is_none() {
        return Err(Error::InvalidInput("generator change not unimodular".into()));
    }
    let cols: Vec<Vec<Int>> = (0..3).map(|i| x.column(i)).collect();
    let comms: Vec<(usize, usize, Vec<Int>)> =
        g.pairs().map(|(i, j)| (i, j, z_inv.mul_vec(&g.beta(&cols[i], &cols[j])))).collect();
    TwoStepGroup::new(3, 2, comms)
}
