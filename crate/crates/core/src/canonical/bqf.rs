use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Int;

/// `a X^2 + b XY + c Y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryQuadraticForm {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl BinaryQuadraticForm {
    pub fn new(a: Int, b: Int, c: Int) -> Self {
        BinaryQuadraticForm { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        Self::new(Int::from(a), Int::from(b), Int::from(c))
    }

    pub fn zero() -> Self {
        Self::from_i64(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn eval(&self, x: &Int, y: &Int) -> Int {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b, -&self.c)
    }

    /// `Phi(p X + q Y, r X + s Y)` for the matrix `[[p, q], [r, s]]`.
    pub fn substitute(&self, m: &[[Int; 2]; 2]) -> Self {
        let [[p, q], [r, s]] = m;
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let two = Int::from(2);
        Self::new(
            a * p * p + b * p * r + c * r * r,
            &two * a * p * q + b * (p * s + q * r) + &two * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// The unimodular matrix `[[k lambda + 1, k], [lambda, 1]]`.
pub fn psi_matrix(lambda: &Int, k: &Int) -> [[Int; 2]; 2] {
    [[k * lambda + Int::one(), k.clone()], [lambda.clone(), Int::one()]]
}

/// `Psi_k(X, Y) = Phi((k lambda + 1) X + k Y, lambda X + Y)`.
pub fn psi_k(form: &BinaryQuadraticForm, lambda: &Int, k: &Int) -> BinaryQuadraticForm {
    form.substitute(&psi_matrix(lambda, k))
}

/// Smallest `|k|`, positive first, with `k (a k + b) != 0`, for a form with
/// `c = 0` and `(a, b) != (0, 0)`.
pub fn choose_k0(form: &BinaryQuadraticForm) -> Result<Int> {
    if !form.c.is_zero() {
        return Err(Error::InvalidInput("choose_k0 needs c = 0".into()));
    }
    if form.a.is_zero() && form.b.is_zero() {
        return Err(Error::InvalidInput("choose_k0 needs (a, b) != (0, 0)".into()));
    }
    // a k + b vanishes for at most one k
    Ok((1i64..)
        .flat_map(|k| [k, -k])
        .map(Int::from)
        .find(|k| !(&form.a * k + &form.b).is_zero())
        .expect("at most one root"))
}

/// `Psi = sign * Phi(a X + b Y, lambda c X + d Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaWitness {
    /// `[[a, b], [lambda c, d]]`
    pub matrix: [[Int; 2]; 2],
    pub sign: i8,
}

impl LambdaWitness {
    pub fn det(&self) -> Int {
        let [[a, b], [c, d]] = &self.matrix;
        a * d - b * c
    }

    pub fn verify(&self, phi: &BinaryQuadraticForm, psi: &BinaryQuadraticForm, lambda: &Int) -> bool {
        let sub = phi.substitute(&self.matrix);
        let signed = if self.sign > 0 { sub } else { sub.neg() };
        self.det().abs().is_one() && (&self.matrix[1][0] % lambda).is_zero() && signed == *psi
    }

    /// Witness for the reverse direction: `Phi = sign * Psi(M^{-1} (X, Y))`.
    pub fn inverse(&self) -> Self {
        let det = self.det();
        let [[a, b], [c, d]] = &self.matrix;
        LambdaWitness { matrix: [[d * &det, -b * &det], [-c * &det, a * &det]], sign: self.sign }
    }
}

/// Values in `[-s, s]` in the order `1, 0, -1, 2, -2, ...`.
fn shell_values(s: i64) -> Vec<i64> {
    let mut v = vec![1, 0, -1];
    for k in 2..=s {
        v.push(k);
        v.push(-k);
    }
    v
}

/// Searches for a `lambda`-equivalence from `phi` to `psi` with entries of
/// `a, b, c, d` bounded by `bound`. The identity is tried first, then
/// shells of increasing maximal entry, lexicographic in `(a, b, c, d)`
/// within a shell, `+phi` before `-phi`. `None` means "not found within
/// the bound", not inequivalence.
pub fn bqf_lambda_equivalent(
    phi: &BinaryQuadraticForm,
    psi: &BinaryQuadraticForm,
    lambda: &Int,
    bound: u32,
) -> Result<Option<LambdaWitness>> {
    if lambda.is_zero() {
        return Err(Error::InvalidParameters("lambda must be nonzero".into()));
    }
    if bound == 0 {
        return Err(Error::InvalidParameters("bound must be at least 1".into()));
    }
    let try_matrix = |a: i64, b: i64, c: i64, d: i64| -> Option<LambdaWitness> {
        let m = [[Int::from(a), Int::from(b)], [Int::from(c) * lambda, Int::from(d)]];
        if !(&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]).abs().is_one() {
            return None;
        }
        let sub = phi.substitute(&m);
        if sub == *psi {
            return Some(LambdaWitness { matrix: m, sign: 1 });
        }
        if sub.neg() == *psi {
            return Some(LambdaWitness { matrix: m, sign: -1 });
        }
        None
    };
    if let Some(w) = try_matrix(1, 0, 0, 1) {
        return Ok(Some(w));
    }
    let bound = bound as i64;
    for s in 1..=bound {
        let vals = shell_values(s);
        for &a in &vals {
            for &b in &vals {
                for &c in &vals {
                    for &d in &vals {
                        if a.abs().max(b.abs()).max(c.abs()).max(d.abs()) != s {
                            continue;
                        }
                        if let Some(w) = try_matrix(a, b, c, d) {
                            return Ok(Some(w));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}
