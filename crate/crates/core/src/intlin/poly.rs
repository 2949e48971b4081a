use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Univariate polynomial, coefficients lowest degree first.
///
/// Always normalized: the last stored coefficient is nonzero, and the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("degree fits the scalar"))
                .collect(),
        )
    }

    /// `x^deg p(1/x)`.
    pub fn reciprocal(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| T::zero() - c.clone()).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Number of leading zero coefficients, i.e. multiplicity of the root 0.
    pub fn low_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `x^k`; the low `k` coefficients must be zero.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }
}

/// Field operations. Only meaningful when `/` is exact (rationals).
impl<T: Scalar> Poly<T> {
    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap().clone() / lead.clone();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - q.clone() * c.clone();
            }
            quot[k] = q;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(x I - m)` by Faddeev-LeVerrier. The
/// divisions by `k` are exact over the integers.
pub fn charpoly<T: Scalar>(m: &Matrix<T>) -> Result<Poly<T>> {
    if !m.is_square() {
        return Err(Error::dim(format!("characteristic polynomial of a {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut mk = Matrix::<T>::zeros(n, n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&Matrix::identity(n).scale(&coeffs[n + 1 - k]));
        let t = m.mul(&mk).trace();
        let kk = T::from_usize(k).expect("dimension fits the scalar");
        coeffs[n - k] = (T::zero() - t) / kk;
    }
    Ok(Poly::new(coeffs))
}

/// Sturm sequence of a square-free polynomial over an ordered field.
#[derive(Clone, Debug)]
pub struct SturmSequence<T> {
    chain: Vec<Poly<T>>,
}

impl<T: Scalar + PartialOrd> SturmSequence<T> {
    /// Builds the chain for the square-free part of `p`, so repeated roots
    /// are counted once.
    pub fn new(p: &Poly<T>) -> Self {
        let p0 = p.square_free();
        let mut chain = vec![p0.clone()];
        let mut prev = p0.clone();
        let mut cur = p0.derivative();
        while !cur.is_zero() {
            chain.push(cur.clone());
            let r = prev.div_rem(&cur).1.neg();
            prev = cur;
            cur = r;
        }
        SturmSequence { chain }
    }

    pub fn sign_changes(&self, x: &T) -> usize {
        let mut changes = 0;
        let mut last: Option<bool> = None;
        for q in &self.chain {
            let v = q.eval(x);
            if v.is_zero() {
                continue;
            }
            let pos = v > T::zero();
            if last.is_some_and(|l| l != pos) {
                changes += 1;
            }
            last = Some(pos);
        }
        changes
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &T, b: &T) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

/// Does `p` have a complex root of modulus exactly one?
///
/// Roots at `x = 1` and `x = -1` are detected directly. Otherwise the
/// unit-circle roots of `p` are roots of `g = gcd(p, reciprocal(p))`, which
/// is then palindromic of even degree. Writing `g(x) = x^d h(x + 1/x)`, a
/// root `x` lies on the circle iff `y = x + 1/x` is a real root of `h` in
/// `(-2, 2)`, decided with a Sturm sequence.
pub fn has_root_on_unit_circle(p: &Poly<BigInt>) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::InvalidInput("zero polynomial has every point as a root".into()));
    }
    let p = p.shift_down(p.low_zeros());
    if p.degree() == Some(0) {
        return Ok(false);
    }
    let one = BigInt::one();
    if p.eval(&one).is_zero() || p.eval(&-one).is_zero() {
        return Ok(true);
    }
    let q = p.map(|c| BigRational::from_integer(c.clone()));
    let g = q.gcd(&q.reciprocal());
    let Some(deg) = g.degree().filter(|&d| d > 0) else {
        return Ok(false);
    };
    let c = g.coeffs();
    if deg % 2 != 0 || (0..=deg).any(|i| c[i] != c[deg - i]) {
        return Err(Error::Inconsistent(format!("gcd with reciprocal is not palindromic: {g}")));
    }
    let h = palindromic_to_trace(&g);
    let two = BigRational::from_integer(BigInt::from(2));
    let sturm = SturmSequence::new(&h);
    // h(2) = g(1) != 0 and h(-2) = g(-1) != 0, so (-2, 2] counts the open interval
    Ok(sturm.count_roots(&-two.clone(), &two) > 0)
}

/// For palindromic `g` of degree `2d`, the `h` with `g(x) = x^d h(x + 1/x)`.
fn palindromic_to_trace(g: &Poly<BigRational>) -> Poly<BigRational> {
    let c = g.coeffs();
    let d = c.len() / 2;
    // s_j(y) = x^j + x^-j:  s_0 = 2, s_1 = y, s_{j+1} = y s_j - s_{j-1}
    let y = Poly::x();
    let mut s_prev = Poly::constant(BigRational::from_integer(BigInt::from(2)));
    let mut s_cur = y.clone();
    let mut h = Poly::constant(c[d].clone());
    for j in 1..=d {
        h = h.add(&s_cur.scale(&c[d + j]));
        let next = y.mul(&s_cur).sub(&s_prev);
        s_prev = s_cur;
        s_cur = next;
    }
    h
}
