use super::{Integral, Matrix};
use crate::error::{Error, Result};

/// Canonical form of an alternating integer matrix under congruence.
///
/// `u * m * u^T` is block diagonal: `blocks.len()` hyperbolic blocks
/// `[[0, d], [-d, 0]]` with `d1 | d2 | ...`, then a zero block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewForm<T> {
    pub u: Matrix<T>,
    pub blocks: Vec<T>,
}

impl<T: Integral> SkewForm<T> {
    /// Number of zero rows in the canonical form.
    pub fn zero_rows(&self) -> usize {
        self.u.rows() - 2 * self.blocks.len()
    }

    pub fn canonical(&self) -> Matrix<T> {
        let n = self.u.rows();
        let mut m = Matrix::zeros(n, n);
        for (i, d) in self.blocks.iter().enumerate() {
            m[(2 * i, 2 * i + 1)] = d.clone();
            m[(2 * i + 1, 2 * i)] = T::zero() - d.clone();
        }
        m
    }
}

/// Working state: the matrix and the accumulated basis change, updated by
/// congruence operations on basis vectors.
struct Congruence<T> {
    m: Matrix<T>,
    u: Matrix<T>,
}

impl<T: Integral> Congruence<T> {
    fn swap(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.m.swap_cols(a, b);
        self.u.swap_rows(a, b);
    }

    fn negate(&mut self, a: usize) {
        self.m.negate_row(a);
        self.m.negate_col(a);
        self.u.negate_row(a);
    }

    /// e_target += factor * e_source
    fn add(&mut self, target: usize, source: usize, factor: &T) {
        self.m.add_row_multiple(target, source, factor);
        self.m.add_col_multiple(target, source, factor);
        self.u.add_row_multiple(target, source, factor);
    }

    /// First entry of minimal nonzero absolute value in the trailing block,
    /// scanning row-major.
    fn pivot(&self, from: usize) -> Option<(usize, usize)> {
        let n = self.m.rows();
        let mut best: Option<((usize, usize), T)> = None;
        for i in from..n {
            for j in from..n {
                let v = self.m[(i, j)].abs();
                if !v.is_zero() && best.as_ref().is_none_or(|(_, b)| v < *b) {
                    best = Some(((i, j), v));
                }
            }
        }
        best.map(|(p, _)| p)
    }
}

/// Symplectic normal form of an alternating integer matrix.
pub fn skew_normal_form<T: Integral>(m: &Matrix<T>) -> Result<SkewForm<T>> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)].clone() + m[(j, i)].clone() != T::zero() {
                return Err(Error::InvalidInput(format!("matrix is not skew-symmetric at ({i},{j})")));
            }
        }
    }

    let mut st = Congruence { m: m.clone(), u: Matrix::identity(n) };
    let mut blocks = Vec::new();
    let mut k = 0;
    'outer: while k + 1 < n {
        let Some((i, j)) = st.pivot(k) else { break };
        st.swap(k, i);
        let j = if j == k { i } else { j };
        st.swap(k + 1, j);
        if st.m[(k, k + 1)] < T::zero() {
            st.negate(k + 1);
        }
        loop {
            let d = st.m[(k, k + 1)].clone();
            let mut clean = true;
            for l in k + 2..n {
                // <e_k, e_l - q e_{k+1}> = m[k][l] - q d
                let q = st.m[(k, l)].div_floor(&d);
                st.add(l, k + 1, &(T::zero() - q));
                // <e_{k+1}, e_l + q e_k> = m[k+1][l] - q d
                let q = st.m[(k + 1, l)].div_floor(&d);
                st.add(l, k, &q);
                clean &= st.m[(k, l)].is_zero() && st.m[(k + 1, l)].is_zero();
            }
            if !clean {
                continue 'outer;
            }
            let bad = (k + 2..n).find(|&a| (k + 2..n).any(|b| !st.m[(a, b)].is_multiple_of(&d)));
            match bad {
                // brings the offending row into row k, where the next
                // reduction leaves a remainder smaller than d
                Some(a) => st.add(k, a, &T::one()),
                None => break,
            }
        }
        blocks.push(st.m[(k, k + 1)].clone());
        k += 2;
    }
    Ok(SkewForm { u: st.u, blocks })
}
