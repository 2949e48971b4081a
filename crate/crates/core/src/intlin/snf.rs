use super::{Integral, Matrix};
use crate::error::{Error, Result};

/// Smith normal form with transforms: `u * m * v` is diagonal with `divisors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf<T> {
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    /// `min(rows, cols)` entries, nonnegative, each dividing the next, zeros last.
    pub divisors: Vec<T>,
}

impl<T: Integral> Snf<T> {
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn nonzero_divisors(&self) -> &[T] {
        &self.divisors[..self.rank()]
    }
}

fn min_nonzero<T: Integral>(a: &Matrix<T>, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), T)> = None;
    for i in from..a.rows() {
        for j in from..a.cols() {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some(((i, j), v));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form by repeated gcd reduction, accumulating the unimodular
/// row transform `u` and column transform `v`.
pub fn smith_normal_form<T: Integral>(m: &Matrix<T>) -> Snf<T> {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Matrix::identity(r);
    let mut v = Matrix::identity(c);
    let steps = r.min(c);

    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = min_nonzero(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let p = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                let q = a[(i, t)].div_floor(&p);
                let neg = T::zero() - q;
                a.add_row_multiple(i, t, &neg);
                u.add_row_multiple(i, t, &neg);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let q = a[(t, j)].div_floor(&p);
                let neg = T::zero() - q;
                a.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot survived in row or column t
                let (pi, pj) = min_nonzero_cross(&a, t);
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let bad_row = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match bad_row {
                Some(i) => {
                    a.add_row_multiple(t, i, &T::one());
                    u.add_row_multiple(t, i, &T::one());
                }
                None => break,
            }
        }
        if a[(t, t)] < T::zero() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let divisors = (0..steps).map(|i| a[(i, i)].clone()).collect();
    Snf { u, v, divisors }
}

/// Smallest nonzero entry in row `t` or column `t` (from index `t` on).
fn min_nonzero_cross<T: Integral>(a: &Matrix<T>, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_v: Option<T> = None;
    let cand = (t..a.rows()).map(|i| (i, t)).chain((t + 1..a.cols()).map(|j| (t, j)));
    for (i, j) in cand {
        let v = a[(i, j)].abs();
        if !v.is_zero() && best_v.as_ref().is_none_or(|b| v < *b) {
            best = (i, j);
            best_v = Some(v);
        }
    }
    best
}

/// Basis of the integer kernel `{x : m x = 0}`, as columns. The basis spans
/// a saturated sublattice.
pub fn integer_kernel<T: Integral>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    (rank..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// Inverse of a unimodular matrix, or `None` if `|det m| != 1`.
pub fn inverse_unimodular<T: Integral>(m: &Matrix<T>) -> Option<Matrix<T>> {
    if !m.is_square() {
        return None;
    }
    let snf = smith_normal_form(m);
    if snf.divisors.iter().any(|d| !d.is_one()) {
        return None;
    }
    // u m v = I  =>  m^{-1} = v u
    Some(snf.v.mul(&snf.u))
}

/// Solves `d * c = m` for integer `d`.
///
/// `c` must have full row rank, so the rational solution, if any, is unique.
/// Returns `None` when the system is inconsistent or the solution is not
/// integral.
pub fn solve_exact<T: Integral>(c: &Matrix<T>, m: &Matrix<T>) -> Result<Option<Matrix<T>>> {
    if c.cols() != m.cols() {
        return Err(Error::dim(format!(
            "right-hand side has {} columns, coefficient matrix has {}",
            m.cols(),
            c.cols()
        )));
    }
    let snf = smith_normal_form(c);
    let rank = snf.rank();
    if rank < c.rows() {
        return Err(Error::RankDeficient { rank, rows: c.rows() });
    }
    Ok(solve_with_snf(&snf, m))
}

/// [`solve_exact`] against a precomputed Smith form of a full-row-rank `c`.
pub fn solve_with_snf<T: Integral>(snf: &Snf<T>, m: &Matrix<T>) -> Option<Matrix<T>> {
    let rank = snf.rank();
    // u c v = s  =>  (d u^{-1}) s = m v
    let mv = m.mul(&snf.v);
    let mut e = Matrix::zeros(m.rows(), snf.u.rows());
    for i in 0..m.rows() {
        for j in 0..mv.cols() {
            let val = &mv[(i, j)];
            if j < rank {
                let (q, rem) = val.div_rem(&snf.divisors[j]);
                if !rem.is_zero() {
                    return None;
                }
                e[(i, j)] = q;
            } else if !val.is_zero() {
                return None;
            }
        }
    }
    Some(e.mul(&snf.u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::det;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_certificate(m: &Matrix<BigInt>, snf: &Snf<BigInt>) {
        let d = snf.u.mul(m).mul(&snf.v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j { snf.divisors[i].clone() } else { BigInt::zero() };
                assert_eq!(d[(i, j)], expect, "entry ({i},{j}) of U M V");
            }
        }
        assert!(det(&snf.u).unwrap().abs().is_one());
        assert!(det(&snf.v).unwrap().abs().is_one());
        for w in snf.divisors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero() && w[1].is_zero());
        }
    }

    /// gcd of all k x k minors, for every k: the determinantal divisors.
    fn determinantal_divisors(m: &Matrix<BigInt>) -> Vec<BigInt> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            (0..n)
                .flat_map(|last| {
                    subsets(last, k - 1).into_iter().map(move |mut s| {
                        s.push(last);
                        s
                    })
                })
                .collect()
        }
        let kmax = m.rows().min(m.cols());
        (1..=kmax)
            .map(|k| {
                let mut g = BigInt::zero();
                for rs in subsets(m.rows(), k) {
                    for cs in subsets(m.cols(), k) {
                        g = g.gcd(&det(&m.submatrix(&rs, &cs)).unwrap());
                    }
                }
                g
            })
            .collect()
    }

    #[test]
    fn diagonal_two_three() {
        let m = big(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.divisors, ints(&[1, 6]));
        check_certificate(&m, &snf);
    }

    #[test]
    fn zero_matrix() {
        let m = Matrix::<BigInt>::zeros(2, 3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.divisors, ints(&[0, 0]));
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn structure_matrix_of_g_2_3_111() {
        // pairs (12),(13),(14),(23),(24),(34); [x1,x3]=z2^6, [x1,x4]=z1^2,
        // [x2,x3]=z1^2 z2^6, [x2,x4]=z2^-6
        let c = big(&[&[0, 0, 2, 2, 0, 0], &[0, 6, 0, 6, -6, 0]]);
        let snf = smith_normal_form(&c);
        assert_eq!(snf.divisors, ints(&[2, 6]));
        check_certificate(&c, &snf);
    }

    #[test]
    fn solve_examples() {
        let one = big(&[&[1]]);
        assert_eq!(solve_exact(&one, &big(&[&[3]])).unwrap(), Some(big(&[&[3]])));
        assert_eq!(solve_exact(&big(&[&[2]]), &big(&[&[3]])).unwrap(), None);
        assert_eq!(solve_exact(&one, &big(&[&[-1]])).unwrap(), Some(big(&[&[-1]])));
    }

    #[test]
    fn solve_rank_deficient() {
        let c = big(&[&[1, 2], &[2, 4]]);
        assert!(matches!(
            solve_exact(&c, &big(&[&[1, 2]])),
            Err(Error::RankDeficient { rank: 1, rows: 2 })
        ));
    }

    #[test]
    fn solve_inconsistent() {
        // d * [1 0 0] = [1 1 0] has no solution
        let c = big(&[&[1, 0, 0]]);
        assert_eq!(solve_exact(&c, &big(&[&[1, 1, 0]])).unwrap(), None);
    }

    #[test]
    fn kernel_and_inverse() {
        let m = big(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = integer_kernel(&m);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(m.mul_vec(k).iter().all(Zero::is_zero));
        }
        let a = big(&[&[2, 1], &[1, 1]]);
        let inv = inverse_unimodular(&a).unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(inverse_unimodular(&big(&[&[2, 0], &[0, 1]])).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix<BigInt>> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
                Matrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn snf_certificate_and_divisibility(m in arb_matrix()) {
            let snf = smith_normal_form(&m);
            check_certificate(&m, &snf);
        }

        #[test]
        fn snf_matches_minor_gcds(m in arb_matrix()) {
            let snf = smith_normal_form(&m);
            let dd = determinantal_divisors(&m);
            let mut prod = BigInt::one();
            for (k, d) in snf.divisors.iter().enumerate() {
                prod *= d;
                prop_assert_eq!(&prod, &dd[k]);
            }
        }

        #[test]
        fn square_det_is_divisor_product(v in proptest::collection::vec(-5i64..=5, 9)) {
            let m = Matrix::from_vec(3, 3, v.into_iter().map(BigInt::from).collect()).unwrap();
            let snf = smith_normal_form(&m);
            let prod: BigInt = snf.divisors.iter().product();
            prop_assert_eq!(det(&m).unwrap().abs(), prod);
        }

        #[test]
        fn solve_recovers_integer_solution(
            d in proptest::collection::vec(-5i64..=5, 4),
            c in proptest::collection::vec(-3i64..=3, 6),
        ) {
            let d = Matrix::from_vec(2, 2, d.into_iter().map(BigInt::from).collect()).unwrap();
            let c = Matrix::from_vec(2, 3, c.into_iter().map(BigInt::from).collect()).unwrap();
            prop_assume!(smith_normal_form(&c).rank() == 2);
            let m = d.mul(&c);
            prop_assert_eq!(solve_exact(&c, &m).unwrap(), Some(d));
        }
    }
}
