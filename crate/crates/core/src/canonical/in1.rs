use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::TwoStepGroup;
use crate::intlin::skew_normal_form;
use crate::{Int, IntMatrix};

/// `G = G(d_1, ..., d_r) x Z^free_rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct In1Class {
    pub divisors: Vec<Int>,
    pub free_rank: usize,
}

/// Classifies a group whose derived subgroup has rank one.
///
/// All commutators are multiples `s(i,j) p` of one primitive vector `p`; the
/// skew normal form of `s` gives the divisors, its zero rows and the
/// remaining `m - 1` central directions give the free factors.
pub fn classify_in1(g: &TwoStepGroup) -> Result<In1Class> {
    let rank = g.gamma2_rank();
    if rank != 1 {
        return Err(Error::InvalidInput(format!("derived subgroup has rank {rank}, expected 1")));
    }
    let first = g
        .pairs()
        .map(|(i, j)| g.c(i, j))
        .find(|c| c.iter().any(|x| !x.is_zero()))
        .expect("rank one");
    let content = first.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    let p: Vec<Int> = first.iter().map(|x| x / &content).collect();
    let k = p.iter().position(|x| !x.is_zero()).expect("nonzero");
    let s = IntMatrix::from_fn(g.n(), g.n(), |i, j| &g.c(i, j)[k] / &p[k]);
    let form = skew_normal_form(&s)?;
    Ok(In1Class { divisors: form.blocks.clone(), free_rank: form.zero_rows() + g.m() - 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn examples() {
        let g = TwoStepGroup::from_i64(2, 1, &[(0, 1, &[1])]).unwrap();
        assert_eq!(classify_in1(&g).unwrap(), In1Class { divisors: ints(&[1]), free_rank: 0 });
        let g = TwoStepGroup::from_i64(3, 1, &[(0, 1, &[2])]).unwrap();
        assert_eq!(classify_in1(&g).unwrap(), In1Class { divisors: ints(&[2]), free_rank: 1 });
        let g = TwoStepGroup::from_i64(4, 1, &[(0, 1, &[2]), (2, 3, &[6])]).unwrap();
        assert_eq!(classify_in1(&g).unwrap(), In1Class { divisors: ints(&[2, 6]), free_rank: 0 });
        let g = TwoStepGroup::from_i64(3, 2, &[(0, 1, &[2, 4])]).unwrap();
        assert_eq!(classify_in1(&g).unwrap(), In1Class { divisors: ints(&[2]), free_rank: 2 });
        let g = TwoStepGroup::from_i64(3, 2, &[(0, 1, &[1, 0]), (0, 2, &[0, 1])]).unwrap();
        assert!(matches!(classify_in1(&g), Err(Error::InvalidInput(_))));
    }

    /// Structure constants after the change of x-generators `w`:
    /// `c'(i,j) = beta(w e_i, w e_j)`.
    fn change(g: &TwoStepGroup, w: &IntMatrix) -> TwoStepGroup {
        let cols: Vec<Vec<Int>> = (0..g.n()).map(|i| w.column(i)).collect();
        let comms: Vec<_> = g.pairs().map(|(i, j)| (i, j, g.beta(&cols[i], &cols[j]))).collect();
        TwoStepGroup::new(g.n(), g.m(), comms).unwrap()
    }

    proptest! {
        #[test]
        fn invariant_under_change_of_generators(
            d in proptest::collection::vec(1i64..=3, 1..=2),
            extra in 0usize..=1,
            ops in proptest::collection::vec((0usize..5, 0usize..5, -2i64..=2), 0..8),
        ) {
            let mut chain = vec![d[0]];
            for i in 1..d.len() {
                chain.push(chain[i - 1] * d[i]);
            }
            let r = chain.len();
            let n = 2 * r + extra;
            let comms: Vec<_> = chain.iter().enumerate().map(|(i, &di)| (i, r + i, vec![Int::from(di)])).collect();
            let g = TwoStepGroup::new(n, 1, comms).unwrap();
            let mut w = IntMatrix::identity(n);
            for (a, b, f) in ops {
                let (a, b) = (a % n, b % n);
                if a != b {
                    for k in 0..n {
                        let v = &w[(k, a)] + Int::from(f) * &w[(k, b)];
                        w[(k, a)] = v;
                    }
                }
            }
            let h = change(&g, &w);
            prop_assert_eq!(classify_in1(&g).unwrap(), classify_in1(&h).unwrap());
            prop_assert_eq!(classify_in1(&h).unwrap(), In1Class { divisors: ints(&chain), free_rank: extra });
        }
    }
}
