//! Endomorphisms given by generator images.
//!
//! An endomorphism is stored as three integer matrices: `A` (x-parts of the
//! images of the x-generators), `B` (their z-parts) and `D` (images of the
//! central generators). `A` and `D` are the induced maps on the quotient by
//! the isolator of the derived subgroup and on that isolator.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupElement, TwoStepGroup};
use crate::intlin::{det, inverse_unimodular, solve_exact};
use crate::{Int, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EndoData {
    /// `n x n`, column `i` is the x-part of `phi(x_i)`
    pub a: IntMatrix,
    /// `m x n`, column `i` is the z-part of `phi(x_i)`
    pub b: IntMatrix,
    /// `m x m`, column `j` is `phi(z_j)`
    pub d: IntMatrix,
}

impl EndoData {
    pub fn new(a: IntMatrix, b: IntMatrix, d: IntMatrix) -> Self {
        EndoData { a, b, d }
    }

    pub fn identity(g: &TwoStepGroup) -> Self {
        EndoData {
            a: IntMatrix::identity(g.n()),
            b: IntMatrix::zeros(g.m(), g.n()),
            d: IntMatrix::identity(g.m()),
        }
    }

    /// Builds the data from `A` and `B`, solving for `D`.
    pub fn from_parts(g: &TwoStepGroup, a: IntMatrix, b: IntMatrix) -> Result<Self> {
        let d = solve_induced_center_map(g, &a)?.ok_or(Error::NoCenterMap)?;
        let e = EndoData { a, b, d };
        check_dims(g, &e)?;
        Ok(e)
    }

    /// Builds the data from the images of the x-generators, solving for `D`.
    pub fn from_images(g: &TwoStepGroup, images: &[GroupElement]) -> Result<Self> {
        if images.len() != g.n() {
            return Err(Error::dim(format!("{} images for {} generators", images.len(), g.n())));
        }
        for im in images {
            g.check_element(im)?;
        }
        let a = IntMatrix::from_fn(g.n(), g.n(), |r, c| images[c].a[r].clone());
        let b = IntMatrix::from_fn(g.m(), g.n(), |r, c| images[c].u[r].clone());
        Self::from_parts(g, a, b)
    }

    /// `phi(x_i)`.
    pub fn image_of_x(&self, i: usize) -> GroupElement {
        GroupElement { a: self.a.column(i), u: self.b.column(i) }
    }

    /// `phi(z_j)`.
    pub fn image_of_z(&self, j: usize) -> GroupElement {
        GroupElement { a: vec![Int::zero(); self.a.rows()], u: self.d.column(j) }
    }
}

/// `m x n(n-1)/2` matrix whose column `(i,j)` is `beta(A e_i, A e_j)`.
pub fn induced_commutators(g: &TwoStepGroup, a: &IntMatrix) -> IntMatrix {
    let cols: Vec<Vec<Int>> = (0..a.cols()).map(|i| a.column(i)).collect();
    let pairs: Vec<Vec<Int>> = g.pairs().map(|(i, j)| g.beta(&cols[i], &cols[j])).collect();
    IntMatrix::from_fn(g.m(), pairs.len(), |r, p| pairs[p][r].clone())
}

/// The integer `D` with `D C = M(A)`, if it exists.
pub fn solve_induced_center_map(g: &TwoStepGroup, a: &IntMatrix) -> Result<Option<IntMatrix>> {
    if a.rows() != g.n() || a.cols() != g.n() {
        return Err(Error::dim(format!("A is {}x{}, group has n = {}", a.rows(), a.cols(), g.n())));
    }
    g.require_normalized()?;
    solve_exact(&g.structure_matrix(), &induced_commutators(g, a))
}

pub fn check_dims(g: &TwoStepGroup, e: &EndoData) -> Result<()> {
    let (n, m) = (g.n(), g.m());
    let shape = |x: &IntMatrix| (x.rows(), x.cols());
    if shape(&e.a) != (n, n) || shape(&e.b) != (m, n) || shape(&e.d) != (m, m) {
        return Err(Error::dim(format!(
            "A {:?}, B {:?}, D {:?} do not fit (n, m) = ({n}, {m})",
            shape(&e.a),
            shape(&e.b),
            shape(&e.d)
        )));
    }
    Ok(())
}

/// Whether the data defines an endomorphism: `D C = M(A)`.
pub fn check_endomorphism(g: &TwoStepGroup, e: &EndoData) -> Result<bool> {
    check_dims(g, e)?;
    Ok(e.d.mul(&g.structure_matrix()) == induced_commutators(g, &e.a))
}

/// Endomorphism with `|det A| = 1`. For normalized groups `|det D| = 1`
/// follows; this is checked and reported as an inconsistency if it fails.
pub fn is_automorphism(g: &TwoStepGroup, e: &EndoData) -> Result<bool> {
    if !check_endomorphism(g, e)? || !det(&e.a)?.abs().is_one() {
        return Ok(false);
    }
    if g.is_normalized() && !det(&e.d)?.abs().is_one() {
        return Err(Error::Inconsistent("unimodular A with non-unimodular D".into()));
    }
    Ok(true)
}

pub fn require_endomorphism(g: &TwoStepGroup, e: &EndoData) -> Result<()> {
    if check_endomorphism(g, e)? {
        Ok(())
    } else {
        Err(Error::NotEndomorphism("D C differs from the commutators of the images".into()))
    }
}

/// Checks the automorphism conditions, including `|det D| = 1`.
pub fn require_automorphism(g: &TwoStepGroup, e: &EndoData) -> Result<()> {
    require_endomorphism(g, e)?;
    if !det(&e.a)?.abs().is_one() {
        return Err(Error::NotAutomorphism("|det A| != 1".into()));
    }
    if !det(&e.d)?.abs().is_one() {
        return Err(Error::NotAutomorphism("|det D| != 1".into()));
    }
    Ok(())
}

/// `phi(x^a z^u) = phi(x_0)^{a_0} ... phi(x_{n-1})^{a_{n-1}} phi(z)^u`.
pub fn apply(g: &TwoStepGroup, e: &EndoData, x: &GroupElement) -> Result<GroupElement> {
    g.check_element(x)?;
    require_endomorphism(g, e)?;
    Ok(apply_unchecked(g, e, x))
}

pub(crate) fn apply_unchecked(g: &TwoStepGroup, e: &EndoData, x: &GroupElement) -> GroupElement {
    let mut acc = g.identity();
    for (i, ai) in x.a.iter().enumerate() {
        if !ai.is_zero() {
            acc = g.mul(&acc, &g.pow(&e.image_of_x(i), ai));
        }
    }
    let du = e.d.mul_vec(&x.u);
    for (s, t) in acc.u.iter_mut().zip(du) {
        *s += t;
    }
    acc
}

/// `g -> e1(e2(g))`.
pub fn compose(g: &TwoStepGroup, e1: &EndoData, e2: &EndoData) -> Result<EndoData> {
    require_endomorphism(g, e1)?;
    require_endomorphism(g, e2)?;
    let images: Vec<GroupElement> =
        (0..g.n()).map(|i| apply_unchecked(g, e1, &e2.image_of_x(i))).collect();
    Ok(EndoData {
        a: e1.a.mul(&e2.a),
        b: IntMatrix::from_fn(g.m(), g.n(), |r, c| images[c].u[r].clone()),
        d: e1.d.mul(&e2.d),
    })
}

pub fn invert(g: &TwoStepGroup, e: &EndoData) -> Result<EndoData> {
    require_automorphism(g, e).map_err(|err| Error::InvalidInput(format!("cannot invert: {err}")))?;
    let a_inv = inverse_unimodular(&e.a).ok_or_else(|| Error::Inconsistent("A not invertible".into()))?;
    let d_inv = inverse_unimodular(&e.d).ok_or_else(|| Error::Inconsistent("D not invertible".into()))?;
    // phi(x^{a'} z^{b'}) = phi(x^{a'}) z^{D b'} must equal x_i
    let mut b = IntMatrix::zeros(g.m(), g.n());
    for i in 0..g.n() {
        let pre = GroupElement { a: a_inv.column(i), u: vec![Int::zero(); g.m()] };
        let w = apply_unchecked(g, e, &pre).u;
        for (r, v) in d_inv.mul_vec(&w).into_iter().enumerate() {
            b[(r, i)] = -v;
        }
    }
    Ok(EndoData { a: a_inv, b, d: d_inv })
}

/// Direct product of two endomorphisms, acting blockwise on
/// [`TwoStepGroup::direct_product`](crate::families::direct_product) data.
pub fn product_endo(e1: &EndoData, e2: &EndoData) -> EndoData {
    let b1 = &e1.b;
    let b2 = &e2.b;
    let (m1, n1) = (b1.rows(), b1.cols());
    let (m2, n2) = (b2.rows(), b2.cols());
    let b = IntMatrix::from_fn(m1 + m2, n1 + n2, |r, c| {
        if r < m1 && c < n1 {
            b1[(r, c)].clone()
        } else if r >= m1 && c >= n1 {
            b2[(r - m1, c - n1)].clone()
        } else {
            Int::zero()
        }
    });
    EndoData { a: e1.a.block_diag(&e2.a), b, d: e1.d.block_diag(&e2.d) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()).unwrap()
    }

    fn heisenberg() -> TwoStepGroup {
        TwoStepGroup::from_i64(2, 1, &[(0, 1, &[1])]).unwrap()
    }

    fn path7() -> TwoStepGroup {
        TwoStepGroup::from_i64(4, 3, &[(0, 1, &[1, 0, 0]), (1, 2, &[0, 1, 0]), (2, 3, &[0, 0, 1])]).unwrap()
    }

    fn i32_group() -> TwoStepGroup {
        TwoStepGroup::from_i64(3, 2, &[(0, 1, &[1, 0]), (0, 2, &[0, 1])]).unwrap()
    }

    #[test]
    fn solve_examples() {
        let g = heisenberg();
        assert_eq!(solve_induced_center_map(&g, &IntMatrix::identity(2)).unwrap(), Some(IntMatrix::identity(1)));
        for a in [m(&[&[2, 1], &[3, 5]]), m(&[&[0, 1], &[1, 0]]), m(&[&[4, -2], &[1, 7]])] {
            let d = det(&a).unwrap();
            assert_eq!(solve_induced_center_map(&g, &a).unwrap(), Some(IntMatrix::diagonal(&[d])));
        }
        let p = path7();
        // only [x3, x4] involves the scaled generator
        let a = IntMatrix::diagonal(&[1, 1, 1, 2].map(Int::from));
        assert_eq!(solve_induced_center_map(&p, &a).unwrap(), Some(IntMatrix::diagonal(&[1, 1, 2].map(Int::from))));
        let a = IntMatrix::diagonal(&[1, 2, 1, 2].map(Int::from));
        assert_eq!(solve_induced_center_map(&p, &a).unwrap(), Some(IntMatrix::diagonal(&[2, 2, 2].map(Int::from))));
        // swapping x1 and x3 maps [x1,x2] to [x3,x2], which path7 cannot absorb
        let swap = m(&[&[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(solve_induced_center_map(&p, &swap).unwrap(), None);
        let bad = TwoStepGroup::from_i64(3, 2, &[(0, 1, &[1, 0])]).unwrap();
        assert!(matches!(solve_induced_center_map(&bad, &IntMatrix::identity(3)), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn check_examples() {
        let g = heisenberg();
        assert!(check_endomorphism(&g, &EndoData::identity(&g)).unwrap());
        let e = EndoData::new(m(&[&[0, 1], &[1, -2]]), IntMatrix::zeros(1, 2), m(&[&[-1]]));
        assert!(check_endomorphism(&g, &e).unwrap());
        let e = EndoData::new(m(&[&[0, 1], &[1, 0]]), IntMatrix::zeros(1, 2), m(&[&[1]]));
        assert!(!check_endomorphism(&g, &e).unwrap());
        let e = EndoData::new(IntMatrix::identity(3), IntMatrix::zeros(1, 2), m(&[&[1]]));
        assert!(matches!(check_endomorphism(&g, &e), Err(Error::Dimension(_))));
    }

    #[test]
    fn automorphism_examples() {
        let g = heisenberg();
        assert!(is_automorphism(&g, &EndoData::identity(&g)).unwrap());
        let e = EndoData::new(IntMatrix::identity(2).scale(&Int::from(2)), IntMatrix::zeros(1, 2), m(&[&[4]]));
        assert!(check_endomorphism(&g, &e).unwrap());
        assert!(!is_automorphism(&g, &e).unwrap());
    }

    #[test]
    fn i32_map_is_automorphism() {
        // alpha = gamma = k = l = 1, beta = 0
        let g = i32_group();
        let x = |a: &[i64]| GroupElement::from_i64(a, &[0, 0]);
        let images = [x(&[-1, 0, 0]), x(&[0, -2, -1]), x(&[0, -1, -1])];
        let e = EndoData::from_images(&g, &images).unwrap();
        assert!(is_automorphism(&g, &e).unwrap());
        assert_eq!(e.d, m(&[&[2, 1], &[1, 1]]));
    }

    #[test]
    fn apply_examples() {
        let g = heisenberg();
        let x = GroupElement::from_i64(&[3, -1], &[2]);
        assert_eq!(apply(&g, &EndoData::identity(&g), &x).unwrap(), x);
        let e = EndoData::new(m(&[&[0, 1], &[1, -1]]), IntMatrix::zeros(1, 2), m(&[&[-1]]));
        assert_eq!(apply(&g, &e, &g.x(0)).unwrap(), g.x(1));
        assert_eq!(apply(&g, &e, &g.z(0)).unwrap(), g.inv(&g.z(0)));
        let bad = EndoData::new(m(&[&[0, 1], &[1, 0]]), IntMatrix::zeros(1, 2), m(&[&[1]]));
        assert!(matches!(apply(&g, &bad, &x), Err(Error::NotEndomorphism(_))));
    }

    #[test]
    fn compose_and_invert_examples() {
        let g = heisenberg();
        let id = EndoData::identity(&g);
        let e = EndoData::new(m(&[&[0, 1], &[1, -1]]), m(&[&[3, -2]]), m(&[&[-1]]));
        assert_eq!(compose(&g, &id, &e).unwrap(), e);
        assert_eq!(invert(&g, &id).unwrap(), id);
        let e0 = EndoData::new(m(&[&[0, 1], &[1, -1]]), IntMatrix::zeros(1, 2), m(&[&[-1]]));
        let inv = invert(&g, &e0).unwrap();
        assert_eq!(inv.a, m(&[&[1, 1], &[1, 0]]));
        assert_eq!(inv.d, m(&[&[-1]]));
        assert_eq!(compose(&g, &e, &invert(&g, &e).unwrap()).unwrap(), id);
        let non = EndoData::new(IntMatrix::identity(2).scale(&Int::from(2)), IntMatrix::zeros(1, 2), m(&[&[4]]));
        assert!(matches!(invert(&g, &non), Err(Error::InvalidInput(_))));
    }

    /// Random automorphisms of the I(3,2) group above, built from words in
    /// a few generating automorphisms.
    fn arb_i32_aut() -> impl Strategy<Value = EndoData> {
        let g = i32_group();
        let x = |a: &[i64], u: &[i64]| GroupElement::from_i64(a, u);
        let gens = [EndoData::from_images(&g, &[x(&[-1, 0, 0], &[0, 0]), x(&[0, -2, -1], &[1, 0]), x(&[0, -1, -1], &[0, 2])])
                .unwrap(),
            EndoData::from_images(&g, &[x(&[1, 0, 0], &[1, 0]), x(&[0, 1, 1], &[0, 0]), x(&[0, 0, 1], &[0, -1])])
                .unwrap(),
            EndoData::from_images(&g, &[x(&[1, 1, 0], &[0, 0]), x(&[0, 1, 0], &[0, 1]), x(&[0, 0, 1], &[0, 0])])
                .unwrap()];
        proptest::collection::vec(0usize..3, 1..5).prop_map(move |word| {
            let g = i32_group();
            word.iter().fold(EndoData::identity(&g), |acc, &w| compose(&g, &acc, &gens[w]).unwrap())
        })
    }

    fn arb_elem(n: usize, m: usize) -> impl Strategy<Value = GroupElement> {
        (proptest::collection::vec(-4i64..=4, n), proptest::collection::vec(-4i64..=4, m))
            .prop_map(|(a, u)| GroupElement::from_i64(&a, &u))
    }

    fn arb_heisenberg_endo() -> impl Strategy<Value = EndoData> {
        (proptest::collection::vec(-3i64..=3, 4), proptest::collection::vec(-3i64..=3, 2)).prop_map(|(a, b)| {
            let g = heisenberg();
            let a = m(&[&[a[0], a[1]], &[a[2], a[3]]]);
            EndoData::from_parts(&g, a, m(&[&b])).unwrap()
        })
    }

    proptest! {
        #[test]
        fn apply_is_homomorphism(e in arb_i32_aut(), x in arb_elem(3, 2), y in arb_elem(3, 2)) {
            let g = i32_group();
            prop_assert!(is_automorphism(&g, &e).unwrap());
            let lhs = apply(&g, &e, &g.mul(&x, &y)).unwrap();
            let rhs = g.mul(&apply(&g, &e, &x).unwrap(), &apply(&g, &e, &y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn endomorphisms_are_homomorphisms(e in arb_heisenberg_endo(), x in arb_elem(2, 1), y in arb_elem(2, 1)) {
            let g = heisenberg();
            let lhs = apply(&g, &e, &g.mul(&x, &y)).unwrap();
            let rhs = g.mul(&apply(&g, &e, &x).unwrap(), &apply(&g, &e, &y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn invert_undoes_apply(e in arb_i32_aut(), x in arb_elem(3, 2)) {
            let g = i32_group();
            let inv = invert(&g, &e).unwrap();
            prop_assert!(is_automorphism(&g, &inv).unwrap());
            prop_assert_eq!(apply(&g, &inv, &apply(&g, &e, &x).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(apply(&g, &e, &apply(&g, &inv, &x).unwrap()).unwrap(), x);
        }

        #[test]
        fn unimodular_d_on_automorphisms(e in arb_i32_aut()) {
            prop_assert!(det(&e.d).unwrap().abs().is_one());
        }

        #[test]
        fn induced_map_is_functorial(e1 in arb_heisenberg_endo(), e2 in arb_heisenberg_endo()) {
            let g = heisenberg();
            let d12 = solve_induced_center_map(&g, &e1.a.mul(&e2.a)).unwrap().unwrap();
            prop_assert_eq!(d12, e1.d.mul(&e2.d));
            let p = path7();
            let a1 = IntMatrix::diagonal(&[1, -1, 1, -1].map(Int::from));
            let a2 = IntMatrix::diagonal(&[2, 1, 3, 1].map(Int::from));
            let d1 = solve_induced_center_map(&p, &a1).unwrap().unwrap();
            let d2 = solve_induced_center_map(&p, &a2).unwrap().unwrap();
            prop_assert_eq!(solve_induced_center_map(&p, &a1.mul(&a2)).unwrap().unwrap(), d1.mul(&d2));
        }

        #[test]
        fn b_does_not_affect_verdict(e in arb_i32_aut(), b in proptest::collection::vec(-9i64..=9, 6)) {
            let g = i32_group();
            let mut e2 = e.clone();
            e2.b = IntMatrix::from_fn(2, 3, |r, c| Int::from(b[r * 3 + c]));
            prop_assert_eq!(check_endomorphism(&g, &e).unwrap(), check_endomorphism(&g, &e2).unwrap());
        }
    }
}
