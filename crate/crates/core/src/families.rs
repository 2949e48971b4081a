//! Canonical groups and explicit automorphisms with finite Reidemeister
//! number.
//!
//! Automorphisms are given by image words; `B` and `D` are computed by
//! evaluating the words in normal form, never written down by hand.
//!
//! Generator orders (0-based indices in the code, 1-based in file formats):
//! - `G(d_1..d_r)`: `x_1..x_r, y_1..y_r`, then `z`
//! - `G(d_1..d_r) x Z`: `x_1..x_r, y_1..y_r, u`, then `z`
//! - `I(3,2)` template: `x_1, x_2, x_3`, then `z_1, z_2`
//! - `G(delta, lambda, Phi)`: `x_1..x_4`, then `z_1, z_2`

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::canonical::{choose_k0, psi_k, BinaryQuadraticForm};
use crate::error::{Error, Result};
use crate::group::{GroupElement, TwoStepGroup};
use crate::morphism::{is_automorphism, product_endo, EndoData};
use crate::{Int, IntMatrix};

/// A named member of one of the families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Gd(Vec<Int>),
    GdTimesZ(Vec<Int>),
    I32 { alpha: Int, beta: Int, gamma: Int },
    I42 { delta: Int, lambda: Int, form: BinaryQuadraticForm },
    Path7,
    FreeAbelian(usize),
    Product(Box<FamilySpec>, Box<FamilySpec>),
}

impl FamilySpec {
    pub fn build(&self) -> Result<TwoStepGroup> {
        match self {
            FamilySpec::Gd(d) => make_gd(d),
            FamilySpec::GdTimesZ(d) => make_gd_times_z(d),
            FamilySpec::I32 { alpha, beta, gamma } => make_i32(alpha, beta, gamma),
            FamilySpec::I42 { delta, lambda, form } => make_i42(delta, lambda, form),
            FamilySpec::Path7 => Ok(make_path7()),
            FamilySpec::FreeAbelian(k) => Ok(free_abelian(*k)),
            FamilySpec::Product(a, b) => Ok(direct_product(&a.build()?, &b.build()?)),
        }
    }
}

fn check_divisibility_chain(d: &[Int]) -> Result<()> {
    if d.is_empty() {
        return Err(Error::InvalidParameters("need at least one d_i".into()));
    }
    if d[0].is_zero() {
        return Err(Error::InvalidParameters("d_1 must be nonzero".into()));
    }
    if d.iter().any(Signed::is_negative) {
        return Err(Error::InvalidParameters("d_i must be nonnegative".into()));
    }
    for w in d.windows(2) {
        if !w[1].is_multiple_of(&w[0]) {
            return Err(Error::InvalidParameters(format!("{} does not divide {}", w[0], w[1])));
        }
    }
    Ok(())
}

fn gd_with_extra(d: &[Int], extra: usize) -> Result<TwoStepGroup> {
    check_divisibility_chain(d)?;
    let r = d.len();
    TwoStepGroup::new(2 * r + extra, 1, d.iter().enumerate().map(|(i, di)| (i, r + i, vec![di.clone()])))
}

/// `G(d_1, ..., d_r)` with `[x_i, y_i] = z^{d_i}`.
pub fn make_gd(d: &[Int]) -> Result<TwoStepGroup> {
    gd_with_extra(d, 0)
}

/// `G(d_1, ..., d_r) x Z`.
pub fn make_gd_times_z(d: &[Int]) -> Result<TwoStepGroup> {
    gd_with_extra(d, 1)
}

/// `[x_1, x_2] = z_1^alpha z_2^beta`, `[x_1, x_3] = z_2^gamma`.
pub fn make_i32(alpha: &Int, beta: &Int, gamma: &Int) -> Result<TwoStepGroup> {
    if alpha.is_zero() || gamma.is_zero() {
        return Err(Error::InvalidParameters("alpha and gamma must be nonzero".into()));
    }
    TwoStepGroup::new(
        3,
        2,
        [(0, 1, vec![alpha.clone(), beta.clone()]), (0, 2, vec![Int::zero(), gamma.clone()])],
    )
}

/// `G(delta, lambda, Phi)`.
pub fn make_i42(delta: &Int, lambda: &Int, form: &BinaryQuadraticForm) -> Result<TwoStepGroup> {
    if !delta.is_positive() || !lambda.is_positive() {
        return Err(Error::InvalidParameters("delta and lambda must be positive".into()));
    }
    let dl = delta * lambda;
    TwoStepGroup::new(
        4,
        2,
        [
            (0, 2, vec![Int::zero(), dl.clone()]),
            (0, 3, vec![delta.clone(), Int::zero()]),
            (1, 2, vec![&form.a * delta, &form.b * &dl]),
            (1, 3, vec![Int::zero(), -&form.c * &dl]),
        ],
    )
}

/// `[x_1, x_2] = z_1`, `[x_2, x_3] = z_2`, `[x_3, x_4] = z_3`.
pub fn make_path7() -> TwoStepGroup {
    TwoStepGroup::from_i64(4, 3, &[(0, 1, &[1, 0, 0]), (1, 2, &[0, 1, 0]), (2, 3, &[0, 0, 1])])
        .expect("fixed presentation")
}

/// `Z^k`, as a group with no central generators.
pub fn free_abelian(k: usize) -> TwoStepGroup {
    TwoStepGroup::abelian(k, 0)
}

/// `G_1 x G_2` with generators `x^(1), x^(2)` and `z^(1), z^(2)`.
pub fn direct_product(g1: &TwoStepGroup, g2: &TwoStepGroup) -> TwoStepGroup {
    let (n1, m1, m2) = (g1.n(), g1.m(), g2.m());
    let mut comms = Vec::new();
    for (i, j, z) in g1.declared() {
        let mut v = z.to_vec();
        v.resize(m1 + m2, Int::zero());
        comms.push((i, j, v));
    }
    for (i, j, z) in g2.declared() {
        let mut v = vec![Int::zero(); m1];
        v.extend_from_slice(z);
        comms.push((n1 + i, n1 + j, v));
    }
    TwoStepGroup::new(n1 + g2.n(), m1 + m2, comms).expect("disjoint commutator pairs")
}

/// Blockwise automorphism of a [`direct_product`].
pub fn product_aut(e1: &EndoData, e2: &EndoData) -> EndoData {
    product_endo(e1, e2)
}

/// Evaluates `prod x_i^{k}` in the given order.
pub fn word(g: &TwoStepGroup, letters: &[(usize, Int)]) -> GroupElement {
    letters.iter().fold(g.identity(), |acc, (i, k)| g.mul(&acc, &g.pow(&g.x(*i), k)))
}

fn finish(g: &TwoStepGroup, images: &[GroupElement], expected_d: Option<IntMatrix>) -> Result<EndoData> {
    let e = EndoData::from_images(g, images)?;
    if let Some(d) = expected_d {
        if e.d != d {
            return Err(Error::Inconsistent(format!("induced center map {} differs from {}", e.d, d)));
        }
    }
    if !is_automorphism(g, &e)? {
        return Err(Error::Inconsistent("constructed map is not an automorphism".into()));
    }
    Ok(e)
}

/// Recovers `(d_1..d_r, has_z_factor)` from a group in `G(d)` or `G(d) x Z`
/// generator order.
pub fn gd_parameters(g: &TwoStepGroup) -> Result<(Vec<Int>, bool)> {
    let not = |why: &str| Error::NotTemplate(format!("not a G(d) group: {why}"));
    if g.m() != 1 || g.n() < 2 {
        return Err(not("needs m = 1 and n >= 2"));
    }
    let times_z = g.n() % 2 == 1;
    let r = g.n() / 2;
    let d: Vec<Int> = (0..r).map(|i| g.c(i, r + i)[0].clone()).collect();
    for (i, j) in g.pairs() {
        if (j != i + r || i >= r)
            && !g.c(i, j)[0].is_zero() {
                return Err(not("unexpected commutator"));
            }
    }
    check_divisibility_chain(&d).map_err(|e| not(&e.to_string()))?;
    Ok((d, times_z))
}

fn check_ks(ks: &[Int], r: usize) -> Result<()> {
    if ks.len() != r {
        return Err(Error::InvalidParameters(format!("{} values of k for r = {r}", ks.len())));
    }
    if ks.iter().any(|k| !k.is_positive()) {
        return Err(Error::InvalidParameters("k_i must be positive".into()));
    }
    Ok(())
}

fn gd_images(g: &TwoStepGroup, r: usize, ks: &[Int]) -> Vec<GroupElement> {
    let mut images = vec![g.identity(); g.n()];
    for i in 0..r {
        images[i] = g.x(r + i);
        images[r + i] = word(g, &[(i, Int::one()), (r + i, -&ks[i])]);
    }
    images
}

/// `x_i -> y_i`, `y_i -> x_i y_i^{-k_i}`, `z -> z^{-1}` on `G(d)`;
/// `R = 2 k_1 ... k_r`.
pub fn aut_even(g: &TwoStepGroup, ks: &[Int]) -> Result<EndoData> {
    let (d, times_z) = gd_parameters(g)?;
    if times_z {
        return Err(Error::InvalidParameters("group has a Z factor; use aut_odd".into()));
    }
    check_ks(ks, d.len())?;
    finish(g, &gd_images(g, d.len(), ks), Some(IntMatrix::diagonal(&[-Int::one()])))
}

/// As [`aut_even`] plus `u -> u^{-1}` on `G(d) x Z` with `d_r != 0`;
/// `R = 4 k_1 ... k_r`.
pub fn aut_odd(g: &TwoStepGroup, ks: &[Int]) -> Result<EndoData> {
    let (d, times_z) = gd_parameters(g)?;
    if !times_z {
        return Err(Error::InvalidParameters("group has no Z factor; use aut_even".into()));
    }
    if d.last().is_some_and(Zero::is_zero) {
        return Err(Error::InvalidParameters("d_r = 0; use aut_odd_split".into()));
    }
    check_ks(ks, d.len())?;
    let r = d.len();
    let mut images = gd_images(g, r, ks);
    images[2 * r] = g.inv(&g.x(2 * r));
    finish(g, &images, Some(IntMatrix::diagonal(&[-Int::one()])))
}

/// Companion matrix of `x^3 - k x^2 - 1` acting on `Z^3`; `|det(I - A)| = |k|`.
pub fn abelian_rank3_matrix(k: &Int) -> IntMatrix {
    let (o, z) = (Int::one(), Int::zero());
    IntMatrix::from_rows(vec![vec![z.clone(), z.clone(), o.clone()], vec![o.clone(), z.clone(), z.clone()], vec![z, o, k.clone()]])
        .expect("3x3")
}

/// Automorphism of `Z^3` with Reidemeister number `k`.
pub fn aut_abelian_rank3(k: &Int) -> Result<EndoData> {
    if !k.is_positive() {
        return Err(Error::InvalidParameters("k must be positive".into()));
    }
    Ok(EndoData::new(abelian_rank3_matrix(k), IntMatrix::zeros(0, 3), IntMatrix::zeros(0, 0)))
}

/// On `G(d) x Z` with `d_r = 0`: `x_r`, `y_r` and `u` span a central `Z^3`.
/// Uses [`aut_even`] with all `k_i = 1` on the first `r - 1` pairs and an
/// abelian map with `R = k` on that `Z^3`; `R = 2k`.
pub fn aut_odd_split(g: &TwoStepGroup, k: &Int) -> Result<EndoData> {
    let (d, times_z) = gd_parameters(g)?;
    if !times_z || !d.last().is_some_and(Zero::is_zero) {
        return Err(Error::InvalidParameters("needs G(d) x Z with d_r = 0".into()));
    }
    if !k.is_positive() {
        return Err(Error::InvalidParameters("k must be positive".into()));
    }
    let r = d.len();
    let ones = vec![Int::one(); r];
    let mut images = gd_images(g, r, &ones);
    let block = [r - 1, 2 * r - 1, 2 * r];
    let a3 = abelian_rank3_matrix(k);
    for (col, &gen) in block.iter().enumerate() {
        let letters: Vec<(usize, Int)> = block.iter().enumerate().map(|(row, &h)| (h, a3[(row, col)].clone())).collect();
        images[gen] = word(g, &letters);
    }
    finish(g, &images, Some(IntMatrix::diagonal(&[-Int::one()])))
}

/// Recovers `(alpha, beta, gamma)` from an `I(3,2)` template group.
pub fn i32_parameters(g: &TwoStepGroup) -> Result<(Int, Int, Int)> {
    let not = |why: &str| Error::NotTemplate(format!("not an I(3,2) template: {why}"));
    if g.n() != 3 || g.m() != 2 {
        return Err(not("needs n = 3, m = 2"));
    }
    let c12 = g.c(0, 1);
    let c13 = g.c(0, 2);
    if !c13[0].is_zero() || g.c(1, 2).iter().any(|x| !x.is_zero()) {
        return Err(not("unexpected commutator"));
    }
    if c12[0].is_zero() || c13[1].is_zero() {
        return Err(not("alpha and gamma must be nonzero"));
    }
    Ok((c12[0].clone(), c12[1].clone(), c13[1].clone()))
}

/// The automorphism with
/// `x_1 -> x_1^{-1}`,
/// `x_2 -> x_2^{-beta gamma l - alpha gamma^2 k l - 1} x_3^{beta^2 l + alpha beta gamma k l - alpha k}`,
/// `x_3 -> x_2^{-gamma^2 l} x_3^{beta gamma l - 1}`;
/// `R = 2 |alpha gamma^2 k l (4 + alpha gamma^2 k l)|`.
pub fn aut_i32(g: &TwoStepGroup, k: &Int, l: &Int) -> Result<EndoData> {
    let (alpha, beta, gamma) = i32_parameters(g)?;
    if k.is_zero() || l.is_zero() {
        return Err(Error::InvalidParameters("k and l must be nonzero".into()));
    }
    let t = &alpha * &gamma * &gamma * k * l;
    if (&t + Int::from(4)).is_zero() {
        return Err(Error::InvalidParameters("4 + alpha gamma^2 k l must be nonzero".into()));
    }
    let one = Int::one();
    let images = [
        word(g, &[(0, -&one)]),
        word(
            g,
            &[
                (1, -(&beta * &gamma * l) - &t - &one),
                (2, &beta * &beta * l + &alpha * &beta * &gamma * k * l - &alpha * k),
            ],
        ),
        word(g, &[(1, -(&gamma * &gamma * l)), (2, &beta * &gamma * l - &one)]),
    ];
    // z_1 -> z_1^{t+1} z_2^{gamma k}, z_2 -> z_1^{alpha gamma l} z_2
    let d = IntMatrix::from_rows(vec![vec![&t + &one, &alpha * &gamma * l], vec![&gamma * k, one]]).expect("2x2");
    finish(g, &images, Some(d))
}

/// Closed form for [`aut_i32`].
pub fn aut_i32_value(alpha: &Int, gamma: &Int, k: &Int, l: &Int) -> Int {
    let t = alpha * gamma * gamma * k * l;
    Int::from(2) * (&t * (&t + Int::from(4))).abs()
}

/// Recovers `(delta, lambda, Phi)` from a `G(delta, lambda, Phi)` template.
pub fn i42_parameters(g: &TwoStepGroup) -> Result<(Int, Int, BinaryQuadraticForm)> {
    let not = |why: &str| Error::NotTemplate(why.to_string());
    if g.n() != 4 || g.m() != 2 {
        return Err(not("needs n = 4, m = 2"));
    }
    let zero = |v: &[Int]| v.iter().all(Zero::is_zero);
    if !zero(&g.c(0, 1)) || !zero(&g.c(2, 3)) {
        return Err(not("[x1,x2] and [x3,x4] must vanish"));
    }
    let c13 = g.c(0, 2);
    let c14 = g.c(0, 3);
    let c23 = g.c(1, 2);
    let c24 = g.c(1, 3);
    if !c13[0].is_zero() || !c14[1].is_zero() || !c24[0].is_zero() {
        return Err(not("commutators outside the template shape"));
    }
    let delta = c14[0].clone();
    if !delta.is_positive() || !c13[1].is_positive() || !c13[1].is_multiple_of(&delta) {
        return Err(not("need [x1,x4] = z1^delta and [x1,x3] = z2^(delta lambda) with delta, lambda > 0"));
    }
    let dl = c13[1].clone();
    let lambda = &dl / &delta;
    if !c23[0].is_multiple_of(&delta) || !c23[1].is_multiple_of(&dl) || !c24[1].is_multiple_of(&dl) {
        return Err(not("form coefficients not divisible by delta, delta lambda"));
    }
    let form = BinaryQuadraticForm::new(&c23[0] / &delta, &c23[1] / &dl, -(&c24[1] / &dl));
    Ok((delta, lambda, form))
}

/// `x_1 -> x_1^{-1-4c} x_4^2`, `x_2 -> x_2^{-1-4c} x_3^{-2c}`, `x_3 -> x_2^2 x_3`,
/// `x_4 -> x_1^{-2c} x_4`, `z -> z^{-1}` on `G(delta, lambda, Phi)` with
/// `c != 0`; `R = 64 c^2`.
pub fn aut_i42(g: &TwoStepGroup) -> Result<EndoData> {
    let (_, _, form) = i42_parameters(g)?;
    let c = &form.c;
    if c.is_zero() {
        return Err(Error::InvalidParameters(
            "Phi(0,1) = 0; transform the form with psi_k or split off a Z factor first".into(),
        ));
    }
    let one = Int::one();
    let two = Int::from(2);
    let e = -&one - Int::from(4) * c;
    let images = [
        word(g, &[(0, e.clone()), (3, two.clone())]),
        word(g, &[(1, e), (2, -(&two * c))]),
        word(g, &[(1, two.clone()), (2, one.clone())]),
        word(g, &[(0, -(&two * c)), (3, one)]),
    ];
    finish(g, &images, Some(IntMatrix::identity(2).neg()))
}

/// How [`i42_finite_witness`] obtained its automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum I42Route {
    /// `Phi(0,1) != 0`: the explicit map on the input group.
    Direct,
    /// `Phi(0,1) = 0`, `(a, b) != 0`: the explicit map on the isomorphic
    /// group with form `psi_k(Phi, lambda, k)`.
    Transformed { k: Int, form: BinaryQuadraticForm },
    /// `Phi = 0`: the group splits as an `I(3,2)` group times `Z` (on
    /// `x_2`); the map is the `I(3,2)` map with `k = l = 1` times `-1`.
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct I42Witness {
    /// Group carrying `aut`: the input group except on the transformed route.
    pub group: TwoStepGroup,
    pub aut: EndoData,
    pub route: I42Route,
}

/// An automorphism with finite Reidemeister number on `G(delta, lambda, Phi)`
/// or on an isomorphic template group.
pub fn i42_finite_witness(delta: &Int, lambda: &Int, form: &BinaryQuadraticForm) -> Result<I42Witness> {
    let g = make_i42(delta, lambda, form)?;
    if !form.c.is_zero() {
        let aut = aut_i42(&g)?;
        return Ok(I42Witness { group: g, aut, route: I42Route::Direct });
    }
    if !(form.a.is_zero() && form.b.is_zero()) {
        let k = choose_k0(form)?;
        let psi = psi_k(form, lambda, &k);
        let h = make_i42(delta, lambda, &psi)?;
        let aut = aut_i42(&h)?;
        return Ok(I42Witness { group: h, aut, route: I42Route::Transformed { k, form: psi } });
    }
    // G' = <x_1, x_4, x_3> is make_i32(delta, 0, delta lambda) in that order
    let g32 = make_i32(delta, &Int::zero(), &(delta * lambda))?;
    let psi = aut_i32(&g32, &Int::one(), &Int::one())?;
    let order = [0usize, 3, 2];
    let mut images = vec![g.identity(); 4];
    for (src, &dst) in order.iter().enumerate() {
        let im = psi.image_of_x(src);
        let letters: Vec<(usize, Int)> = order.iter().zip(&im.a).map(|(&h, e)| (h, e.clone())).collect();
        let mut w = word(&g, &letters);
        for (s, t) in w.u.iter_mut().zip(&im.u) {
            *s += t;
        }
        images[dst] = w;
    }
    images[1] = g.inv(&g.x(1));
    let aut = finish(&g, &images, Some(psi.d.clone()))?;
    Ok(I42Witness { group: g, aut, route: I42Route::Split })
}
