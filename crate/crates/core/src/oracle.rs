//! Brute-force twisted conjugacy counts in finite quotients.
//!
//! These counts never use the determinant formula. In `(Z/M)^k` the count
//! has the closed form `prod gcd(d_i, M)` over the Smith divisors of
//! `I - A`. In the quotient `G_N` of a 2-step group by the coordinates
//! divisible by an odd `N`, the classes are counted twice, by union-find
//! over generator moves and by the twisted Burnside formula.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::TwoStepGroup;
use crate::intlin::{smith_normal_form, ExtNat};
use crate::morphism::{apply_unchecked, require_endomorphism, EndoData};
use crate::reidemeister::reidemeister_number;
use crate::{Int, IntMatrix};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Disjoint sets over `0..n` with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }

    /// Sizes of all classes, in order of their smallest element.
    pub fn class_sizes(&mut self) -> Vec<usize> {
        let mut out = Vec::new();
        for x in 0..self.parent.len() {
            if self.find(x) == x {
                out.push(self.size[x]);
            }
        }
        out
    }
}

fn check_budget(base: u64, exp: usize, budget: u64) -> Result<u64> {
    let size = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if size > budget as u128 {
        return Err(Error::Budget { size, budget });
    }
    Ok(size as u64)
}

fn residue(x: &Int, modulus: u64) -> i64 {
    x.mod_floor(&Int::from(modulus)).to_i64().expect("residue below the modulus")
}

/// Mixed-radix encoding of coordinate vectors with entries in `[0, N)`.
fn encode(v: &[i64], modulus: i64) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * modulus as usize + x as usize)
}

fn decode(mut code: usize, len: usize, modulus: i64, out: &mut [i64]) {
    for i in (0..len).rev() {
        out[i] = (code % modulus as usize) as i64;
        code /= modulus as usize;
    }
}

/// Number of orbits of `(Z/M)^k` under `x -> x + (I - A) c`.
pub fn abelian_twisted_classes(a: &IntMatrix, modulus: u64, budget: u64) -> Result<u64> {
    if !a.is_square() {
        return Err(Error::dim(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    if modulus < 2 {
        return Err(Error::InvalidModulus(modulus, "need M >= 2".into()));
    }
    let k = a.rows();
    let size = check_budget(modulus, k, budget)? as usize;
    let md = modulus as i64;
    let moves: Vec<Vec<i64>> = (0..k)
        .map(|j| (0..k).map(|i| residue(&(Int::from((i == j) as i64) - &a[(i, j)]), modulus)).collect())
        .collect();
    let mut uf = UnionFind::new(size);
    let mut x = vec![0i64; k];
    let mut y = vec![0i64; k];
    for code in 0..size {
        decode(code, k, md, &mut x);
        for mv in &moves {
            for i in 0..k {
                y[i] = (x[i] + mv[i]) % md;
            }
            uf.union(code, encode(&y, md));
        }
    }
    let sizes = uf.class_sizes();
    if sizes.iter().sum::<usize>() != size {
        return Err(Error::Inconsistent("orbit sizes do not sum to the group order".into()));
    }
    Ok(sizes.len() as u64)
}

/// `prod gcd(d_i, M)` over the Smith divisors of `I - A`, with `gcd(0, M) = M`.
pub fn abelian_closed_form(a: &IntMatrix, modulus: u64) -> Int {
    let m = Int::from(modulus);
    smith_normal_form(&a.identity_minus()).divisors.iter().map(|d| d.gcd(&m)).product()
}

/// A finite quotient `G_N` of a 2-step group.
#[derive(Clone, Debug)]
pub struct FiniteQuotientSpec {
    pub group: TwoStepGroup,
    pub modulus: u64,
    pub budget: u64,
}

impl FiniteQuotientSpec {
    pub fn new(group: TwoStepGroup, modulus: u64) -> Result<Self> {
        Self::with_budget(group, modulus, DEFAULT_BUDGET)
    }

    pub fn with_budget(group: TwoStepGroup, modulus: u64, budget: u64) -> Result<Self> {
        if modulus < 3 || modulus.is_multiple_of(2) {
            return Err(Error::InvalidModulus(modulus, "need an odd modulus N >= 3".into()));
        }
        check_budget(modulus, group.hirsch(), budget)?;
        Ok(FiniteQuotientSpec { group, modulus, budget })
    }
}

/// Arithmetic in `G_N` on residues.
struct Quotient {
    n: usize,
    m: usize,
    md: i64,
    /// nonzero `(i, j, c(i,j) mod N)` with `i < j`
    constants: Vec<(usize, usize, Vec<i64>)>,
}

type Elem = (Vec<i64>, Vec<i64>);

impl Quotient {
    fn new(g: &TwoStepGroup, modulus: u64) -> Self {
        let constants = g
            .pairs()
            .map(|(i, j)| (i, j, g.c(i, j).iter().map(|x| residue(x, modulus)).collect::<Vec<i64>>()))
            .filter(|(_, _, c)| c.iter().any(|&x| x != 0))
            .collect();
        Quotient { n: g.n(), m: g.m(), md: modulus as i64, constants }
    }

    fn omega(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.m];
        for (p, q, c) in &self.constants {
            let s = (b[*p] * a[*q]) % self.md;
            for (o, cz) in out.iter_mut().zip(c) {
                *o = (*o - s * cz).rem_euclid(self.md);
            }
        }
        out
    }

    fn beta(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.m];
        for (p, q, c) in &self.constants {
            let s = (a[*p] * b[*q] - a[*q] * b[*p]).rem_euclid(self.md);
            for (o, cz) in out.iter_mut().zip(c) {
                *o = (*o + s * cz) % self.md;
            }
        }
        out
    }

    fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let w = self.omega(&x.0, &y.0);
        (
            x.0.iter().zip(&y.0).map(|(a, b)| (a + b) % self.md).collect(),
            x.1.iter().zip(&y.1).zip(&w).map(|((a, b), c)| (a + b + c) % self.md).collect(),
        )
    }

    fn inv(&self, x: &Elem) -> Elem {
        let w = self.omega(&x.0, &x.0);
        (
            x.0.iter().map(|a| (-a).rem_euclid(self.md)).collect(),
            x.1.iter().zip(&w).map(|(u, c)| (c - u).rem_euclid(self.md)).collect(),
        )
    }

    fn pow(&self, x: &Elem, k: i64) -> Elem {
        let binom = (k * (k - 1) / 2) % self.md;
        let w = self.omega(&x.0, &x.0);
        (
            x.0.iter().map(|a| (k * a) % self.md).collect(),
            x.1.iter().zip(&w).map(|(u, c)| (k * u + binom * c) % self.md).collect(),
        )
    }

    fn identity(&self) -> Elem {
        (vec![0; self.n], vec![0; self.m])
    }

    fn generator(&self, i: usize) -> Elem {
        let mut e = self.identity();
        if i < self.n {
            e.0[i] = 1;
        } else {
            e.1[i - self.n] = 1;
        }
        e
    }

    fn encode(&self, x: &Elem) -> usize {
        let a = encode(&x.0, self.md);
        a * (self.md as usize).pow(self.m as u32) + encode(&x.1, self.md)
    }

    fn decode(&self, code: usize) -> Elem {
        let radix = (self.md as usize).pow(self.m as u32);
        let mut e = self.identity();
        decode(code / radix, self.n, self.md, &mut e.0);
        decode(code % radix, self.m, self.md, &mut e.1);
        e
    }
}

/// The endomorphism induced on `G_N`.
struct InducedMap {
    x_images: Vec<Elem>,
    d: Vec<Vec<i64>>,
}

impl InducedMap {
    fn new(e: &EndoData, modulus: u64) -> Self {
        let (m, n) = (e.b.rows(), e.a.rows());
        InducedMap {
            x_images: (0..n)
                .map(|i| {
                    let im = e.image_of_x(i);
                    (im.a.iter().map(|x| residue(x, modulus)).collect(), im.u.iter().map(|x| residue(x, modulus)).collect())
                })
                .collect(),
            d: (0..m).map(|r| (0..m).map(|c| residue(&e.d[(r, c)], modulus)).collect()).collect(),
        }
    }

    fn apply(&self, q: &Quotient, x: &Elem) -> Elem {
        let mut acc = q.identity();
        for (i, &k) in x.0.iter().enumerate() {
            if k != 0 {
                acc = q.mul(&acc, &q.pow(&self.x_images[i], k));
            }
        }
        for (r, row) in self.d.iter().enumerate() {
            let s: i64 = row.iter().zip(&x.1).map(|(d, u)| d * u).sum();
            acc.1[r] = (acc.1[r] + s) % q.md;
        }
        acc
    }
}

/// Both counts of twisted conjugacy classes in `G_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCounts {
    pub order: u64,
    pub union_find: u64,
    pub burnside: u64,
}

fn check_induced_map(g: &TwoStepGroup, e: &EndoData, q: &Quotient, phi: &InducedMap, modulus: u64) -> Result<()> {
    let gens = g.n() + g.m();
    for i in 0..gens {
        for j in 0..gens {
            let (a, b) = (q.generator(i), q.generator(j));
            if phi.apply(q, &q.mul(&a, &b)) != q.mul(&phi.apply(q, &a), &phi.apply(q, &b)) {
                return Err(Error::Inconsistent(format!("induced map is not a homomorphism on generators {i}, {j}")));
            }
        }
    }
    // phi(x_i)^N must lie in the kernel of the reduction
    let nn = Int::from(modulus);
    for i in 0..g.n() {
        let p = g.pow(&apply_unchecked(g, e, &g.x(i)), &nn);
        if p.a.iter().chain(&p.u).any(|x| !x.is_multiple_of(&nn)) {
            return Err(Error::Inconsistent("reduction kernel is not invariant".into()));
        }
    }
    Ok(())
}

pub fn finite_quotient_counts(q: &FiniteQuotientSpec, e: &EndoData) -> Result<QuotientCounts> {
    let g = &q.group;
    require_endomorphism(g, e)?;
    let order = check_budget(q.modulus, g.hirsch(), q.budget)?;
    let quo = Quotient::new(g, q.modulus);
    let phi = InducedMap::new(e, q.modulus);
    check_induced_map(g, e, &quo, &phi, q.modulus)?;
    let gens: Vec<(Elem, Elem)> = (0..g.n() + g.m())
        .map(|i| {
            let c = quo.generator(i);
            let inv_phi = quo.inv(&phi.apply(&quo, &c));
            (c, inv_phi)
        })
        .collect();

    let size = order as usize;
    let mut uf = UnionFind::new(size);
    for code in 0..size {
        let x = quo.decode(code);
        for (c, inv_phi) in &gens {
            let y = quo.mul(&quo.mul(c, &x), inv_phi);
            uf.union(code, quo.encode(&y));
        }
    }
    let sizes = uf.class_sizes();
    if sizes.iter().sum::<usize>() != size {
        return Err(Error::Inconsistent("orbit sizes do not sum to the group order".into()));
    }
    let union_find = sizes.len() as u64;
    let burnside = burnside_count(g, &quo, &phi)?;
    Ok(QuotientCounts { order, union_find, burnside })
}

/// `(1/|G_N|) sum_c |{x : c x phi(c)^-1 = x}|`. The fixed-point condition
/// is `A a_c = a_c` and `beta(a_c, a_x) = w(a_c) + (D - I) u_c`, where
/// `w(a_c)` is the z-part of `phi(x^{a_c})`; it does not involve `u_x`.
fn burnside_count(g: &TwoStepGroup, q: &Quotient, phi: &InducedMap) -> Result<u64> {
    let (n, m, md) = (g.n(), g.m(), q.md);
    let xs = (md as usize).pow(n as u32);
    let zs = (md as usize).pow(m as u32);
    let total: u128 = (0..xs)
        .into_par_iter()
        .map(|ac_code| {
            let mut ac = vec![0i64; n];
            decode(ac_code, n, md, &mut ac);
            let image = phi.apply(q, &(ac.clone(), vec![0; m]));
            if image.0 != ac {
                return 0u128;
            }
            let mut hist: HashMap<Vec<i64>, u64> = HashMap::new();
            let mut ax = vec![0i64; n];
            for code in 0..xs {
                decode(code, n, md, &mut ax);
                *hist.entry(q.beta(&ac, &ax)).or_default() += 1;
            }
            let mut sum = 0u128;
            let mut uc = vec![0i64; m];
            for code in 0..zs {
                decode(code, m, md, &mut uc);
                let t: Vec<i64> = (0..m)
                    .map(|r| {
                        let du: i64 = phi.d[r].iter().zip(&uc).map(|(d, u)| d * u).sum();
                        (image.1[r] + du - uc[r]).rem_euclid(md)
                    })
                    .collect();
                sum += *hist.get(&t).unwrap_or(&0) as u128;
            }
            sum * zs as u128
        })
        .sum();
    let order = (xs * zs) as u128;
    if !total.is_multiple_of(order) {
        return Err(Error::Inconsistent("Burnside sum not divisible by the group order".into()));
    }
    Ok((total / order) as u64)
}

/// Number of twisted conjugacy classes of the induced map on `G_N`,
/// cross-checked between union-find and the Burnside formula.
pub fn finite_quotient_twisted_classes(q: &FiniteQuotientSpec, e: &EndoData) -> Result<u64> {
    let counts = finite_quotient_counts(q, e)?;
    if counts.union_find != counts.burnside {
        return Err(Error::Inconsistent(format!(
            "union-find count {} differs from Burnside count {}",
            counts.union_find, counts.burnside
        )));
    }
    Ok(counts.union_find)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationRow {
    pub modulus: u64,
    pub count: u64,
}

/// Finite-quotient counts next to the formula value. No relation between
/// the two is asserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub rows: Vec<StabilizationRow>,
    pub formula: ExtNat,
}

pub fn stabilization_report(g: &TwoStepGroup, e: &EndoData, moduli: &[u64], budget: u64) -> Result<StabilizationReport> {
    let formula = reidemeister_number(g, e)?.total;
    let rows = moduli
        .iter()
        .map(|&modulus| {
            let q = FiniteQuotientSpec::with_budget(g.clone(), modulus, budget)?;
            Ok(StabilizationRow { modulus, count: finite_quotient_twisted_classes(&q, e)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilizationReport { rows, formula })
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

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 1);
        uf.union(3, 4);
        uf.union(1, 4);
        assert_eq!(uf.class_sizes(), vec![4, 1]);
    }

    #[test]
    fn abelian_examples() {
        assert_eq!(abelian_twisted_classes(&m(&[&[-1]]), 4, DEFAULT_BUDGET).unwrap(), 2);
        assert_eq!(abelian_twisted_classes(&m(&[&[1]]), 3, DEFAULT_BUDGET).unwrap(), 3);
        assert_eq!(abelian_twisted_classes(&m(&[&[2, 1], &[1, 1]]), 6, DEFAULT_BUDGET).unwrap(), 1);
        assert!(matches!(abelian_twisted_classes(&m(&[&[1]]), 1, DEFAULT_BUDGET), Err(Error::InvalidModulus(..))));
        assert!(matches!(
            abelian_twisted_classes(&IntMatrix::identity(3), 12, 1000),
            Err(Error::Budget { size: 1728, budget: 1000 })
        ));
    }

    /// Ordinary conjugacy classes of the Heisenberg group mod an odd prime
    /// `p`: `p` central classes and `p^2 - 1` others.
    #[test]
    fn identity_gives_conjugacy_classes() {
        let g = heisenberg();
        for p in [3u64, 5, 7] {
            let q = FiniteQuotientSpec::new(g.clone(), p).unwrap();
            let count = finite_quotient_twisted_classes(&q, &EndoData::identity(&g)).unwrap();
            assert_eq!(count, p * p + p - 1);
        }
    }

    #[test]
    fn heisenberg_map_counts_agree() {
        let g = heisenberg();
        let e = EndoData::new(m(&[&[0, 1], &[1, -1]]), IntMatrix::zeros(1, 2), m(&[&[-1]]));
        let q = FiniteQuotientSpec::new(g, 3).unwrap();
        let c = finite_quotient_counts(&q, &e).unwrap();
        assert_eq!(c.union_find, c.burnside);
        assert_eq!(c.order, 27);
    }

    #[test]
    fn abelian_group_as_quotient_input() {
        let g = TwoStepGroup::abelian(1, 0);
        let e = EndoData::new(m(&[&[-1]]), IntMatrix::zeros(0, 1), IntMatrix::zeros(0, 0));
        let q = FiniteQuotientSpec::new(g, 5).unwrap();
        assert_eq!(finite_quotient_twisted_classes(&q, &e).unwrap(), 1);
    }

    #[test]
    fn quotient_rejects_bad_input() {
        let g = heisenberg();
        assert!(matches!(FiniteQuotientSpec::new(g.clone(), 4), Err(Error::InvalidModulus(4, _))));
        assert!(matches!(FiniteQuotientSpec::with_budget(g, 11, 1000), Err(Error::Budget { .. })));
    }

    #[test]
    fn stabilization_rows() {
        let g = heisenberg();
        let e = EndoData::new(m(&[&[0, 1], &[1, -2]]), IntMatrix::zeros(1, 2), m(&[&[-1]]));
        let rep = stabilization_report(&g, &e, &[3, 5, 7], DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.rows.len(), 3);
        assert_eq!(rep.formula, ExtNat::finite(4));
        let rep = stabilization_report(&g, &EndoData::identity(&g), &[3], DEFAULT_BUDGET).unwrap();
        assert!(rep.formula.is_infinite());

        let z = TwoStepGroup::abelian(2, 0);
        let a = m(&[&[0, 1], &[1, 1]]);
        let e = EndoData::new(a.clone(), IntMatrix::zeros(0, 2), IntMatrix::zeros(0, 0));
        let rep = stabilization_report(&z, &e, &[3, 5, 7, 9], DEFAULT_BUDGET).unwrap();
        for row in rep.rows {
            assert_eq!(Int::from(row.count), abelian_closed_form(&a, row.modulus));
        }
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=3).prop_flat_map(|k| {
            proptest::collection::vec(-4i64..=4, k * k)
                .prop_map(move |v| IntMatrix::from_fn(k, k, |i, j| Int::from(v[i * k + j])))
        })
    }

    proptest! {
        #[test]
        fn abelian_matches_closed_form(a in arb_matrix(), modulus in 2u64..=12) {
            let count = abelian_twisted_classes(&a, modulus, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(Int::from(count), abelian_closed_form(&a, modulus));
        }
    }
}
