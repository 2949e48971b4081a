//! 2-step nilpotent groups given by structure constants.
//!
//! A group has x-generators `x_0 .. x_{n-1}` and central generators
//! `z_0 .. z_{m-1}`, with `[x_i, x_j] = z^{c(i,j)}` for `i < j`. Elements are
//! kept in the normal form `x_0^{a_0} ... x_{n-1}^{a_{n-1}} z^u`.
//!
//! Commutators follow `[g, h] = g^-1 h^-1 g h`. With `c(i,j) = -c(j,i)` for
//! `i > j`, the normal-form product is
//! `(a, u)(b, v) = (a + b, u + v + omega(a, b))`, where
//! `omega(a, b) = sum_{i > j} a_i b_j c(i,j)`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlin::{integer_kernel, smith_normal_form, Matrix};
use crate::{Int, IntMatrix, IntSnf};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    /// x-exponents in normal order
    pub a: Vec<Int>,
    /// z-exponents
    pub u: Vec<Int>,
}

impl GroupElement {
    pub fn new(a: Vec<Int>, u: Vec<Int>) -> Self {
        GroupElement { a, u }
    }

    pub fn from_i64(a: &[i64], u: &[i64]) -> Self {
        GroupElement {
            a: a.iter().map(|&x| Int::from(x)).collect(),
            u: u.iter().map(|&x| Int::from(x)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().chain(&self.u).all(Zero::is_zero)
    }
}

/// Invariants read off the structure matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupInvariants {
    pub hirsch: usize,
    pub gamma2_rank: usize,
    /// `n` of the `I(n, m)` class: rank of `G / isolator(gamma_2)`.
    pub class_n: usize,
    /// `m` of the `I(n, m)` class.
    pub class_m: usize,
    pub delta: Option<Int>,
    pub lambda: Option<Int>,
    pub center_rank: usize,
    /// Nonzero Smith divisors of the structure matrix.
    pub divisors: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoStepGroup {
    n: usize,
    m: usize,
    /// indexed by `pair_index`, each of length `m`
    table: Vec<Vec<Int>>,
    /// pairs with an explicit commutator, in the order they were given
    declared: Vec<usize>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl TwoStepGroup {
    /// Free abelian group on `n + m` generators.
    pub fn abelian(n: usize, m: usize) -> Self {
        let p = n * n.saturating_sub(1) / 2;
        TwoStepGroup { n, m, table: vec![vec![Int::zero(); m]; p], declared: Vec::new() }
    }

    /// Builds a group from commutators `(i, j, z)` with `i < j < n` (0-based)
    /// and `z` of length `m`. Pairs not listed commute.
    pub fn new<I>(n: usize, m: usize, commutators: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Vec<Int>)>,
    {
        let mut g = Self::abelian(n, m);
        for (i, j, z) in commutators {
            g.declare(i, j, z)?;
        }
        Ok(g)
    }

    /// Shorthand for tests and constructors: small integer constants.
    pub fn from_i64(n: usize, m: usize, commutators: &[(usize, usize, &[i64])]) -> Result<Self> {
        Self::new(
            n,
            m,
            commutators.iter().map(|&(i, j, z)| (i, j, z.iter().map(|&x| Int::from(x)).collect())),
        )
    }

    fn declare(&mut self, i: usize, j: usize, z: Vec<Int>) -> Result<()> {
        if i >= j {
            return Err(Error::InvalidInput(format!("commutator pair ({i},{j}) needs i < j")));
        }
        if j >= self.n {
            return Err(Error::InvalidInput(format!("generator index {j} out of range for n = {}", self.n)));
        }
        if z.len() != self.m {
            return Err(Error::dim(format!("commutator ({i},{j}) has {} entries, m = {}", z.len(), self.m)));
        }
        let p = pair_index(self.n, i, j);
        if self.declared.contains(&p) {
            return Err(Error::InvalidInput(format!("commutator pair ({i},{j}) given twice")));
        }
        self.table[p] = z;
        self.declared.push(p);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn hirsch(&self) -> usize {
        self.n + self.m
    }

    pub fn pair_count(&self) -> usize {
        self.table.len()
    }

    /// Pairs `(i, j)`, `i < j`, in lexicographic order: the column order of
    /// the structure matrix.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j)))
    }

    /// Explicitly given commutators in their original order.
    pub fn declared(&self) -> impl Iterator<Item = (usize, usize, &[Int])> + '_ {
        let pairs: Vec<(usize, usize)> = self.pairs().collect();
        self.declared.iter().map(move |&p| (pairs[p].0, pairs[p].1, self.table[p].as_slice()))
    }

    /// `c(i, j)` for any `i, j`, antisymmetric.
    pub fn c(&self, i: usize, j: usize) -> Vec<Int> {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.table[pair_index(self.n, i, j)].clone(),
            Ordering::Greater => self.table[pair_index(self.n, j, i)].iter().map(|x| -x).collect(),
            Ordering::Equal => vec![Int::zero(); self.m],
        }
    }

    /// `m x n(n-1)/2` matrix with column `(i,j)` equal to `c(i,j)`.
    pub fn structure_matrix(&self) -> IntMatrix {
        Matrix::from_fn(self.m, self.table.len(), |r, p| self.table[p][r].clone())
    }

    pub fn structure_snf(&self) -> IntSnf {
        smith_normal_form(&self.structure_matrix())
    }

    pub fn gamma2_rank(&self) -> usize {
        self.structure_snf().rank()
    }

    /// The central generators span the isolator of the derived subgroup
    /// exactly when the structure matrix has rank `m`.
    pub fn is_normalized(&self) -> bool {
        self.gamma2_rank() == self.m
    }

    pub fn require_normalized(&self) -> Result<()> {
        let rank = self.gamma2_rank();
        if rank == self.m {
            Ok(())
        } else {
            Err(Error::NotNormalized { rank, m: self.m })
        }
    }

    /// `sum_{p<q} (a_p b_q - a_q b_p) c(p,q)`.
    pub fn beta(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.m];
        for (p, (i, j)) in self.pairs().enumerate() {
            let c = &self.table[p];
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            let s = &a[i] * &b[j] - &a[j] * &b[i];
            if s.is_zero() {
                continue;
            }
            for (o, cz) in out.iter_mut().zip(c) {
                *o += &s * cz;
            }
        }
        out
    }

    /// `sum_{i>j} a_i b_j c(i,j) = -sum_{p<q} b_p a_q c(p,q)`.
    pub fn omega(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.m];
        for (p, (i, j)) in self.pairs().enumerate() {
            let c = &self.table[p];
            let s = &b[i] * &a[j];
            if s.is_zero() || c.iter().all(Zero::is_zero) {
                continue;
            }
            for (o, cz) in out.iter_mut().zip(c) {
                *o -= &s * cz;
            }
        }
        out
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { a: vec![Int::zero(); self.n], u: vec![Int::zero(); self.m] }
    }

    pub fn x(&self, i: usize) -> GroupElement {
        let mut g = self.identity();
        g.a[i] = Int::one();
        g
    }

    pub fn z(&self, j: usize) -> GroupElement {
        let mut g = self.identity();
        g.u[j] = Int::one();
        g
    }

    pub fn check_element(&self, g: &GroupElement) -> Result<()> {
        if g.a.len() != self.n || g.u.len() != self.m {
            return Err(Error::dim(format!(
                "element has ({}, {}) coordinates, group has (n, m) = ({}, {})",
                g.a.len(),
                g.u.len(),
                self.n,
                self.m
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check_element(g)?;
        self.check_element(h)?;
        Ok(self.mul(g, h))
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_element(g)?;
        Ok(self.inv(g))
    }

    /// `g^k` for any integer `k`.
    pub fn power(&self, g: &GroupElement, k: &Int) -> Result<GroupElement> {
        self.check_element(g)?;
        Ok(self.pow(g, k))
    }

    /// `[g, h] = g^-1 h^-1 g h`, always central.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check_element(g)?;
        self.check_element(h)?;
        Ok(GroupElement { a: vec![Int::zero(); self.n], u: self.beta(&g.a, &h.a) })
    }

    pub(crate) fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let w = self.omega(&g.a, &h.a);
        GroupElement {
            a: g.a.iter().zip(&h.a).map(|(x, y)| x + y).collect(),
            u: g.u.iter().zip(&h.u).zip(&w).map(|((x, y), z)| x + y + z).collect(),
        }
    }

    pub(crate) fn inv(&self, g: &GroupElement) -> GroupElement {
        let w = self.omega(&g.a, &g.a);
        GroupElement {
            a: g.a.iter().map(|x| -x).collect(),
            u: g.u.iter().zip(&w).map(|(x, y)| y - x).collect(),
        }
    }

    /// `(a, u)^k = (k a, k u + C(k,2) omega(a, a))`, valid for negative `k`
    /// as well.
    pub(crate) fn pow(&self, g: &GroupElement, k: &Int) -> GroupElement {
        let binom = (k * (k - Int::one())).div_floor(&Int::from(2));
        let w = self.omega(&g.a, &g.a);
        GroupElement {
            a: g.a.iter().map(|x| k * x).collect(),
            u: g.u.iter().zip(&w).map(|(x, y)| k * x + &binom * y).collect(),
        }
    }

    /// `nm x n` matrix of `a -> (beta(a, e_0), ..., beta(a, e_{n-1}))`.
    pub fn pairing_matrix(&self) -> IntMatrix {
        let mut k = IntMatrix::zeros(self.n * self.m, self.n);
        for i in 0..self.n {
            for l in 0..self.n {
                for (r, v) in self.c(i, l).into_iter().enumerate() {
                    k[(l * self.m + r, i)] = v;
                }
            }
        }
        k
    }

    /// Integer basis of `{a : beta(a, e_l) = 0 for all l}`, i.e. of the
    /// x-parts of central elements.
    pub fn center_kernel(&self) -> Vec<Vec<Int>> {
        integer_kernel(&self.pairing_matrix())
    }

    /// Basis of the center: the central generators, then the central
    /// elements `x^a` for `a` in [`center_kernel`](Self::center_kernel).
    pub fn center_basis(&self) -> Vec<GroupElement> {
        let mut basis: Vec<GroupElement> = (0..self.m).map(|j| self.z(j)).collect();
        for a in self.center_kernel() {
            basis.push(GroupElement { a, u: vec![Int::zero(); self.m] });
        }
        basis
    }

    pub fn invariants(&self) -> GroupInvariants {
        let snf = self.structure_snf();
        let rank = snf.rank();
        let divisors = snf.nonzero_divisors().to_vec();
        let (delta, lambda) = if rank == 2 && self.m == 2 {
            let (d1, d2) = (&divisors[0], &divisors[1]);
            (Some(d1.clone()), Some(d2 / d1))
        } else {
            (None, None)
        };
        GroupInvariants {
            hirsch: self.hirsch(),
            gamma2_rank: rank,
            class_n: self.n + (self.m - rank),
            class_m: rank,
            delta,
            lambda,
            center_rank: self.m + self.center_kernel().len(),
            divisors,
        }
    }

    /// Largest absolute structure constant, zero for abelian groups.
    pub fn max_constant(&self) -> Int {
        self.table.iter().flatten().map(Signed::abs).max().unwrap_or_else(Int::zero)
    }
}
