//! Bounded exhaustive search of the Reidemeister spectrum.
//!
//! Candidates are the matrices `A` with entries in `[-h, h]`, built column
//! by column. A partial matrix survives only if its columns extend to a
//! unimodular matrix (the gcd of its maximal minors is 1) and if it already
//! satisfies every linear relation `M(A) nu = 0` with `nu` in the kernel of
//! the structure matrix supported on the placed columns. Complete survivors
//! are unimodular; the induced `D` is solved exactly and checked.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::Result;
use crate::group::TwoStepGroup;
use crate::intlin::{det, ext_abs, integer_kernel, smith_normal_form, solve_with_snf, ExtNat, Integral, Snf};
use crate::morphism::EndoData;
use crate::{Int, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSample {
    pub height: u32,
    /// Column vectors tried at any depth of the search, pruned or not.
    pub candidates_scanned: u64,
    pub automorphisms_found: u64,
    /// Sorted, without duplicates.
    pub finite_values: Vec<Int>,
    /// First automorphism found for each finite value.
    pub witnesses: BTreeMap<Int, EndoData>,
    /// Set when `limit` stopped the search early.
    pub truncated: bool,
}

/// Scalar for the pruning arithmetic.
trait SearchInt: Integral {
    fn from_int(x: &Int) -> Self;
    fn to_int(&self) -> Int;
}

impl SearchInt for i64 {
    fn from_int(x: &Int) -> Self {
        x.to_i64().expect("value checked against the i64 bound")
    }
    fn to_int(&self) -> Int {
        Int::from(*self)
    }
}

impl SearchInt for Int {
    fn from_int(x: &Int) -> Self {
        x.clone()
    }
    fn to_int(&self) -> Int {
        self.clone()
    }
}

struct Engine<T> {
    n: usize,
    m: usize,
    columns: Vec<Vec<T>>,
    /// `pairs[j]` lists `(i, pair index)` for `i < j`
    pairs: Vec<Vec<(usize, usize)>>,
    /// nonzero structure constants `(i, j, c(i,j))`
    constants: Vec<(usize, usize, Vec<T>)>,
    /// `relations[d]`: kernel vectors of the structure matrix supported on
    /// pairs inside the first `d` generators, as sparse `(pair, coeff)` lists
    relations: Vec<Vec<Vec<(usize, T)>>>,
    /// row subsets of each size
    subsets: Vec<Vec<Vec<usize>>>,
    pair_count: usize,
    c_snf: Snf<Int>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Fraction-free elimination on a small row-major square matrix.
fn small_det<T: Integral>(mut a: Vec<T>, k: usize) -> T {
    if k == 0 {
        return T::one();
    }
    let mut sign = T::one();
    let mut prev = T::one();
    for t in 0..k {
        if a[t * k + t].is_zero() {
            let Some(r) = (t + 1..k).find(|&r| !a[r * k + t].is_zero()) else {
                return T::zero();
            };
            for c in 0..k {
                a.swap(t * k + c, r * k + c);
            }
            sign = T::zero() - sign;
        }
        for i in t + 1..k {
            for j in t + 1..k {
                let v = a[i * k + j].clone() * a[t * k + t].clone() - a[i * k + t].clone() * a[t * k + j].clone();
                a[i * k + j] = v / prev.clone();
            }
        }
        prev = a[t * k + t].clone();
    }
    sign * a[k * k - 1].clone()
}

impl<T: SearchInt> Engine<T> {
    fn new(g: &TwoStepGroup, height: u32) -> Self {
        let n = g.n();
        let m = g.m();
        let h = height as i64;
        let mut columns = Vec::new();
        let mut cur = vec![-h; n];
        loop {
            columns.push(cur.iter().map(|&x| T::from_int(&Int::from(x))).collect());
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if cur[i] < h {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -h;
            }
            if cur.iter().all(|&x| x == -h) {
                break;
            }
        }
        let all_pairs: Vec<(usize, usize)> = g.pairs().collect();
        let mut pairs = vec![Vec::new(); n];
        let mut constants = Vec::new();
        for (p, &(i, j)) in all_pairs.iter().enumerate() {
            pairs[j].push((i, p));
            let c = g.c(i, j);
            if c.iter().any(|x| !x.is_zero()) {
                constants.push((i, j, c.iter().map(T::from_int).collect()));
            }
        }
        let relations = relation_vectors(g)
            .into_iter()
            .map(|rel| rel.into_iter().map(|nu| nu.into_iter().map(|(p, x)| (p, T::from_int(&x))).collect()).collect())
            .collect();
        Engine {
            n,
            m,
            columns,
            pairs,
            constants,
            relations,
            subsets: (0..=n).map(|k| subsets(n, k)).collect(),
            pair_count: all_pairs.len(),
            c_snf: smith_normal_form(&g.structure_matrix()),
        }
    }
}

/// For each depth `d`, a kernel basis of the structure matrix restricted to
/// pairs inside the first `d` generators, as sparse `(pair, coeff)` lists.
fn relation_vectors(g: &TwoStepGroup) -> Vec<Vec<Vec<(usize, Int)>>> {
    let all_pairs: Vec<(usize, usize)> = g.pairs().collect();
    let c = g.structure_matrix();
    let rows: Vec<usize> = (0..g.m()).collect();
    (0..=g.n())
        .map(|d| {
            let support: Vec<usize> = (0..all_pairs.len()).filter(|&p| all_pairs[p].1 < d).collect();
            if support.is_empty() {
                return Vec::new();
            }
            integer_kernel(&c.submatrix(&rows, &support))
                .into_iter()
                .map(|v| support.iter().zip(v).filter(|(_, x)| !x.is_zero()).map(|(&p, x)| (p, x)).collect())
                .collect()
        })
        .collect()
}

/// Whether the pruning arithmetic stays inside `i64`.
fn fits_i64(g: &TwoStepGroup, height: u32) -> bool {
    let n = g.n() as f64;
    let h = height as f64;
    let limit = 2f64.powi(62);
    // squared Hadamard bound on the minors, which also bounds the products
    // formed during elimination
    let minors = (n * h * h).powf(n);
    let constants: f64 = g
        .pairs()
        .flat_map(|(i, j)| g.c(i, j))
        .map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY))
        .sum();
    let beta = 2.0 * h * h * constants;
    let nu = relation_vectors(g)
        .iter()
        .flatten()
        .map(|v| v.iter().map(|(_, x)| x.abs().to_f64().unwrap_or(f64::INFINITY)).sum::<f64>())
        .fold(0.0, f64::max);
    minors < limit && beta * nu.max(1.0) < limit
}

#[derive(Default)]
struct Partial {
    scanned: u64,
    found: u64,
    values: BTreeMap<Int, EndoData>,
    stopped: bool,
}

struct Search<'a, T> {
    eng: &'a Engine<T>,
    cols: Vec<usize>,
    betas: Vec<Vec<T>>,
    limit: Option<u64>,
    out: Partial,
}

impl<'a, T: SearchInt> Search<'a, T> {
    fn new(eng: &'a Engine<T>, limit: Option<u64>) -> Self {
        Search {
            eng,
            cols: Vec::with_capacity(eng.n),
            betas: vec![vec![T::zero(); eng.m]; eng.pair_count],
            limit,
            out: Partial::default(),
        }
    }

    fn entry(&self, row: usize, col: usize) -> &T {
        &self.eng.columns[self.cols[col]][row]
    }

    fn extendable(&self) -> bool {
        let k = self.cols.len();
        let mut g = T::zero();
        for rows in &self.eng.subsets[k] {
            let mut a = Vec::with_capacity(k * k);
            for &r in rows {
                for c in 0..k {
                    a.push(self.entry(r, c).clone());
                }
            }
            g = g.gcd(&small_det(a, k));
            if g.is_one() {
                return true;
            }
        }
        false
    }

    fn record_betas(&mut self) {
        let j = self.cols.len() - 1;
        let bj = &self.eng.columns[self.cols[j]];
        for &(i, p) in &self.eng.pairs[j] {
            let bi = &self.eng.columns[self.cols[i]];
            let mut out = vec![T::zero(); self.eng.m];
            for (qi, qj, c) in &self.eng.constants {
                let s = bi[*qi].clone() * bj[*qj].clone() - bi[*qj].clone() * bj[*qi].clone();
                if s.is_zero() {
                    continue;
                }
                for (o, cz) in out.iter_mut().zip(c) {
                    *o = o.clone() + s.clone() * cz.clone();
                }
            }
            self.betas[p] = out;
        }
    }

    fn relations_hold(&self) -> bool {
        let d = self.cols.len();
        self.eng.relations[d].iter().all(|nu| {
            (0..self.eng.m).all(|r| {
                let mut s = T::zero();
                for (p, x) in nu {
                    s = s + x.clone() * self.betas[*p][r].clone();
                }
                s.is_zero()
            })
        })
    }

    fn try_push(&mut self, ci: usize) -> bool {
        self.cols.push(ci);
        if self.extendable() {
            self.record_betas();
            if self.relations_hold() {
                return true;
            }
        }
        self.cols.pop();
        false
    }

    fn step(&mut self, ci: usize) {
        if self.out.stopped {
            return;
        }
        if self.limit.is_some_and(|l| self.out.scanned >= l) {
            self.out.stopped = true;
            return;
        }
        self.out.scanned += 1;
        if self.try_push(ci) {
            self.descend();
            self.cols.pop();
        }
    }

    fn descend(&mut self) {
        if self.cols.len() == self.eng.n {
            self.leaf();
            return;
        }
        for ci in 0..self.eng.columns.len() {
            self.step(ci);
            if self.out.stopped {
                return;
            }
        }
    }

    fn leaf(&mut self) {
        let (n, m) = (self.eng.n, self.eng.m);
        let a = IntMatrix::from_fn(n, n, |r, c| self.entry(r, c).to_int());
        let mut d = IntMatrix::identity(m);
        if m > 0 {
            let induced = IntMatrix::from_fn(m, self.eng.pair_count, |r, p| self.betas[p][r].to_int());
            match solve_with_snf(&self.eng.c_snf, &induced) {
                Some(sol) => d = sol,
                None => return,
            }
        }
        let det_d = det(&d).expect("square");
        if !det_d.abs().is_one() {
            return;
        }
        self.out.found += 1;
        let r = ext_abs(&det(&a.identity_minus()).expect("square")) * ext_abs(&det(&d.identity_minus()).expect("square"));
        if let ExtNat::Finite(v) = r {
            self.out
                .values
                .entry(v)
                .or_insert_with(|| EndoData::new(a, IntMatrix::zeros(m, n), d));
        }
    }
}

fn run<T: SearchInt>(g: &TwoStepGroup, height: u32, limit: Option<u64>) -> SpectrumSample {
    let eng = Engine::<T>::new(g, height);
    let total = eng.columns.len();
    let merged = if limit.is_some() || eng.n == 0 {
        let mut s = Search::new(&eng, limit);
        if eng.n == 0 {
            s.leaf();
        }
        for ci in 0..total {
            if eng.n == 0 {
                break;
            }
            s.step(ci);
            if s.out.stopped {
                break;
            }
        }
        s.out
    } else {
        let parts: Vec<Partial> = (0..total)
            .into_par_iter()
            .map(|ci| {
                let mut s = Search::new(&eng, None);
                s.step(ci);
                log::info!(
                    "spectrum: first column {}/{} done, {} candidates, {} automorphisms",
                    ci + 1,
                    total,
                    s.out.scanned,
                    s.out.found
                );
                s.out
            })
            .collect();
        let mut acc = Partial::default();
        for p in parts {
            acc.scanned += p.scanned;
            acc.found += p.found;
            for (v, w) in p.values {
                acc.values.entry(v).or_insert(w);
            }
        }
        acc
    };
    SpectrumSample {
        height,
        candidates_scanned: merged.scanned,
        automorphisms_found: merged.found,
        finite_values: merged.values.keys().cloned().collect(),
        witnesses: merged.values,
        truncated: merged.stopped,
    }
}

/// Enumerates the automorphisms whose `A` has entries in `[-height, height]`
/// and collects their finite Reidemeister numbers. With `limit`, at most
/// that many candidates are scanned and the search runs on one thread.
pub fn spectrum_search(g: &TwoStepGroup, height: u32, limit: Option<u64>) -> Result<SpectrumSample> {
    g.require_normalized()?;
    if height == 0 {
        return Err(crate::Error::InvalidParameters("height must be positive".into()));
    }
    Ok(if fits_i64(g, height) { run::<i64>(g, height, limit) } else { run::<Int>(g, height, limit) })
}
