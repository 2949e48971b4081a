//! Reidemeister numbers of automorphisms.
//!
//! For an automorphism with induced maps `A` and `D`,
//! `R = |det(I - A)|_inf * |det(I - D)|_inf`, where `|0|_inf` is infinity.

mod spectrum;

pub use spectrum::{spectrum_search, SpectrumSample};

use crate::error::{Error, Result};
use crate::group::TwoStepGroup;
use crate::intlin::{charpoly, det, ext_abs, has_root_on_unit_circle, inverse_unimodular, smith_normal_form, ExtNat};
use crate::morphism::{apply_unchecked, require_automorphism, EndoData};
use crate::{GroupElement, Int, IntMatrix};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReidemeisterResult {
    pub r_phi1: ExtNat,
    pub r_phi2: ExtNat,
    pub total: ExtNat,
}

fn validate(g: &TwoStepGroup, e: &EndoData) -> Result<()> {
    g.require_normalized()?;
    require_automorphism(g, e).map_err(|err| match err {
        Error::Dimension(_) => err,
        other => Error::InvalidInput(other.to_string()),
    })
}

pub fn reidemeister_number(g: &TwoStepGroup, e: &EndoData) -> Result<ReidemeisterResult> {
    validate(g, e)?;
    let r_phi1 = ext_abs(&det(&e.a.identity_minus())?);
    let r_phi2 = ext_abs(&det(&e.d.identity_minus())?);
    let total = r_phi1.clone() * r_phi2.clone();
    Ok(ReidemeisterResult { r_phi1, r_phi2, total })
}

/// Whether 1 is an eigenvalue of `A` or `D`.
pub fn is_infinite(g: &TwoStepGroup, e: &EndoData) -> Result<bool> {
    Ok(reidemeister_number(g, e)?.total.is_infinite())
}

/// No eigenvalue of `A` or `D` has absolute value one.
pub fn is_hyperbolic(g: &TwoStepGroup, e: &EndoData) -> Result<bool> {
    validate(g, e)?;
    Ok(!has_root_on_unit_circle(&charpoly(&e.a)?)? && !has_root_on_unit_circle(&charpoly(&e.d)?)?)
}

/// Matrices of the maps induced on the center and on the quotient by the
/// center, in the basis of [`TwoStepGroup::center_basis`] and the matching
/// quotient basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterSeriesMaps {
    pub on_center: IntMatrix,
    pub on_quotient: IntMatrix,
}

pub fn center_series_maps(g: &TwoStepGroup, e: &EndoData) -> Result<CenterSeriesMaps> {
    validate(g, e)?;
    let (n, m) = (g.n(), g.m());
    let snf = smith_normal_form(&g.pairing_matrix());
    let rank = snf.rank();
    let s = n - rank;
    let v_inv = inverse_unimodular(&snf.v).ok_or_else(|| Error::Inconsistent("V not unimodular".into()))?;
    // coordinates of A in the basis given by the columns of V; the kernel
    // columns rank.. span an A-invariant sublattice
    let t = v_inv.mul(&e.a).mul(&snf.v);
    for r in 0..rank {
        for c in rank..n {
            if !t[(r, c)].is_zero() {
                return Err(Error::Inconsistent("center not invariant".into()));
            }
        }
    }
    let quotient_idx: Vec<usize> = (0..rank).collect();
    let on_quotient = t.submatrix(&quotient_idx, &quotient_idx);

    let basis: Vec<GroupElement> = g.center_basis();
    let mut on_center = IntMatrix::zeros(m + s, m + s);
    for (col, b) in basis.iter().enumerate() {
        let image = apply_unchecked(g, e, b);
        let y: Vec<Int> = v_inv.mul_vec(&image.a)[rank..].to_vec();
        // rebuild the x-part from central basis elements and read off the
        // remaining z-exponents
        let mut p = g.identity();
        for (k, yk) in y.iter().enumerate() {
            p = g.mul(&p, &g.pow(&basis[m + k], yk));
        }
        if p.a != image.a {
            return Err(Error::Inconsistent("image of a central element is not central".into()));
        }
        for r in 0..m {
            on_center[(r, col)] = &image.u[r] - &p.u[r];
        }
        for (k, yk) in y.into_iter().enumerate() {
            on_center[(m + k, col)] = yk;
        }
    }
    Ok(CenterSeriesMaps { on_center, on_quotient })
}

/// `R` through the series `G > Z(G) > 1`.
pub fn reidemeister_via_center_series(g: &TwoStepGroup, e: &EndoData) -> Result<ExtNat> {
    let maps = center_series_maps(g, e)?;
    let top = ext_abs(&det(&maps.on_quotient.identity_minus())?);
    let bottom = ext_abs(&det(&maps.on_center.identity_minus())?);
    Ok(top * bottom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::{compose, invert};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()).unwrap()
    }

    fn heisenberg() -> TwoStepGroup {
        TwoStepGroup::from_i64(2, 1, &[(0, 1, &[1])]).unwrap()
    }

    fn heisenberg_times_z() -> TwoStepGroup {
        TwoStepGroup::from_i64(3, 1, &[(0, 1, &[1])]).unwrap()
    }

    fn even_map(k: i64) -> EndoData {
        EndoData::new(m(&[&[0, 1], &[1, -k]]), IntMatrix::zeros(1, 2), m(&[&[-1]]))
    }

    #[test]
    fn reidemeister_examples() {
        let g = heisenberg();
        let r = reidemeister_number(&g, &EndoData::identity(&g)).unwrap();
        assert!(r.total.is_infinite());
        assert!(is_infinite(&g, &EndoData::identity(&g)).unwrap());
        let r = reidemeister_number(&g, &even_map(2)).unwrap();
        assert_eq!(r.total, ExtNat::finite(4));
        assert_eq!((r.r_phi1, r.r_phi2), (ExtNat::finite(2), ExtNat::finite(2)));
    }

    #[test]
    fn rejects_non_automorphisms() {
        let g = heisenberg();
        let e = EndoData::new(IntMatrix::identity(2).scale(&Int::from(2)), IntMatrix::zeros(1, 2), m(&[&[4]]));
        assert!(matches!(reidemeister_number(&g, &e), Err(Error::InvalidInput(_))));
        let bad = TwoStepGroup::from_i64(3, 2, &[(0, 1, &[1, 0])]).unwrap();
        assert!(matches!(
            reidemeister_number(&bad, &EndoData::identity(&bad)),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn hyperbolic_examples() {
        let g = heisenberg();
        assert!(!is_hyperbolic(&g, &EndoData::identity(&g)).unwrap());
        // D = (-1) has modulus one
        assert!(!is_hyperbolic(&g, &even_map(3)).unwrap());
    }

    #[test]
    fn center_series_examples() {
        let g = heisenberg();
        assert!(reidemeister_via_center_series(&g, &EndoData::identity(&g)).unwrap().is_infinite());
        assert_eq!(reidemeister_via_center_series(&g, &even_map(3)).unwrap(), ExtNat::finite(6));
        let gz = heisenberg_times_z();
        let e = EndoData::new(
            m(&[&[0, 1, 0], &[1, -1, 0], &[0, 0, -1]]),
            IntMatrix::zeros(1, 3),
            m(&[&[-1]]),
        );
        assert_eq!(reidemeister_via_center_series(&gz, &e).unwrap(), ExtNat::finite(4));
        assert_eq!(reidemeister_number(&gz, &e).unwrap().total, ExtNat::finite(4));
    }

    /// Automorphisms of `G(1) x Z` from random words; the center has a
    /// nontrivial x-part here.
    fn arb_aut() -> impl Strategy<Value = EndoData> {
        let g = heisenberg_times_z();
        let gens = vec![
            EndoData::new(m(&[&[0, 1, 0], &[1, -1, 0], &[0, 0, -1]]), m(&[&[1, 0, 2]]), m(&[&[-1]])),
            EndoData::new(m(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1]]), m(&[&[0, 1, 0]]), m(&[&[1]])),
            EndoData::new(m(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]), m(&[&[0, 0, 1]]), m(&[&[1]])),
            EndoData::new(m(&[&[1, 0, 0], &[0, 1, 0], &[0, 2, -1]]), m(&[&[0, 0, 0]]), m(&[&[1]])),
        ];
        for e in &gens {
            assert!(crate::morphism::is_automorphism(&g, e).unwrap());
        }
        proptest::collection::vec(0usize..4, 1..6).prop_map(move |word| {
            let g = heisenberg_times_z();
            word.iter().fold(EndoData::identity(&g), |acc, &w| compose(&g, &acc, &gens[w]).unwrap())
        })
    }

    proptest! {
        #[test]
        fn invariant_under_inverse(e in arb_aut()) {
            let g = heisenberg_times_z();
            let inv = invert(&g, &e).unwrap();
            prop_assert_eq!(reidemeister_number(&g, &e).unwrap().total, reidemeister_number(&g, &inv).unwrap().total);
        }

        #[test]
        fn invariant_under_conjugation(e in arb_aut(), s in arb_aut()) {
            let g = heisenberg_times_z();
            let conj = compose(&g, &s, &compose(&g, &e, &invert(&g, &s).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(reidemeister_number(&g, &e).unwrap().total, reidemeister_number(&g, &conj).unwrap().total);
        }

        #[test]
        fn center_series_matches_formula(e in arb_aut()) {
            let g = heisenberg_times_z();
            prop_assert_eq!(reidemeister_via_center_series(&g, &e).unwrap(), reidemeister_number(&g, &e).unwrap().total);
        }

        #[test]
        fn hyperbolic_implies_finite(e in arb_aut()) {
            let g = heisenberg_times_z();
            if is_hyperbolic(&g, &e).unwrap() {
                prop_assert!(!is_infinite(&g, &e).unwrap());
            }
        }
    }
}
