use nilspec::canonical::BinaryQuadraticForm;
use nilspec::families::{
    aut_abelian_rank3, aut_even, aut_i32, aut_odd_split, direct_product, free_abelian, i42_finite_witness, make_gd,
    make_i32, product_aut, I42Route,
};
use nilspec::io::{automorphism_to_json, group_to_json, parse_automorphism, parse_group};
use nilspec::oracle::{finite_quotient_twisted_classes, FiniteQuotientSpec};
use nilspec::reidemeister::{reidemeister_number, reidemeister_via_center_series};
use nilspec::{EndoData, ExtNat, Int, IntMatrix, TwoStepGroup};
use proptest::prelude::*;

fn int(x: i64) -> Int {
    Int::from(x)
}

fn total(g: &TwoStepGroup, e: &EndoData) -> ExtNat {
    let r = reidemeister_number(g, e).unwrap().total;
    assert_eq!(reidemeister_via_center_series(g, e).unwrap(), r);
    r
}

fn minus_one_on_z() -> (TwoStepGroup, EndoData) {
    let z = free_abelian(1);
    let e = EndoData::new(IntMatrix::identity(1).neg(), IntMatrix::zeros(0, 1), IntMatrix::zeros(0, 0));
    (z, e)
}

#[test]
fn heisenberg_times_z3_gives_2k() {
    let g1 = make_gd(&[int(1)]).unwrap();
    let psi = aut_even(&g1, &[int(1)]).unwrap();
    for k in 1..=4 {
        let g = direct_product(&g1, &free_abelian(3));
        let e = product_aut(&psi, &aut_abelian_rank3(&int(k)).unwrap());
        assert_eq!(total(&g, &e), ExtNat::finite(2 * k));
    }
    let g = make_gd(&[int(1), int(0)]).unwrap();
    let g = direct_product(&g, &free_abelian(1));
    assert_eq!(total(&g, &aut_odd_split(&g, &int(3)).unwrap()), ExtNat::finite(6));
}

#[test]
fn i32_block_times_minus_one() {
    let g32 = make_i32(&int(1), &int(0), &int(1)).unwrap();
    let psi = aut_i32(&g32, &int(1), &int(1)).unwrap();
    assert_eq!(total(&g32, &psi), ExtNat::finite(10));
    let (z, m1) = minus_one_on_z();
    let g = direct_product(&g32, &z);
    assert_eq!(total(&g, &product_aut(&psi, &m1)), ExtNat::finite(20));
    let id = EndoData::identity(&z);
    assert!(total(&g, &product_aut(&psi, &id)).is_infinite());
}

#[test]
fn i42_witness_routes() {
    for (form, route) in [((1, 1, 2), "direct"), ((1, 0, 0), "transformed"), ((0, 0, 0), "split")] {
        let phi = BinaryQuadraticForm::from_i64(form.0, form.1, form.2);
        let w = i42_finite_witness(&int(2), &int(3), &phi).unwrap();
        let got = match w.route {
            I42Route::Direct => "direct",
            I42Route::Transformed { .. } => "transformed",
            I42Route::Split => "split",
        };
        assert_eq!(got, route);
        assert!(!total(&w.group, &w.aut).is_infinite());
    }
    // Phi = 0: 2 * 2 t (t + 4) with t = delta (delta lambda)^2
    let w = i42_finite_witness(&int(1), &int(1), &BinaryQuadraticForm::zero()).unwrap();
    assert_eq!(total(&w.group, &w.aut), ExtNat::finite(2 * 2 * 5));
}

#[test]
fn files_round_trip_through_reidemeister() {
    let g = make_i32(&int(2), &int(1), &int(-1)).unwrap();
    let e = aut_i32(&g, &int(1), &int(-1)).unwrap();
    let g2 = parse_group(&group_to_json(&g)).unwrap();
    let e2 = parse_automorphism(&automorphism_to_json(&e), &g2).unwrap();
    assert_eq!(total(&g2, &e2), total(&g, &e));
}

#[test]
fn identity_quotient_counts_conjugacy_classes() {
    // G(1) mod 3: 3 central classes and 8 of size 3
    let g = make_gd(&[int(1)]).unwrap();
    let q = FiniteQuotientSpec::new(g.clone(), 3).unwrap();
    assert_eq!(finite_quotient_twisted_classes(&q, &EndoData::identity(&g)).unwrap(), 11);
}

proptest! {
    #[test]
    fn product_formula_multiplies(k1 in 1i64..=4, k2 in 1i64..=4, l in -2i64..=2, inf_block in any::<bool>()) {
        prop_assume!(l != 0 && 4 + k2 * l != 0);
        let g1 = make_gd(&[int(1)]).unwrap();
        let e1 = aut_even(&g1, &[int(k1)]).unwrap();
        let g2 = make_i32(&int(1), &int(0), &int(1)).unwrap();
        let e2 = if inf_block { EndoData::identity(&g2) } else { aut_i32(&g2, &int(k2), &int(l)).unwrap() };
        let g = direct_product(&g1, &g2);
        let e = product_aut(&e1, &e2);
        let r = total(&g, &e);
        prop_assert_eq!(r, total(&g1, &e1) * total(&g2, &e2));
    }
}
