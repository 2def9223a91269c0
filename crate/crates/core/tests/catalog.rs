mod common;

use proptest::prelude::*;

use common::{bisector_catalog, bisector_printed, c, compare, two_angle_catalog, two_angle_printed};
use nonlocal_pencil::algebra::{Scalar, C64};
use nonlocal_pencil::fixtures::{coef, example1, example2};
use nonlocal_pencil::jordan::classify;
use nonlocal_pencil::pencil::{OrbitSpec, Pencil};
use nonlocal_pencil::spectrum::{Rect, Solver};
use nonlocal_pencil::Tolerances;

fn found(orbit: OrbitSpec, rect: Rect) -> Vec<(C64, u32)> {
    let p = Pencil::new(orbit);
    Solver::new(&p, Tolerances::default(), 0)
        .eigenvalues_in_region(rect)
        .unwrap()
        .into_iter()
        .map(|e| (e.lambda, e.alg_mult))
        .collect()
}

fn locations(list: &[(C64, u32)]) -> Vec<(C64, u32)> {
    list.iter().map(|&(z, _)| (z, 1)).collect()
}

fn ones(list: Vec<C64>) -> Vec<(C64, u32)> {
    list.into_iter().map(|z| (z, 1)).collect()
}

#[test]
fn printed_forms_match_the_factorization() {
    let rect = Rect::new((-5.0, 5.0), (-5.0, 5.0));
    let values = [-3.5, -2.0, -1.25, -0.5, 0.0, 0.3, 1.0, 1.7, 2.0, 2.5];
    for b1 in values {
        for b2 in values {
            compare(&ones(bisector_printed(b1, b2, &rect)), &locations(&bisector_catalog(b1, b2, &rect)), 1e-12)
                .unwrap_or_else(|e| panic!("bisector ({b1},{b2}): {e}"));
            if b1 == 0.0 {
                continue;
            }
            compare(&ones(two_angle_printed(b1, b2, &rect)), &locations(&two_angle_catalog(b1, b2, &rect)), 1e-12)
                .unwrap_or_else(|e| panic!("two-angle ({b1},{b2}): {e}"));
        }
    }
}

#[test]
fn zero_is_double_on_the_boundary_cases() {
    let rect = Rect::new((-1.0, 1.0), (-1.0, 1.0));
    assert_eq!(bisector_catalog(-1.0, -1.0, &rect), vec![(c(0.0, 0.0), 2)]);
    assert_eq!(two_angle_catalog(4.0, 1.0, &rect), vec![(c(0.0, 0.0), 2)]);
    assert!(two_angle_catalog(1.0, 1.0, &rect).iter().all(|(z, _)| z.norm() > 0.5));
    let got = found(example1(coef("-1"), coef("-1")), Rect::new((-1.0, 1.0), (-1.0, 1.0)));
    compare(&got, &[(c(0.0, 0.0), 2)], 1e-8).unwrap();
}

#[test]
fn off_grid_pairs_match() {
    let rect = Rect::new((-3.0, 3.0), (-4.5, 4.5));
    for (b1, b2) in [("1/2", "1/4"), ("-5/2", "1/3"), ("3", "-1/2")] {
        let expected = bisector_catalog(coef(b1).to_c64().re, coef(b2).to_c64().re, &rect);
        compare(&found(example1(coef(b1), coef(b2)), rect), &expected, 1e-8).unwrap();
    }
    for (b1, b2) in [("-2", "1/2"), ("1/2", "1"), ("3", "3")] {
        let expected = two_angle_catalog(coef(b1).to_c64().re, coef(b2).to_c64().re, &rect);
        compare(&found(example2(coef(b1), coef(b2)), rect), &expected, 1e-8).unwrap();
    }
}

/// At `-2i` the reduced matrix vanishes and its derivative is
/// `π [[1, -b1/2], [-b2/2, 1]]`, singular exactly when `b1 b2 = 4`.
#[test]
fn two_angle_double_even_eigenvalue_has_a_chain_only_at_product_four() {
    for (b1, b2, chain) in [("2", "2", true), ("4", "1", true), ("-1", "-4", true), ("1", "1", false), ("3", "1", false)] {
        let p = Pencil::new(example2(coef(b1), coef(b2)));
        let a = classify(&p, c(0.0, -2.0), 1, &Tolerances::default()).unwrap();
        assert_eq!(!a.classification.is_proper(), chain, "b=({b1},{b2})");
        assert_eq!(a.certificate.is_some(), chain);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_sums_follow_the_catalog(n in -12i64..12, d in 1i64..5) {
        let rect = Rect::new((-2.5, 2.5), (-3.5, 3.5));
        let b1 = coef(&format!("{n}/{d}"));
        let s = n as f64 / d as f64;
        prop_assume!((s.abs() - 2.0).abs() > 0.05 || s.abs() == 2.0);
        let got = found(example1(b1, Scalar::zero()), rect);
        prop_assert!(compare(&got, &bisector_catalog(s, 0.0, &rect), 1e-8).is_ok(), "s = {}", s);
    }
}
