use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::algebra::Angle;
use crate::fixtures::{coef, dirichlet, example1};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `λ_k = -i k π / (2b)`, all simple.
fn dirichlet_spectrum(half: f64, range: std::ops::RangeInclusive<i64>) -> Vec<C64> {
    range.filter(|&k| k != 0).map(|k| c(0.0, -(k as f64) * PI / (2.0 * half))).collect()
}

#[test]
fn half_plane_dirichlet_always_hits_the_bottom_line() {
    let orbit = dirichlet(Angle::pi_fraction(1, 2));
    for l1 in 1..=3 {
        match exponent_table(&orbit, 0, l1, &Analysis::default()) {
            Err(AsymptoticsError::BottomLineOccupied { height, lambda }) => {
                assert_eq!(height, -(l1 as f64) - 1.0);
                assert!((lambda - c(0.0, height)).norm() < 1e-9);
            }
            other => panic!("l1 = {l1}: {other:?}"),
        }
    }
}

#[test]
fn rejects_non_increasing_smoothness() {
    let orbit = dirichlet(Angle::pi_fraction(1, 3));
    assert_eq!(
        exponent_table(&orbit, 2, 2, &Analysis::default()),
        Err(AsymptoticsError::NotAJump { l: 2, l1: 2 })
    );
}

#[test]
fn dirichlet_strip_entries() {
    // b = 2π/5: λ_k = -1.25 k i; strip (-3, -1] holds k = 1, 2
    let orbit = dirichlet(Angle::pi_fraction(2, 5));
    let t = exponent_table(&orbit, 0, 2, &Analysis::default()).unwrap();
    assert_eq!(t.strip, (-3.0, -1.0));
    assert_eq!(t.polynomial_band, (2, 3));
    assert_eq!(t.entries.len(), 2);
    let first = &t.entries[0];
    assert!((first.lambda - c(0.0, -2.5)).norm() < 1e-9);
    assert_eq!(first.shifts(), 0..=0);
    let second = &t.entries[1];
    assert!((second.lambda - c(0.0, -1.25)).norm() < 1e-9);
    assert_eq!(second.shifts(), 0..=1);
    for e in &t.entries {
        assert!(!e.on_top_edge);
        assert_eq!(e.log_power_bound, 0);
        assert_eq!(e.resonances, 0);
    }
}

#[test]
fn top_edge_shifts_start_at_one() {
    // b1 + b2 = 2: -2i has multiplicity 3 and sits on Im λ = -2 for l = 1
    let orbit = example1(coef("1"), coef("1"));
    let t = exponent_table(&orbit, 1, 2, &Analysis::default()).unwrap();
    assert_eq!(t.strip, (-3.0, -2.0));
    assert_eq!(t.entries.len(), 1);
    let e = &t.entries[0];
    assert!((e.lambda - c(0.0, -2.0)).norm() < 1e-8);
    assert!(e.on_top_edge);
    assert_eq!(e.alg_mult, 3);
    assert_eq!(e.shifts(), 1..=1);
    assert_eq!(e.log_power_bound, 2);
    assert!((e.exponents()[0] - c(3.0, 0.0)).norm() < 1e-8);
}

#[test]
fn complex_roots_enter_the_strip() {
    // b1 + b2 = 3: x² + 3x + 1 = 0 with x = e^{λπ/2} gives Re λ = ±(2/π) ln((3+√5)/2)
    let orbit = example1(coef("2"), coef("1"));
    let t = exponent_table(&orbit, 0, 2, &Analysis::default()).unwrap();
    let x = 2.0 / PI * ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let expected = [c(-x, -2.0), c(0.0, -2.0), c(x, -2.0)];
    assert_eq!(t.entries.len(), 3);
    for (e, want) in t.entries.iter().zip(expected) {
        assert!((e.lambda - want).norm() < 1e-8, "{} vs {want}", e.lambda);
        assert_eq!(e.shifts(), 0..=1);
        assert_eq!(e.resonances, 0);
    }
}

#[test]
fn empty_strip_means_smooth() {
    // b = π/5: λ_k = -2.5 k i, none in (-2, -1]
    let orbit = dirichlet(Angle::pi_fraction(1, 5));
    let t = exponent_table(&orbit, 0, 1, &Analysis::default()).unwrap();
    assert!(t.is_smooth());
    assert_eq!(t.polynomial_band, (2, 2));
}

#[test]
fn resonant_shifts_raise_the_bound() {
    // b = π/4: λ_k = -2k i; l = 0, l1 = 4 gives the strip (-5, -1] with -2i, -4i,
    // and i(-2i) + 2 = i(-4i) + 0
    let orbit = dirichlet(Angle::pi_fraction(1, 4));
    let t = exponent_table(&orbit, 0, 4, &Analysis::default()).unwrap();
    assert_eq!(t.entries.len(), 2);
    for e in &t.entries {
        assert_eq!(e.resonances, 1);
        assert_eq!(e.log_power_bound, 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dirichlet_tables_follow_the_closed_form(
        num in 1i64..5, den in 2i64..7, l in 0u32..3, jump in 1u32..3
    ) {
        prop_assume!(num < den);
        let half = PI * num as f64 / den as f64;
        let orbit = dirichlet(Angle::pi_fraction(num, den));
        let l1 = l + jump;
        let top = -1.0 - l as f64;
        let bottom = -1.0 - l1 as f64;
        let spectrum = dirichlet_spectrum(half, 1..=40);
        let on_bottom = spectrum.iter().any(|z| (z.im - bottom).abs() < 1e-9);
        match exponent_table(&orbit, l, l1, &Analysis::default()) {
            Err(AsymptoticsError::BottomLineOccupied { .. }) => prop_assert!(on_bottom),
            Ok(t) => {
                prop_assert!(!on_bottom);
                let mut want: Vec<C64> =
                    spectrum.into_iter().filter(|z| z.im > bottom && z.im <= top + 1e-12).collect();
                want.sort_by(|a, b| a.im.total_cmp(&b.im));
                prop_assert_eq!(t.entries.len(), want.len());
                for (e, z) in t.entries.iter().zip(want) {
                    prop_assert!((e.lambda - z).norm() < 1e-8);
                    let top_edge = (z.im - top).abs() < 1e-9;
                    prop_assert_eq!(e.on_top_edge, top_edge);
                    prop_assert_eq!(e.s_first, u32::from(top_edge));
                    let s_n = (l1 as f64 + 1.0 + z.im + 1e-9).floor() as u32;
                    prop_assert_eq!(e.s_last, s_n);
                    prop_assert!(e.s_last >= e.s_first);
                }
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
