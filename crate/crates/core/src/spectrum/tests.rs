use std::f64::consts::PI;

use super::*;
use crate::algebra::Angle;
use crate::fixtures::{coef, dirichlet, example1, example2};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn solver(p: &Pencil) -> Solver<'_> {
    Solver::new(p, Tolerances::default(), 7)
}

fn ex1(b1: &str, b2: &str) -> Pencil {
    Pencil::new(example1(coef(b1), coef(b2)))
}

#[test]
fn counts_on_the_bisector_problem() {
    let p = ex1("1", "-1");
    let s = solver(&p);
    assert_eq!(s.count_zeros(Rect::new((-0.5, 0.5), (-2.5, -0.5))).unwrap(), 2);
    assert_eq!(s.count_zeros(Rect::new((1.0, 2.0), (-0.5, 0.5))).unwrap(), 0);

    let p = ex1("2", "2");
    let s = solver(&p);
    // λ = ±(2/π) ln(2 + √3) - 2i and -2i itself
    assert_eq!(s.count_zeros(Rect::new((-1.5, 1.5), (-3.0, -1.0))).unwrap(), 3);
    assert_eq!(s.count_zeros(Rect::new((0.3, 1.5), (-3.0, -1.0))).unwrap(), 1);
}

#[test]
fn locates_complex_pair() {
    let p = ex1("2", "2");
    let found = solver(&p).eigenvalues_in_region(Rect::new((-1.5, 1.5), (-3.0, -1.0))).unwrap();
    let x = 2.0 / PI * (2.0 + 3f64.sqrt()).ln();
    assert_eq!(found.len(), 3);
    assert!((found[0].lambda - c(-x, -2.0)).norm() < 1e-10);
    assert!((found[1].lambda - c(0.0, -2.0)).norm() < 1e-10);
    assert!((found[2].lambda - c(x, -2.0)).norm() < 1e-10);
    for e in &found {
        assert_eq!(e.alg_mult, 1);
        assert_eq!(e.geometric_mult(), 1);
        assert!(e.residual < 1e-10);
    }
}

#[test]
fn two_angle_problem_has_double_eigenvalue() {
    let p = Pencil::new(example2(coef("1"), coef("0")));
    let found = solver(&p).eigenvalues_in_region(Rect::new((-3.0, 3.0), (-2.5, -0.5))).unwrap();
    assert_eq!(found.len(), 2);
    assert!((found[0].lambda - c(0.0, -2.0)).norm() < 1e-9);
    assert_eq!(found[0].alg_mult, 2);
    assert_eq!(found[0].geometric_mult(), 2);
    // b2 = 0 makes the system triangular: every ki is double, and at odd k
    // only one eigenvector survives
    assert!((found[1].lambda - c(0.0, -1.0)).norm() < 1e-9);
    assert_eq!(found[1].alg_mult, 2);
    assert_eq!(found[1].geometric_mult(), 1);
}

#[test]
fn dirichlet_eigenvector_is_cosine() {
    let p = Pencil::new(dirichlet(Angle::pi_fraction(1, 2)));
    let found = solver(&p).eigenvalues_in_region(Rect::new((-0.3, 0.3), (-1.3, -0.7))).unwrap();
    assert_eq!(found.len(), 1);
    let e = &found[0];
    assert!((e.lambda - c(0.0, -1.0)).norm() < 1e-12);
    assert_eq!(e.basis, VectorBasis::Power);
    let v = &e.eigvecs[0];
    assert!((v[0] - v[1]).norm() < 1e-10 * v[0].norm());
}

#[test]
fn empty_region() {
    let p = ex1("1", "1");
    assert!(solver(&p).eigenvalues_in_region(Rect::new((1.0, 2.0), (-0.5, 0.5))).unwrap().is_empty());
}

#[test]
fn zero_is_found_with_special_basis() {
    // b1 + b2 = -2: λ = 0 is an eigenvalue
    let p = ex1("-1", "-1");
    let found = solver(&p).eigenvalues_in_region(Rect::new((-0.5, 0.5), (-0.5, 0.5))).unwrap();
    assert_eq!(found.len(), 1);
    assert!(found[0].lambda.norm() < 1e-9);
    assert_eq!(found[0].basis, VectorBasis::LambdaZero);
    assert!(!found[0].eigvecs.is_empty());
}

#[test]
fn line_scans() {
    let p = ex1("1", "-1");
    let s = solver(&p);
    let scan = s.eigenvalues_on_line(-1.0, 5.0).unwrap();
    assert_eq!(scan.on_line.len(), 1);
    assert!((scan.on_line[0].lambda - c(0.0, -1.0)).norm() < 1e-10);
    assert!(scan.margin().is_none());
    assert!(s.eigenvalues_on_line(7.3, 5.0).unwrap().on_line.is_empty());

    let p = ex1("1", "0");
    assert!(solver(&p).eigenvalues_on_line(-1.0, 5.0).unwrap().on_line.is_empty());
}

#[test]
fn counts_add_over_partitions() {
    let p = ex1("2", "1/2");
    let s = solver(&p);
    let whole = Rect::new((-2.0, 2.0), (-3.3, 0.7));
    let total = s.count_zeros(whole).unwrap();
    let parts = whole.split(0.37, 0.61);
    let sum: usize = parts.into_iter().map(|r| s.count_zeros(r).unwrap()).sum();
    assert_eq!(total, sum);
    assert!(total > 0);
}

#[test]
fn output_is_deterministic() {
    let p = Pencil::new(example2(coef("1"), coef("-1")));
    let rect = Rect::new((-5.0, 5.0), (-5.0, 5.0));
    let a = solver(&p).eigenvalues_in_region(rect).unwrap();
    let b = solver(&p).eigenvalues_in_region(rect).unwrap();
    assert_eq!(a, b);
}

#[test]
fn default_window_grows_with_coefficients() {
    let orbit = example1(coef("0"), coef("0"));
    let small = default_re_window(&orbit);
    let expected = 5.0 + 4.0 / PI * (1.0 + orbit.max_coefficient()).ln();
    assert!((small - expected).abs() < 1e-14);
    assert!(default_re_window(&example1(coef("10"), coef("0"))) > small);
}

#[test]
fn thin_band_around_double_zero() {
    // -3i is double and sits 1e-3 from both long sides
    let p = Pencil::new(example2(coef("1"), coef("0")));
    let s = solver(&p);
    assert_eq!(s.count_zeros(Rect::new((-5.5, 5.5), (-3.001, -2.999))).unwrap(), 2);
    let scan = s.eigenvalues_on_line(-3.0, 5.5).unwrap();
    assert_eq!(scan.on_line.len(), 1);
    assert_eq!(scan.on_line[0].alg_mult, 2);
    assert!((scan.on_line[0].lambda - c(0.0, -3.0)).norm() < 1e-9);
}
