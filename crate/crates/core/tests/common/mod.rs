//! Closed-form spectra of the reference problems and random orbit data.
#![allow(dead_code)]

use std::f64::consts::PI;

use num::{BigInt, BigRational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use nonlocal_pencil::algebra::{Angle, HomOp, Real, Scalar, C64};
use nonlocal_pencil::pencil::{BoundaryRow, Component, NonlocalTerm, OrbitSpec, Side};
use nonlocal_pencil::spectrum::Rect;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Roots of `x² + bx + 1` with multiplicities.
fn reciprocal_quadratic(b: C64) -> Vec<(C64, u32)> {
    let d = (b * b - 4.0).sqrt();
    let (x1, x2) = ((-b + d) / 2.0, (-b - d) / 2.0);
    if (x1 - x2).norm() < 1e-12 {
        vec![(x1, 2)]
    } else {
        vec![(x1, 1), (x2, 1)]
    }
}

/// All `λ` with `e^{λπ/2} = x` inside `rect`.
fn logarithms(x: C64, rect: &Rect) -> Vec<C64> {
    let re = 2.0 / PI * x.norm().ln();
    let base = 2.0 / PI * x.arg();
    let lo = ((rect.im_min - base) / 4.0).floor() as i64 - 1;
    let hi = ((rect.im_max - base) / 4.0).ceil() as i64 + 1;
    (lo..=hi).map(|n| c(re, base + 4.0 * n as f64)).filter(|z| in_closed(rect, *z)).collect()
}

fn in_closed(rect: &Rect, z: C64) -> bool {
    let e = 1e-9;
    z.re >= rect.re_min - e && z.re <= rect.re_max + e && z.im >= rect.im_min - e && z.im <= rect.im_max + e
}

fn merge(mut list: Vec<(C64, u32)>) -> Vec<(C64, u32)> {
    let mut out: Vec<(C64, u32)> = Vec::new();
    list.sort_by(|a, b| a.0.im.total_cmp(&b.0.im).then(a.0.re.total_cmp(&b.0.re)));
    for (z, k) in list {
        match out.iter_mut().find(|(w, _)| (*w - z).norm() < 1e-9) {
            Some(e) => e.1 += k,
            None => out.push((z, k)),
        }
    }
    out
}

/// `2ki`, `k ≠ 0`, inside `rect`.
fn even_imaginary(rect: &Rect) -> Vec<C64> {
    let lo = (rect.im_min / 2.0).ceil() as i64;
    let hi = (rect.im_max / 2.0).floor() as i64;
    (lo..=hi).filter(|&k| k != 0).map(|k| c(0.0, 2.0 * k as f64)).filter(|z| in_closed(rect, *z)).collect()
}

/// Bisector problem in the half-plane. The characteristic function is
/// `sinh(λπ/2)/λ · (2 cosh(λπ/2) + b1 + b2)`; the second factor vanishes
/// where `x = e^{λπ/2}` solves `x² + (b1 + b2) x + 1 = 0`.
pub fn bisector_catalog(b1: f64, b2: f64, rect: &Rect) -> Vec<(C64, u32)> {
    let mut all: Vec<(C64, u32)> = even_imaginary(rect).into_iter().map(|z| (z, 1)).collect();
    for (x, mu) in reciprocal_quadratic(c(b1 + b2, 0.0)) {
        all.extend(logarithms(x, rect).into_iter().map(|z| (z, mu)));
    }
    merge(all)
}

/// Two-angle problem. The characteristic function is
/// `sinh²(λπ/2)/λ² · (4 cosh²(λπ/2) - b1 b2)`, so `x = e^{λπ/2}` solves
/// `x² ∓ √(b1 b2) x + 1 = 0`.
pub fn two_angle_catalog(b1: f64, b2: f64, rect: &Rect) -> Vec<(C64, u32)> {
    let mut all: Vec<(C64, u32)> = even_imaginary(rect).into_iter().map(|z| (z, 2)).collect();
    let r = c(b1 * b2, 0.0).sqrt();
    for b in [r, -r] {
        for (x, mu) in reciprocal_quadratic(b) {
            all.extend(logarithms(x, rect).into_iter().map(|z| (z, mu)));
        }
    }
    merge(all)
}

/// Locations printed for the bisector problem, by the sign of `b1 + b2`.
pub fn bisector_printed(b1: f64, b2: f64, rect: &Rect) -> Vec<C64> {
    let s = b1 + b2;
    let mut out = even_imaginary(rect);
    let ns = -3..=3;
    if s == 0.0 {
        out.extend((-5..5).map(|k| c(0.0, (2 * k + 1) as f64)));
    } else if s < -2.0 {
        for sign in [1.0, -1.0] {
            let re = 2.0 * (-s / 2.0 + sign * (s * s - 4.0).sqrt() / 2.0).ln() / PI;
            out.extend(ns.clone().map(|n| c(re, 4.0 * n as f64)));
        }
    } else if s > 2.0 {
        for sign in [1.0, -1.0] {
            let re = 2.0 * (s / 2.0 + sign * (s * s - 4.0).sqrt() / 2.0).ln() / PI;
            out.extend(ns.clone().map(|n| c(re, (4 * n + 2) as f64)));
        }
    } else if s.abs() < 2.0 {
        let shift = if s < 0.0 { 0.0 } else { 2.0 };
        let t = 2.0 * ((4.0 - s * s).sqrt() / s).atan() / PI;
        for sign in [1.0, -1.0] {
            out.extend(ns.clone().map(|n| c(0.0, sign * t + 4.0 * n as f64 + shift)));
        }
    }
    if s == -2.0 {
        out.push(c(0.0, 0.0));
    }
    dedup(out.into_iter().filter(|z| in_closed(rect, *z)).collect())
}

/// Locations printed for the two-angle problem, by the sign of `b1 b2`.
pub fn two_angle_printed(b1: f64, b2: f64, rect: &Rect) -> Vec<C64> {
    let p = b1 * b2;
    let mut out = even_imaginary(rect);
    let ns = -6..=6;
    if p == 0.0 {
        if b2 == 0.0 && b1 != 0.0 {
            out.extend((-5..5).map(|k| c(0.0, (2 * k + 1) as f64)));
        }
    } else if p < 0.0 {
        for sign in [1.0, -1.0] {
            let re = 2.0 / PI * ((-p).sqrt() / 2.0 + sign * (4.0 - p).sqrt() / 2.0).abs().ln();
            out.extend(ns.clone().map(|n| c(re, (2 * n + 1) as f64)));
        }
    } else if p < 4.0 {
        let t = 2.0 / PI * (4.0 / p - 1.0).sqrt().atan();
        for sign in [1.0, -1.0] {
            out.extend(ns.clone().map(|n| c(0.0, sign * t + 2.0 * n as f64)));
        }
    } else {
        for sign in [1.0, -1.0] {
            let re = 2.0 / PI * (p.sqrt() / 2.0 + sign * (p - 4.0).sqrt() / 2.0).ln();
            out.extend(ns.clone().map(|n| c(re, 2.0 * n as f64)));
        }
    }
    if p == 4.0 {
        out.push(c(0.0, 0.0));
    }
    dedup(out.into_iter().filter(|z| in_closed(rect, *z)).collect())
}

fn dedup(list: Vec<C64>) -> Vec<C64> {
    merge(list.into_iter().map(|z| (z, 1)).collect()).into_iter().map(|(z, _)| z).collect()
}

/// Pairs up a computed spectrum with an expected one; `Err` names the first
/// mismatch.
pub fn compare(found: &[(C64, u32)], expected: &[(C64, u32)], tol: f64) -> Result<(), String> {
    if found.len() != expected.len() {
        return Err(format!("{} eigenvalues found, {} expected: {found:?} vs {expected:?}", found.len(), expected.len()));
    }
    for &(z, k) in expected {
        let Some(&(w, j)) = found.iter().min_by(|a, b| (a.0 - z).norm().total_cmp(&(b.0 - z).norm())) else {
            return Err(format!("{z} missing"));
        };
        if (w - z).norm() >= tol {
            return Err(format!("{z} expected, closest found {w}"));
        }
        if j != k {
            return Err(format!("{z}: multiplicity {j}, expected {k}"));
        }
    }
    Ok(())
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let n = rng.random_range(-6..=6i64);
        if n != 0 {
            return Scalar::rational(rational(n, rng.random_range(1..=4)));
        }
    }
}

fn random_dilation(rng: &mut ChaCha8Rng) -> Real {
    match rng.random_range(0..4) {
        0 => Real::Rational(rational(1, 2)),
        1 => Real::Rational(rational(2, 1)),
        _ => Real::from_int(1),
    }
}

/// Random orbit with one or two Laplacian components, half-openings in
/// {π/3, π/2, 2π/3}, Dirichlet rows, and up to two transformed terms per row
/// landing on multiples of π/12 inside their target.
pub fn random_orbit(rng: &mut ChaCha8Rng) -> OrbitSpec {
    let halves = [(1, 3), (1, 2), (2, 3)];
    let n = rng.random_range(1..=2usize);
    let components: Vec<Component> = (0..n)
        .map(|_| {
            let (a, b) = halves[rng.random_range(0..3)];
            Component { half_opening: Angle::pi_fraction(a, b), operator: HomOp::laplacian() }
        })
        .collect();
    let mut rows = Vec::new();
    for (j, comp) in components.iter().enumerate() {
        for side in Side::BOTH {
            let mut terms = vec![NonlocalTerm::local(j, HomOp::identity())];
            let ray = side.ray(&comp.half_opening);
            for tag in 1..=rng.random_range(0..=2u32) {
                let target = rng.random_range(0..n);
                let bound = components[target].half_opening.pi_multiple().unwrap() * rational(12, 1);
                let bound = bound.to_integer().try_into().unwrap_or(0i64);
                let landing = Angle::pi_fraction(rng.random_range(1 - bound..bound), 12);
                terms.push(NonlocalTerm {
                    target,
                    tag,
                    rotation: landing.add(&ray.neg()),
                    dilation: random_dilation(rng),
                    op: HomOp::constant(random_coefficient(rng)),
                });
            }
            rows.push(BoundaryRow { component: j, side, index: 0, order: 0, terms });
        }
    }
    OrbitSpec::new(1, components, rows).expect("random orbit is valid")
}
