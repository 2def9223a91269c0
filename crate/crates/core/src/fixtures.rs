//! The model problems used as reference cases: a single angle with nonlocal
//! conditions pointing at its bisector, a two-angle orbit with Dirichlet
//! conditions on one side, and the purely local Dirichlet problem.

use crate::algebra::{Angle, HomOp, Real, Scalar};
use crate::pencil::{BoundaryRow, Component, NonlocalTerm, OrbitSpec, Side};

fn dirichlet_row(component: usize, side: Side, extra: Vec<NonlocalTerm>) -> BoundaryRow {
    let mut terms = vec![NonlocalTerm::local(component, HomOp::identity())];
    terms.extend(extra);
    BoundaryRow { component, side, index: 0, order: 0, terms }
}

fn rotated(target: usize, tag: u32, rotation: Angle, coef: Scalar) -> NonlocalTerm {
    NonlocalTerm { target, tag, rotation, dilation: Real::from_int(1), op: HomOp::constant(coef) }
}

/// Laplacian in `|ω| < b`, `U|_{ω=∓b} + b_{1,2} U(rotated onto ω = 0) = f`.
pub fn bisector_problem(half_opening: Angle, b1: Scalar, b2: Scalar) -> OrbitSpec {
    let lower = dirichlet_row(0, Side::Lower, vec![rotated(0, 1, half_opening.clone(), b1)]);
    let upper = dirichlet_row(0, Side::Upper, vec![rotated(0, 1, half_opening.neg(), b2)]);
    OrbitSpec::new(
        1,
        vec![Component { half_opening, operator: HomOp::laplacian() }],
        vec![lower, upper],
    )
    .expect("bisector problem is a valid orbit")
}

/// The bisector problem in the half-plane `|ω| < π/2`.
pub fn example1(b1: Scalar, b2: Scalar) -> OrbitSpec {
    bisector_problem(Angle::pi_fraction(1, 2), b1, b2)
}

/// Two half-planes: Dirichlet on `ω = -π/2`, and on `ω = π/2` the condition
/// `U_j + b_j U_{other}(rotation by -π/2) = f`.
pub fn example2(b1: Scalar, b2: Scalar) -> OrbitSpec {
    let half = Angle::pi_fraction(1, 2);
    let quarter_back = Angle::pi_fraction(-1, 2);
    let rows = vec![
        dirichlet_row(0, Side::Lower, vec![]),
        dirichlet_row(0, Side::Upper, vec![rotated(1, 1, quarter_back.clone(), b1)]),
        dirichlet_row(1, Side::Lower, vec![]),
        dirichlet_row(1, Side::Upper, vec![rotated(0, 1, quarter_back, b2)]),
    ];
    let comp = Component { half_opening: half, operator: HomOp::laplacian() };
    OrbitSpec::new(1, vec![comp.clone(), comp], rows).expect("two-angle problem is a valid orbit")
}

/// Laplacian with Dirichlet conditions on both sides of `|ω| < b`.
pub fn dirichlet(half_opening: Angle) -> OrbitSpec {
    OrbitSpec::new(
        1,
        vec![Component { half_opening, operator: HomOp::laplacian() }],
        vec![dirichlet_row(0, Side::Lower, vec![]), dirichlet_row(0, Side::Upper, vec![])],
    )
    .expect("Dirichlet problem is a valid orbit")
}

/// Exact coefficient from a decimal or fraction literal.
pub fn coef(text: &str) -> Scalar {
    crate::literal::parse_scalar(text).expect("valid coefficient literal")
}
