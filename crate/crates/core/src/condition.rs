//! Rank condition on the differentiated boundary operators.
//!
//! Each boundary row is differentiated along its ray until it has order
//! `l + 2m - 1`, and every argument transformation is dropped. The resulting
//! local operators (B-rows) are compared with the derivatives `D^ξ P_j`,
//! `|ξ| = l - 1`, of the interior operators (P-rows). All operators are
//! vectorized by monomial coefficients, `ζ1` power descending, block by block.

use std::fmt;

use serde::Serialize;

use crate::algebra::{det_integer, rank_exact, select_independent, Direction, HomOp, Scalar, Selection};
use crate::pencil::OrbitSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RowLabel {
    /// Boundary row `(component, side, index)`, 1-based like the printed labels.
    B { j: usize, sigma: u32, mu: u32 },
    /// `D^ξ P_j` with `ξ = (ξ1, ξ2)`.
    P { j: usize, xi: (u32, u32) },
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowLabel::B { j, sigma, mu } => write!(f, "B[j={j},σ={sigma},μ={mu}]"),
            RowLabel::P { j, xi } => write!(f, "D^({},{})P[j={j}]", xi.0, xi.1),
        }
    }
}

/// One operator acting on `(U_1, …, U_N)`: block `k` acts on `U_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorRow {
    pub label: RowLabel,
    pub blocks: Vec<HomOp>,
}

impl OperatorRow {
    pub fn degree(&self) -> u32 {
        self.blocks[0].degree()
    }

    pub fn to_vector(&self) -> Vec<Scalar> {
        self.blocks.iter().flat_map(|b| b.coeffs().iter().cloned()).collect()
    }
}

/// Dependent row with its expansion over rows selected earlier.
#[derive(Clone, Debug, PartialEq)]
pub struct Dependency {
    pub row: RowLabel,
    pub over: Vec<RowLabel>,
    pub coefficients: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DependencyReport {
    pub l: u32,
    /// Positions in the B-row list of the selected independent B-rows.
    pub independent_b: Vec<usize>,
    pub dependent_b: Vec<Dependency>,
    /// P-rows in the span of the selected rows before them.
    pub dependent_p: Vec<Dependency>,
    pub rank_b: usize,
    pub rank_all: usize,
    pub p_rows: usize,
    pub condition_holds: bool,
}

/// B-rows (one per boundary row, in orbit order) and P-rows.
pub fn build_rows(orbit: &OrbitSpec, l: u32) -> (Vec<OperatorRow>, Vec<OperatorRow>) {
    let m = orbit.m();
    let n = orbit.n();
    let degree = l + 2 * m - 1;
    let b_rows = orbit
        .rows()
        .iter()
        .map(|row| {
            let p = degree - row.order;
            let half = &orbit.components()[row.component].half_opening;
            let ray = Direction::new(row.side.ray(half));
            let mut blocks = vec![HomOp::zero(degree); n];
            for term in &row.terms {
                let hat = term.op.pullback_hat(&ray, &term.rotation, &term.dilation, p);
                blocks[term.target] = blocks[term.target].try_add(&hat).expect("uniform degree");
            }
            OperatorRow {
                label: RowLabel::B { j: row.component + 1, sigma: row.side.index(), mu: row.index + 1 },
                blocks,
            }
        })
        .collect();
    let mut p_rows = Vec::new();
    if l >= 1 {
        for (j, comp) in orbit.components().iter().enumerate() {
            for xi2 in 0..l {
                let xi1 = l - 1 - xi2;
                let mut blocks = vec![HomOp::zero(degree); n];
                blocks[j] = comp.operator.times_monomial(xi1, xi2);
                p_rows.push(OperatorRow { label: RowLabel::P { j: j + 1, xi: (xi1, xi2) }, blocks });
            }
        }
    }
    (b_rows, p_rows)
}

fn vectors(rows: &[OperatorRow]) -> Vec<Vec<Scalar>> {
    rows.iter().map(OperatorRow::to_vector).collect()
}

fn dependency(sel: &Selection, labels: &[RowLabel], row: usize, coefficients: &[Scalar]) -> Dependency {
    Dependency {
        row: labels[row].clone(),
        over: sel.independent.iter().take(coefficients.len()).map(|&i| labels[i].clone()).collect(),
        coefficients: coefficients.to_vec(),
    }
}

/// The condition holds iff `rank(B ∪ P) = rank(B) + N·l`; vacuous for `l = 0`.
pub fn check_condition(orbit: &OrbitSpec, l: u32, rank_tol: f64) -> DependencyReport {
    let (b, p) = build_rows(orbit, l);
    let mut all = b.clone();
    all.extend(p.iter().cloned());
    let labels: Vec<RowLabel> = all.iter().map(|r| r.label.clone()).collect();
    let sel = select_independent(&vectors(&all), rank_tol);
    let nb = b.len();
    let independent_b: Vec<usize> = sel.independent.iter().cloned().filter(|&i| i < nb).collect();
    let rank_b = independent_b.len();
    let mut dependent_b = Vec::new();
    let mut dependent_p = Vec::new();
    for (row, coef) in &sel.dependent {
        let d = dependency(&sel, &labels, *row, coef);
        if *row < nb {
            dependent_b.push(d);
        } else {
            dependent_p.push(d);
        }
    }
    let rank_all = sel.rank();
    DependencyReport {
        l,
        independent_b,
        dependent_b,
        dependent_p,
        rank_b,
        rank_all,
        p_rows: p.len(),
        condition_holds: l == 0 || rank_all == rank_b + p.len(),
    }
}

/// Whether the square system of all B-rows and P-rows is singular; by the
/// Mellin correspondence this happens iff `i(1 - l - 2m)` is an eigenvalue.
pub fn square_system_singular(orbit: &OrbitSpec, l: u32, rank_tol: f64) -> bool {
    let (mut rows, p) = build_rows(orbit, l);
    rows.extend(p);
    let v = vectors(&rows);
    debug_assert!(v.iter().all(|r| r.len() == v.len()), "square system");
    rank_exact(&v, rank_tol) < v.len()
}

/// Determinant of the `l × l` tridiagonal matrix with zero diagonal and unit
/// off-diagonals.
pub fn det_al(l: usize) -> i64 {
    let m: Vec<Vec<i64>> = (0..l)
        .map(|i| (0..l).map(|j| i64::from(i.abs_diff(j) == 1)).collect())
        .collect();
    i64::try_from(det_integer(&m)).expect("determinant is 0 or ±1")
}
