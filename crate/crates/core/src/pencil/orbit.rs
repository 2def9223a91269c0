//! Orbit data: the angles, interior operators and boundary rows of one pencil.

use std::fmt;

use thiserror::Error;

use crate::algebra::{char_roots, AlgebraError, Angle, HomOp, Real, C64};

/// Which ray of the angle `-b < ω < b` a boundary row lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `ω = -b`.
    Lower,
    /// `ω = +b`.
    Upper,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Lower, Side::Upper];

    /// 1-based index used in configs and reports.
    pub fn index(self) -> u32 {
        match self {
            Side::Lower => 1,
            Side::Upper => 2,
        }
    }

    pub fn from_index(i: u32) -> Option<Side> {
        match i {
            1 => Some(Side::Lower),
            2 => Some(Side::Upper),
            _ => None,
        }
    }

    /// The ray angle `∓b`.
    pub fn ray(self, half_opening: &Angle) -> Angle {
        match self {
            Side::Lower => half_opening.neg(),
            Side::Upper => half_opening.clone(),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// One summand `B(D) u_k(G y)` of a boundary row.
#[derive(Clone, Debug, PartialEq)]
pub struct NonlocalTerm {
    /// 0-based component the term reads from.
    pub target: usize,
    /// Distinguishes several transformations onto the same component; 0 is local.
    pub tag: u32,
    /// Counter-clockwise rotation of the transformation.
    pub rotation: Angle,
    /// Dilation factor of the transformation.
    pub dilation: Real,
    pub op: HomOp,
}

impl NonlocalTerm {
    pub fn local(component: usize, op: HomOp) -> Self {
        Self { target: component, tag: 0, rotation: Angle::zero(), dilation: Real::from_int(1), op }
    }

    pub fn is_local_for(&self, component: usize) -> bool {
        self.target == component && self.tag == 0
    }
}

/// Boundary operator number `index` (0-based) on one side of one component.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryRow {
    pub component: usize,
    pub side: Side,
    pub index: u32,
    pub order: u32,
    pub terms: Vec<NonlocalTerm>,
}

impl BoundaryRow {
    pub fn local_term(&self) -> &NonlocalTerm {
        self.terms
            .iter()
            .find(|t| t.is_local_for(self.component))
            .expect("validated row has a local term")
    }

    pub fn label(&self) -> String {
        format!("B[j={},σ={},μ={}]", self.component + 1, self.side, self.index + 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub half_opening: Angle,
    pub operator: HomOp,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("an orbit needs at least one angle")]
    NoComponents,
    #[error("order parameter m must be >= 1")]
    ZeroOrder,
    #[error("angle {j}: half-opening {b} must lie in (0, pi)")]
    HalfOpening { j: usize, b: String },
    #[error("angle {j}: interior operator has degree {found}, expected 2m = {expected}")]
    InteriorDegree { j: usize, found: u32, expected: u32 },
    #[error("angle {j}: {source}")]
    Interior { j: usize, source: AlgebraError },
    #[error("angle {j}, side {side}: expected {expected} boundary conditions, found {found}")]
    RowCount { j: usize, side: Side, expected: u32, found: u32 },
    #[error("{row}: condition index must be in 1..={m}, duplicates are not allowed")]
    RowIndex { row: String, m: u32 },
    #[error("{row}: order {order} exceeds 2m-1 = {max}")]
    OrderTooHigh { row: String, order: u32, max: u32 },
    #[error("{row}: term operator has degree {found}, expected the row order {expected}")]
    TermDegree { row: String, found: u32, expected: u32 },
    #[error("{row}: expected exactly one local term (k = j, s = 0), found {found}")]
    LocalTermCount { row: String, found: usize },
    #[error("{row}: the local term must have omega_shift = 0 and chi = 1")]
    LocalTermShape { row: String },
    #[error("{row}: term target k = {k} is out of range")]
    TargetRange { row: String, k: usize },
    #[error("{row}: duplicate term (k = {k}, s = {s})")]
    DuplicateTerm { row: String, k: usize, s: u32 },
    #[error("{row}: dilation chi must be positive, got {chi}")]
    Dilation { row: String, chi: String },
    #[error("{row}, term (k = {k}, s = {s}): transformed ray angle {angle} must satisfy |angle| < b_k = {b}")]
    Embedding { row: String, k: usize, s: u32, angle: String, b: String },
}

/// Orbit data with validated invariants. Rows are kept sorted by
/// `(component, side, index)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSpec {
    m: u32,
    components: Vec<Component>,
    rows: Vec<BoundaryRow>,
    roots: Vec<Vec<C64>>,
}

impl OrbitSpec {
    pub fn new(m: u32, components: Vec<Component>, mut rows: Vec<BoundaryRow>) -> Result<Self, OrbitError> {
        if components.is_empty() {
            return Err(OrbitError::NoComponents);
        }
        if m == 0 {
            return Err(OrbitError::ZeroOrder);
        }
        let pi = Angle::pi_fraction(1, 1);
        let mut roots = Vec::with_capacity(components.len());
        for (j, c) in components.iter().enumerate() {
            let b = &c.half_opening;
            if b.radians() <= 0.0 || !b.abs_lt(&pi) {
                return Err(OrbitError::HalfOpening { j: j + 1, b: b.to_string() });
            }
            if c.operator.degree() != 2 * m {
                return Err(OrbitError::InteriorDegree { j: j + 1, found: c.operator.degree(), expected: 2 * m });
            }
            roots.push(char_roots(&c.operator).map_err(|source| OrbitError::Interior { j: j + 1, source })?);
        }
        rows.sort_by_key(|r| (r.component, r.side, r.index));
        let n = components.len();
        for j in 0..n {
            for side in Side::BOTH {
                let found = rows.iter().filter(|r| r.component == j && r.side == side).count() as u32;
                if found != m {
                    return Err(OrbitError::RowCount { j: j + 1, side, expected: m, found });
                }
            }
        }
        for (pos, row) in rows.iter().enumerate() {
            let label = row.label();
            if row.component >= n {
                return Err(OrbitError::TargetRange { row: label, k: row.component + 1 });
            }
            let expected_index = (pos % m as usize) as u32;
            if row.index != expected_index {
                return Err(OrbitError::RowIndex { row: label, m });
            }
            if row.order > 2 * m - 1 {
                return Err(OrbitError::OrderTooHigh { row: label, order: row.order, max: 2 * m - 1 });
            }
            let locals = row.terms.iter().filter(|t| t.is_local_for(row.component)).count();
            if locals != 1 {
                return Err(OrbitError::LocalTermCount { row: label, found: locals });
            }
            let ray = row.side.ray(&components[row.component].half_opening);
            for (ti, t) in row.terms.iter().enumerate() {
                if t.target >= n {
                    return Err(OrbitError::TargetRange { row: label, k: t.target + 1 });
                }
                if row.terms[..ti].iter().any(|u| u.target == t.target && u.tag == t.tag) {
                    return Err(OrbitError::DuplicateTerm { row: label, k: t.target + 1, s: t.tag });
                }
                if t.op.degree() != row.order {
                    return Err(OrbitError::TermDegree { row: label, found: t.op.degree(), expected: row.order });
                }
                if !t.dilation.is_positive() {
                    return Err(OrbitError::Dilation { row: label, chi: t.dilation.to_string() });
                }
                if t.is_local_for(row.component) {
                    if !t.rotation.is_zero() || !t.dilation.is_one() {
                        return Err(OrbitError::LocalTermShape { row: label });
                    }
                    continue;
                }
                let landed = ray.add(&t.rotation);
                let bk = &components[t.target].half_opening;
                if !landed.abs_lt(bk) {
                    return Err(OrbitError::Embedding {
                        row: label,
                        k: t.target + 1,
                        s: t.tag,
                        angle: landed.to_string(),
                        b: bk.to_string(),
                    });
                }
            }
        }
        Ok(Self { m, components, rows, roots })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn rows(&self) -> &[BoundaryRow] {
        &self.rows
    }

    /// Characteristic roots of component `k`, sorted by `(Im, Re)`.
    pub fn roots(&self, k: usize) -> &[C64] {
        &self.roots[k]
    }

    /// Size `2mN` of the characteristic matrix.
    pub fn size(&self) -> usize {
        2 * self.m as usize * self.components.len()
    }

    /// Angle at which a term of `row` evaluates its target component.
    pub fn landing_angle(&self, row: &BoundaryRow, term: &NonlocalTerm) -> Angle {
        row.side.ray(&self.components[row.component].half_opening).add(&term.rotation)
    }

    pub fn max_coefficient(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.terms.iter())
            .map(|t| t.op.max_abs_coeff())
            .fold(0.0, f64::max)
    }

    pub fn min_half_opening(&self) -> f64 {
        self.components.iter().map(|c| c.half_opening.radians()).fold(f64::INFINITY, f64::min)
    }

    pub fn is_exact(&self) -> bool {
        self.components.iter().all(|c| c.half_opening.pi_multiple().is_some())
            && self.rows.iter().flat_map(|r| r.terms.iter()).all(|t| {
                t.op.is_exact() && t.rotation.pi_multiple().is_some() && matches!(t.dilation, Real::Rational(_))
            })
    }
}
