use serde::{Deserialize, Serialize};

/// Every numerical threshold used by an analysis, carried into reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// An eigenvalue is on a line when `|Im λ - h|` is below this.
    pub delta_line: f64,
    /// Half-height of the band scanned around a line.
    pub delta_band: f64,
    /// Relative determinant residual accepted for a refined eigenvalue.
    pub tol_det: f64,
    /// Relative threshold of the associate-vector test.
    pub tol_chain: f64,
    /// Relative singular value below which a direction is in the nullspace.
    pub null_tol: f64,
    /// Relative singular value below which a row direction is dependent.
    pub rank_tol: f64,
    /// Zeros closer than this are merged.
    pub merge: f64,
    /// Minimal distance kept between a contour and a zero.
    pub boundary_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            delta_line: 1e-7,
            delta_band: 1e-3,
            tol_det: 1e-10,
            tol_chain: 1e-8,
            null_tol: 1e-9,
            rank_tol: 1e-10,
            merge: 1e-7,
            boundary_min: 1e-6,
        }
    }
}

impl Tolerances {
    /// Margin below which a line decision is reported as indeterminate.
    pub fn indeterminate_margin(&self) -> f64 {
        10.0 * self.delta_line
    }
}
