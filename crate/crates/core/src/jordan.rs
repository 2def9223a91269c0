//! First associate vectors and the proper/improper classification of an
//! eigenvalue on a critical line.
//!
//! An eigenvector `c0` of `M(λ0)` has an associate vector when
//! `M(λ0) c1 = -M'(λ0) c0` is solvable. Over the whole nullspace this is a rank
//! question for `G = Uᴴ M' V`, with `V`, `U` the right and left null bases.

use nalgebra::{DMatrix, DVector};
use rustfft::FftPlanner;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::C64;
use crate::pencil::{null_space_scaled, Pencil, PencilError};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JordanError {
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error("vector is not an eigenvector: relative residual {0:e}")]
    NotAnEigenvector(f64),
    #[error("M({0}) has trivial nullspace")]
    NotAnEigenvalue(C64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ImproperReason {
    NotPureImaginary,
    WrongInteger,
    NotPolynomial,
    HasAssociate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "reason")]
pub enum Classification {
    Proper,
    Improper(ImproperReason),
}

impl Classification {
    pub fn is_proper(self) -> bool {
        self == Classification::Proper
    }
}

/// One eigenvector with its chain test.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainRecord {
    pub lambda: C64,
    pub eigvec: DVector<C64>,
    pub has_associate: bool,
    /// `‖M c1 + M' c0‖ / (max(‖M‖, ‖M'‖) ‖c0‖)` for the least-squares `c1`.
    pub chain_residual: f64,
    pub associate: Option<DVector<C64>>,
    pub polynomial: bool,
}

/// Eigenvector `c0` and associate `c1` with `‖M c1 + M' c0‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub eigvec: DVector<C64>,
    pub associate: DVector<C64>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainAnalysis {
    pub lambda: C64,
    pub classification: Classification,
    pub chains: Vec<ChainRecord>,
    /// Smallest singular value of `Uᴴ M' V` relative to `‖M'‖`.
    pub block_sigma: f64,
    pub certificate: Option<Certificate>,
}

fn pinv_solve(m: &DMatrix<C64>, rhs: &DVector<C64>, tol: f64, scale: f64) -> DVector<C64> {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max().max(scale);
    let eps = (tol * smax).max(f64::MIN_POSITIVE);
    svd.solve(rhs, eps).expect("both factors were computed")
}

/// Least-squares associate for `c0` and its relative residual.
pub fn associate_exists(
    pencil: &Pencil,
    lambda: C64,
    c0: &DVector<C64>,
    tol: &Tolerances,
) -> Result<(bool, f64, DVector<C64>), JordanError> {
    let m = pencil.matrix(lambda)?;
    let dm = pencil.matrix_derivative(lambda, 1)?;
    let scale = matrix_scale(&m, &dm);
    let r0 = if scale > 0.0 { (&m * c0).norm() / (scale * c0.norm()) } else { 0.0 };
    if r0 > tol.null_tol {
        return Err(JordanError::NotAnEigenvector(r0));
    }
    let rhs = -(&dm * c0);
    let c1 = pinv_solve(&m, &rhs, tol.null_tol, scale);
    let residual = if scale > 0.0 { (&m * &c1 - &rhs).norm() / (scale * c0.norm()) } else { 0.0 };
    Ok((residual < tol.tol_chain, residual, c1))
}

/// Size of `M` near `λ`, robust to `M(λ)` vanishing identically.
fn matrix_scale(m: &DMatrix<C64>, dm: &DMatrix<C64>) -> f64 {
    m.norm().max(dm.norm())
}

/// Whether every component `Σ_q c_q (cos ω + τ_q sin ω)^n` is a trigonometric
/// polynomial with frequencies `n, n-2, …, -n` only.
pub fn is_polynomial(pencil: &Pencil, lambda: C64, c0: &DVector<C64>, l: u32) -> bool {
    let orbit = pencil.orbit();
    let n = (l + 2 * orbit.m() - 1) as i64;
    let z = C64::i() * lambda;
    if (z - n as f64).norm() > 1e-8 {
        return false;
    }
    let m2 = 2 * orbit.m() as usize;
    let k = 4 * (n as usize + m2);
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(k);
    for comp in 0..orbit.n() {
        let mut samples: Vec<C64> = (0..k)
            .map(|s| {
                let w = 2.0 * std::f64::consts::PI * s as f64 / k as f64;
                orbit
                    .roots(comp)
                    .iter()
                    .enumerate()
                    .map(|(q, &tau)| c0[comp * m2 + q] * (C64::new(w.cos(), 0.0) + tau * w.sin()).powi(n as i32))
                    .sum()
            })
            .collect();
        let size = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        fft.process(&mut samples);
        for (idx, v) in samples.iter().enumerate() {
            let freq = if idx <= k / 2 { idx as i64 } else { idx as i64 - k as i64 };
            let allowed = freq.abs() <= n && (n - freq) % 2 == 0;
            if !allowed && v.norm() / k as f64 > 1e-8 * (1.0 + size) {
                return false;
            }
        }
    }
    true
}

/// Proper iff `iλ0 = l + 2m - 1`, every eigenvector is polynomial and no
/// nonzero combination of eigenvectors has an associate vector.
pub fn classify(pencil: &Pencil, lambda: C64, l: u32, tol: &Tolerances) -> Result<ChainAnalysis, JordanError> {
    let n = (l + 2 * pencil.orbit().m() - 1) as f64;
    let z = C64::i() * lambda;
    let early = |reason| ChainAnalysis {
        lambda,
        classification: Classification::Improper(reason),
        chains: Vec::new(),
        block_sigma: f64::NAN,
        certificate: None,
    };
    if z.im.abs() > 1e-8 {
        return Ok(early(ImproperReason::NotPureImaginary));
    }
    if (z.re - n).abs() > 1e-8 {
        return Ok(early(ImproperReason::WrongInteger));
    }
    let m = pencil.matrix(lambda)?;
    let dm = pencil.matrix_derivative(lambda, 1)?;
    let right = null_space_scaled(&m, tol.null_tol, matrix_scale(&m, &dm));
    classify_with_basis(pencil, lambda, l, &right, tol)
}

/// [`classify`] with a caller-chosen basis of the nullspace of `M(λ0)`.
pub fn classify_with_basis(
    pencil: &Pencil,
    lambda: C64,
    l: u32,
    right: &[DVector<C64>],
    tol: &Tolerances,
) -> Result<ChainAnalysis, JordanError> {
    let m = pencil.matrix(lambda)?;
    let dm = pencil.matrix_derivative(lambda, 1)?;
    let scale = matrix_scale(&m, &dm);
    let left = null_space_scaled(&m.adjoint(), tol.null_tol, scale);
    if right.is_empty() || left.is_empty() {
        return Err(JordanError::NotAnEigenvalue(lambda));
    }
    let v = DMatrix::from_columns(right);
    let u = DMatrix::from_columns(&left);
    let mut g = u.adjoint() * &dm * &v;
    if g.nrows() < g.ncols() {
        let c = g.ncols();
        g = g.resize_vertically(c, C64::new(0.0, 0.0));
    }
    let dnorm = dm.norm().max(f64::MIN_POSITIVE);
    let g_svd = g.svd(false, true);
    let block_sigma = g_svd.singular_values.min() / dnorm;

    let mut chains = Vec::with_capacity(right.len());
    for c0 in right {
        let (has_associate, chain_residual, c1) = associate_exists(pencil, lambda, c0, tol)?;
        chains.push(ChainRecord {
            lambda,
            eigvec: c0.clone(),
            has_associate,
            chain_residual,
            associate: has_associate.then_some(c1),
            polynomial: is_polynomial(pencil, lambda, c0, l),
        });
    }

    // a combination V a with G a = 0 carries an associate
    let mut certificate = None;
    if block_sigma < tol.tol_chain {
        let v_t = g_svd.v_t.expect("requested right vectors");
        let c0 = &v * v_t.row(g_svd.singular_values.imin()).adjoint();
        let rhs = -(&dm * &c0);
        let c1 = pinv_solve(&m, &rhs, tol.null_tol, scale);
        let residual = (&m * &c1 - &rhs).norm();
        certificate = Some(Certificate { eigvec: c0, associate: c1, residual });
    }

    let classification = if certificate.is_some() || chains.iter().any(|c| c.has_associate) {
        Classification::Improper(ImproperReason::HasAssociate)
    } else if chains.iter().any(|c| !c.polynomial) {
        Classification::Improper(ImproperReason::NotPolynomial)
    } else {
        Classification::Proper
    };
    Ok(ChainAnalysis { lambda, classification, chains, block_sigma, certificate })
}
