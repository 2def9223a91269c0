//! The characteristic matrix `M(λ)` of an orbit.
//!
//! Each component `k` carries the exact solution family
//! `u = (y1 + τ_q y2)^z`, `z = iλ`, one per characteristic root `τ_q`. A
//! boundary row `(j, σ, μ)` of order `d` applied to column `(k, q)` gives
//!
//! ```text
//! Σ_terms  B(1, τ_q) · ∏_{p<d} (z - p) · exp((z - d)(ln χ + Log(cos ω̂ + τ_q sin ω̂)))
//! ```
//!
//! where `ω̂` is the angle the term lands on. Rows are ordered by
//! `(j, σ, μ)` and columns by `(k, q)`.
//!
//! At `z ∈ {0, …, 2m-2}` the family degenerates and `det M` has a zero that
//! carries no spectral meaning. [`Pencil::det_reduced`] divides it out.

mod orbit;

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

pub use orbit::{BoundaryRow, Component, NonlocalTerm, OrbitError, OrbitSpec, Side};

use crate::algebra::C64;
use crate::contour::{circle_integral, circle_nodes, unwrapped_arg};

const DEGENERATE_TOL: f64 = 1e-9;
const CAUCHY_RADIUS: f64 = 0.4;
const CAUCHY_SWITCH: f64 = 0.2;
const CAUCHY_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PencilError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("λ = {0} is a degenerate point of the solution basis (iλ ∈ {{0, …, 2m-2}})")]
    DegenerateLambda(C64),
    #[error("the λ = 0 basis {{1, ω}} needs a second-order operator (m = 1), got m = {0}")]
    NotSecondOrder(u32),
    #[error("det M vanishes to lower order than expected at iλ = {0}")]
    SpuriousOrder(u32),
}

/// `Log(cos ω + τ sin ω)` continued in `ω` from `Log 1 = 0`.
pub fn continued_log(tau: C64, omega: f64) -> C64 {
    let f = |w: f64| C64::new(w.cos(), 0.0) + tau * w.sin();
    let arg = unwrapped_arg(&f, 0.0, omega, 0.01);
    C64::new(f(omega).norm().ln(), arg)
}

/// `(cos ω + τ sin ω)^{iλ - μ}` on the continued branch.
pub fn basis_value(tau: C64, lambda: C64, omega: f64, drop: u32) -> C64 {
    let z = C64::i() * lambda;
    ((z - drop as f64) * continued_log(tau, omega)).exp()
}

/// `(value, d/dz, d²/dz²)` of `∏_{p<d} (z - p)`.
fn falling(d: u32, z: C64) -> [C64; 3] {
    // coefficients of the polynomial in z, lowest degree first
    let mut c = vec![C64::new(1.0, 0.0)];
    for p in 0..d {
        let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
        for (i, &a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * p as f64;
        }
        c = next;
    }
    let mut out = [C64::new(0.0, 0.0); 3];
    for &a in c.iter().rev() {
        out[2] = out[2] * z + out[1] * 2.0;
        out[1] = out[1] * z + out[0];
        out[0] = out[0] * z + a;
    }
    out
}

#[derive(Clone, Debug)]
struct RowCache {
    order: u32,
    /// per column: `(B(1, τ), ln χ + Log(cos ω̂ + τ sin ω̂))` for every term hitting it
    cols: Vec<Vec<(C64, C64)>>,
}

#[derive(Debug)]
struct Spurious {
    point: u32,
    order: u32,
    nodes: Vec<C64>,
    values: OnceLock<Result<Vec<C64>, PencilError>>,
}

/// An orbit together with everything needed to evaluate `M(λ)` quickly.
#[derive(Debug)]
pub struct Pencil {
    orbit: OrbitSpec,
    rows: Vec<RowCache>,
    spurious: Vec<Spurious>,
}

impl Pencil {
    pub fn new(orbit: OrbitSpec) -> Self {
        let m2 = 2 * orbit.m() as usize;
        let size = orbit.size();
        let rows = orbit
            .rows()
            .iter()
            .map(|row| {
                let mut cols = vec![Vec::new(); size];
                for term in &row.terms {
                    let angle = orbit.landing_angle(row, term).radians();
                    let ln_chi = C64::new(term.dilation.to_f64().ln(), 0.0);
                    for (q, &tau) in orbit.roots(term.target).iter().enumerate() {
                        let coef = term.op.at_slope(tau);
                        cols[term.target * m2 + q].push((coef, ln_chi + continued_log(tau, angle)));
                    }
                }
                RowCache { order: row.order, cols }
            })
            .collect();
        let spurious = spurious_orders(&orbit)
            .into_iter()
            .filter(|&(_, o)| o > 0)
            .map(|(point, order)| Spurious {
                point,
                order,
                nodes: circle_nodes(C64::new(point as f64, 0.0), CAUCHY_RADIUS, CAUCHY_NODES),
                values: OnceLock::new(),
            })
            .collect();
        Self { orbit, rows, spurious }
    }

    pub fn orbit(&self) -> &OrbitSpec {
        &self.orbit
    }

    pub fn size(&self) -> usize {
        self.orbit.size()
    }

    /// `(p, order)` of the spurious zero of `det M` at `iλ = p`.
    pub fn spurious(&self) -> Vec<(u32, u32)> {
        self.spurious.iter().map(|s| (s.point, s.order)).collect()
    }

    /// Points `λ = -ip` where the basis degenerates.
    pub fn degenerate_lambdas(&self) -> Vec<C64> {
        (0..=2 * self.orbit.m() - 2).map(|p| C64::new(0.0, -(p as f64))).collect()
    }

    pub fn is_degenerate(&self, lambda: C64) -> bool {
        let z = C64::i() * lambda;
        (0..=2 * self.orbit.m() - 2).any(|p| (z - p as f64).norm() < DEGENERATE_TOL)
    }

    /// `d^r M / dz^r` at `z`.
    fn matrix_z(&self, z: C64, r: usize) -> DMatrix<C64> {
        let n = self.size();
        let mut m = DMatrix::<C64>::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            let pi = falling(row.order, z);
            let d = row.order as f64;
            for (c, terms) in row.cols.iter().enumerate() {
                if terms.is_empty() {
                    continue;
                }
                let mut e = [C64::new(0.0, 0.0); 3];
                for &(coef, w) in terms {
                    let x = coef * ((z - d) * w).exp();
                    e[0] += x;
                    e[1] += x * w;
                    e[2] += x * w * w;
                }
                m[(i, c)] = match r {
                    0 => pi[0] * e[0],
                    1 => pi[1] * e[0] + pi[0] * e[1],
                    _ => pi[2] * e[0] + pi[1] * e[1] * 2.0 + pi[0] * e[2],
                };
            }
        }
        m
    }

    /// `M(λ)`; refuses degenerate points.
    pub fn matrix(&self, lambda: C64) -> Result<DMatrix<C64>, PencilError> {
        if self.is_degenerate(lambda) {
            return Err(PencilError::DegenerateLambda(lambda));
        }
        Ok(self.matrix_unchecked(lambda))
    }

    /// `M(λ)` at any point, degenerate or not.
    pub fn matrix_unchecked(&self, lambda: C64) -> DMatrix<C64> {
        self.matrix_z(C64::i() * lambda, 0)
    }

    /// `d^r M / dλ^r` for `r ∈ {1, 2}`.
    pub fn matrix_derivative(&self, lambda: C64, r: usize) -> Result<DMatrix<C64>, PencilError> {
        assert!(r == 1 || r == 2, "derivative order must be 1 or 2");
        if self.is_degenerate(lambda) {
            return Err(PencilError::DegenerateLambda(lambda));
        }
        let dz = self.matrix_z(C64::i() * lambda, r);
        Ok(if r == 1 { dz * C64::i() } else { -dz })
    }

    fn spurious_factor(&self, z: C64) -> C64 {
        self.spurious.iter().map(|s| (z - s.point as f64).powu(s.order)).product()
    }

    fn det_direct(&self, z: C64) -> C64 {
        self.matrix_z(z, 0).determinant() / self.spurious_factor(z)
    }

    fn circle_values<'a>(&'a self, s: &'a Spurious) -> Result<&'a Vec<C64>, PencilError> {
        s.values
            .get_or_init(|| {
                let values: Vec<C64> = s.nodes.iter().map(|&z| self.det_direct(z)).collect();
                let center = C64::new(s.point as f64, 0.0);
                let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
                // the principal part of det M / (z-p)^o must vanish
                for j in 0..s.order {
                    let g: Vec<C64> = values.iter().zip(&s.nodes).map(|(v, z)| v * (z - center).powu(j)).collect();
                    let a = circle_integral(&g, center, &s.nodes);
                    if a.norm() > 1e-8 * scale * CAUCHY_RADIUS.powi(j as i32) {
                        return Err(PencilError::SpuriousOrder(s.point));
                    }
                }
                Ok(values)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn near_spurious(&self, z: C64) -> Option<&Spurious> {
        self.spurious.iter().find(|s| (z - s.point as f64).norm() < CAUCHY_SWITCH)
    }

    /// `(D, dD/dz)` at `z` where `D = det M / ∏ (z-p)^{o_p}`.
    fn reduced_z(&self, z: C64) -> Result<(C64, C64), PencilError> {
        if let Some(s) = self.near_spurious(z) {
            let values = self.circle_values(s)?;
            let center = C64::new(s.point as f64, 0.0);
            let k = values.len() as f64;
            let mut d0 = C64::new(0.0, 0.0);
            let mut d1 = C64::new(0.0, 0.0);
            for (v, node) in values.iter().zip(&s.nodes) {
                let w = v * (node - center);
                d0 += w / (node - z);
                d1 += w / ((node - z) * (node - z));
            }
            return Ok((d0 / k, d1 / k));
        }
        let m = self.matrix_z(z, 0);
        let dm = self.matrix_z(z, 1);
        let det = m.determinant() / self.spurious_factor(z);
        let shift: C64 = self.spurious.iter().map(|s| s.order as f64 / (z - s.point as f64)).sum();
        match m.lu().solve(&dm) {
            Some(x) => Ok((det, det * (x.trace() - shift))),
            None => {
                // exactly singular: differentiate along a tiny circle instead
                let r = 1e-6 * (1.0 + z.norm());
                let nodes = circle_nodes(z, r, 16);
                let vals: Vec<C64> = nodes.iter().map(|&n| self.det_direct(n)).collect();
                let g: Vec<C64> = vals.iter().zip(&nodes).map(|(v, n)| v / ((n - z) * (n - z))).collect();
                Ok((det, circle_integral(&g, z, &nodes)))
            }
        }
    }

    /// Reduced determinant `D(λ)`: zeros of `D` are exactly the eigenvalues,
    /// with algebraic multiplicity, including at degenerate points.
    pub fn det_reduced(&self, lambda: C64) -> Result<C64, PencilError> {
        self.reduced_z(C64::i() * lambda).map(|(d, _)| d)
    }

    /// `(D(λ), dD/dλ)`.
    pub fn det_reduced_with_derivative(&self, lambda: C64) -> Result<(C64, C64), PencilError> {
        self.reduced_z(C64::i() * lambda).map(|(d, dd)| (d, dd * C64::i()))
    }

    /// `(dD/dλ) / D`, evaluated without forming `D` where possible.
    pub fn log_derivative(&self, lambda: C64) -> Result<C64, PencilError> {
        let z = C64::i() * lambda;
        if self.near_spurious(z).is_some() {
            let (d, dd) = self.reduced_z(z)?;
            return Ok(dd / d * C64::i());
        }
        let m = self.matrix_z(z, 0);
        let dm = self.matrix_z(z, 1);
        let shift: C64 = self.spurious.iter().map(|s| s.order as f64 / (z - s.point as f64)).sum();
        let x = m.lu().solve(&dm).ok_or(PencilError::DegenerateLambda(lambda))?;
        Ok((x.trace() - shift) * C64::i())
    }

    /// The 2N×2N matrix at `λ = 0` in the basis `{1, ψ_k(ω)}` per component,
    /// where `ψ = (Log(cos ω + τ1 sin ω) - Log(cos ω + τ2 sin ω)) / (τ1 - τ2)`;
    /// for the Laplacian `ψ(ω) = ω`.
    pub fn lambda_zero_matrix(&self) -> Result<DMatrix<C64>, PencilError> {
        if self.orbit.m() != 1 {
            return Err(PencilError::NotSecondOrder(self.orbit.m()));
        }
        let n = self.size();
        let mut m = DMatrix::<C64>::zeros(n, n);
        for (i, row) in self.orbit.rows().iter().enumerate() {
            for term in &row.terms {
                let k = term.target;
                let roots = self.orbit.roots(k);
                let (t1, t2) = (roots[0], roots[1]);
                let angle = self.orbit.landing_angle(row, term).radians();
                let (l1, l2) = (continued_log(t1, angle), continued_log(t2, angle));
                if row.order == 0 {
                    let beta = term.op.coeffs()[0].to_c64();
                    m[(i, 2 * k)] += beta;
                    m[(i, 2 * k + 1)] += beta * (l1 - l2) / (t1 - t2);
                } else {
                    let chi = term.dilation.to_f64();
                    let g = term.op.at_slope(t1) * (-l1).exp() - term.op.at_slope(t2) * (-l2).exp();
                    m[(i, 2 * k + 1)] += g / ((t1 - t2) * chi);
                }
            }
        }
        Ok(m)
    }

    /// Whether `λ = 0` is an eigenvalue of a second-order orbit, with the
    /// nullspace in the `{1, ψ}` basis.
    pub fn special_lambda_zero(&self, null_tol: f64) -> Result<(bool, Vec<DVector<C64>>), PencilError> {
        let m = self.lambda_zero_matrix()?;
        let null = null_space(&m, null_tol);
        Ok((!null.is_empty(), null))
    }
}

/// `(p, o_p)` for `p ∈ {0, …, 2m-2}`: the order to which `det M` is forced to
/// vanish at `z = p` by the basis alone.
pub fn spurious_orders(orbit: &OrbitSpec) -> Vec<(u32, u32)> {
    let m = orbit.m() as i64;
    let n = orbit.n() as i64;
    (0..=(2 * m - 2))
        .map(|p| {
            let above = orbit.rows().iter().filter(|r| r.order as i64 > p).count() as i64;
            let below = orbit.rows().len() as i64 - above;
            let column_kernel = n * (2 * m - 1 - p);
            let excess = (below + column_kernel - 2 * m * n).max(0);
            (p as u32, (above + excess) as u32)
        })
        .collect()
}

/// Right singular vectors with `σ < tol · σ_max`.
pub fn null_space(m: &DMatrix<C64>, tol: f64) -> Vec<DVector<C64>> {
    null_space_scaled(m, tol, 0.0)
}

/// Right singular vectors with `σ < tol · max(σ_max, scale)`; `scale` keeps a
/// matrix that is zero up to rounding from looking full rank.
pub fn null_space_scaled(m: &DMatrix<C64>, tol: f64, scale: f64) -> Vec<DVector<C64>> {
    let svd = m.clone().svd(false, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(scale);
    let v_t = svd.v_t.expect("requested right vectors");
    let mut out = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol * smax || smax == 0.0 {
            out.push(v_t.row(i).adjoint());
        }
    }
    out
}

/// Smallest singular value relative to the largest.
pub fn relative_sigma_min(m: &DMatrix<C64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smax == 0.0 {
        0.0
    } else {
        smin / smax
    }
}
