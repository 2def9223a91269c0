//! Zeros of the reduced determinant in rectangles and on horizontal lines.
//!
//! Counting uses the argument principle on the rectangle boundary. Regions
//! are split (quadtree, long axis first for thin cells) until the power sums
//! `Σ (λ_i - c)^j` taken on a circle around a cell pin down its zeros; simple
//! zeros are then polished by Newton steps, multiple ones by a second, tighter
//! circle.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{poly_roots, C64};
use crate::contour::{circle_integral, circle_nodes, winding_polygon, ContourError};
use crate::pencil::{null_space_scaled, OrbitSpec, Pencil, PencilError};
use crate::tolerance::Tolerances;

const STEP: f64 = 0.05;
const RETRIES: usize = 8;
const NODES: usize = 128;
const GROUP_TOL: f64 = 1e-3;
const AMBIGUOUS: f64 = 0.05;
const MIN_CELL: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Self {
        assert!(re.0 < re.1 && im.0 < im.1, "empty rectangle");
        Self { re_min: re.0, re_max: re.1, im_min: im.0, im_max: im.1 }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diam(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> C64 {
        C64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    /// Counter-clockwise corners.
    pub fn vertices(&self) -> [C64; 4] {
        [
            C64::new(self.re_min, self.im_min),
            C64::new(self.re_max, self.im_min),
            C64::new(self.re_max, self.im_max),
            C64::new(self.re_min, self.im_max),
        ]
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    fn grown(&self, d: [f64; 4]) -> Rect {
        Rect::new((self.re_min - d[0], self.re_max + d[1]), (self.im_min - d[2], self.im_max + d[3]))
    }

    /// Children for a split at fractions `fx`, `fy` of the width and height.
    fn split(&self, fx: f64, fy: f64) -> Vec<Rect> {
        let xm = self.re_min + fx * self.width();
        let ym = self.im_min + fy * self.height();
        let aspect = self.width() / self.height();
        if aspect > 2.0 {
            vec![Rect::new((self.re_min, xm), (self.im_min, self.im_max)), Rect::new((xm, self.re_max), (self.im_min, self.im_max))]
        } else if aspect < 0.5 {
            vec![Rect::new((self.re_min, self.re_max), (self.im_min, ym)), Rect::new((self.re_min, self.re_max), (ym, self.im_max))]
        } else {
            vec![
                Rect::new((self.re_min, xm), (self.im_min, ym)),
                Rect::new((xm, self.re_max), (self.im_min, ym)),
                Rect::new((self.re_min, xm), (ym, self.im_max)),
                Rect::new((xm, self.re_max), (ym, self.im_max)),
            ]
        }
    }

    fn key(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for v in [self.re_min, self.re_max, self.im_min, self.im_max] {
            v.to_bits().hash(&mut h);
        }
        h.finish()
    }
}

/// Coordinates of an eigenvector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VectorBasis {
    /// Coefficients of `(y1 + τ_q y2)^{iλ}` in column order.
    Power,
    /// Coefficients of `{1, ψ_k(ω)}` per component, used at `λ = 0`.
    LambdaZero,
    /// The basis degenerates and no special one is available.
    Unavailable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigRecord {
    pub lambda: C64,
    pub alg_mult: u32,
    /// `|D(λ)|` relative to the largest `|D|` on a small circle around `λ`.
    pub residual: f64,
    pub eigvecs: Vec<DVector<C64>>,
    pub basis: VectorBasis,
}

impl EigRecord {
    pub fn geometric_mult(&self) -> usize {
        self.eigvecs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error("rectangle boundary stays within reach of a zero near {at} after {retries} retries")]
    BoundaryTooClose { at: C64, retries: usize },
    #[error("zeros could not be separated in cell {0:?}")]
    NoConvergence(Rect),
    #[error("winding number {0} is negative: the reduced determinant has a pole")]
    NegativeWinding(i64),
}

/// Eigenvalues in a horizontal band around `Im λ = height`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineScan {
    pub height: f64,
    pub re_window: f64,
    pub band: f64,
    /// Eigenvalues with `|Im λ - height| < δ_line`, ordered by `Re λ`.
    pub on_line: Vec<EigRecord>,
    /// Other eigenvalues found in the band.
    pub near: Vec<EigRecord>,
}

impl LineScan {
    /// Smallest distance to the line among band eigenvalues that are not on it.
    pub fn margin(&self) -> Option<f64> {
        self.near.iter().map(|e| (e.lambda.im - self.height).abs()).reduce(f64::min)
    }
}

/// `5 + (2 / min b) · ln(1 + max |coefficient|)`.
pub fn default_re_window(orbit: &OrbitSpec) -> f64 {
    5.0 + 2.0 / orbit.min_half_opening() * (1.0 + orbit.max_coefficient()).ln()
}

pub struct Solver<'a> {
    pencil: &'a Pencil,
    tol: Tolerances,
    seed: u64,
}

fn rng_for(seed: u64, rect: &Rect, attempt: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ rect.key() ^ (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

impl<'a> Solver<'a> {
    pub fn new(pencil: &'a Pencil, tol: Tolerances, seed: u64) -> Self {
        Self { pencil, tol, seed }
    }

    pub fn pencil(&self) -> &Pencil {
        self.pencil
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    fn det(&self, lambda: C64) -> C64 {
        self.pencil.det_reduced(lambda).unwrap_or(C64::new(f64::NAN, f64::NAN))
    }

    fn winding(&self, rect: &Rect) -> Result<usize, SpectrumError> {
        let f = |z: C64| self.det(z);
        let step = STEP.min(rect.width().max(rect.height()) / 8.0);
        match winding_polygon(&f, &rect.vertices(), step, self.tol.boundary_min / 10.0) {
            Ok(w) if w < 0 => Err(SpectrumError::NegativeWinding(w)),
            Ok(w) => Ok(w as usize),
            Err(ContourError::BoundaryTooClose(at)) | Err(ContourError::NonFinite(at)) => {
                Err(SpectrumError::BoundaryTooClose { at, retries: 0 })
            }
        }
    }

    /// Count in `rect`, moving the sides outward by small seeded amounts when a
    /// zero sits on the boundary. Returns the rectangle actually used.
    pub fn count_zeros_adjusted(&self, rect: Rect) -> Result<(usize, Rect), SpectrumError> {
        let mut last_at = rect.center();
        for attempt in 0..=RETRIES {
            let r = if attempt == 0 {
                rect
            } else {
                let mut rng = rng_for(self.seed, &rect, attempt);
                let scale = 1e-5 * (1.0 + rect.diam()) * 3f64.powi(attempt as i32);
                let d = [0; 4].map(|_: i32| scale * rng.random_range(0.5..1.5));
                rect.grown(d)
            };
            match self.winding(&r) {
                Ok(n) => return Ok((n, r)),
                Err(SpectrumError::BoundaryTooClose { at, .. }) => last_at = at,
                Err(e) => return Err(e),
            }
        }
        Err(SpectrumError::BoundaryTooClose { at: last_at, retries: RETRIES })
    }

    /// Total multiplicity of zeros inside `rect`.
    pub fn count_zeros(&self, rect: Rect) -> Result<usize, SpectrumError> {
        self.count_zeros_adjusted(rect).map(|(n, _)| n)
    }

    /// All zeros in `rect` with multiplicities, sorted by `(Im, Re)`.
    pub fn eigenvalues_in_region(&self, rect: Rect) -> Result<Vec<EigRecord>, SpectrumError> {
        let (count, used) = self.count_zeros_adjusted(rect)?;
        let mut zeros = self.isolate(used, count)?;
        let tie = self.tol.merge;
        zeros.sort_by(|a, b| {
            if (a.0.im - b.0.im).abs() > tie {
                a.0.im.total_cmp(&b.0.im)
            } else {
                a.0.re.total_cmp(&b.0.re)
            }
        });
        let zeros = merge(zeros, self.tol.merge);
        zeros.into_iter().map(|(l, k)| self.record(l, k)).collect()
    }

    /// Eigenvalues within `δ_line` of `Im λ = height`, `|Re λ| ≤ re_window`.
    pub fn eigenvalues_on_line(&self, height: f64, re_window: f64) -> Result<LineScan, SpectrumError> {
        let band = self.tol.delta_band;
        let rect = Rect::new((-re_window, re_window), (height - band, height + band));
        let found = self.eigenvalues_in_region(rect)?;
        let (mut on_line, near): (Vec<_>, Vec<_>) =
            found.into_iter().partition(|e| (e.lambda.im - height).abs() < self.tol.delta_line);
        on_line.sort_by(|a, b| a.lambda.re.total_cmp(&b.lambda.re));
        Ok(LineScan { height, re_window, band, on_line, near })
    }

    fn isolate(&self, cell: Rect, count: usize) -> Result<Vec<(C64, u32)>, SpectrumError> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let small = cell.diam() < MIN_CELL;
        if count == 1 || cell.diam() <= 0.5 {
            if let Some(z) = self.analyze(&cell, count, small)? {
                return Ok(z);
            }
        }
        if small {
            return Err(SpectrumError::NoConvergence(cell));
        }
        let children = self.split_counted(&cell, count)?;
        let parts: Vec<Result<Vec<(C64, u32)>, SpectrumError>> = {
            use rayon::prelude::*;
            children.into_par_iter().map(|(c, n)| self.isolate(c, n)).collect()
        };
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }

    fn split_counted(&self, cell: &Rect, count: usize) -> Result<Vec<(Rect, usize)>, SpectrumError> {
        let mut last_at = cell.center();
        for attempt in 0..=RETRIES {
            let mut rng = rng_for(self.seed, cell, attempt);
            let (fx, fy) = (rng.random_range(0.4..0.6), rng.random_range(0.4..0.6));
            let children = cell.split(fx, fy);
            let mut counted = Vec::with_capacity(children.len());
            let mut ok = true;
            for c in children {
                match self.winding(&c) {
                    Ok(n) => counted.push((c, n)),
                    Err(SpectrumError::BoundaryTooClose { at, .. }) => {
                        last_at = at;
                        ok = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if ok && counted.iter().map(|(_, n)| n).sum::<usize>() == count {
                return Ok(counted);
            }
        }
        Err(SpectrumError::BoundaryTooClose { at: last_at, retries: RETRIES })
    }

    /// Normalized power sums `Σ ((λ_i - c)/ρ)^j`, `j = 0..=k`, from `K` and
    /// `K/2` nodes; `None` when the two rules disagree or a node is singular.
    fn power_sums(&self, center: C64, radius: f64, k: usize) -> Option<Vec<C64>> {
        let nodes = circle_nodes(center, radius, NODES);
        let mut g = Vec::with_capacity(NODES);
        for &z in &nodes {
            let v = self.pencil.log_derivative(z).ok()?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return None;
            }
            g.push(v);
        }
        let mut sums = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let vals: Vec<C64> = g.iter().zip(&nodes).map(|(v, z)| v * ((z - center) / radius).powu(j as u32)).collect();
            let fine = circle_integral(&vals, center, &nodes);
            let half_vals: Vec<C64> = vals.iter().step_by(2).cloned().collect();
            let half_nodes: Vec<C64> = nodes.iter().step_by(2).cloned().collect();
            let coarse = circle_integral(&half_vals, center, &half_nodes);
            if (fine - coarse).norm() > 1e-9 * (k as f64 + 1.0) {
                return None;
            }
            sums.push(fine);
        }
        Some(sums)
    }

    fn analyze(&self, cell: &Rect, count: usize, accept_ambiguous: bool) -> Result<Option<Vec<(C64, u32)>>, SpectrumError> {
        let center = cell.center();
        let radius = 0.75 * cell.diam();
        let Some(p) = self.power_sums(center, radius, count) else {
            return Ok(None);
        };
        if (p[0] - count as f64).norm() > 1e-6 {
            return Ok(None);
        }
        let mean = p[1] / p[0];
        if count >= 2 && is_single_cluster(&p, mean) {
            let z = center + mean * radius;
            return Ok(Some(vec![(z, count as u32)]));
        }
        let w = if count == 1 {
            vec![p[1]]
        } else {
            // Newton identities: elementary symmetric functions from power sums
            let mut e = vec![C64::new(1.0, 0.0)];
            for kk in 1..=count {
                let mut acc = C64::new(0.0, 0.0);
                for i in 1..=kk {
                    let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                    acc += e[kk - i] * p[i] * sign;
                }
                e.push(acc / kk as f64);
            }
            let coeffs: Vec<C64> = (0..=count)
                .map(|j| {
                    let sign = if (count - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                    e[count - j] * sign
                })
                .collect();
            match poly_roots(&coeffs) {
                Some(r) => r,
                None => return Ok(None),
            }
        };
        // group estimates that coincide
        let mut groups: Vec<Vec<C64>> = Vec::new();
        for &x in &w {
            match groups.iter_mut().find(|g| g.iter().any(|y| (x - y).norm() < GROUP_TOL)) {
                Some(g) => g.push(x),
                None => groups.push(vec![x]),
            }
        }
        let means: Vec<C64> = groups.iter().map(|g| g.iter().sum::<C64>() / g.len() as f64).collect();
        for (a, ma) in means.iter().enumerate() {
            for mb in &means[a + 1..] {
                if (ma - mb).norm() < AMBIGUOUS && !accept_ambiguous {
                    return Ok(None);
                }
            }
        }
        let mut out = Vec::new();
        for (gi, (g, m)) in groups.iter().zip(&means).enumerate() {
            let guess = center + *m * radius;
            let others = means
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != gi)
                .map(|(_, o)| (o - m).norm() * radius)
                .fold(radius, f64::min);
            let refined = if g.len() == 1 {
                self.newton(guess, 0.25 * others)
            } else {
                self.cluster_center(guess, 0.3 * others, g.len())
            };
            let z = refined.unwrap_or(guess);
            if !cell.grown([self.tol.merge; 4]).contains(z) {
                return Ok(None);
            }
            out.push((z, g.len() as u32));
        }
        Ok(Some(out))
    }

    fn newton(&self, start: C64, reach: f64) -> Option<C64> {
        let mut z = start;
        for _ in 0..40 {
            let g = self.pencil.log_derivative(z).ok();
            let step = match g {
                Some(g) if g.norm() > 0.0 && g.re.is_finite() && g.im.is_finite() => 1.0 / g,
                // landed exactly on the zero
                _ => return Some(z),
            };
            z -= step;
            if (z - start).norm() > reach {
                return None;
            }
            if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
        Some(z)
    }

    fn cluster_center(&self, guess: C64, radius: f64, mult: usize) -> Option<C64> {
        let p = self.power_sums(guess, radius, 1)?;
        if (p[0] - mult as f64).norm() > 1e-6 {
            return None;
        }
        Some(guess + p[1] / p[0] * radius)
    }

    /// Residual and eigenvectors at a located zero.
    pub fn record(&self, lambda: C64, alg_mult: u32) -> Result<EigRecord, SpectrumError> {
        let d = self.pencil.det_reduced(lambda)?.norm();
        let scale = circle_nodes(lambda, 0.1, 16)
            .into_iter()
            .map(|z| self.det(z).norm())
            .fold(0.0, f64::max);
        let residual = if scale > 0.0 { d / scale } else { d };
        let z = C64::i() * lambda;
        let (basis, mut eigvecs) = if self.pencil.is_degenerate(lambda) || z.norm() < self.tol.merge {
            if z.norm() < 1e-6 && self.pencil.orbit().m() == 1 {
                let (_, v) = self.pencil.special_lambda_zero(self.tol.null_tol)?;
                (VectorBasis::LambdaZero, v)
            } else {
                (VectorBasis::Unavailable, Vec::new())
            }
        } else {
            let m = self.pencil.matrix_unchecked(lambda);
            let scale = self.pencil.matrix_derivative(lambda, 1).map(|d| d.norm()).unwrap_or(0.0);
            let mut v = null_space_scaled(&m, self.tol.null_tol, scale);
            if v.is_empty() {
                v = smallest_singular_vector(&m).into_iter().collect();
            }
            (VectorBasis::Power, v)
        };
        eigvecs.truncate(alg_mult as usize);
        Ok(EigRecord { lambda, alg_mult, residual, eigvecs, basis })
    }
}

/// All central power sums `Σ (w_i - mean)^j`, `j = 2..=k`, vanish.
fn is_single_cluster(p: &[C64], mean: C64) -> bool {
    let k = p.len() - 1;
    (2..=k).all(|j| {
        let mut binom = 1.0;
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..=j {
            acc += p[r] * (-mean).powu((j - r) as u32) * binom;
            binom = binom * (j - r) as f64 / (r + 1) as f64;
        }
        acc.norm() < 1e-9
    })
}

fn smallest_singular_vector(m: &nalgebra::DMatrix<C64>) -> Option<DVector<C64>> {
    let svd = m.clone().svd(false, true);
    let (i, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    Some(svd.v_t?.row(i).adjoint())
}

fn merge(zeros: Vec<(C64, u32)>, tol: f64) -> Vec<(C64, u32)> {
    let mut out: Vec<(C64, u32)> = Vec::new();
    for (z, k) in zeros {
        if let Some(last) = out.iter_mut().find(|(y, _)| (*y - z).norm() < tol) {
            let total = last.1 + k;
            last.0 = (last.0 * last.1 as f64 + z * k as f64) / total as f64;
            last.1 = total;
        } else {
            out.push((z, k));
        }
    }
    out
}

#[cfg(test)]
mod tests;
