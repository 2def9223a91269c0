//! Characteristic roots of `τ ↦ P(1, τ)`.

use nalgebra::{DMatrix, Schur};

use super::homop::HomOp;
use super::scalar::C64;
use super::AlgebraError;

const REPEAT_TOL: f64 = 1e-8;
const REAL_TOL: f64 = 1e-9;

/// Roots of `P(1, τ)` for an elliptic `P` of even degree `2m ≥ 2`, sorted by
/// `(Im, Re)`.
pub fn char_roots(p: &HomOp) -> Result<Vec<C64>, AlgebraError> {
    let deg = p.degree() as usize;
    if deg < 2 || deg % 2 == 1 {
        return Err(AlgebraError::OddOrder(p.degree()));
    }
    let coeffs: Vec<C64> = p.coeffs().iter().map(|c| c.to_c64()).collect();
    let lead = coeffs[deg];
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if lead.norm() <= 1e-14 * scale || lead.norm() == 0.0 {
        return Err(AlgebraError::DegenerateLeading);
    }
    let mut roots = poly_roots(&coeffs).ok_or(AlgebraError::RootFinding)?;
    for (a, ra) in roots.iter().enumerate() {
        for rb in &roots[a + 1..] {
            if (ra - rb).norm() < REPEAT_TOL * (1.0 + ra.norm()) {
                return Err(AlgebraError::RepeatedRoot(*ra));
            }
            // a double root comes back split by about sqrt(eps); it is a simple root of P'
            if (ra - rb).norm() < 1e-4 * (1.0 + ra.norm()) {
                let dcoeffs: Vec<C64> =
                    coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
                let mid = polish(&dcoeffs, (ra + rb) / 2.0);
                let (v, _) = eval_with_derivative(&coeffs, mid);
                if v.norm() <= 1e-12 * scale * (1.0 + mid.norm()).powi(deg as i32) {
                    return Err(AlgebraError::RepeatedRoot(mid));
                }
            }
        }
    }
    if let Some(r) = roots.iter().find(|r| r.im.abs() < REAL_TOL * (1.0 + r.norm())) {
        return Err(AlgebraError::RealRoot(*r));
    }
    roots.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    Ok(roots)
}

/// Roots of `Σ c[i] t^i` (leading coefficient nonzero) from the companion
/// matrix, each polished by Newton steps.
pub fn poly_roots(coeffs: &[C64]) -> Option<Vec<C64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    if deg == 0 {
        return Some(Vec::new());
    }
    let mut comp = DMatrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    // QR can stall on exactly repeated roots; a unitary phase similarity unblocks it
    let phases: Vec<C64> = (0..deg).map(|k| C64::from_polar(1.0, 0.7 * k as f64 + 0.3)).collect();
    let phased = DMatrix::from_fn(deg, deg, |i, j| phases[i] * comp[(i, j)] * phases[j].conj());
    let eig = Schur::try_new(comp, 1e-14, 1000 * deg)
        .and_then(|s| s.eigenvalues())
        .or_else(|| Schur::try_new(phased, 1e-14, 1000 * deg).and_then(|s| s.eigenvalues()))?;
    Some(eig.iter().map(|&t| polish(coeffs, t)).collect())
}

fn eval_with_derivative(coeffs: &[C64], t: C64) -> (C64, C64) {
    let mut v = C64::new(0.0, 0.0);
    let mut d = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        d = d * t + v;
        v = v * t + c;
    }
    (v, d)
}

fn polish(coeffs: &[C64], mut t: C64) -> C64 {
    for _ in 0..8 {
        let (v, d) = eval_with_derivative(coeffs, t);
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        t -= step;
        if step.norm() <= 1e-16 * (1.0 + t.norm()) {
            break;
        }
    }
    t
}
