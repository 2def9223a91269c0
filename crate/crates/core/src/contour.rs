//! Phase tracking along closed contours and trapezoid rules on circles.

use std::f64::consts::{FRAC_PI_4, LN_2, TAU};

use thiserror::Error;

use crate::algebra::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContourError {
    #[error("contour passes too close to a zero near {0}")]
    BoundaryTooClose(C64),
    #[error("non-finite function value at {0}")]
    NonFinite(C64),
}

/// Accumulated argument change of `f` along `path(t)`, `t ∈ [t0, t1]`.
///
/// Steps are at most `(t1 - t0) / pieces` and follow the observed rate of
/// change of `log f`, so they shrink when the path approaches a zero. A step
/// is rejected if it changes the argument by π/4 or more, or the modulus by
/// a factor above 2; a rejected step shorter than `min_len` is a failure.
pub fn phase_change<F, P>(f: &F, path: &P, t0: f64, t1: f64, pieces: usize, min_len: f64) -> Result<f64, ContourError>
where
    F: Fn(C64) -> C64,
    P: Fn(f64) -> C64,
{
    let eval = |t: f64| -> Result<(C64, C64), ContourError> {
        let z = path(t);
        let v = f(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(ContourError::NonFinite(z));
        }
        if v.norm() == 0.0 {
            return Err(ContourError::BoundaryTooClose(z));
        }
        Ok((z, v))
    };
    let max_dt = (t1 - t0) / pieces.max(1) as f64;
    let mut total = 0.0;
    let mut t = t0;
    let (mut prev_z, mut prev_v) = eval(t0)?;
    let mut dt = max_dt;
    while t < t1 {
        let last = t + dt >= t1;
        let next = if last { t1 } else { t + dt };
        let (z, v) = eval(next)?;
        let ratio = v / prev_v;
        let d = ratio.arg();
        let g = ratio.norm().ln();
        if d.abs() < FRAC_PI_4 && g.abs() < LN_2 {
            total += d;
            let taken = next - t;
            let rate = d.hypot(g) / taken;
            dt = max_dt.min(2.0 * taken).min(0.3 / rate.max(f64::MIN_POSITIVE));
            t = next;
            prev_z = z;
            prev_v = v;
            if last {
                break;
            }
            continue;
        }
        if (z - prev_z).norm() < min_len {
            return Err(ContourError::BoundaryTooClose(z));
        }
        dt = 0.5 * (next - t);
    }
    Ok(total)
}

/// Winding number of `f` around 0 along the closed polygon `vertices`.
pub fn winding_polygon<F: Fn(C64) -> C64>(f: &F, vertices: &[C64], step: f64, min_len: f64) -> Result<i64, ContourError> {
    let mut total = 0.0;
    for (i, &a) in vertices.iter().enumerate() {
        let b = vertices[(i + 1) % vertices.len()];
        let pieces = ((b - a).norm() / step).ceil() as usize;
        total += phase_change(f, &|t: f64| a + (b - a) * t, 0.0, 1.0, pieces, min_len)?;
    }
    rounded_turns(total, vertices[0])
}

/// Winding number of `f` around 0 along the circle `|z - center| = radius`.
pub fn winding_circle<F: Fn(C64) -> C64>(f: &F, center: C64, radius: f64, min_len: f64) -> Result<i64, ContourError> {
    let path = |t: f64| center + C64::from_polar(radius, TAU * t);
    let pieces = ((TAU * radius / 0.05).ceil() as usize).max(16);
    let total = phase_change(f, &path, 0.0, 1.0, pieces, min_len)?;
    rounded_turns(total, center + radius)
}

fn rounded_turns(total: f64, at: C64) -> Result<i64, ContourError> {
    let turns = total / TAU;
    let r = turns.round();
    if (turns - r).abs() > 0.1 {
        return Err(ContourError::BoundaryTooClose(at));
    }
    Ok(r as i64)
}

/// `k` equispaced nodes on a circle, starting on the positive real direction.
pub fn circle_nodes(center: C64, radius: f64, k: usize) -> Vec<C64> {
    (0..k).map(|j| center + C64::from_polar(radius, TAU * j as f64 / k as f64)).collect()
}

/// Trapezoid approximation of `(1/2πi) ∮ g(z) dz` from values at `circle_nodes`.
pub fn circle_integral(values: &[C64], center: C64, nodes: &[C64]) -> C64 {
    let k = values.len() as f64;
    values.iter().zip(nodes).map(|(v, z)| v * (z - center)).sum::<C64>() / k
}

/// Unwrapped argument change along a straight parameter grid; used for
/// continuing logarithms from a reference point.
pub fn unwrapped_arg<F: Fn(f64) -> C64>(f: &F, t0: f64, t1: f64, max_step: f64) -> f64 {
    let n = (((t1 - t0).abs() / max_step).ceil() as usize).max(1);
    let mut prev = f(t0);
    let mut acc = prev.arg();
    for i in 1..=n {
        let v = f(t0 + (t1 - t0) * i as f64 / n as f64);
        acc += (v / prev).arg();
        prev = v;
    }
    acc
}
