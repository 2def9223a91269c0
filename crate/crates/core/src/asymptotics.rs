//! Singular exponents of the corner expansion between two smoothness levels.
//!
//! For a solution in `W^{l+2m}` with right-hand side of smoothness `l1`, the
//! expansion near a corner carries `r^{iλ_n + s} (i ln r)^q` for every
//! eigenvalue in the strip `1 - l1 - 2m < Im λ ≤ 1 - l - 2m`, plus the power
//! terms `r^s`, `l + 2m ≤ s ≤ l1 + 2m - 1`.

use thiserror::Error;

use crate::algebra::C64;
use crate::pencil::{OrbitSpec, Pencil};
use crate::spectrum::{default_re_window, Rect, Solver, SpectrumError};
use crate::verdict::Analysis;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("l1 = {l1} must exceed l = {l}")]
    NotAJump { l: u32, l1: u32 },
    #[error("the bottom line Im λ = {height} contains the eigenvalue {:.10}{:+.10}i", lambda.re, lambda.im)]
    BottomLineOccupied { height: f64, lambda: C64 },
}

/// One eigenvalue of the strip with its range of shifts `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentEntry {
    pub lambda: C64,
    pub alg_mult: u32,
    pub on_top_edge: bool,
    pub s_first: u32,
    pub s_last: u32,
    /// Upper bound for the log power `q`; not exact.
    pub log_power_bound: u32,
    /// Other strip eigenvalues whose exponents `iλ + s` coincide with these.
    pub resonances: u32,
}

impl ExponentEntry {
    pub fn shifts(&self) -> std::ops::RangeInclusive<u32> {
        self.s_first..=self.s_last
    }

    /// `iλ + s` for every shift.
    pub fn exponents(&self) -> Vec<C64> {
        self.shifts().map(|s| C64::i() * self.lambda + s as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentTable {
    pub l: u32,
    pub l1: u32,
    pub m: u32,
    /// `(bottom, top]` in `Im λ`.
    pub strip: (f64, f64),
    pub re_window: f64,
    pub entries: Vec<ExponentEntry>,
    /// Range of the pure powers `r^s`.
    pub polynomial_band: (u32, u32),
}

impl ExponentTable {
    /// No eigenvalue in the strip: the solution gains the full smoothness.
    pub fn is_smooth(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `floor(x)`, snapping values within `tol` of an integer onto it.
fn floor_snapped(x: f64, tol: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() < tol {
        r as i64
    } else {
        x.floor() as i64
    }
}

/// Whether `a` and `b` differ by `-i k` with `k` a nonzero integer small
/// enough that their shifted exponents meet.
fn resonant(a: &ExponentEntry, b: &ExponentEntry, tol: f64) -> bool {
    let d = C64::i() * (b.lambda - a.lambda);
    if d.im.abs() > tol || (d.re - d.re.round()).abs() > tol || d.re.round() == 0.0 {
        return false;
    }
    let k = d.re.round() as i64;
    // iλ_a + s = iλ_b + s'  ⇔  s - s' = k
    b.shifts().any(|s| {
        let t = s as i64 + k;
        t >= a.s_first as i64 && t <= a.s_last as i64
    })
}

pub fn exponent_table(orbit: &OrbitSpec, l: u32, l1: u32, settings: &Analysis) -> Result<ExponentTable, AsymptoticsError> {
    if l1 <= l {
        return Err(AsymptoticsError::NotAJump { l, l1 });
    }
    let m = orbit.m();
    let top = 1.0 - l as f64 - 2.0 * m as f64;
    let bottom = 1.0 - l1 as f64 - 2.0 * m as f64;
    let tol = &settings.tol;
    let re_window = settings.re_window.unwrap_or_else(|| default_re_window(orbit));
    let pencil = Pencil::new(orbit.clone());
    let solver = Solver::new(&pencil, *tol, settings.seed);

    let scan = solver.eigenvalues_on_line(bottom, re_window)?;
    if let Some(e) = scan.on_line.first() {
        let snap = |x: f64| if x.abs() < tol.delta_line { 0.0 } else { x };
        let lambda = C64::new(snap(e.lambda.re), snap(e.lambda.im));
        return Err(AsymptoticsError::BottomLineOccupied { height: bottom, lambda });
    }

    let region = Rect::new((-re_window, re_window), (bottom + tol.delta_line, top + tol.delta_band));
    let found = solver.eigenvalues_in_region(region)?;
    let mut entries: Vec<ExponentEntry> = found
        .into_iter()
        .filter(|e| e.lambda.im > bottom + tol.delta_line && e.lambda.im < top + tol.delta_line)
        .map(|e| {
            let on_top_edge = (e.lambda.im - top).abs() < tol.delta_line;
            let s_last = floor_snapped(l1 as f64 + 2.0 * m as f64 - 1.0 + e.lambda.im, tol.delta_line);
            ExponentEntry {
                lambda: e.lambda,
                alg_mult: e.alg_mult,
                on_top_edge,
                s_first: u32::from(on_top_edge),
                s_last: s_last.max(0) as u32,
                log_power_bound: e.alg_mult.saturating_sub(1),
                resonances: 0,
            }
        })
        .collect();
    let counts: Vec<u32> = entries
        .iter()
        .map(|a| entries.iter().filter(|b| !std::ptr::eq(*b, a) && resonant(a, b, tol.delta_line)).count() as u32)
        .collect();
    for (e, n) in entries.iter_mut().zip(counts) {
        e.resonances = n;
        e.log_power_bound += n;
    }
    Ok(ExponentTable {
        l,
        l1,
        m,
        strip: (bottom, top),
        re_window,
        entries,
        polynomial_band: (l + 2 * m, l1 + 2 * m - 1),
    })
}

#[cfg(test)]
mod tests;
