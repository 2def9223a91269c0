//! Fredholm decisions for the operators `L` (Sobolev spaces), `L_a`
//! (weighted spaces) and `L_B` (homogeneous nonlocal conditions).

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Angle, Direction};
use crate::condition::{check_condition, DependencyReport};
use crate::jordan::{classify, ChainAnalysis, JordanError};
use crate::pencil::{OrbitSpec, Pencil, Side};
use crate::spectrum::{default_re_window, EigRecord, LineScan, Solver, SpectrumError};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerdictError {
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error("missing assumption: {0}")]
    MissingAssumption(&'static str),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

/// Orbits of one problem with the smoothness index and assumption flags.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub orbits: Vec<OrbitSpec>,
    pub l: u32,
    pub weight: Option<f64>,
    /// The consistency condition relating the global transformations; it
    /// cannot be read off the orbit data and is taken on trust.
    pub assume_consistency: bool,
    pub normality_checked: bool,
}

impl ProblemSpec {
    /// Problem with normality evaluated from the orbits.
    pub fn new(orbits: Vec<OrbitSpec>, l: u32) -> Result<Self, VerdictError> {
        let Some(first) = orbits.first() else {
            return Err(VerdictError::InvalidProblem("no orbits".into()));
        };
        let m = first.m();
        if orbits.iter().any(|o| o.m() != m) {
            return Err(VerdictError::InvalidProblem("orbits must share the order 2m".into()));
        }
        let normality_checked = orbits.iter().all(check_normality);
        Ok(Self { orbits, l, weight: None, assume_consistency: false, normality_checked })
    }

    pub fn with_weight(mut self, a: f64) -> Result<Self, VerdictError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(VerdictError::InvalidProblem(format!("weight a = {a} must be positive")));
        }
        self.weight = Some(a);
        Ok(self)
    }

    pub fn assuming_consistency(mut self, yes: bool) -> Self {
        self.assume_consistency = yes;
        self
    }

    pub fn m(&self) -> u32 {
        self.orbits[0].m()
    }

    /// `1 - l - 2m`.
    pub fn critical_height(&self) -> f64 {
        1.0 - self.l as f64 - 2.0 * self.m() as f64
    }
}

/// Local boundary operators on each side: distinct orders up to `2m - 1`,
/// none vanishing on the inward normal.
pub fn check_normality(orbit: &OrbitSpec) -> bool {
    let m = orbit.m();
    for (j, comp) in orbit.components().iter().enumerate() {
        for side in Side::BOTH {
            let ray = side.ray(&comp.half_opening);
            let normal = match side {
                Side::Lower => Direction::new(ray).rotated(&Angle::pi_fraction(1, 2)),
                Side::Upper => Direction::new(ray).rotated(&Angle::pi_fraction(-1, 2)),
            };
            let (c, s) = normal.components();
            let rows: Vec<_> = orbit.rows().iter().filter(|r| r.component == j && r.side == side).collect();
            let mut orders: Vec<u32> = rows.iter().map(|r| r.order).collect();
            orders.sort_unstable();
            orders.dedup();
            if orders.len() != rows.len() || orders.iter().any(|&o| o > 2 * m - 1) {
                return false;
            }
            for r in rows {
                let op = &r.local_term().op;
                let v = op.evaluate(c.to_c64(), s.to_c64());
                if v.norm() <= 1e-12 * op.max_abs_coeff().max(f64::MIN_POSITIVE) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OperatorTag {
    L,
    #[serde(rename = "L_a")]
    La,
    #[serde(rename = "L_B")]
    LB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Fredholm,
    NotFredholm,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reason {
    /// No eigenvalue on the critical line of any orbit.
    LineFree,
    /// Eigenvalues on the critical line.
    EigenvalueOnLine,
    /// An improper eigenvalue on the line: the image is not closed.
    ImageNotClosed,
    /// Only the proper eigenvalue, and `l = 0`.
    ProperOnly,
    ConditionHolds,
    ConditionFails,
    /// An eigenvalue lies within the indeterminacy margin of the line.
    NearLine,
    /// An improper eigenvalue is present but the local conditions were not
    /// checked to be normal.
    NormalityUnknown,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Eigenvalue { orbit: usize, record: EigRecord },
    Chain { orbit: usize, analysis: ChainAnalysis },
    Condition { orbit: usize, report: DependencyReport },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub operator: OperatorTag,
    pub outcome: Outcome,
    pub reason: Reason,
    pub witnesses: Vec<Witness>,
    /// Distance to the line of the closest eigenvalue found in the band but
    /// not on the line.
    pub margin: Option<f64>,
    pub height: f64,
    pub re_window: f64,
}

/// Numerical settings shared by all verdicts.
#[derive(Clone, Debug, Default)]
pub struct Analysis {
    pub tol: Tolerances,
    /// `None` uses the default window of each orbit.
    pub re_window: Option<f64>,
    pub seed: u64,
}

struct OrbitLine {
    pencil: Pencil,
    scan: LineScan,
}

impl Analysis {
    fn window(&self, orbit: &OrbitSpec) -> f64 {
        self.re_window.unwrap_or_else(|| default_re_window(orbit))
    }

    fn scan_lines(&self, problem: &ProblemSpec, height: f64) -> Result<Vec<OrbitLine>, VerdictError> {
        use rayon::prelude::*;
        problem
            .orbits
            .par_iter()
            .map(|orbit| {
                let pencil = Pencil::new(orbit.clone());
                let scan = Solver::new(&pencil, self.tol, self.seed).eigenvalues_on_line(height, self.window(orbit))?;
                Ok(OrbitLine { pencil, scan })
            })
            .collect()
    }

    fn margin(lines: &[OrbitLine]) -> Option<f64> {
        lines.iter().filter_map(|o| o.scan.margin()).reduce(f64::min)
    }

    fn max_window(&self, problem: &ProblemSpec) -> f64 {
        problem.orbits.iter().map(|o| self.window(o)).fold(0.0, f64::max)
    }

    fn line_verdict(&self, problem: &ProblemSpec, operator: OperatorTag, height: f64) -> Result<Verdict, VerdictError> {
        let lines = self.scan_lines(problem, height)?;
        let margin = Self::margin(&lines);
        let witnesses: Vec<Witness> = lines
            .iter()
            .enumerate()
            .flat_map(|(orbit, o)| o.scan.on_line.iter().map(move |r| Witness::Eigenvalue { orbit, record: r.clone() }))
            .collect();
        let near = margin.is_some_and(|d| d < self.tol.indeterminate_margin());
        let (outcome, reason) = if !witnesses.is_empty() {
            (Outcome::NotFredholm, Reason::EigenvalueOnLine)
        } else if near {
            (Outcome::Indeterminate, Reason::NearLine)
        } else {
            (Outcome::Fredholm, Reason::LineFree)
        };
        Ok(Verdict { operator, outcome, reason, witnesses, margin, height, re_window: self.max_window(problem) })
    }

    /// `L`: Fredholm iff no orbit has an eigenvalue on `Im λ = 1 - l - 2m`.
    pub fn verdict_l(&self, problem: &ProblemSpec) -> Result<Verdict, VerdictError> {
        self.line_verdict(problem, OperatorTag::L, problem.critical_height())
    }

    /// `L_a`: the same test on `Im λ = a + 1 - l - 2m`.
    pub fn verdict_l_weighted(&self, problem: &ProblemSpec) -> Result<Verdict, VerdictError> {
        let a = problem
            .weight
            .ok_or_else(|| VerdictError::InvalidProblem("weighted verdict needs a weight a > 0".into()))?;
        self.line_verdict(problem, OperatorTag::La, a + problem.critical_height())
    }

    /// `L_B`: improper eigenvalues on the line rule Fredholmness out; with only
    /// the proper one present the rank condition decides for `l ≥ 1`.
    pub fn verdict_lb(&self, problem: &ProblemSpec) -> Result<Verdict, VerdictError> {
        let height = problem.critical_height();
        let lines = self.scan_lines(problem, height)?;
        let margin = Self::margin(&lines);
        let re_window = self.max_window(problem);
        let verdict = |outcome, reason, witnesses| Verdict {
            operator: OperatorTag::LB,
            outcome,
            reason,
            witnesses,
            margin,
            height,
            re_window,
        };
        let near = margin.is_some_and(|d| d < self.tol.indeterminate_margin());

        let mut improper = Vec::new();
        let mut proper_orbits = Vec::new();
        for (p, o) in lines.iter().enumerate() {
            let mut all_proper = !o.scan.on_line.is_empty();
            for rec in &o.scan.on_line {
                let analysis = classify(&o.pencil, rec.lambda, problem.l, &self.tol)?;
                if !analysis.classification.is_proper() {
                    all_proper = false;
                    improper.push(Witness::Chain { orbit: p, analysis });
                }
            }
            if all_proper {
                proper_orbits.push(p);
            }
        }
        if !improper.is_empty() {
            return Ok(if problem.normality_checked {
                verdict(Outcome::NotFredholm, Reason::ImageNotClosed, improper)
            } else {
                verdict(Outcome::Indeterminate, Reason::NormalityUnknown, improper)
            });
        }
        if near {
            return Ok(verdict(Outcome::Indeterminate, Reason::NearLine, Vec::new()));
        }
        if proper_orbits.is_empty() {
            return Ok(verdict(Outcome::Fredholm, Reason::LineFree, Vec::new()));
        }
        if !problem.assume_consistency {
            return Err(VerdictError::MissingAssumption(
                "the proper-eigenvalue case requires the consistency assumption",
            ));
        }
        if problem.l == 0 {
            return Ok(verdict(Outcome::Fredholm, Reason::ProperOnly, Vec::new()));
        }
        let reports: Vec<Witness> = proper_orbits
            .iter()
            .map(|&p| Witness::Condition {
                orbit: p,
                report: check_condition(&problem.orbits[p], problem.l, self.tol.rank_tol),
            })
            .collect();
        let holds = reports.iter().all(|w| matches!(w, Witness::Condition { report, .. } if report.condition_holds));
        Ok(if holds {
            verdict(Outcome::Fredholm, Reason::ConditionHolds, reports)
        } else {
            let failing = reports
                .into_iter()
                .filter(|w| matches!(w, Witness::Condition { report, .. } if !report.condition_holds))
                .collect();
            verdict(Outcome::NotFredholm, Reason::ConditionFails, failing)
        })
    }
}
