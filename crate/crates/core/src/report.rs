//! Command results as serializable sections and plain-text tables.
//!
//! Every section carries the tolerances it consulted. Output depends only on
//! the configuration, the overrides and the seed.

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::C64;
use crate::asymptotics::{exponent_table, ExponentTable};
use crate::condition::{check_condition, square_system_singular, Dependency, DependencyReport};
use crate::config::{ConfigDocument, Resolved, SCHEMA_VERSION};
use crate::jordan::{classify, ChainAnalysis, Classification};
use crate::pencil::Pencil;
use crate::spectrum::{default_re_window, EigRecord, LineScan, Rect, Solver, VectorBasis};
use crate::tolerance::Tolerances;
use crate::verdict::{OperatorTag, Outcome, Reason, Verdict, VerdictError, Witness};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Classify,
    Condition,
    Verdict,
    Asymptotics,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        // avoid "-0" in output
        Self { re: z.re + 0.0, im: z.im + 0.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueView {
    pub lambda: Complex,
    pub alg_mult: u32,
    pub geom_mult: usize,
    pub residual: f64,
    pub basis: VectorBasis,
}

impl From<&EigRecord> for EigenvalueView {
    fn from(e: &EigRecord) -> Self {
        Self {
            lambda: e.lambda.into(),
            alg_mult: e.alg_mult,
            geom_mult: e.geometric_mult(),
            residual: e.residual,
            basis: e.basis,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LineView {
    pub height: f64,
    pub re_window: f64,
    pub on_line: Vec<EigenvalueView>,
    pub near: Vec<EigenvalueView>,
    pub margin: Option<f64>,
}

impl From<&LineScan> for LineView {
    fn from(s: &LineScan) -> Self {
        Self {
            height: s.height,
            re_window: s.re_window,
            on_line: s.on_line.iter().map(Into::into).collect(),
            near: s.near.iter().map(Into::into).collect(),
            margin: s.margin(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumView {
    pub orbit: usize,
    pub region: Rect,
    pub eigenvalues: Vec<EigenvalueView>,
    pub critical_line: LineView,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainView {
    pub has_associate: bool,
    pub chain_residual: f64,
    pub polynomial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationView {
    pub lambda: Complex,
    pub classification: Classification,
    pub block_sigma: Option<f64>,
    pub chains: Vec<ChainView>,
    pub certificate_residual: Option<f64>,
}

impl From<&ChainAnalysis> for ClassificationView {
    fn from(a: &ChainAnalysis) -> Self {
        Self {
            lambda: a.lambda.into(),
            classification: a.classification,
            block_sigma: a.block_sigma.is_finite().then_some(a.block_sigma),
            chains: a
                .chains
                .iter()
                .map(|c| ChainView { has_associate: c.has_associate, chain_residual: c.chain_residual, polynomial: c.polynomial })
                .collect(),
            certificate_residual: a.certificate.as_ref().map(|c| c.residual),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyView {
    pub orbit: usize,
    pub critical: Complex,
    pub critical_is_eigenvalue: bool,
    pub line: LineView,
    pub classifications: Vec<ClassificationView>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DependencyView {
    pub row: String,
    /// `(coefficient, row)` pairs of the expansion.
    pub expansion: Vec<(String, String)>,
}

impl From<&Dependency> for DependencyView {
    fn from(d: &Dependency) -> Self {
        Self {
            row: d.row.to_string(),
            expansion: d
                .coefficients
                .iter()
                .zip(&d.over)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, r)| (c.to_string(), r.to_string()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionView {
    pub orbit: usize,
    pub l: u32,
    pub rank_b: usize,
    pub rank_all: usize,
    pub p_rows: usize,
    pub condition_holds: bool,
    pub independent_b: Vec<usize>,
    pub dependent_b: Vec<DependencyView>,
    pub dependent_p: Vec<DependencyView>,
    pub square_system_singular: bool,
    /// Whether `i(1 - l - 2m)` was found in the spectrum.
    pub critical_is_eigenvalue: bool,
    pub consistent: bool,
}

impl ConditionView {
    fn new(orbit: usize, r: &DependencyReport, singular: bool, critical: bool) -> Self {
        Self {
            orbit,
            l: r.l,
            rank_b: r.rank_b,
            rank_all: r.rank_all,
            p_rows: r.p_rows,
            condition_holds: r.condition_holds,
            independent_b: r.independent_b.iter().map(|i| i + 1).collect(),
            dependent_b: r.dependent_b.iter().map(Into::into).collect(),
            dependent_p: r.dependent_p.iter().map(Into::into).collect(),
            square_system_singular: singular,
            critical_is_eigenvalue: critical,
            consistent: singular == critical,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WitnessView {
    Eigenvalue { orbit: usize, lambda: Complex, alg_mult: u32 },
    Chain { orbit: usize, analysis: ClassificationView },
    Condition { orbit: usize, rank_b: usize, rank_all: usize, p_rows: usize, dependent_p: Vec<DependencyView> },
}

impl From<&Witness> for WitnessView {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Eigenvalue { orbit, record } => {
                WitnessView::Eigenvalue { orbit: orbit + 1, lambda: record.lambda.into(), alg_mult: record.alg_mult }
            }
            Witness::Chain { orbit, analysis } => WitnessView::Chain { orbit: orbit + 1, analysis: analysis.into() },
            Witness::Condition { orbit, report } => WitnessView::Condition {
                orbit: orbit + 1,
                rank_b: report.rank_b,
                rank_all: report.rank_all,
                p_rows: report.p_rows,
                dependent_p: report.dependent_p.iter().map(Into::into).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictView {
    pub operator: OperatorTag,
    pub outcome: Outcome,
    pub reason: Reason,
    pub criterion: &'static str,
    pub height: f64,
    pub re_window: f64,
    pub margin: Option<f64>,
    pub witnesses: Vec<WitnessView>,
}

impl From<&Verdict> for VerdictView {
    fn from(v: &Verdict) -> Self {
        let criterion = match v.operator {
            OperatorTag::L => "Fredholm iff no orbit has an eigenvalue on Im λ = 1 - l - 2m",
            OperatorTag::La => "Fredholm iff no orbit has an eigenvalue on Im λ = a + 1 - l - 2m",
            OperatorTag::LB => {
                "improper eigenvalues on the line exclude Fredholmness; with the proper one only, \
                 the rank condition on the differentiated operators decides for l >= 1"
            }
        };
        Self {
            operator: v.operator,
            outcome: v.outcome,
            reason: v.reason,
            criterion,
            height: v.height,
            re_window: v.re_window,
            margin: v.margin,
            witnesses: v.witnesses.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictEntry {
    pub operator: OperatorTag,
    #[serde(flatten)]
    pub result: Entry<VerdictView>,
}

/// A result or the error that prevented it.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Entry<T> {
    Ok(T),
    Error(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentView {
    pub lambda: Complex,
    pub alg_mult: u32,
    pub on_top_edge: bool,
    pub shifts: [u32; 2],
    pub exponents: Vec<Complex>,
    pub log_power_bound: u32,
    pub bound_is_exact: bool,
    pub resonances: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticsView {
    pub orbit: usize,
    pub l: u32,
    pub l1: u32,
    pub strip: [f64; 2],
    pub re_window: f64,
    pub polynomial_band: [u32; 2],
    pub smooth: bool,
    pub entries: Vec<ExponentView>,
}

impl AsymptoticsView {
    fn new(orbit: usize, t: &ExponentTable) -> Self {
        Self {
            orbit,
            l: t.l,
            l1: t.l1,
            strip: [t.strip.0, t.strip.1],
            re_window: t.re_window,
            polynomial_band: [t.polynomial_band.0, t.polynomial_band.1],
            smooth: t.is_smooth(),
            entries: t
                .entries
                .iter()
                .map(|e| ExponentView {
                    lambda: e.lambda.into(),
                    alg_mult: e.alg_mult,
                    on_top_edge: e.on_top_edge,
                    shifts: [e.s_first, e.s_last],
                    exponents: e.exponents().into_iter().map(Into::into).collect(),
                    log_power_bound: e.log_power_bound,
                    bound_is_exact: false,
                    resonances: e.resonances,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "command", content = "orbits", rename_all = "lowercase")]
pub enum Section {
    Spectrum(Vec<Entry<SpectrumView>>),
    Classify(Vec<Entry<ClassifyView>>),
    Condition(Vec<Entry<ConditionView>>),
    Verdict(Vec<VerdictEntry>),
    Asymptotics(Vec<Entry<AsymptoticsView>>),
}

/// Which tolerances a command consults.
fn tolerances_used(cmd: Command) -> &'static [&'static str] {
    match cmd {
        Command::Spectrum => &["delta_line", "delta_band", "merge", "boundary_min", "null_tol"],
        Command::Classify => &["delta_line", "delta_band", "merge", "boundary_min", "null_tol", "tol_chain"],
        Command::Condition => &["rank_tol", "delta_line", "delta_band", "merge", "boundary_min"],
        Command::Verdict => {
            &["delta_line", "delta_band", "merge", "boundary_min", "null_tol", "tol_chain", "rank_tol"]
        }
        Command::Asymptotics => &["delta_line", "delta_band", "merge", "boundary_min"],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub report_schema_version: u32,
    pub config_schema_version: u32,
    pub tool_version: &'static str,
    pub command: Command,
    pub config: ConfigDocument,
    pub tolerances: Tolerances,
    pub tolerances_used: &'static [&'static str],
    pub seed: u64,
    pub l: u32,
    pub l1: Option<u32>,
    pub weight: Option<f64>,
    pub assume_consistency: bool,
    pub section: Section,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// 0 on success, 2 if a verdict is indeterminate, 1 if any part failed.
    pub fn exit_code(&self) -> i32 {
        fn failed<T>(entries: &[Entry<T>]) -> bool {
            entries.iter().any(|e| matches!(e, Entry::Error(_)))
        }
        let (error, indeterminate) = match &self.section {
            Section::Spectrum(v) => (failed(v), false),
            Section::Classify(v) => (failed(v), false),
            Section::Condition(v) => (failed(v), false),
            Section::Asymptotics(v) => (failed(v), false),
            Section::Verdict(v) => (
                v.iter().any(|e| matches!(e.result, Entry::Error(_))),
                v.iter().any(|e| matches!(&e.result, Entry::Ok(r) if r.outcome == Outcome::Indeterminate)),
            ),
        };
        if error {
            1
        } else if indeterminate {
            2
        } else {
            0
        }
    }
}

fn entry<T, E: std::fmt::Display>(r: Result<T, E>) -> Entry<T> {
    match r {
        Ok(v) => Entry::Ok(v),
        Err(e) => Entry::Error(e.to_string()),
    }
}

fn critical(resolved: &Resolved, m: u32) -> C64 {
    C64::new(0.0, 1.0 - resolved.l as f64 - 2.0 * m as f64)
}

fn window(resolved: &Resolved, orbit: usize) -> f64 {
    resolved.analysis.re_window.unwrap_or_else(|| default_re_window(&resolved.orbits[orbit]))
}

fn line_scan(resolved: &Resolved, orbit: usize, pencil: &Pencil) -> Result<LineScan, crate::spectrum::SpectrumError> {
    let a = &resolved.analysis;
    let height = critical(resolved, pencil.orbit().m()).im;
    Solver::new(pencil, a.tol, a.seed).eigenvalues_on_line(height, window(resolved, orbit))
}

fn spectrum_view(resolved: &Resolved, orbit: usize) -> Result<SpectrumView, crate::spectrum::SpectrumError> {
    let pencil = Pencil::new(resolved.orbits[orbit].clone());
    let a = &resolved.analysis;
    let w = window(resolved, orbit);
    let region = resolved.region.unwrap_or(Rect::new((-w, w), (-5.0, 5.0)));
    let eigenvalues = Solver::new(&pencil, a.tol, a.seed).eigenvalues_in_region(region)?;
    let scan = line_scan(resolved, orbit, &pencil)?;
    Ok(SpectrumView {
        orbit: orbit + 1,
        region,
        eigenvalues: eigenvalues.iter().map(Into::into).collect(),
        critical_line: (&scan).into(),
    })
}

fn classify_view(resolved: &Resolved, orbit: usize) -> Result<ClassifyView, VerdictError> {
    let pencil = Pencil::new(resolved.orbits[orbit].clone());
    let scan = line_scan(resolved, orbit, &pencil)?;
    let lambda0 = critical(resolved, pencil.orbit().m());
    let tol = &resolved.analysis.tol;
    let critical_is_eigenvalue = scan.on_line.iter().any(|e| (e.lambda - lambda0).norm() < tol.delta_line);
    let classifications = scan
        .on_line
        .iter()
        .map(|e| classify(&pencil, e.lambda, resolved.l, tol).map(|a| (&a).into()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ClassifyView {
        orbit: orbit + 1,
        critical: lambda0.into(),
        critical_is_eigenvalue,
        line: (&scan).into(),
        classifications,
    })
}

fn condition_view(resolved: &Resolved, orbit: usize) -> Result<ConditionView, VerdictError> {
    let spec = &resolved.orbits[orbit];
    let tol = &resolved.analysis.tol;
    let report = check_condition(spec, resolved.l, tol.rank_tol);
    let singular = square_system_singular(spec, resolved.l, tol.rank_tol);
    let pencil = Pencil::new(spec.clone());
    let scan = line_scan(resolved, orbit, &pencil)?;
    let lambda0 = critical(resolved, spec.m());
    let found = scan.on_line.iter().any(|e| (e.lambda - lambda0).norm() < tol.delta_line);
    Ok(ConditionView::new(orbit + 1, &report, singular, found))
}

fn verdict_section(resolved: &Resolved) -> Vec<VerdictEntry> {
    let problem = match resolved.problem() {
        Ok(p) => p,
        Err(e) => return vec![VerdictEntry { operator: OperatorTag::L, result: Entry::Error(e.to_string()) }],
    };
    let a = &resolved.analysis;
    let mut out = vec![VerdictEntry { operator: OperatorTag::L, result: entry(a.verdict_l(&problem).map(|v| (&v).into())) }];
    if problem.weight.is_some() {
        out.push(VerdictEntry {
            operator: OperatorTag::La,
            result: entry(a.verdict_l_weighted(&problem).map(|v| (&v).into())),
        });
    }
    out.push(VerdictEntry { operator: OperatorTag::LB, result: entry(a.verdict_lb(&problem).map(|v| (&v).into())) });
    out
}

fn asymptotics_view(resolved: &Resolved, orbit: usize) -> Result<AsymptoticsView, String> {
    let l1 = resolved.l1.ok_or("analysis.l1 is required for asymptotics")?;
    let table = exponent_table(&resolved.orbits[orbit], resolved.l, l1, &resolved.analysis).map_err(|e| e.to_string())?;
    Ok(AsymptoticsView::new(orbit + 1, &table))
}

pub fn run(cmd: Command, doc: &ConfigDocument, resolved: &Resolved) -> Report {
    let orbits = 0..resolved.orbits.len();
    let section = match cmd {
        Command::Spectrum => Section::Spectrum(orbits.map(|o| entry(spectrum_view(resolved, o))).collect()),
        Command::Classify => Section::Classify(orbits.map(|o| entry(classify_view(resolved, o))).collect()),
        Command::Condition => Section::Condition(orbits.map(|o| entry(condition_view(resolved, o))).collect()),
        Command::Verdict => Section::Verdict(verdict_section(resolved)),
        Command::Asymptotics => Section::Asymptotics(orbits.map(|o| entry(asymptotics_view(resolved, o))).collect()),
    };
    Report {
        report_schema_version: REPORT_SCHEMA_VERSION,
        config_schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: cmd,
        config: doc.clone(),
        tolerances: resolved.analysis.tol,
        tolerances_used: tolerances_used(cmd),
        seed: resolved.analysis.seed,
        l: resolved.l,
        l1: resolved.l1,
        weight: resolved.weight,
        assume_consistency: resolved.assume_consistency,
        section,
    }
}

fn fmt_c(z: &Complex) -> String {
    let snap = |v: f64| if v.abs() < 5e-11 { 0.0 } else { v };
    format!("{:+.10} {:+.10}i", snap(z.re), snap(z.im))
}

fn eig_rows(out: &mut String, rows: &[EigenvalueView]) {
    if rows.is_empty() {
        out.push_str("    (none)\n");
    }
    for e in rows {
        let _ = writeln!(
            out,
            "    {}  alg {}  geom {}  residual {:.1e}",
            fmt_c(&e.lambda),
            e.alg_mult,
            e.geom_mult,
            e.residual
        );
    }
}

fn error_line(out: &mut String, orbit: usize, e: &str) {
    let _ = writeln!(out, "orbit {orbit}: error: {e}");
}

/// Plain-text rendering for stdout.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "l = {}, seed = {}", r.l, r.seed);
    match &r.section {
        Section::Spectrum(v) => {
            for (i, e) in v.iter().enumerate() {
                match e {
                    Entry::Ok(s) => {
                        let g = &s.region;
                        let _ = writeln!(
                            out,
                            "orbit {}: eigenvalues in Re [{}, {}] x Im [{}, {}]",
                            s.orbit, g.re_min, g.re_max, g.im_min, g.im_max
                        );
                        eig_rows(&mut out, &s.eigenvalues);
                        let _ = writeln!(out, "  on Im λ = {}:", s.critical_line.height);
                        eig_rows(&mut out, &s.critical_line.on_line);
                    }
                    Entry::Error(m) => error_line(&mut out, i + 1, m),
                }
            }
        }
        Section::Classify(v) => {
            for (i, e) in v.iter().enumerate() {
                match e {
                    Entry::Ok(c) => {
                        let _ = writeln!(
                            out,
                            "orbit {}: λ0 = {} is {}an eigenvalue",
                            c.orbit,
                            fmt_c(&c.critical),
                            if c.critical_is_eigenvalue { "" } else { "not " }
                        );
                        if c.classifications.is_empty() {
                            out.push_str("    no eigenvalues on the line\n");
                        }
                        for a in &c.classifications {
                            let kind = match a.classification {
                                Classification::Proper => "proper".to_string(),
                                Classification::Improper(r) => format!("improper ({r:?})"),
                            };
                            let _ = writeln!(out, "    {}  {kind}", fmt_c(&a.lambda));
                        }
                    }
                    Entry::Error(m) => error_line(&mut out, i + 1, m),
                }
            }
        }
        Section::Condition(v) => {
            for (i, e) in v.iter().enumerate() {
                match e {
                    Entry::Ok(c) => {
                        let _ = writeln!(
                            out,
                            "orbit {}: rank B = {}, rank B+P = {}, P rows = {}: condition {}",
                            c.orbit,
                            c.rank_b,
                            c.rank_all,
                            c.p_rows,
                            if c.condition_holds { "holds" } else { "fails" }
                        );
                        for d in c.dependent_p.iter().chain(&c.dependent_b) {
                            let terms: Vec<String> = d.expansion.iter().map(|(k, r)| format!("({k})·{r}")).collect();
                            let _ = writeln!(out, "    {} = {}", d.row, if terms.is_empty() { "0".into() } else { terms.join(" + ") });
                        }
                        let _ = writeln!(
                            out,
                            "    square system singular: {}, λ0 eigenvalue: {}",
                            c.square_system_singular, c.critical_is_eigenvalue
                        );
                    }
                    Entry::Error(m) => error_line(&mut out, i + 1, m),
                }
            }
        }
        Section::Verdict(v) => {
            for e in v {
                let name = match e.operator {
                    OperatorTag::L => "L",
                    OperatorTag::La => "L_a",
                    OperatorTag::LB => "L_B",
                };
                match &e.result {
                    Entry::Ok(v) => {
                        let _ = writeln!(out, "{name:4} {:?} ({:?}) on Im λ = {}", v.outcome, v.reason, v.height);
                    }
                    Entry::Error(m) => {
                        let _ = writeln!(out, "{name:4} error: {m}");
                    }
                }
            }
        }
        Section::Asymptotics(v) => {
            for (i, e) in v.iter().enumerate() {
                match e {
                    Entry::Ok(t) => {
                        let _ = writeln!(
                            out,
                            "orbit {}: strip {} < Im λ <= {}, powers r^s for s in {}..={}",
                            t.orbit, t.strip[0], t.strip[1], t.polynomial_band[0], t.polynomial_band[1]
                        );
                        if t.smooth {
                            out.push_str("    no singular terms\n");
                        }
                        for x in &t.entries {
                            let _ = writeln!(
                                out,
                                "    {}  s = {}..={}  q <= {} (bound)",
                                fmt_c(&x.lambda),
                                x.shifts[0],
                                x.shifts[1],
                                x.log_power_bound
                            );
                        }
                    }
                    Entry::Error(m) => error_line(&mut out, i + 1, m),
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
