//! TOML problem descriptions.
//!
//! ```toml
//! schema_version = 1
//!
//! [problem]
//! m = 1
//!
//! [[problem.orbits]]
//! name = "bisector"
//!
//! [[problem.orbits.angles]]
//! half_opening = "pi/2"
//! operator = { "2,0" = "1", "0,2" = "1" }      # ζ1^a1 ζ2^a2 keyed "a1,a2"
//!
//! [[problem.orbits.conditions]]
//! angle = 1          # j, 1-based
//! side = 1           # 1: ω = -b, 2: ω = +b
//! index = 1          # μ, 1-based
//! order = 0
//! terms = [
//!   { k = 1, s = 0, op = { "0,0" = "1" } },
//!   { k = 1, s = 1, omega_shift = "pi/2", chi = "1", op = { "0,0" = "1" }, coefficient = "1/2" },
//! ]
//!
//! [analysis]
//! l = 0
//! l1 = 2
//! a = "1/2"
//! re_window = 6.0
//! seed = 0
//! region = { re = [-5.0, 5.0], im = [-5.0, 5.0] }
//!
//! [analysis.tolerances]
//! delta_line = 1e-7
//!
//! [assumptions]
//! consistency = true
//! ```
//!
//! Every literal is a string in the grammar of [`crate::literal`]. Angles
//! accept multiples of `pi`; coefficients accept Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::algebra::{Angle, HomOp, Real};
use crate::literal::{parse_angle, parse_real_scalar, parse_scalar, LiteralError};
use crate::pencil::{BoundaryRow, Component, NonlocalTerm, OrbitError, OrbitSpec, Side};
use crate::spectrum::Rect;
use crate::tolerance::Tolerances;
use crate::verdict::{Analysis, ProblemSpec, VerdictError};

pub const SCHEMA_VERSION: u32 = 1;

type Lit = Spanned<String>;
type OpMap = Spanned<BTreeMap<String, Lit>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub schema_version: u32,
    pub problem: ProblemSection,
    #[serde(default, skip_serializing_if = "AnalysisSection::is_empty")]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub assumptions: Assumptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub m: u32,
    pub orbits: Vec<OrbitSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub angles: Vec<AngleSection>,
    pub conditions: Vec<ConditionSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleSection {
    pub half_opening: Lit,
    pub operator: OpMap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionSection {
    pub angle: usize,
    pub side: u32,
    pub index: u32,
    pub order: u32,
    pub terms: Vec<TermSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSection {
    pub k: usize,
    pub s: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_shift: Option<Lit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Lit>,
    pub op: OpMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<Lit>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Lit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re_window: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

impl AnalysisSection {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub re: [f64; 2],
    pub im: [f64; 2],
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assumptions {
    #[serde(default)]
    pub consistency: bool,
}

/// 1-based position in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl Location {
    fn of(text: &str, offset: usize) -> Self {
        let offset = offset.min(text.len());
        let before = &text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        Self { line, column }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

fn at(location: &Option<Location>) -> String {
    location.map(|l| format!("{l}: ")).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{}{message}", at(location))]
    Syntax { location: Option<Location>, message: String },
    #[error("unsupported schema_version {0}, expected {SCHEMA_VERSION}")]
    Schema(u32),
    #[error("{}{path}: {source}", at(location))]
    Literal { path: String, location: Option<Location>, source: LiteralError },
    #[error("{}{path}: {message}", at(location))]
    Invalid { path: String, location: Option<Location>, message: String },
    #[error("{}orbit {orbit}: {source}", at(location))]
    Orbit { orbit: usize, location: Option<Location>, source: OrbitError },
    #[error("{0}")]
    Problem(String),
}

/// A resolution failure with the byte span it refers to.
struct Located {
    span: Option<Range<usize>>,
    build: Box<dyn FnOnce(Option<Location>) -> ConfigError>,
}

impl Located {
    fn new(span: Option<Range<usize>>, build: impl FnOnce(Option<Location>) -> ConfigError + 'static) -> Self {
        Self { span, build: Box::new(build) }
    }

    fn finish(self, text: Option<&str>) -> ConfigError {
        let loc = match (text, self.span) {
            (Some(t), Some(s)) => Some(Location::of(t, s.start)),
            _ => None,
        };
        (self.build)(loc)
    }
}

/// Everything an analysis needs, with literals evaluated.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub orbits: Vec<OrbitSpec>,
    pub l: u32,
    pub l1: Option<u32>,
    pub weight: Option<f64>,
    pub region: Option<Rect>,
    pub assume_consistency: bool,
    pub analysis: Analysis,
}

impl Resolved {
    pub fn problem(&self) -> Result<ProblemSpec, VerdictError> {
        let p = ProblemSpec::new(self.orbits.clone(), self.l)?.assuming_consistency(self.assume_consistency);
        match self.weight {
            Some(a) => p.with_weight(a),
            None => Ok(p),
        }
    }
}

fn literal<T>(
    lit: &Lit,
    path: String,
    parse: impl Fn(&str) -> Result<T, LiteralError>,
) -> Result<T, Located> {
    parse(lit.get_ref()).map_err(|source| {
        Located::new(Some(lit.span()), move |location| ConfigError::Literal { path, location, source })
    })
}

fn invalid(span: Option<Range<usize>>, path: String, message: String) -> Located {
    Located::new(span, move |location| ConfigError::Invalid { path, location, message })
}

fn operator(map: &OpMap, path: &str) -> Result<HomOp, Located> {
    let span = Some(map.span());
    let mut terms = Vec::new();
    for (key, value) in map.get_ref() {
        let exps = key
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse::<u32>().ok()?, b.trim().parse::<u32>().ok()?)));
        let Some((a1, a2)) = exps else {
            return Err(invalid(span, path.to_string(), format!("monomial key `{key}` must read \"a1,a2\"")));
        };
        if a1 + a2 > 64 {
            return Err(invalid(span, path.to_string(), format!("monomial degree {} is too large", a1 + a2)));
        }
        terms.push((a1, a2, literal(value, format!("{path}.\"{key}\""), parse_scalar)?));
    }
    let Some(degree) = terms.first().map(|t| t.0 + t.1) else {
        return Err(invalid(span, path.to_string(), "operator needs at least one monomial".into()));
    };
    HomOp::from_terms(degree, terms).map_err(|e| invalid(span, path.to_string(), e.to_string()))
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let doc: Self = toml::from_str(text).map_err(|e| ConfigError::Syntax {
            location: e.span().map(|s| Location::of(text, s.start)),
            message: e.message().to_string(),
        })?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Schema(doc.schema_version));
        }
        Ok(doc)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config documents serialize")
    }

    /// Parse and resolve, reporting positions in `text`.
    pub fn load(text: &str) -> Result<(Self, Resolved), ConfigError> {
        let doc = Self::parse(text)?;
        let resolved = doc.resolve_in(Some(text))?;
        Ok((doc, resolved))
    }

    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        self.resolve_in(None)
    }

    fn resolve_in(&self, text: Option<&str>) -> Result<Resolved, ConfigError> {
        self.build().map_err(|e| e.finish(text))
    }

    fn build(&self) -> Result<Resolved, Located> {
        let m = self.problem.m;
        let mut orbits = Vec::with_capacity(self.problem.orbits.len());
        for (o, orbit) in self.problem.orbits.iter().enumerate() {
            orbits.push(build_orbit(m, o, orbit)?);
        }
        if orbits.is_empty() {
            return Err(Located::new(None, |_| ConfigError::Problem("problem.orbits is empty".into())));
        }
        let a = &self.analysis;
        let weight = match &a.a {
            Some(lit) => {
                let w = literal(lit, "analysis.a".into(), parse_real_scalar)?.to_f64();
                if !(w > 0.0) {
                    return Err(invalid(Some(lit.span()), "analysis.a".into(), "weight must be positive".into()));
                }
                Some(w)
            }
            None => None,
        };
        let region = a.region.map(|r| Rect::new((r.re[0], r.re[1]), (r.im[0], r.im[1])));
        if let Some(r) = a.region {
            if !(r.re[0] < r.re[1] && r.im[0] < r.im[1]) || r.re.iter().chain(&r.im).any(|v| !v.is_finite()) {
                return Err(invalid(None, "analysis.region".into(), "bounds must be finite and increasing".into()));
            }
        }
        if let Some(w) = a.re_window {
            if !(w > 0.0 && w.is_finite()) {
                return Err(invalid(None, "analysis.re_window".into(), "must be positive".into()));
            }
        }
        if let Some(t) = &a.tolerances {
            let values = [t.delta_line, t.delta_band, t.tol_det, t.tol_chain, t.null_tol, t.rank_tol, t.merge, t.boundary_min];
            if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(invalid(None, "analysis.tolerances".into(), "every tolerance must be positive".into()));
            }
        }
        Ok(Resolved {
            orbits,
            l: a.l.unwrap_or(0),
            l1: a.l1,
            weight,
            region,
            assume_consistency: self.assumptions.consistency,
            analysis: Analysis { tol: a.tolerances.unwrap_or_default(), re_window: a.re_window, seed: a.seed.unwrap_or(0) },
        })
    }
}

fn build_orbit(m: u32, o: usize, orbit: &OrbitSection) -> Result<OrbitSpec, Located> {
    let base = format!("problem.orbits[{o}]");
    let mut components = Vec::with_capacity(orbit.angles.len());
    for (j, angle) in orbit.angles.iter().enumerate() {
        let path = format!("{base}.angles[{j}]");
        components.push(Component {
            half_opening: literal(&angle.half_opening, format!("{path}.half_opening"), parse_angle)?,
            operator: operator(&angle.operator, &format!("{path}.operator"))?,
        });
    }
    let n = components.len();
    let mut rows = Vec::with_capacity(orbit.conditions.len());
    for (ci, cond) in orbit.conditions.iter().enumerate() {
        let path = format!("{base}.conditions[{ci}]");
        if cond.angle == 0 || cond.angle > n {
            return Err(invalid(None, format!("{path}.angle"), format!("must be in 1..={n}")));
        }
        let Some(side) = Side::from_index(cond.side) else {
            return Err(invalid(None, format!("{path}.side"), "must be 1 or 2".into()));
        };
        if cond.index == 0 {
            return Err(invalid(None, format!("{path}.index"), "is 1-based".into()));
        }
        let mut terms = Vec::with_capacity(cond.terms.len());
        for (ti, t) in cond.terms.iter().enumerate() {
            let tpath = format!("{path}.terms[{ti}]");
            if t.k == 0 || t.k > n {
                return Err(invalid(None, format!("{tpath}.k"), format!("must be in 1..={n}")));
            }
            let mut op = operator(&t.op, &format!("{tpath}.op"))?;
            if let Some(c) = &t.coefficient {
                op = op.scale(&literal(c, format!("{tpath}.coefficient"), parse_scalar)?);
            }
            let rotation = match &t.omega_shift {
                Some(lit) => literal(lit, format!("{tpath}.omega_shift"), parse_angle)?,
                None => Angle::zero(),
            };
            let dilation = match &t.chi {
                Some(lit) => literal(lit, format!("{tpath}.chi"), parse_real_scalar)?,
                None => Real::from_int(1),
            };
            terms.push(NonlocalTerm { target: t.k - 1, tag: t.s, rotation, dilation, op });
        }
        rows.push(BoundaryRow { component: cond.angle - 1, side, index: cond.index - 1, order: cond.order, terms });
    }
    OrbitSpec::new(m, components, rows).map_err(|source| {
        let span = match &source {
            OrbitError::HalfOpening { j, .. } => orbit.angles.get(j - 1).map(|a| a.half_opening.span()),
            _ => None,
        };
        Located::new(span, move |location| ConfigError::Orbit { orbit: o + 1, location, source })
    })
}
