//! Optimal control problems on the horizon `[0, 1]` and their JSON problem
//! file format.
//!
//! ```json
//! {
//!   "name": "sec7",
//!   "states": ["y"],
//!   "control": "u",
//!   "p": 1,
//!   "parameters": { "eps": 0.2 },
//!   "lagrangian": "(t+y)*u",
//!   "dynamics": ["w*(1+u)"],
//!   "aux": [{ "name": "w", "constraints": ["w^2 - r^2 - eps^2*(1-r)^2"], "bounds": [0, 1] }],
//!   "y0": [0], "y1": [1],
//!   "bounds": { "t": [0, 1], "y": [0, 1], "u": [0, null] }
//! }
//! ```
//!
//! Parameter names are replaced textually (as whole identifiers) by their
//! values before any polynomial is parsed. The lagrangian and dynamics are
//! polynomials in `(t, states, control, aux)`; a dynamics entry may instead
//! be an object `{"poly": .., "denominator_power": q}` or
//! `{"poly": .., "denominator": ".."}` meaning `poly / (1+u)^q`. Auxiliary
//! constraints are equalities `h = 0` written in the compactified variables,
//! where an unbounded control `u` has been replaced by `r = u/(1+u)` (the
//! name is configurable with `"compact_control"`). A `null` bound means
//! infinity.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyalg::{PolyError, Polynomial, VariableSpace};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("field `{field}`: {source}")]
    Poly {
        field: String,
        #[source]
        source: PolyError,
    },
    #[error("invalid problem: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

/// A violated problem invariant, tagged with the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Closed interval; `hi` may be `+inf` and `lo` may be `-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn is_compact(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// One component of the dynamics, `numerator / denominator`.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsTerm {
    pub numerator: Polynomial,
    /// Must equal `(1+u)^q` for some `q`; checked when compactifying.
    pub denominator: Option<Polynomial>,
}

/// Auxiliary algebraic variable, such as `w` with `w^2 = r^2 + eps^2 (1-r)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxVariable {
    pub name: String,
    /// Equalities `h = 0` over the compactified variables.
    pub constraints: Vec<Polynomial>,
    pub bounds: Interval,
}

/// Optimal control problem: minimize the integral of `lagrangian` subject
/// to `y' = dynamics`, `y(0) = y0`, `y(1) = y1` and box bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct OcpProblem {
    pub name: String,
    pub states: Vec<String>,
    pub controls: Vec<String>,
    /// Name of the compactified control variable when the control is unbounded.
    pub compact_control: String,
    /// Growth exponent `p`.
    pub growth: u32,
    pub parameters: BTreeMap<String, f64>,
    pub lagrangian: Polynomial,
    pub dynamics: Vec<DynamicsTerm>,
    pub aux: Vec<AuxVariable>,
    pub y0: Vec<f64>,
    pub y1: Vec<f64>,
    pub time_bounds: Interval,
    pub state_bounds: Vec<Interval>,
    pub control_bounds: Vec<Interval>,
    space: VariableSpace,
    compact_space: VariableSpace,
}

impl OcpProblem {
    /// Variables `(t, states.., controls.., aux..)`.
    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    /// Variables `(t, states.., r or u, aux..)` seen by auxiliary constraints.
    pub fn compact_space(&self) -> &VariableSpace {
        &self.compact_space
    }

    pub fn state_dim(&self) -> usize {
        self.states.len()
    }

    pub fn control_is_unbounded(&self) -> bool {
        self.control_bounds
            .first()
            .map_or(false, |b| b.hi.is_infinite())
    }

    pub fn control_name(&self) -> &str {
        &self.controls[0]
    }

    /// Invariant check; an empty list means the problem is well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let n = self.states.len();
        if self.time_bounds != Interval::new(0.0, 1.0) {
            out.push(Diagnostic::new("bounds.t", "t horizon must be [0,1]"));
        }
        if self.growth < 1 {
            out.push(Diagnostic::new("p", "growth exponent must be ≥ 1"));
        }
        if self.controls.len() != 1 {
            out.push(Diagnostic::new("control", "only scalar control supported"));
        }
        if n == 0 {
            out.push(Diagnostic::new("states", "at least one state is required"));
        }
        if self.dynamics.len() != n {
            out.push(Diagnostic::new(
                "dynamics",
                format!("expected {n} entries, found {}", self.dynamics.len()),
            ));
        }
        for (field, v) in [("y0", &self.y0), ("y1", &self.y1)] {
            if v.len() != n {
                out.push(Diagnostic::new(
                    field,
                    format!("expected {n} values, found {}", v.len()),
                ));
            }
        }
        if self.state_bounds.len() != n {
            out.push(Diagnostic::new("bounds", "every state needs bounds"));
        }
        for (i, (name, b)) in self.states.iter().zip(&self.state_bounds).enumerate() {
            if !b.is_compact() {
                out.push(Diagnostic::new(
                    format!("bounds.{name}"),
                    "state bounds must be compact",
                ));
                continue;
            }
            for (field, v) in [("y0", &self.y0), ("y1", &self.y1)] {
                if let Some(&x) = v.get(i) {
                    if !b.contains(x) {
                        out.push(Diagnostic::new(
                            field,
                            format!("boundary value of `{name}` lies outside its bounds"),
                        ));
                    }
                }
            }
        }
        if self.control_bounds.len() != self.controls.len() {
            out.push(Diagnostic::new("bounds", "every control needs bounds"));
        }
        for (name, b) in self.controls.iter().zip(&self.control_bounds) {
            let field = format!("bounds.{name}");
            if b.hi.is_infinite() || b.lo.is_infinite() {
                if b.lo != 0.0 || b.hi != f64::INFINITY {
                    out.push(Diagnostic::new(field, "unbounded control must be [0, ∞)"));
                }
            } else if b.lo >= b.hi {
                out.push(Diagnostic::new(field, "control interval is empty"));
            }
        }
        for a in &self.aux {
            if !a.bounds.is_compact() {
                out.push(Diagnostic::new(
                    format!("aux.{}", a.name),
                    "auxiliary bounds must be compact",
                ));
            }
            if a.constraints.iter().any(|h| h.space() != &self.compact_space) {
                out.push(Diagnostic::new(
                    format!("aux.{}", a.name),
                    "constraints must use the compactified variables",
                ));
            }
        }
        if self.lagrangian.space() != &self.space
            || self
                .dynamics
                .iter()
                .any(|d| d.numerator.space() != &self.space
                    || d.denominator.as_ref().map_or(false, |q| q.space() != &self.space))
        {
            out.push(Diagnostic::new("lagrangian", "polynomials use the wrong variables"));
        }
        for name in self.parameters.keys() {
            if self.space.index_of(name).is_some() || self.compact_space.index_of(name).is_some() {
                out.push(Diagnostic::new(
                    format!("parameters.{name}"),
                    "parameter name collides with a variable",
                ));
            }
        }
        out
    }

    pub fn from_json_str(text: &str, overrides: &BTreeMap<String, f64>) -> Result<Self, ModelError> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|e| ModelError::Schema(e.to_string()))?;
        let problem = file.into_problem(overrides)?;
        let diags = problem.validate();
        if diags.is_empty() {
            Ok(problem)
        } else {
            Err(ModelError::Invalid(diags))
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ProblemFile::from_problem(self)).expect("serializable")
    }
}

/// Reads and validates a problem file.
pub fn load_problem(path: impl AsRef<Path>) -> Result<OcpProblem, ModelError> {
    load_problem_with(path, &BTreeMap::new())
}

/// Like [`load_problem`], with parameter values overriding those in the file.
pub fn load_problem_with(
    path: impl AsRef<Path>,
    overrides: &BTreeMap<String, f64>,
) -> Result<OcpProblem, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })?;
    OcpProblem::from_json_str(&text, overrides)
}

pub fn save_problem(problem: &OcpProblem, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let path = path.as_ref();
    std::fs::write(path, problem.to_json_string()).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })
}

// ---------------------------------------------------------------------------
// file schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum DynamicsEntry {
    Plain(String),
    Detailed {
        poly: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        denominator_power: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        denominator: Option<String>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuxEntry {
    name: String,
    #[serde(default)]
    constraints: Vec<String>,
    bounds: [Option<f64>; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    #[serde(default)]
    name: String,
    states: Vec<String>,
    control: OneOrMany,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    compact_control: Option<String>,
    p: u32,
    #[serde(default)]
    parameters: BTreeMap<String, f64>,
    lagrangian: String,
    dynamics: Vec<DynamicsEntry>,
    #[serde(default)]
    aux: Vec<AuxEntry>,
    y0: Vec<f64>,
    y1: Vec<f64>,
    bounds: BTreeMap<String, [Option<f64>; 2]>,
}

/// Replaces whole identifiers that name a parameter by `(value)`.
fn substitute_parameters(text: &str, params: &BTreeMap<String, f64>) -> String {
    let mut out = String::with_capacity(text.len());
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_lowercase() {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
            {
                i += 1;
            }
            let ident = &text[start..i];
            match params.get(ident) {
                Some(v) => out.push_str(&format!("({v})")),
                None => out.push_str(ident),
            }
        } else if c.is_ascii_digit() || c == b'.' {
            // numbers may not be followed by identifiers; copy the literal whole
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            out.push_str(&text[start..i]);
        } else {
            let ch = text[i..].chars().next().unwrap();
            out.push(ch);
            i += ch.len_utf8();
        }
    }
    out
}

fn interval(b: [Option<f64>; 2]) -> Interval {
    Interval::new(b[0].unwrap_or(f64::NEG_INFINITY), b[1].unwrap_or(f64::INFINITY))
}

fn bound_pair(i: Interval) -> [Option<f64>; 2] {
    let f = |x: f64| x.is_finite().then_some(x);
    [f(i.lo), f(i.hi)]
}

impl ProblemFile {
    fn into_problem(self, overrides: &BTreeMap<String, f64>) -> Result<OcpProblem, ModelError> {
        let mut parameters = self.parameters.clone();
        for (k, v) in overrides {
            parameters.insert(k.clone(), *v);
        }
        let controls = match self.control {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        };
        if controls.is_empty() {
            return Err(ModelError::Schema("`control` must name a variable".into()));
        }
        let aux_names: Vec<String> = self.aux.iter().map(|a| a.name.clone()).collect();
        let names: Vec<String> = std::iter::once("t".to_string())
            .chain(self.states.iter().cloned())
            .chain(controls.iter().cloned())
            .chain(aux_names.iter().cloned())
            .collect();
        let space = VariableSpace::new(names).map_err(|source| ModelError::Poly {
            field: "variables".into(),
            source,
        })?;

        let bound_of = |name: &str| -> Result<Interval, ModelError> {
            self.bounds
                .get(name)
                .map(|b| interval(*b))
                .ok_or_else(|| ModelError::Schema(format!("missing bounds for `{name}`")))
        };
        let time_bounds = match self.bounds.get("t") {
            Some(b) => interval(*b),
            None => Interval::new(0.0, 1.0),
        };
        let state_bounds = self
            .states
            .iter()
            .map(|s| bound_of(s))
            .collect::<Result<Vec<_>, _>>()?;
        let control_bounds = controls
            .iter()
            .map(|s| bound_of(s))
            .collect::<Result<Vec<_>, _>>()?;
        for key in self.bounds.keys() {
            if key != "t" && !self.states.contains(key) && !controls.contains(key) {
                return Err(ModelError::Schema(format!("bounds given for unknown variable `{key}`")));
            }
        }

        let unbounded = control_bounds.first().map_or(false, |b| b.hi.is_infinite());
        let compact_control = self.compact_control.clone().unwrap_or_else(|| "r".to_string());
        let compact_names: Vec<String> = std::iter::once("t".to_string())
            .chain(self.states.iter().cloned())
            .chain(controls.iter().enumerate().map(|(i, c)| {
                if i == 0 && unbounded {
                    compact_control.clone()
                } else {
                    c.clone()
                }
            }))
            .chain(aux_names.iter().cloned())
            .collect();
        let compact_space = VariableSpace::new(compact_names).map_err(|source| ModelError::Poly {
            field: "compact_control".into(),
            source,
        })?;

        let parse = |field: &str, text: &str, sp: &VariableSpace| {
            Polynomial::parse(&substitute_parameters(text, &parameters), sp).map_err(|source| {
                ModelError::Poly {
                    field: field.to_string(),
                    source,
                }
            })
        };

        let lagrangian = parse("lagrangian", &self.lagrangian, &space)?;
        let u = controls[0].clone();
        let mut dynamics = Vec::new();
        for (i, d) in self.dynamics.iter().enumerate() {
            let field = format!("dynamics[{i}]");
            let term = match d {
                DynamicsEntry::Plain(s) => DynamicsTerm {
                    numerator: parse(&field, s, &space)?,
                    denominator: None,
                },
                DynamicsEntry::Detailed {
                    poly,
                    denominator_power,
                    denominator,
                } => {
                    let denominator = match (denominator_power, denominator) {
                        (Some(_), Some(_)) => {
                            return Err(ModelError::Schema(format!(
                                "{field}: give either `denominator` or `denominator_power`"
                            )))
                        }
                        (Some(0), None) | (None, None) => None,
                        (Some(q), None) => Some(parse(&field, &format!("(1+{u})^{q}"), &space)?),
                        (None, Some(s)) => Some(parse(&field, s, &space)?),
                    };
                    DynamicsTerm {
                        numerator: parse(&field, poly, &space)?,
                        denominator,
                    }
                }
            };
            dynamics.push(term);
        }
        let aux = self
            .aux
            .iter()
            .map(|a| {
                Ok(AuxVariable {
                    name: a.name.clone(),
                    constraints: a
                        .constraints
                        .iter()
                        .map(|c| parse(&format!("aux.{}", a.name), c, &compact_space))
                        .collect::<Result<Vec<_>, ModelError>>()?,
                    bounds: interval(a.bounds),
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;

        Ok(OcpProblem {
            name: self.name,
            states: self.states,
            controls,
            compact_control,
            growth: self.p,
            parameters,
            lagrangian,
            dynamics,
            aux,
            y0: self.y0,
            y1: self.y1,
            time_bounds,
            state_bounds,
            control_bounds,
            space,
            compact_space,
        })
    }

    fn from_problem(p: &OcpProblem) -> Self {
        let mut bounds = BTreeMap::new();
        bounds.insert("t".to_string(), bound_pair(p.time_bounds));
        for (n, b) in p.states.iter().zip(&p.state_bounds) {
            bounds.insert(n.clone(), bound_pair(*b));
        }
        for (n, b) in p.controls.iter().zip(&p.control_bounds) {
            bounds.insert(n.clone(), bound_pair(*b));
        }
        ProblemFile {
            name: p.name.clone(),
            states: p.states.clone(),
            control: if p.controls.len() == 1 {
                OneOrMany::One(p.controls[0].clone())
            } else {
                OneOrMany::Many(p.controls.clone())
            },
            compact_control: Some(p.compact_control.clone()),
            p: p.growth,
            parameters: p.parameters.clone(),
            lagrangian: p.lagrangian.to_string(),
            dynamics: p
                .dynamics
                .iter()
                .map(|d| match &d.denominator {
                    None => DynamicsEntry::Plain(d.numerator.to_string()),
                    Some(q) => DynamicsEntry::Detailed {
                        poly: d.numerator.to_string(),
                        denominator_power: None,
                        denominator: Some(q.to_string()),
                    },
                })
                .collect(),
            aux: p
                .aux
                .iter()
                .map(|a| AuxEntry {
                    name: a.name.clone(),
                    constraints: a.constraints.iter().map(|c| c.to_string()).collect(),
                    bounds: bound_pair(a.bounds),
                })
                .collect(),
            y0: p.y0.clone(),
            y1: p.y1.clone(),
            bounds,
        }
    }
}
