//! Closed-form limit measures used as ground truth.
//!
//! A [`MeasureSpec`] is a finite sum of weighted atoms and uniform segments
//! in a [`VariableSpace`], so every polynomial moment is exact. Measures
//! arising as limits of control sequences are described by a [`Triplet`]
//! `tau(dt) omega(du|t) upsilon(dy|t,u)` and flattened into components.
//!
//! Anisotropic entries live in `(t, y, s)` with `s = u/(1+|u|)`, so
//! `s = +-1` stands for `u = +-inf`. The weight of `tau` already carries the
//! factor `1 + |u|^p`: for a sequence `(u_k, y_k)` generating the entry,
//!
//! ```text
//! int f(t) g0(s(u_k)) (1 + |u_k|^p) h(y_k) dt  ->  int f g0 h dmu.
//! ```

use std::fmt;

use thiserror::Error;

use crate::polyalg::{Monomial, PolyError, Polynomial, VariableSpace};
use crate::upoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("no oracle registered under `{0}`")]
    UnknownEntry(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("variable space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("g0 is not a finite function of the compactified control: {0}")]
    NotCompactified(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One component of a [`MeasureSpec`]; `weight` is its total mass.
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Dirac { weight: f64, point: Vec<f64> },
    /// Uniform density along the straight segment `from -> to`.
    Segment { weight: f64, from: Vec<f64>, to: Vec<f64> },
}

impl Component {
    pub fn weight(&self) -> f64 {
        match self {
            Component::Dirac { weight, .. } | Component::Segment { weight, .. } => *weight,
        }
    }

    /// `(a, b)` with the component parametrized as `a + b*sigma`, `sigma` in `[0,1]`.
    fn affine(&self, i: usize) -> (f64, f64) {
        match self {
            Component::Dirac { point, .. } => (point[i], 0.0),
            Component::Segment { from, to, .. } => (from[i], to[i] - from[i]),
        }
    }

    /// `int prod_i q_i(x_i)` over the component, `q_i` univariate.
    fn integrate_product(&self, factors: &[(usize, &[f64])]) -> f64 {
        match self {
            Component::Dirac { weight, point } => {
                weight * factors.iter().map(|(i, q)| upoly::eval(q, point[*i])).product::<f64>()
            }
            Component::Segment { weight, .. } => {
                let mut acc = vec![1.0];
                for (i, q) in factors {
                    let (a, b) = self.affine(*i);
                    acc = upoly::mul(&acc, &upoly::compose_affine(q, a, b));
                }
                weight * upoly::integrate_from_zero(&acc, 1.0)
            }
        }
    }
}

/// Support of one piece of the time marginal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeSupport {
    Point(f64),
    /// Lebesgue measure on `[a, b]` scaled to the piece weight.
    Interval(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateKind {
    Point(f64),
    /// `y = at_zero + slope * t`.
    Affine { at_zero: f64, slope: f64 },
    /// Uniform probability on `[a, b]`; only over a time atom.
    Uniform(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateLaw {
    pub prob: f64,
    pub kind: StateKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlAtom {
    pub prob: f64,
    /// Human-readable control value, e.g. `+inf`.
    pub label: String,
    /// Values of the control coordinates at this atom.
    pub coords: Vec<f64>,
    /// `upsilon(.|t,u)` for this atom.
    pub upsilon: Vec<StateLaw>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimePiece {
    pub weight: f64,
    pub time: TimeSupport,
    /// `omega(.|t)` on this piece.
    pub omega: Vec<ControlAtom>,
}

/// Disintegrated measure `tau(dt) omega(du|t) upsilon(dy|t,u)` with a scalar
/// state `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triplet {
    pub control_names: Vec<String>,
    pub pieces: Vec<TimePiece>,
}

const PROB_TOL: f64 = 1e-12;

impl Triplet {
    /// Space `(t, y, controls...)`.
    pub fn space(&self) -> Result<VariableSpace, OracleError> {
        let mut names = vec!["t".to_string(), "y".to_string()];
        names.extend(self.control_names.iter().cloned());
        Ok(VariableSpace::new(names)?)
    }

    pub fn tau_mass(&self) -> f64 {
        self.pieces.iter().map(|p| p.weight).sum()
    }

    fn validate(&self) -> Result<(), OracleError> {
        let bad = |m: String| Err(OracleError::InvalidMeasure(m));
        for (n, piece) in self.pieces.iter().enumerate() {
            if !(piece.weight > 0.0) {
                return bad(format!("time piece {n} has weight {}", piece.weight));
            }
            if let TimeSupport::Interval(a, b) = piece.time {
                if !(b > a) {
                    return bad(format!("time piece {n} has empty interval [{a}, {b}]"));
                }
            }
            let total: f64 = piece.omega.iter().map(|a| a.prob).sum();
            if (total - 1.0).abs() > PROB_TOL {
                return bad(format!("omega on time piece {n} has mass {total}"));
            }
            for atom in &piece.omega {
                if !(atom.prob > 0.0) {
                    return bad(format!("control atom `{}` has probability {}", atom.label, atom.prob));
                }
                if atom.coords.len() != self.control_names.len() {
                    return bad(format!("control atom `{}` has {} coordinates", atom.label, atom.coords.len()));
                }
                let total: f64 = atom.upsilon.iter().map(|l| l.prob).sum();
                if (total - 1.0).abs() > PROB_TOL {
                    return bad(format!("upsilon at control `{}` has mass {total}", atom.label));
                }
                for law in &atom.upsilon {
                    if !(law.prob > 0.0) {
                        return bad(format!("state law with probability {}", law.prob));
                    }
                    if let StateKind::Uniform(a, b) = law.kind {
                        if !(b > a) {
                            return bad(format!("empty state interval [{a}, {b}]"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn components(&self) -> Result<Vec<Component>, OracleError> {
        let mut out = Vec::new();
        for piece in &self.pieces {
            for atom in &piece.omega {
                for law in &atom.upsilon {
                    let weight = piece.weight * atom.prob * law.prob;
                    let at = |t: f64, y: f64| {
                        let mut p = vec![t, y];
                        p.extend(&atom.coords);
                        p
                    };
                    let c = match (piece.time, law.kind) {
                        (TimeSupport::Point(t), StateKind::Point(y)) => Component::Dirac { weight, point: at(t, y) },
                        (TimeSupport::Point(t), StateKind::Affine { at_zero, slope }) => {
                            Component::Dirac { weight, point: at(t, at_zero + slope * t) }
                        }
                        (TimeSupport::Point(t), StateKind::Uniform(a, b)) => {
                            Component::Segment { weight, from: at(t, a), to: at(t, b) }
                        }
                        (TimeSupport::Interval(a, b), StateKind::Point(y)) => {
                            Component::Segment { weight, from: at(a, y), to: at(b, y) }
                        }
                        (TimeSupport::Interval(a, b), StateKind::Affine { at_zero, slope }) => Component::Segment {
                            weight,
                            from: at(a, at_zero + slope * a),
                            to: at(b, at_zero + slope * b),
                        },
                        (TimeSupport::Interval(..), StateKind::Uniform(..)) => {
                            return Err(OracleError::InvalidMeasure(
                                "a uniform state law over a time interval is not a segment".into(),
                            ))
                        }
                    };
                    out.push(c);
                }
            }
        }
        Ok(out)
    }
}

/// Finite sum of atoms and uniform segments.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    space: VariableSpace,
    components: Vec<Component>,
    structure: Option<Triplet>,
}

impl MeasureSpec {
    pub fn new(space: VariableSpace, components: Vec<Component>) -> Result<Self, OracleError> {
        for c in &components {
            let (w, dims) = match c {
                Component::Dirac { weight, point } => (*weight, vec![point.len()]),
                Component::Segment { weight, from, to } => {
                    if from == to {
                        return Err(OracleError::InvalidMeasure("segment of zero length".into()));
                    }
                    (*weight, vec![from.len(), to.len()])
                }
            };
            if !(w > 0.0) {
                return Err(OracleError::InvalidMeasure(format!("component weight {w}")));
            }
            if dims.iter().any(|&d| d != space.dim()) {
                return Err(OracleError::SpaceMismatch(format!(
                    "component of dimension {dims:?} in a {}-dimensional space",
                    space.dim()
                )));
            }
        }
        Ok(MeasureSpec { space, components, structure: None })
    }

    pub fn from_triplet(triplet: Triplet) -> Result<Self, OracleError> {
        triplet.validate()?;
        let mut m = MeasureSpec::new(triplet.space()?, triplet.components()?)?;
        m.structure = Some(triplet);
        Ok(m)
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn triplet(&self) -> Option<&Triplet> {
        self.structure.as_ref()
    }

    pub fn mass(&self) -> f64 {
        self.components.iter().map(Component::weight).sum()
    }

    fn moment_unchecked(&self, exps: &[u32]) -> f64 {
        let pows: Vec<(usize, Vec<f64>)> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let mut q = vec![0.0; e as usize + 1];
                q[e as usize] = 1.0;
                (i, q)
            })
            .collect();
        let factors: Vec<(usize, &[f64])> = pows.iter().map(|(i, q)| (*i, q.as_slice())).collect();
        self.components.iter().map(|c| c.integrate_product(&factors)).sum()
    }

    /// Exact `int p dmu` for `p` over this measure's space.
    pub fn integrate(&self, p: &Polynomial) -> Result<f64, OracleError> {
        if p.space() != &self.space {
            return Err(OracleError::SpaceMismatch(format!(
                "polynomial over {:?}, measure over {:?}",
                p.space(),
                self.space
            )));
        }
        Ok(p.terms().map(|(m, c)| c * self.moment_unchecked(m.exponents())).sum())
    }

    /// Moments of `monos` given over `space`, matching variables by name.
    /// Variables of the measure missing from `space` are integrated out.
    pub fn moments_in(&self, space: &VariableSpace, monos: &[Monomial]) -> Result<Vec<f64>, OracleError> {
        let map: Vec<usize> = space
            .names()
            .iter()
            .map(|n| {
                self.space
                    .index_of(n)
                    .ok_or_else(|| OracleError::SpaceMismatch(format!("measure has no variable `{n}`")))
            })
            .collect::<Result<_, _>>()?;
        let mut exps = vec![0u32; self.space.dim()];
        Ok(monos
            .iter()
            .map(|m| {
                exps.iter_mut().for_each(|e| *e = 0);
                for (i, &e) in m.exponents().iter().enumerate() {
                    exps[map[i]] = e;
                }
                self.moment_unchecked(&exps)
            })
            .collect())
    }
}

/// Exact moment of `mono`, which must be over the measure's space.
pub fn moment_of(measure: &MeasureSpec, mono: &Monomial) -> Result<f64, OracleError> {
    if mono.dim() != measure.space.dim() {
        return Err(OracleError::SpaceMismatch(format!(
            "monomial of dimension {} for a measure over {:?}",
            mono.dim(),
            measure.space
        )));
    }
    Ok(measure.moment_unchecked(mono.exponents()))
}

/// Columns of the analytic moment table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentVar {
    T,
    Y,
    R,
    W,
}

impl MomentVar {
    pub const ALL: [MomentVar; 4] = [MomentVar::T, MomentVar::Y, MomentVar::R, MomentVar::W];

    pub fn name(self) -> &'static str {
        match self {
            MomentVar::T => "t",
            MomentVar::Y => "y",
            MomentVar::R => "r",
            MomentVar::W => "w",
        }
    }
}

impl fmt::Display for MomentVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn zero_pow(k: u32) -> f64 {
    if k == 0 {
        1.0
    } else {
        0.0
    }
}

/// Closed-form marginal moment `int x^k dmu` of the optimal measure of the
/// worked example with parameter `eps`.
pub fn closed_form_moment(which: MomentVar, k: u32, eps: f64) -> f64 {
    let kf = k as f64;
    let a = (1.0 - eps).powi(k as i32 + 1);
    match which {
        MomentVar::T => 1.0 / (kf + 1.0) + (1.0 - eps) * zero_pow(k),
        MomentVar::Y => a / (kf + 1.0) - (a - 1.0) / (eps * (kf + 1.0)),
        MomentVar::R => zero_pow(k) + (1.0 - eps),
        MomentVar::W => eps.powi(k as i32) + (1.0 - eps),
    }
}

/// A catalog entry: a limit measure together with the growth exponent `p`
/// of the sequences that generate it.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleEntry {
    pub name: String,
    pub measure: MeasureSpec,
    pub growth: u32,
    /// Coordinate of the measure's space playing the role of `s = u/(1+|u|)`.
    pub s_coordinate: String,
}

/// Names accepted by [`entry`]; `sec7` also accepts `sec7(eps)`.
pub const CATALOG: [&str; 6] = ["sec7", "osc21", "conc22", "dpm23", "ex1b", "ex2"];

/// Default parameter of the worked example.
pub const SEC7_EPS: f64 = 0.2;

fn atom(prob: f64, label: &str, coords: Vec<f64>, upsilon: Vec<StateLaw>) -> ControlAtom {
    ControlAtom { prob, label: label.into(), coords, upsilon }
}

fn law(prob: f64, kind: StateKind) -> StateLaw {
    StateLaw { prob, kind }
}

fn piece(weight: f64, time: TimeSupport, omega: Vec<ControlAtom>) -> TimePiece {
    TimePiece { weight, time, omega }
}

fn build(name: &str, growth: u32, s: &str, triplet: Triplet) -> OracleEntry {
    OracleEntry {
        name: name.into(),
        measure: MeasureSpec::from_triplet(triplet).expect("catalog measures are valid"),
        growth,
        s_coordinate: s.into(),
    }
}

/// Optimal measure of the worked example over `(t, y, r, w)` with
/// `r = u/(1+u)` and `w^2 = r^2 + eps^2 (1-r)^2`.
pub fn sec7(eps: f64) -> Result<OracleEntry, OracleError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(OracleError::InvalidMeasure(format!("eps = {eps} is outside (0, 1)")));
    }
    let t = Triplet {
        control_names: vec!["r".into(), "w".into()],
        pieces: vec![
            piece(
                1.0 - eps,
                TimeSupport::Point(0.0),
                vec![atom(1.0, "+inf", vec![1.0, 1.0], vec![law(1.0, StateKind::Uniform(0.0, 1.0 - eps))])],
            ),
            piece(
                1.0,
                TimeSupport::Interval(0.0, 1.0),
                vec![atom(
                    1.0,
                    "0",
                    vec![0.0, eps],
                    vec![law(1.0, StateKind::Affine { at_zero: 1.0 - eps, slope: eps })],
                )],
            ),
        ],
    };
    Ok(build(&format!("sec7({eps})"), 1, "r", t))
}

fn jump_at_half(name: &str) -> OracleEntry {
    let s = |v: f64| vec![v];
    let t = Triplet {
        control_names: vec!["s".into()],
        pieces: vec![
            piece(0.5, TimeSupport::Interval(0.0, 0.5), vec![atom(1.0, "0", s(0.0), vec![law(1.0, StateKind::Point(0.0))])]),
            piece(0.5, TimeSupport::Interval(0.5, 1.0), vec![atom(1.0, "0", s(0.0), vec![law(1.0, StateKind::Point(1.0))])]),
            piece(
                1.0,
                TimeSupport::Point(0.5),
                vec![atom(1.0, "+inf", s(1.0), vec![law(1.0, StateKind::Uniform(0.0, 1.0))])],
            ),
        ],
    };
    build(name, 1, "s", t)
}

/// Parses `sec7`, `sec7(0.1)` or `sec7(eps=0.1)`. `None` when the name is
/// not of that family, `Some(None)` when the parameter is malformed.
pub fn sec7_parameter(name: &str) -> Option<Option<f64>> {
    let rest = name.trim().strip_prefix("sec7")?;
    if rest.is_empty() {
        return Some(Some(SEC7_EPS));
    }
    let v = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')'));
    Some(v.and_then(|v| {
        let v = v.trim();
        v.strip_prefix("eps=").unwrap_or(v).trim().parse::<f64>().ok()
    }))
}

/// Looks up a catalog entry by name.
pub fn entry(name: &str) -> Result<OracleEntry, OracleError> {
    let name = name.trim();
    match sec7_parameter(name) {
        Some(Some(eps)) => return sec7(eps),
        Some(None) => return Err(OracleError::UnknownEntry(name.into())),
        None => {}
    }
    let s = |v: f64| vec![v];
    Ok(match name {
        // Young measure 1/2 (delta_-1 + delta_1) dt; tau carries 1 + |u|^4 = 2
        "osc21" => build(
            name,
            4,
            "s",
            Triplet {
                control_names: vec!["s".into()],
                pieces: vec![piece(
                    2.0,
                    TimeSupport::Interval(0.0, 1.0),
                    vec![
                        atom(0.5, "-1", s(-0.5), vec![law(1.0, StateKind::Point(0.0))]),
                        atom(0.5, "+1", s(0.5), vec![law(1.0, StateKind::Point(0.0))]),
                    ],
                )],
            },
        ),
        // concentration at 1/2 with the trajectory jumping from 0 to 1
        "conc22" | "ex1b" => jump_at_half(name),
        // 1/2 (delta_0 + delta_inf) (du) 2 dt along y = t
        "dpm23" => build(
            name,
            1,
            "s",
            Triplet {
                control_names: vec!["s".into()],
                pieces: vec![piece(
                    2.0,
                    TimeSupport::Interval(0.0, 1.0),
                    vec![
                        atom(0.5, "0", s(0.0), vec![law(1.0, StateKind::Affine { at_zero: 0.0, slope: 1.0 })]),
                        atom(0.5, "+inf", s(1.0), vec![law(1.0, StateKind::Affine { at_zero: 0.0, slope: 1.0 })]),
                    ],
                )],
            },
        ),
        "ex2" => build(
            name,
            1,
            "s",
            Triplet {
                control_names: vec!["s".into()],
                pieces: vec![
                    piece(0.5, TimeSupport::Interval(0.0, 0.5), vec![atom(1.0, "0", s(0.0), vec![law(1.0, StateKind::Point(0.0))])]),
                    piece(0.5, TimeSupport::Interval(0.5, 1.0), vec![atom(1.0, "0", s(0.0), vec![law(1.0, StateKind::Point(-1.0))])]),
                    piece(
                        3.0,
                        TimeSupport::Point(0.5),
                        vec![
                            atom(1.0 / 3.0, "+inf", s(1.0), vec![law(1.0, StateKind::Uniform(0.0, 1.0))]),
                            atom(2.0 / 3.0, "-inf", s(-1.0), vec![law(1.0, StateKind::Uniform(-1.0, 1.0))]),
                        ],
                    ),
                ],
            },
        ),
        _ => return Err(OracleError::UnknownEntry(name.into())),
    })
}

impl OracleEntry {
    /// `int f(t) g0(s) h(y) dmu` with `f` in `t`, `g0` in `s`, `h` in `y`.
    pub fn integral(&self, f: &Polynomial, g0: &Polynomial, h: &Polynomial) -> Result<f64, OracleError> {
        let fq = upoly::from_poly(f, "t")?;
        let hq = upoly::from_poly(h, "y")?;
        let gq = upoly::from_poly(g0, "s").map_err(|e| OracleError::NotCompactified(e.to_string()))?;
        if gq.iter().any(|c| !c.is_finite()) {
            return Err(OracleError::NotCompactified("non-finite coefficient".into()));
        }
        let sp = self.measure.space();
        let idx = |n: &str| sp.index_of(n).ok_or_else(|| OracleError::SpaceMismatch(format!("no `{n}` in {sp:?}")));
        let factors = [(idx("t")?, fq.as_slice()), (idx(&self.s_coordinate)?, gq.as_slice()), (idx("y")?, hq.as_slice())];
        Ok(self.measure.components().iter().map(|c| c.integrate_product(&factors)).sum())
    }
}

/// [`OracleEntry::integral`] for a catalog name.
pub fn anisotropic_integral(name: &str, f: &Polynomial, g0: &Polynomial, h: &Polynomial) -> Result<f64, OracleError> {
    entry(name)?.integral(f, g0, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn p(text: &str) -> Polynomial {
        let sp = VariableSpace::new(["t", "y", "s"]).unwrap();
        Polynomial::parse(text, &sp).unwrap()
    }

    #[test]
    fn sec7_moments() {
        let e = sec7(0.2).unwrap();
        let m = &e.measure;
        assert!((moment_of(m, &mono(&[0, 0, 0, 0])).unwrap() - 1.8).abs() < 1e-15);
        assert!((moment_of(m, &mono(&[1, 0, 0, 0])).unwrap() - 0.5).abs() < 1e-15);
        assert!((moment_of(m, &mono(&[0, 1, 0, 0])).unwrap() - 1.22).abs() < 1e-15);
        assert!((moment_of(m, &mono(&[0, 0, 0, 2])).unwrap() - 0.84).abs() < 1e-15);
        assert!(moment_of(m, &mono(&[1, 0])).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert!((closed_form_moment(MomentVar::Y, 0, 0.2) - 1.8).abs() < 1e-15);
        assert!((closed_form_moment(MomentVar::Y, 2, 0.2) - 0.984).abs() < 1e-15);
        assert!((closed_form_moment(MomentVar::R, 5, 0.2) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn catalog_masses() {
        for (name, mass) in [("sec7", 1.8), ("osc21", 2.0), ("conc22", 2.0), ("dpm23", 2.0), ("ex1b", 2.0), ("ex2", 4.0)] {
            let e = entry(name).unwrap();
            assert!((e.measure.mass() - mass).abs() < 1e-15, "{name}");
            assert!((e.measure.triplet().unwrap().tau_mass() - mass).abs() < 1e-15);
        }
        assert!((entry("sec7(0.5)").unwrap().measure.mass() - 1.5).abs() < 1e-15);
        assert!(matches!(entry("nope"), Err(OracleError::UnknownEntry(_))));
        assert!(entry("sec7(x)").is_err());
    }

    #[test]
    fn spot_values() {
        assert!((anisotropic_integral("ex1b", &p("1"), &p("s"), &p("2*y")).unwrap() - 1.0).abs() < 1e-15);
        assert!((anisotropic_integral("ex1b", &p("1"), &p("1"), &p("2*y")).unwrap() - 2.0).abs() < 1e-15);
        assert!(anisotropic_integral("ex2", &p("1"), &p("1"), &p("2*y")).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rejects_non_compactified_g0() {
        let e = entry("ex1b").unwrap();
        assert!(matches!(e.integral(&p("1"), &p("y"), &p("1")), Err(OracleError::NotCompactified(_))));
    }

    #[test]
    fn invalid_triplets() {
        let mut t = entry("ex2").unwrap().measure.triplet().unwrap().clone();
        t.pieces[2].omega[0].prob = 0.5;
        assert!(matches!(MeasureSpec::from_triplet(t), Err(OracleError::InvalidMeasure(_))));
        let sp = VariableSpace::new(["t"]).unwrap();
        assert!(MeasureSpec::new(sp.clone(), vec![Component::Dirac { weight: 0.0, point: vec![0.0] }]).is_err());
        assert!(MeasureSpec::new(sp, vec![Component::Segment { weight: 1.0, from: vec![0.5], to: vec![0.5] }]).is_err());
    }
}
