//! Minimizing control sequences at finite `k` and exact integration along
//! them.
//!
//! Every sequence is piecewise constant in the control and piecewise affine
//! in the state, so all integrals of polynomial data are evaluated in closed
//! form, one piece at a time.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::oracles::{self, OracleError};
use crate::polyalg::{PolyError, Polynomial};
use crate::upoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeqError {
    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),
    #[error("k = {k} is out of range for `{name}` (allowed {min}..={max})")]
    KOutOfRange { name: String, k: u64, min: u64, max: u64 },
    #[error("`{0}` has no associated cost")]
    NoCost(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Largest `k` accepted by [`make_sequence`].
pub const MAX_K: u64 = 1 << 22;

/// Sequence names accepted by [`make_sequence`]; `sec7` also accepts `sec7(eps)`.
pub const SEQUENCES: [&str; 6] = ["osc", "conc", "oscconc", "ex1", "ex2", "sec7"];

/// One piece `[t0, t1]` with constant control `u` and `y = y0 + slope (t - t0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub t0: f64,
    pub t1: f64,
    pub u: f64,
    pub y0: f64,
    pub slope: f64,
}

impl Piece {
    pub fn len(&self) -> f64 {
        self.t1 - self.t0
    }

    pub fn y1(&self) -> f64 {
        self.y0 + self.slope * self.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    Osc,
    Conc,
    OscConc,
    Ex1,
    Ex2,
    Sec7(f64),
}

/// `(u_k, y_k)` for one `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec {
    pub name: String,
    pub k: u64,
    pub pieces: Vec<Piece>,
    family: Family,
}

fn parse_family(name: &str) -> Result<Family, SeqError> {
    let unknown = || SeqError::UnknownSequence(name.into());
    if let Some(eps) = oracles::sec7_parameter(name) {
        let eps = eps.ok_or_else(unknown)?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(unknown());
        }
        return Ok(Family::Sec7(eps));
    }
    Ok(match name.trim() {
        "osc" => Family::Osc,
        "conc" => Family::Conc,
        "oscconc" => Family::OscConc,
        "ex1" => Family::Ex1,
        "ex2" => Family::Ex2,
        _ => return Err(unknown()),
    })
}

/// Appends pieces with control `u` and `dy/dt = slope` over `[a, b]`,
/// continuing the state from the previous piece.
struct Builder {
    pieces: Vec<Piece>,
    y: f64,
}

impl Builder {
    fn new(y0: f64) -> Self {
        Builder { pieces: Vec::new(), y: y0 }
    }

    fn push(&mut self, t0: f64, t1: f64, u: f64, slope: f64) {
        if t1 <= t0 {
            return;
        }
        let p = Piece { t0, t1, u, y0: self.y, slope };
        self.y = p.y1();
        self.pieces.push(p);
    }

    fn control(&mut self, t0: f64, t1: f64, u: f64) {
        self.push(t0, t1, u, u);
    }
}

/// Builds the `k`-th member of a named sequence.
pub fn make_sequence(name: &str, k: u64) -> Result<SequenceSpec, SeqError> {
    let family = parse_family(name)?;
    let min = match family {
        Family::Osc | Family::OscConc => 1,
        _ => 2,
    };
    if k < min || k > MAX_K {
        return Err(SeqError::KOutOfRange { name: name.trim().into(), k, min, max: MAX_K });
    }
    let kf = k as f64;
    let mut b = Builder::new(0.0);
    match family {
        Family::Osc if k == 1 => b.control(0.0, 1.0, 0.0),
        // k periods: -1 on the first half of each, +1 on the second
        Family::Osc => {
            for l in 0..k {
                let a = l as f64 / kf;
                let m = (2 * l + 1) as f64 / (2.0 * kf);
                let e = (l + 1) as f64 / kf;
                b.control(a, m, -1.0);
                b.control(m, e, 1.0);
            }
        }
        Family::Conc => {
            let a = (kf - 1.0) / (2.0 * kf);
            let e = (kf + 1.0) / (2.0 * kf);
            b.control(0.0, a, 0.0);
            b.control(a, e, kf);
            b.control(e, 1.0, 0.0);
        }
        Family::OscConc if k == 1 => b.control(0.0, 1.0, 1.0),
        Family::OscConc => {
            let h = 1.0 / (2.0 * kf * kf);
            let mut t = 0.0;
            for l in 1..k {
                let c = l as f64 / kf;
                b.control(t, c - h, 0.0);
                // closed-form state, avoiding the rounding of c +- h
                b.y = (l - 1) as f64 / kf;
                b.control(c - h, c + h, kf);
                b.y = l as f64 / kf;
                t = c + h;
            }
            b.control(t, 1.0, 0.0);
        }
        Family::Ex1 => {
            b.control(0.0, 0.5, 0.0);
            b.control(0.5, 0.5 + 1.0 / kf, kf);
            b.control(0.5 + 1.0 / kf, 1.0, 0.0);
        }
        Family::Ex2 => {
            b.control(0.0, 0.5 - 1.0 / kf, 0.0);
            b.control(0.5 - 1.0 / kf, 0.5, kf);
            b.control(0.5, 0.5 + 1.0 / kf, -2.0 * kf);
            b.control(0.5 + 1.0 / kf, 1.0, 0.0);
        }
        // dy/dt = sqrt(u^2 + eps^2)
        Family::Sec7(eps) => {
            let a = kf * (1.0 - eps) + eps;
            b.push(0.0, 1.0 / kf, (a * a - eps * eps).sqrt(), a);
            b.push(1.0 / kf, 1.0, 0.0, eps);
        }
    }
    Ok(SequenceSpec { name: name.trim().into(), k, pieces: b.pieces, family })
}

impl SequenceSpec {
    /// Sorted breakpoints `t_0 = 0 < ... < t_n = 1`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.pieces.iter().map(|p| p.t0).collect();
        out.push(self.pieces.last().map_or(0.0, |p| p.t1));
        out
    }

    fn piece_at(&self, t: f64) -> &Piece {
        let i = self.pieces.partition_point(|p| p.t1 <= t);
        &self.pieces[i.min(self.pieces.len() - 1)]
    }

    /// Right-continuous control value.
    pub fn u_at(&self, t: f64) -> f64 {
        self.piece_at(t).u
    }

    pub fn y_at(&self, t: f64) -> f64 {
        let p = self.piece_at(t);
        p.y0 + p.slope * (t - p.t0)
    }

    pub fn y_end(&self) -> f64 {
        self.pieces.last().map_or(0.0, Piece::y1)
    }

    /// Growth exponent `p` of the problem the sequence minimizes.
    pub fn growth(&self) -> u32 {
        match self.family {
            Family::Osc => 4,
            _ => 1,
        }
    }

    /// Catalog entry of the limit measure.
    pub fn oracle_name(&self) -> String {
        match self.family {
            Family::Osc => "osc21".into(),
            Family::Conc => "conc22".into(),
            Family::OscConc => "dpm23".into(),
            Family::Ex1 => "ex1b".into(),
            Family::Ex2 => "ex2".into(),
            Family::Sec7(eps) => format!("sec7({eps})"),
        }
    }

    /// `sum over pieces of int weight(u) * f(t) * h(y) dt` with `f` in `t`
    /// and `h` in `y`.
    pub fn integrate_with<G>(&self, f: &Polynomial, weight: G, h: &Polynomial) -> Result<f64, SeqError>
    where
        G: Fn(f64) -> f64,
    {
        let fq = upoly::from_poly(f, "t")?;
        let hq = upoly::from_poly(h, "y")?;
        Ok(self
            .pieces
            .iter()
            .map(|p| {
                let w = weight(p.u);
                if w == 0.0 {
                    return 0.0;
                }
                let q = upoly::mul(&upoly::compose_affine(&fq, p.t0, 1.0), &upoly::compose_affine(&hq, p.y0, p.slope));
                w * upoly::integrate_from_zero(&q, p.len())
            })
            .sum())
    }
}

/// `s = u / (1 + |u|)`.
pub fn compactify(u: f64) -> f64 {
    u / (1.0 + u.abs())
}

/// `int f(t) g0(s(u_k)) (1 + |u_k|^p) h(y_k) dt` with `g0` in `s`.
pub fn integrate(seq: &SequenceSpec, f: &Polynomial, g0: &Polynomial, h: &Polynomial, p: u32) -> Result<f64, SeqError> {
    let gq = upoly::from_poly(g0, "s")?;
    seq.integrate_with(f, |u| upoly::eval(&gq, compactify(u)) * (1.0 + u.abs().powi(p as i32)), h)
}

/// `int L(t, y_k, u_k) dt` for `L` over a space containing `t`, `y`, `u`
/// (any of them may be absent).
pub fn integrate_polynomial(seq: &SequenceSpec, l: &Polynomial) -> Result<f64, SeqError> {
    let sp = l.space();
    let it = sp.index_of("t");
    let iy = sp.index_of("y");
    let iu = sp.index_of("u");
    for (i, n) in sp.names().iter().enumerate() {
        if ![it, iy, iu].contains(&Some(i)) && l.degree_in(i) > 0 {
            return Err(PolyError::SpaceMismatch(format!("unexpected variable `{n}` along a sequence")).into());
        }
    }
    let exp = |m: &crate::polyalg::Monomial, i: Option<usize>| i.map_or(0, |i| m.exponents()[i] as usize);
    let unit = |e: usize| {
        let mut q = vec![0.0; e + 1];
        q[e] = 1.0;
        q
    };
    let mut total = 0.0;
    for p in &seq.pieces {
        for (m, c) in l.terms() {
            let q = upoly::mul(
                &upoly::compose_affine(&unit(exp(m, it)), p.t0, 1.0),
                &upoly::compose_affine(&unit(exp(m, iy)), p.y0, p.slope),
            );
            total += c * p.u.powi(exp(m, iu) as i32) * upoly::integrate_from_zero(&q, p.len());
        }
    }
    Ok(total)
}

/// Cost of the sequence in the problem it minimizes.
pub fn cost(seq: &SequenceSpec) -> Result<f64, SeqError> {
    let sp = crate::polyalg::VariableSpace::new(["t", "y", "u"])?;
    let poly = |s: &str| Polynomial::parse(s, &sp);
    match seq.family {
        Family::Osc => integrate_polynomial(seq, &poly("(u^2 - 1)^2 + y^2")?),
        Family::Conc => integrate_polynomial(seq, &poly("(t - 0.5)^2*u")?),
        Family::OscConc => {
            let track = integrate_polynomial(seq, &poly("(y - t)^2")?)?;
            let one = Polynomial::constant(&sp, 1.0);
            let ratio = seq.integrate_with(&one, |u| u * u / (1.0 + u.powi(4)), &one)?;
            Ok(track + ratio)
        }
        Family::Sec7(_) => integrate_polynomial(seq, &poly("(t + y)*u")?),
        Family::Ex1 | Family::Ex2 => Err(SeqError::NoCost(seq.name.clone())),
    }
}

/// Limit of [`cost`] as `k -> inf`: the optimal value of the problem.
pub fn optimal_value(name: &str) -> Result<f64, SeqError> {
    match parse_family(name)? {
        Family::Osc | Family::Conc | Family::OscConc => Ok(0.0),
        // int (t + y) r dmu
        Family::Sec7(eps) => {
            let e = oracles::sec7(eps)?;
            let sp = crate::polyalg::VariableSpace::new(["t", "y", "s"])?;
            let p = |s: &str| Polynomial::parse(s, &sp);
            Ok(e.integral(&p("t")?, &p("s")?, &p("1")?)? + e.integral(&p("1")?, &p("s")?, &p("y")?)?)
        }
        Family::Ex1 | Family::Ex2 => Err(SeqError::NoCost(name.trim().into())),
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub k: u64,
    pub value: f64,
    pub error: f64,
}

/// Values of [`integrate`] along the sequence for each `k`, against the
/// limit given by the sequence's catalog entry.
pub fn convergence_report(
    name: &str,
    f: &Polynomial,
    g0: &Polynomial,
    h: &Polynomial,
    k_list: &[u64],
) -> Result<Vec<ConvergenceRow>, SeqError> {
    let probe = make_sequence(name, *k_list.iter().max().unwrap_or(&2))?;
    let limit = oracles::entry(&probe.oracle_name())?.integral(f, g0, h)?;
    let p = probe.growth();
    k_list
        .par_iter()
        .map(|&k| {
            let value = integrate(&make_sequence(name, k)?, f, g0, h, p)?;
            Ok(ConvergenceRow { k, value, error: (value - limit).abs() })
        })
        .collect()
}

/// Geometric grid `2, 4, ..., 2^max_exp`.
pub fn dyadic_ks(max_exp: u32) -> Vec<u64> {
    (1..=max_exp).map(|e| 1u64 << e).collect()
}

/// Gnuplot data: one block per sequence (separated by two blank lines) with
/// columns `t u y`, each breakpoint listed twice so `u` plots as a staircase.
pub fn gnuplot_data(seqs: &[SequenceSpec]) -> String {
    let mut out = String::new();
    for (n, seq) in seqs.iter().enumerate() {
        if n > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# {} k={}", seq.name, seq.k);
        let _ = writeln!(out, "# t u y");
        for p in &seq.pieces {
            let _ = writeln!(out, "{} {} {}", p.t0, p.u, p.y0);
            let _ = writeln!(out, "{} {} {}", p.t1, p.u, p.y1());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::VariableSpace;

    fn p(text: &str) -> Polynomial {
        let sp = VariableSpace::new(["t", "y", "s"]).unwrap();
        Polynomial::parse(text, &sp).unwrap()
    }

    #[test]
    fn boundary_values() {
        for k in [2, 3, 8, 1000] {
            assert!(make_sequence("osc", k).unwrap().y_end().abs() < 1e-12);
            assert!((make_sequence("conc", k).unwrap().y_end() - 1.0).abs() < 1e-12);
            assert!((make_sequence("ex1", k).unwrap().y_end() - 1.0).abs() < 1e-12);
            assert!((make_sequence("ex2", k).unwrap().y_end() + 1.0).abs() < 1e-12);
            assert!((make_sequence("sec7(0.2)", k).unwrap().y_end() - 1.0).abs() < 1e-12);
            let kf = k as f64;
            assert!((make_sequence("oscconc", k).unwrap().y_end() - (kf - 1.0) / kf).abs() < 1e-12);
        }
    }

    #[test]
    fn pieces_tile_the_interval() {
        for name in SEQUENCES {
            for k in [2, 5, 64] {
                let s = make_sequence(name, k).unwrap();
                let bp = s.breakpoints();
                assert_eq!(bp[0], 0.0);
                assert!((bp[bp.len() - 1] - 1.0).abs() < 1e-15);
                assert!(bp.windows(2).all(|w| w[0] < w[1]), "{name} {k}");
                assert!(s.pieces.windows(2).all(|w| (w[0].y1() - w[1].y0).abs() < 1e-12 && w[0].t1 == w[1].t0));
            }
        }
    }

    #[test]
    fn conc_example() {
        let s = make_sequence("conc", 10).unwrap();
        assert_eq!(s.u_at(0.5), 10.0);
        assert_eq!(s.u_at(0.3), 0.0);
        assert!((s.pieces[1].t0 - 0.45).abs() < 1e-15 && (s.pieces[1].t1 - 0.55).abs() < 1e-15);
    }

    #[test]
    fn osc_at_two() {
        let s = make_sequence("osc", 2).unwrap();
        let u: Vec<f64> = s.pieces.iter().map(|p| p.u).collect();
        assert_eq!(u, vec![-1.0, 1.0, -1.0, 1.0]);
        assert_eq!(make_sequence("osc", 1).unwrap().pieces[0].u, 0.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(make_sequence("bang", 2), Err(SeqError::UnknownSequence(_))));
        assert!(matches!(make_sequence("conc", 1), Err(SeqError::KOutOfRange { .. })));
        assert!(matches!(make_sequence("sec7(1.5)", 2), Err(SeqError::UnknownSequence(_))));
        assert!(matches!(cost(&make_sequence("ex1", 4).unwrap()), Err(SeqError::NoCost(_))));
        assert!(matches!(optimal_value("ex2"), Err(SeqError::NoCost(_))));
    }

    #[test]
    fn sec7_optimal_value() {
        for eps in [0.1, 0.2, 0.5] {
            let v = optimal_value(&format!("sec7({eps})")).unwrap();
            assert!((v - (1.0 - eps) * (1.0 - eps) / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn telescoping_spot_value() {
        for k in [2, 7, 100] {
            let s = make_sequence("ex1", k).unwrap();
            assert!((integrate(&s, &p("1"), &p("s"), &p("2*y"), 1).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gnuplot_blocks() {
        let seqs: Vec<_> = [1, 2].iter().map(|&k| make_sequence("osc", k).unwrap()).collect();
        let d = gnuplot_data(&seqs);
        assert_eq!(d.matches("\n\n\n").count(), 1);
        assert_eq!(d.lines().filter(|l| !l.is_empty() && !l.starts_with('#')).count(), 2 + 8);
    }
}
