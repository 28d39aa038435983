//! Sparse multivariate polynomials over an explicit, ordered set of named
//! variables.
//!
//! Coefficients are `f64`. Every constructor and arithmetic operation returns
//! a canonical polynomial: terms with `|c| < 1e-14` are dropped, so two
//! polynomials over the same [`VariableSpace`] with the same terms compare
//! equal.
//!
//! Monomials are ordered graded-lexicographically by the variable order of
//! the space: lower total degree first, then larger exponents of earlier
//! variables first. Over `(t, y)` this gives `1, t, y, t^2, t*y, y^2, ...`,
//! which is also the moment indexing order used by the relaxation builder.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Coefficients below this magnitude are removed after every operation.
pub const CANCEL_TOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
}

/// Ordered list of variable names shared by a family of polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VariableSpace {
    names: Arc<[String]>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

impl VariableSpace {
    pub fn new<I, S>(names: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(PolyError::InvalidName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(PolyError::InvalidName(format!("{n} (duplicate)")));
            }
        }
        Ok(VariableSpace {
            names: names.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(&self, name: &str) -> Result<Polynomial, PolyError> {
        let i = self.var_index(name)?;
        let mut e = vec![0; self.dim()];
        e[i] = 1;
        Ok(Polynomial::monomial(self, Monomial::new(e), 1.0))
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.dim())
    }
}

impl fmt::Debug for VariableSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VariableSpace({})", self.names.join(", "))
    }
}

/// Exponent vector. Its length is the dimension of the ambient space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps: exps.into() }
    }

    pub fn one(dim: usize) -> Self {
        Monomial::new(vec![0; dim])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.dim(), other.dim());
        Monomial::new(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.exps
            .iter()
            .zip(point)
            .map(|(&e, &x)| x.powi(e as i32))
            .product()
    }

    fn write_with(&self, space: &VariableSpace, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, name) in self.exps.iter().zip(space.names()) {
            if *e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }

    /// Renders the monomial with the variable names of `space`.
    pub fn display<'a>(&'a self, space: &'a VariableSpace) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Monomial, &'a VariableSpace);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write_with(self.1, f)
            }
        }
        D(self, space)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..])
    }
}

/// All monomials in `dim` variables of total degree at most `max_degree`,
/// in graded-lex order.
pub fn monomials_up_to(dim: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        let mut cur = vec![0u32; dim];
        push_of_degree(&mut out, &mut cur, 0, deg);
    }
    out
}

fn push_of_degree(out: &mut Vec<Monomial>, cur: &mut [u32], pos: usize, left: u32) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    if pos == cur.len() - 1 {
        cur[pos] = left;
        out.push(Monomial::new(cur.to_vec()));
        cur[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        push_of_degree(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

#[derive(Clone, PartialEq)]
pub struct Polynomial {
    space: VariableSpace,
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero(space: &VariableSpace) -> Self {
        Polynomial {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: &VariableSpace, c: f64) -> Self {
        Self::monomial(space, space.one(), c)
    }

    pub fn monomial(space: &VariableSpace, m: Monomial, c: f64) -> Self {
        assert_eq!(m.dim(), space.dim(), "monomial dimension");
        let mut p = Self::zero(space);
        if c.abs() >= CANCEL_TOL {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a canonical polynomial from possibly repeated terms.
    pub fn from_terms<I>(space: &VariableSpace, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, f64)>,
    {
        let mut p = Self::zero(space);
        for (m, c) in terms {
            assert_eq!(m.dim(), space.dim(), "monomial dimension");
            *p.terms.entry(m).or_insert(0.0) += c;
        }
        p.canonicalize();
        p
    }

    /// Parses `text` over `space`. See [`parse_poly`].
    pub fn parse(text: &str, space: &VariableSpace) -> Result<Self, PolyError> {
        parse_poly(text, space)
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| c.abs() >= CANCEL_TOL);
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> + '_ {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest exponent of variable `var` over all terms.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponents()[var])
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_terms(&self.space, self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.space, 1.0);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn check_space(&self, other: &Polynomial) {
        assert!(
            self.space == other.space,
            "arithmetic between {:?} and {:?}",
            self.space,
            other.space
        );
    }

    /// Formal partial derivative with respect to `var`.
    pub fn differentiate(&self, var: &str) -> Result<Self, PolyError> {
        let i = self.space.var_index(var)?;
        Ok(Self::from_terms(
            &self.space,
            self.terms.iter().filter_map(|(m, c)| {
                let e = m.exponents()[i];
                (e > 0).then(|| {
                    let mut ex = m.exponents().to_vec();
                    ex[i] -= 1;
                    (Monomial::new(ex), c * e as f64)
                })
            }),
        ))
    }

    /// Simultaneous substitution `var -> image`.
    ///
    /// All images must live in one target space; with no bindings the target
    /// is `self`'s space. Variables without a binding are carried over to the
    /// variable of the same name in the target space.
    pub fn substitute(&self, bindings: &[(&str, Polynomial)]) -> Result<Self, PolyError> {
        let target = match bindings.first() {
            Some((_, p)) => p.space.clone(),
            None => self.space.clone(),
        };
        for (name, img) in bindings {
            self.space.var_index(name)?;
            if img.space != target {
                return Err(PolyError::SpaceMismatch(format!(
                    "image of `{name}` lives in {:?}, expected {:?}",
                    img.space, target
                )));
            }
        }
        let used: Vec<bool> = (0..self.space.dim())
            .map(|i| self.degree_in(i) > 0)
            .collect();
        let mut images: Vec<Option<Polynomial>> = Vec::with_capacity(self.space.dim());
        for (i, name) in self.space.names().iter().enumerate() {
            let img = match bindings.iter().find(|(n, _)| n == name) {
                Some((_, p)) => Some(p.clone()),
                None if used[i] => Some(target.var(name).map_err(|_| {
                    PolyError::SpaceMismatch(format!(
                        "unbound variable `{name}` is missing from {target:?}"
                    ))
                })?),
                None => None,
            };
            images.push(img);
        }
        // powers[i][e] = images[i]^e, built lazily
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::constant(&target, 1.0)]; images.len()];
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, *c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = images[i].as_ref().expect("used variable has an image");
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * img;
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<f64, PolyError> {
        if point.len() != self.space.dim() {
            return Err(PolyError::DimensionMismatch {
                expected: self.space.dim(),
                got: point.len(),
            });
        }
        Ok(self.terms.iter().map(|(m, c)| c * m.eval(point)).sum())
    }

    /// Splits the polynomial by powers of `var`: `self = sum_j out[j] * var^j`,
    /// where no `out[j]` contains `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(&self.space); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exponents()[var] as usize;
            let mut ex = m.exponents().to_vec();
            ex[var] = 0;
            *out[e].terms.entry(Monomial::new(ex)).or_insert(0.0) += c;
        }
        for p in &mut out {
            p.canonicalize();
        }
        out
    }

    /// Largest absolute difference between coefficients.
    pub fn max_coeff_diff(&self, other: &Polynomial) -> f64 {
        self.check_space(other);
        let mut d: f64 = 0.0;
        for (m, c) in &self.terms {
            d = d.max((c - other.coefficient(m)).abs());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                d = d.max(c.abs());
            }
        }
        d
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest degree first; graded-lex within a degree
        let mut ordered: Vec<(&Monomial, f64)> = self.terms().collect();
        ordered.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(a.0.cmp(b.0)));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let neg = c < 0.0;
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a == 1.0 {
                m.write_with(&self.space, f)?;
            } else {
                write!(f, "{a}*")?;
                m.write_with(&self.space, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.space.names().join(","), self)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_space(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            *out.terms.entry(m.clone()).or_insert(0.0) += c;
        }
        out.canonicalize();
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_space(rhs);
        let mut terms: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                *terms.entry(a.mul(b)).or_insert(0.0) += ca * cb;
            }
        }
        let mut out = Polynomial {
            space: self.space.clone(),
            terms,
        };
        out.canonicalize();
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok), PolyError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        match b {
            b'0'..=b'9' | b'.' => {
                let mut seen_dot = false;
                while let Some(&c) = bytes.get(self.pos) {
                    if c.is_ascii_digit() {
                        self.pos += 1;
                    } else if c == b'.' && !seen_dot {
                        seen_dot = true;
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let s = &self.src[start..self.pos];
                s.parse::<f64>()
                    .map(|v| (start, Tok::Num(v)))
                    .map_err(|_| PolyError::Syntax {
                        pos: start,
                        msg: format!("malformed number `{s}`"),
                    })
            }
            b'a'..=b'z' => {
                while let Some(&c) = bytes.get(self.pos) {
                    if c.is_ascii_lowercase() || c.is_ascii_digit() || c == b'_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Ok((start, Tok::Ident(self.src[start..self.pos].to_string())))
            }
            b'+' | b'-' | b'*' | b'^' | b'(' | b')' => {
                self.pos += 1;
                Ok((start, Tok::Op(b as char)))
            }
            _ => Err(PolyError::Syntax {
                pos: start,
                msg: format!("unexpected character `{}`", &self.src[start..].chars().next().unwrap()),
            }),
        }
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    tok_pos: usize,
    space: &'a VariableSpace,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), PolyError> {
        let (p, t) = self.lex.next()?;
        self.tok = t;
        self.tok_pos = p;
        Ok(())
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.tok_pos,
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.tok {
                Tok::Op('+') => {
                    self.bump()?;
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump()?;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        while self.tok == Tok::Op('*') {
            self.bump()?;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.tok {
            Tok::Op('-') => {
                self.bump()?;
                Ok(-&self.unary()?)
            }
            Tok::Op('+') => {
                self.bump()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.tok != Tok::Op('^') {
            return Ok(base);
        }
        self.bump()?;
        match self.tok {
            Tok::Num(v) if v.fract() == 0.0 && v >= 0.0 && v <= u32::MAX as f64 => {
                self.bump()?;
                Ok(base.pow(v as u32))
            }
            _ => self.err("exponent must be a non-negative integer"),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Polynomial::constant(self.space, v))
            }
            Tok::Ident(name) => {
                let p = self
                    .space
                    .var(&name)
                    .map_err(|_| PolyError::UnknownVariable(name.clone()))?;
                self.bump()?;
                Ok(p)
            }
            Tok::Op('(') => {
                self.bump()?;
                let inner = self.expr()?;
                if self.tok != Tok::Op(')') {
                    return self.err("expected `)`");
                }
                self.bump()?;
                Ok(inner)
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Op(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

/// Parses a polynomial written with variables of `space`, decimal literals,
/// `+ - * ^` and parentheses. `^` takes a non-negative integer exponent.
pub fn parse_poly(text: &str, space: &VariableSpace) -> Result<Polynomial, PolyError> {
    let mut p = Parser {
        lex: Lexer { src: text, pos: 0 },
        tok: Tok::End,
        tok_pos: 0,
        space,
    };
    p.bump()?;
    let out = p.expr()?;
    if p.tok != Tok::End {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(names: &[&str]) -> VariableSpace {
        VariableSpace::new(names.iter().copied()).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn parse_distributes() {
        let s = sp(&["t", "y", "r", "w"]);
        let p = parse_poly("(t+y)*r", &s).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient(&mono(&[1, 0, 1, 0])), 1.0);
        assert_eq!(p.coefficient(&mono(&[0, 1, 1, 0])), 1.0);
    }

    #[test]
    fn parse_expands_aux_relation() {
        let s = sp(&["t", "y", "r", "w"]);
        let p = parse_poly("w^2 - r^2 - 0.04*(1-r)^2", &s).unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.coefficient(&mono(&[0, 0, 0, 2])), 1.0);
        assert!((p.coefficient(&mono(&[0, 0, 2, 0])) + 1.04).abs() < 1e-15);
        assert!((p.coefficient(&mono(&[0, 0, 1, 0])) - 0.08).abs() < 1e-15);
        assert!((p.coefficient(&mono(&[0, 0, 0, 0])) + 0.04).abs() < 1e-15);
    }

    #[test]
    fn parse_cancels_to_zero() {
        let s = sp(&["t", "y"]);
        let p = parse_poly("0*t + y - y", &s).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        let s = sp(&["t", "y"]);
        assert_eq!(
            parse_poly("t + z", &s),
            Err(PolyError::UnknownVariable("z".into()))
        );
        match parse_poly("t + * y", &s) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("t^1.5", &s), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("(t", &s), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("t y", &s), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("t # y", &s), Err(PolyError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn printer_is_graded() {
        let s = sp(&["t", "y", "r", "w"]);
        let p = parse_poly("w^2 - r^2 - 0.04*(1-r)^2", &s).unwrap();
        assert_eq!(p.to_string(), "-1.04*r^2 + w^2 + 0.08*r - 0.04");
        let q = parse_poly(&p.to_string(), &s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn derivative_examples() {
        let s = sp(&["t", "y"]);
        let p = parse_poly("t^2*y", &s).unwrap();
        assert_eq!(p.differentiate("t").unwrap(), parse_poly("2*t*y", &s).unwrap());
        let q = parse_poly("t+y", &s).unwrap();
        assert_eq!(q.differentiate("y").unwrap(), Polynomial::constant(&s, 1.0));
        let c = Polynomial::constant(&s, 3.5);
        assert!(c.differentiate("t").unwrap().is_zero());
        assert_eq!(
            c.differentiate("x"),
            Err(PolyError::UnknownVariable("x".into()))
        );
    }

    #[test]
    fn substitution_examples() {
        let src = sp(&["t", "u"]);
        let dst = sp(&["t", "r"]);
        let p = parse_poly("u^2", &src).unwrap();
        let r = dst.var("r").unwrap();
        assert_eq!(p.substitute(&[("u", r.clone())]).unwrap(), parse_poly("r^2", &dst).unwrap());

        let p = parse_poly("t*u", &src).unwrap();
        let img = parse_poly("1-r", &dst).unwrap();
        assert_eq!(
            p.substitute(&[("u", img)]).unwrap(),
            parse_poly("t - t*r", &dst).unwrap()
        );

        let ys = sp(&["y"]);
        let y = ys.var("y").unwrap();
        assert_eq!(y.substitute(&[("y", y.clone())]).unwrap(), y);
    }

    #[test]
    fn substitution_space_errors() {
        let src = sp(&["t", "u"]);
        let a = sp(&["r"]);
        let b = sp(&["t", "r"]);
        let p = parse_poly("t*u", &src).unwrap();
        // t has no counterpart in `a`
        assert!(matches!(
            p.substitute(&[("u", a.var("r").unwrap())]),
            Err(PolyError::SpaceMismatch(_))
        ));
        assert!(matches!(
            p.substitute(&[("u", a.var("r").unwrap()), ("t", b.var("t").unwrap())]),
            Err(PolyError::SpaceMismatch(_))
        ));
        assert!(matches!(
            p.substitute(&[("q", b.var("r").unwrap())]),
            Err(PolyError::UnknownVariable(_))
        ));
    }

    #[test]
    fn evaluation_examples() {
        let s = sp(&["t", "y", "r", "w"]);
        let p = parse_poly("(t+y)*r", &s).unwrap();
        assert_eq!(p.evaluate(&[1.0, 1.0, 1.0, 0.0]).unwrap(), 2.0);
        let q = parse_poly("t^2", &s).unwrap();
        assert_eq!(q.evaluate(&[0.5, 7.0, -2.0, 3.0]).unwrap(), 0.25);
        assert_eq!(Polynomial::zero(&s).evaluate(&[9.0, 9.0, 9.0, 9.0]).unwrap(), 0.0);
        assert_eq!(
            p.evaluate(&[1.0]),
            Err(PolyError::DimensionMismatch { expected: 4, got: 1 })
        );
    }

    #[test]
    fn basis_order() {
        let b = monomials_up_to(2, 2);
        let expect: Vec<Monomial> = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]
            .iter()
            .map(|e| mono(e))
            .collect();
        assert_eq!(b, expect);
        let mut sorted = b.clone();
        sorted.sort();
        assert_eq!(sorted, b);
        assert_eq!(monomials_up_to(4, 2).len(), 15);
    }

    #[test]
    fn degree_of_product() {
        let s = sp(&["t", "y"]);
        let p = parse_poly("t^2*y + 1", &s).unwrap();
        let q = parse_poly("y^4 - t", &s).unwrap();
        assert_eq!((&p * &q).degree(), p.degree() + q.degree());
    }

    #[test]
    fn invalid_names() {
        assert!(VariableSpace::new(["T"]).is_err());
        assert!(VariableSpace::new(["t", "t"]).is_err());
        assert!(VariableSpace::new(["y_1", "a9"]).is_ok());
    }

    #[test]
    fn split_by_variable() {
        let s = sp(&["t", "u"]);
        let p = parse_poly("t*u^2 + 3*u - t + 1", &s).unwrap();
        let parts = p.coefficients_in(1);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], parse_poly("1 - t", &s).unwrap());
        assert_eq!(parts[1], parse_poly("3", &s).unwrap());
        assert_eq!(parts[2], parse_poly("t", &s).unwrap());
    }
}
