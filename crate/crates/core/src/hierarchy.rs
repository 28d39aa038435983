//! Moment relaxations of a [`CompactifiedProblem`].
//!
//! The unknown is the moment vector `y_a = int x^a dgamma` for all monomials
//! of degree at most `2d`. The relaxation of order `d` asks for
//!
//! * the weak-form equalities mapped through `y`,
//! * `L_y(h x^a) = 0` for every support equality `h` and `deg(h x^a) <= 2d`,
//! * a PSD moment matrix `M_d(y)` and PSD localizing matrices
//!   `M_{d - ceil(deg g / 2)}(g y)` for every support inequality `g`,
//!
//! and minimizes `L_y(objective)`.
//!
//! Programs can be written to and read from sparse SDPA files. Variable
//! `x_k` of the file is the moment of the `k`-th monomial in graded-lex
//! order; equalities are stored as pairs of opposite rows in a diagonal
//! block.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use thiserror::Error;

use crate::compactify::{weak_constraints, CompactifiedProblem};
use crate::polyalg::{monomials_up_to, Monomial, PolyError, Polynomial, VariableSpace};

#[derive(Debug, Error)]
pub enum HierarchyError {
    #[error("relaxation order must be at least 1")]
    ZeroOrder,
    #[error("degree overflow: {what} has degree {degree} but the relaxation only reaches {max}")]
    DegreeOverflow {
        what: String,
        degree: u32,
        max: u32,
    },
    #[error("order {order} is too small for a localizing polynomial of degree {degree}")]
    OrderTooSmall { order: u32, degree: u32 },
    #[error("monomial {0:?} is outside the moment index")]
    OutOfRange(Monomial),
    #[error("SDPA input: {0}")]
    Sdpa(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Bijection between monomials of degree `<= order` and `0..len`.
#[derive(Debug)]
pub struct MomentIndex {
    dim: usize,
    order: u32,
    monomials: Vec<Monomial>,
    positions: HashMap<Monomial, usize>,
}

impl MomentIndex {
    pub fn new(dim: usize, order: u32) -> Self {
        let monomials = monomials_up_to(dim, order);
        let positions = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MomentIndex {
            dim,
            order,
            monomials,
            positions,
        }
    }

    /// Shared index for `(dim, order)`, built on first use.
    pub fn cached(dim: usize, order: u32) -> Arc<MomentIndex> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<MomentIndex>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry((dim, order))
            .or_insert_with(|| Arc::new(MomentIndex::new(dim, order)))
            .clone()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.positions.get(m).copied()
    }

    fn require(&self, m: &Monomial) -> Result<usize, HierarchyError> {
        self.position(m)
            .ok_or_else(|| HierarchyError::OutOfRange(m.clone()))
    }

    /// Sparse linear functional `y -> L_y(p * shift)`.
    pub fn functional(
        &self,
        p: &Polynomial,
        shift: &Monomial,
    ) -> Result<Vec<(usize, f64)>, HierarchyError> {
        let mut row = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            row.push((self.require(&m.mul(shift))?, c));
        }
        Ok(normalize(row))
    }
}

/// Sorts by index and merges duplicates.
fn normalize(mut row: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    row.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(row.len());
    for (i, c) in row {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|e| e.1 != 0.0);
    out
}

/// A moment sequence together with its index.
#[derive(Debug, Clone)]
pub struct MomentVector {
    pub index: Arc<MomentIndex>,
    pub values: Vec<f64>,
}

impl MomentVector {
    pub fn get(&self, m: &Monomial) -> Option<f64> {
        self.index.position(m).map(|i| self.values[i])
    }

    /// `int x_var^k` for `k = 0..=order`.
    pub fn marginal(&self, var: usize) -> Vec<f64> {
        (0..=self.index.order())
            .map(|k| {
                let mut e = vec![0; self.index.dim()];
                e[var] = k;
                self.values[self.index.position(&Monomial::new(e)).expect("in range")]
            })
            .collect()
    }

    pub fn mass(&self) -> f64 {
        self.values[0]
    }
}

/// Monomials of degree `<= d`, graded-lex.
pub fn moment_basis(space: &VariableSpace, d: u32) -> Vec<Monomial> {
    monomials_up_to(space.dim(), d)
}

/// Entry `(i, j)` is the position of `basis[i] * basis[j]`.
pub fn moment_matrix(
    space: &VariableSpace,
    d: u32,
    index: &MomentIndex,
) -> Result<Vec<Vec<usize>>, HierarchyError> {
    let basis = moment_basis(space, d);
    basis
        .iter()
        .map(|a| basis.iter().map(|b| index.require(&a.mul(b))).collect())
        .collect()
}

/// Symmetric matrix whose entries are sparse linear functions of `y`.
/// Only the upper triangle is stored, row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SymLinMap {
    size: usize,
    entries: Vec<Vec<(usize, f64)>>,
}

impl SymLinMap {
    pub fn size(&self) -> usize {
        self.size
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.size - i * (i + 1) / 2 + j
    }

    pub fn entry(&self, i: usize, j: usize) -> &[(usize, f64)] {
        &self.entries[self.slot(i, j)]
    }

    /// `(i, j, terms)` over the upper triangle.
    pub fn upper(&self) -> impl Iterator<Item = (usize, usize, &[(usize, f64)])> + '_ {
        let n = self.size;
        (0..n).flat_map(move |i| (i..n).map(move |j| (i, j, self.entry(i, j))))
    }

    pub fn evaluate(&self, y: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.size, self.size);
        for (i, j, terms) in self.upper() {
            let v: f64 = terms.iter().map(|&(k, c)| c * y[k]).sum();
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }
}

/// `M_{d - ceil(deg g / 2)}(g y)`.
pub fn localizing_matrix(
    g: &Polynomial,
    space: &VariableSpace,
    d: u32,
    index: &MomentIndex,
) -> Result<SymLinMap, HierarchyError> {
    let half = (g.degree() + 1) / 2;
    if half > d {
        return Err(HierarchyError::OrderTooSmall {
            order: d,
            degree: g.degree(),
        });
    }
    let basis = moment_basis(space, d - half);
    let n = basis.len();
    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            entries.push(index.functional(g, &basis[i].mul(&basis[j]))?);
        }
    }
    Ok(SymLinMap { size: n, entries })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdBlock {
    pub label: String,
    pub map: SymLinMap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl LinearRow {
    pub fn residual(&self, y: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(k, c)| c * y[k]).sum::<f64>() - self.rhs
    }
}

/// `min <objective, y>` subject to `equalities` and PSD `psd_blocks`.
#[derive(Debug, Clone)]
pub struct ConicProgram {
    pub space: VariableSpace,
    pub index: Arc<MomentIndex>,
    pub objective: Vec<(usize, f64)>,
    pub equalities: Vec<LinearRow>,
    pub psd_blocks: Vec<PsdBlock>,
}

impl ConicProgram {
    pub fn num_moments(&self) -> usize {
        self.index.len()
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        self.objective.iter().map(|&(k, c)| c * y[k]).sum()
    }

    /// Largest absolute equality violation.
    pub fn equality_residual(&self, y: &[f64]) -> f64 {
        self.equalities
            .iter()
            .map(|r| r.residual(y).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue over all PSD blocks (`+inf` without blocks).
    pub fn min_eigenvalue(&self, y: &[f64]) -> f64 {
        self.psd_blocks
            .iter()
            .map(|b| {
                let m = b.map.evaluate(y);
                if m.nrows() == 0 {
                    f64::INFINITY
                } else {
                    m.symmetric_eigenvalues().min()
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn index_comment(&self) -> String {
        format!(
            "\"moments x_k of monomials in ({}) of degree <= {} in graded-lex order, x_1 = mass; equalities are opposite row pairs of the last block",
            self.space.names().join(","),
            self.index.order()
        )
    }

    /// Writes the program in sparse SDPA format.
    pub fn write_sdpa<W: Write>(&self, mut w: W) -> Result<(), HierarchyError> {
        let m = self.num_moments();
        let has_lp = !self.equalities.is_empty();
        let mut sizes: Vec<i64> = self.psd_blocks.iter().map(|b| b.map.size() as i64).collect();
        if has_lp {
            sizes.push(-2 * self.equalities.len() as i64);
        }
        let mut out = String::new();
        writeln!(out, "{}", self.index_comment()).unwrap();
        writeln!(out, "{m}").unwrap();
        writeln!(out, "{}", sizes.len()).unwrap();
        let sz: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
        writeln!(out, "{}", sz.join(" ")).unwrap();
        let mut c = vec![0.0; m];
        for &(k, v) in &self.objective {
            c[k] += v;
        }
        let cs: Vec<String> = c.iter().map(|v| format!("{v:e}")).collect();
        writeln!(out, "{}", cs.join(" ")).unwrap();
        let mut lines: Vec<(usize, usize, usize, usize, f64)> = Vec::new();
        for (b, block) in self.psd_blocks.iter().enumerate() {
            for (i, j, terms) in block.map.upper() {
                for &(k, v) in terms {
                    lines.push((k + 1, b + 1, i + 1, j + 1, v));
                }
            }
        }
        if has_lp {
            let blk = self.psd_blocks.len() + 1;
            for (r, row) in self.equalities.iter().enumerate() {
                let (p, q) = (2 * r + 1, 2 * r + 2);
                if row.rhs != 0.0 {
                    lines.push((0, blk, p, p, row.rhs));
                    lines.push((0, blk, q, q, -row.rhs));
                }
                for &(k, v) in &row.coeffs {
                    lines.push((k + 1, blk, p, p, v));
                    lines.push((k + 1, blk, q, q, -v));
                }
            }
        }
        lines.sort_by(|a, b| (a.0, a.1, a.2, a.3).cmp(&(b.0, b.1, b.2, b.3)));
        for (k, b, i, j, v) in lines {
            writeln!(out, "{k} {b} {i} {j} {v:e}").unwrap();
        }
        w.write_all(out.as_bytes())?;
        Ok(())
    }

    /// Reads a program written by [`ConicProgram::write_sdpa`]. Block labels
    /// are not stored in the file and come back as `block <n>`.
    pub fn read_sdpa<R: BufRead>(r: R) -> Result<ConicProgram, HierarchyError> {
        let bad = |s: &str| HierarchyError::Sdpa(s.to_string());
        let mut comment = None;
        let mut tokens: Vec<String> = Vec::new();
        for line in r.lines() {
            let line = line?;
            let t = line.trim();
            if t.starts_with('"') || t.starts_with('*') {
                if comment.is_none() {
                    comment = Some(t.to_string());
                }
                continue;
            }
            tokens.extend(
                t.split(|c: char| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '(' | ')'))
                    .filter(|s| !s.is_empty())
                    .map(str::to_string),
            );
        }
        let comment = comment.ok_or_else(|| bad("missing moment-index comment line"))?;
        let vars = comment
            .split_once('(')
            .and_then(|(_, rest)| rest.split_once(')'))
            .map(|(v, _)| v.split(',').map(str::trim).map(str::to_string).collect::<Vec<_>>())
            .ok_or_else(|| bad("comment does not list the variables"))?;
        let order: u32 = comment
            .split_once("<=")
            .and_then(|(_, rest)| rest.split_whitespace().next())
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("comment does not state the degree"))?;
        let space = VariableSpace::new(vars)?;
        let index = MomentIndex::cached(space.dim(), order);

        let mut it = tokens.into_iter();
        let mut next_num = |what: &str| -> Result<f64, HierarchyError> {
            it.next()
                .ok_or_else(|| bad(&format!("unexpected end of file reading {what}")))?
                .parse::<f64>()
                .map_err(|_| bad(&format!("malformed number in {what}")))
        };
        let m = next_num("variable count")? as usize;
        if m != index.len() {
            return Err(bad("variable count does not match the moment index"));
        }
        let nblocks = next_num("block count")? as usize;
        let mut sizes = Vec::with_capacity(nblocks);
        for _ in 0..nblocks {
            sizes.push(next_num("block sizes")? as i64);
        }
        let mut objective = Vec::new();
        for k in 0..m {
            let v = next_num("objective")?;
            if v != 0.0 {
                objective.push((k, v));
            }
        }
        // (block, i, j) -> terms; constants under variable usize::MAX
        let mut psd: Vec<HashMap<(usize, usize), Vec<(usize, f64)>>> = vec![HashMap::new(); nblocks];
        loop {
            let k = match next_num("entry") {
                Ok(k) => k as usize,
                Err(_) => break,
            };
            let b = next_num("entry")? as usize;
            let i = next_num("entry")? as usize;
            let j = next_num("entry")? as usize;
            let v = next_num("entry")?;
            if b == 0 || b > nblocks || i == 0 || j == 0 || k > m {
                return Err(bad("entry out of range"));
            }
            let (i, j) = if i <= j { (i - 1, j - 1) } else { (j - 1, i - 1) };
            let var = if k == 0 { usize::MAX } else { k - 1 };
            psd[b - 1].entry((i, j)).or_default().push((var, v));
        }
        let mut psd_blocks = Vec::new();
        let mut equalities = Vec::new();
        for (b, &size) in sizes.iter().enumerate() {
            if size > 0 {
                let n = size as usize;
                let mut entries = Vec::with_capacity(n * (n + 1) / 2);
                for i in 0..n {
                    for j in i..n {
                        let terms = psd[b].remove(&(i, j)).unwrap_or_default();
                        if terms.iter().any(|t| t.0 == usize::MAX) {
                            return Err(bad("constant terms in PSD blocks are not supported"));
                        }
                        entries.push(normalize(terms));
                    }
                }
                psd_blocks.push(PsdBlock {
                    label: format!("block {}", b + 1),
                    map: SymLinMap { size: n, entries },
                });
            } else {
                let n = (-size) as usize;
                if n % 2 != 0 {
                    return Err(bad("diagonal block does not hold row pairs"));
                }
                let mut take = |i: usize| -> (Vec<(usize, f64)>, f64) {
                    let terms = psd[b].remove(&(i, i)).unwrap_or_default();
                    let c = terms.iter().filter(|t| t.0 == usize::MAX).map(|t| t.1).sum();
                    (normalize(terms.into_iter().filter(|t| t.0 != usize::MAX).collect()), c)
                };
                for r in 0..n / 2 {
                    let (a, fa) = take(2 * r);
                    let (bneg, fb) = take(2 * r + 1);
                    let opposite = a.len() == bneg.len()
                        && a.iter().zip(&bneg).all(|(x, y)| x.0 == y.0 && x.1 == -y.1)
                        && fa == -fb;
                    if !opposite {
                        return Err(bad("diagonal rows are not equality pairs"));
                    }
                    equalities.push(LinearRow { coeffs: a, rhs: fa });
                }
            }
        }
        Ok(ConicProgram {
            space,
            index,
            objective,
            equalities,
            psd_blocks,
        })
    }
}

/// Order-`d` relaxation of `cp`.
pub fn assemble(cp: &CompactifiedProblem, d: u32) -> Result<ConicProgram, HierarchyError> {
    if d == 0 {
        return Err(HierarchyError::ZeroOrder);
    }
    let max = 2 * d;
    let check = |what: String, p: &Polynomial| {
        if p.degree() > max {
            Err(HierarchyError::DegreeOverflow {
                what,
                degree: p.degree(),
                max,
            })
        } else {
            Ok(())
        }
    };
    check("the objective".into(), &cp.objective)?;
    for g in &cp.inequalities {
        check(format!("support polynomial {g}"), g)?;
    }
    for h in &cp.equalities {
        check(format!("support equality {h}"), h)?;
    }
    // keep every weak-form integrand within degree 2d
    let fdeg = cp.factor_degree();
    let test_degree = (max + 1).saturating_sub(fdeg.max(1));
    if test_degree == 0 {
        return Err(HierarchyError::DegreeOverflow {
            what: "the dynamics".into(),
            degree: fdeg,
            max,
        });
    }

    let space = cp.space.clone();
    let index = MomentIndex::cached(space.dim(), max);
    let one = Monomial::one(space.dim());
    let objective = index.functional(&cp.objective, &one)?;

    let mut equalities = Vec::new();
    for w in weak_constraints(cp, test_degree) {
        equalities.push(LinearRow {
            coeffs: index.functional(&w.integrand, &one)?,
            rhs: w.rhs,
        });
    }
    for h in &cp.equalities {
        for a in monomials_up_to(space.dim(), max - h.degree()) {
            equalities.push(LinearRow {
                coeffs: index.functional(h, &a)?,
                rhs: 0.0,
            });
        }
    }

    let unit = Polynomial::constant(&space, 1.0);
    let mut psd_blocks = vec![PsdBlock {
        label: "moment matrix".into(),
        map: localizing_matrix(&unit, &space, d, &index)?,
    }];
    for g in &cp.inequalities {
        psd_blocks.push(PsdBlock {
            label: format!("localizing {g}"),
            map: localizing_matrix(g, &space, d, &index)?,
        });
    }
    Ok(ConicProgram {
        space,
        index,
        objective,
        equalities,
        psd_blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compactify::compactify;
    use crate::ocpmodel::OcpProblem;

    fn sp(names: &[&str]) -> VariableSpace {
        VariableSpace::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn basis_examples() {
        let b = moment_basis(&sp(&["t", "y"]), 1);
        assert_eq!(b, vec![Monomial::new(vec![0, 0]), Monomial::new(vec![1, 0]), Monomial::new(vec![0, 1])]);
        assert_eq!(moment_basis(&sp(&["t"]), 3).len(), 4);
        assert_eq!(moment_basis(&sp(&["t", "y", "r", "w"]), 2).len(), 15);
    }

    #[test]
    fn hankel_structure() {
        let s = sp(&["t"]);
        let idx = MomentIndex::new(1, 2);
        assert_eq!(moment_matrix(&s, 1, &idx).unwrap(), vec![vec![0, 1], vec![1, 2]]);

        let s = sp(&["t", "y"]);
        let idx = MomentIndex::new(2, 2);
        let m = moment_matrix(&s, 1, &idx).unwrap();
        assert_eq!(idx.monomial(m[1][2]), &Monomial::new(vec![1, 1]));
        assert_eq!(m[1][2], m[2][1]);
    }

    #[test]
    fn localizing_examples() {
        let s = sp(&["t"]);
        let idx = MomentIndex::new(1, 2);
        let g = Polynomial::parse("t - t^2", &s).unwrap();
        let l = localizing_matrix(&g, &s, 1, &idx).unwrap();
        assert_eq!(l.size(), 1);
        assert_eq!(l.entry(0, 0), &[(1, 1.0), (2, -1.0)]);

        let one = Polynomial::constant(&s, 1.0);
        let l = localizing_matrix(&one, &s, 1, &idx).unwrap();
        let mm = moment_matrix(&s, 1, &idx).unwrap();
        for (i, j, terms) in l.upper() {
            assert_eq!(terms, &[(mm[i][j], 1.0)]);
        }

        let g = Polynomial::parse("t^3", &s).unwrap();
        assert!(matches!(
            localizing_matrix(&g, &s, 1, &idx),
            Err(HierarchyError::OrderTooSmall { .. })
        ));
    }

    const SEC7: &str = r#"{
        "name": "sec7", "states": ["y"], "control": "u", "p": 1,
        "parameters": {"eps": 0.2},
        "lagrangian": "(t+y)*u",
        "dynamics": ["w*(1+u)"],
        "aux": [{"name": "w", "constraints": ["w^2 - r^2 - eps^2*(1-r)^2"], "bounds": [0, 1]}],
        "y0": [0], "y1": [1],
        "bounds": {"t": [0, 1], "y": [0, 1], "u": [0, null]}
    }"#;

    const OSC: &str = r#"{
        "name": "osc", "states": ["y"], "control": "u", "p": 4,
        "lagrangian": "(u^2-1)^2 + y^2", "dynamics": ["u"],
        "y0": [0], "y1": [0],
        "bounds": {"t": [0, 1], "y": [-1, 1], "u": [-1, 1]}
    }"#;

    fn compact(text: &str) -> CompactifiedProblem {
        compactify(&OcpProblem::from_json_str(text, &Default::default()).unwrap()).unwrap()
    }

    #[test]
    fn concentration_program_shape() {
        let cp = compact(SEC7);
        let prog = assemble(&cp, 6).unwrap();
        assert_eq!(prog.num_moments(), 1820);
        let obj: Vec<Monomial> = prog.objective.iter().map(|&(k, _)| prog.index.monomial(k).clone()).collect();
        assert_eq!(obj.len(), 2);
        assert!(obj.contains(&Monomial::new(vec![1, 0, 1, 0])));
        assert!(obj.contains(&Monomial::new(vec![0, 1, 1, 0])));
        assert_eq!(prog.psd_blocks.len(), 5);
        assert_eq!(prog.psd_blocks[0].map.size(), 210);
        // 90 weak-form rows and C(14, 4) localized equality rows
        assert_eq!(prog.equalities.len(), 90 + 1001);
    }

    #[test]
    fn oscillation_program_blocks() {
        let cp = compact(OSC);
        let prog = assemble(&cp, 2).unwrap();
        let labels: Vec<&str> = prog.psd_blocks.iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels.len(), 4);
        assert_eq!(labels[0], "moment matrix");
        let g: Vec<Polynomial> = ["t - t^2", "y - y^2", "1 - u^2"]
            .iter()
            .map(|s| Polynomial::parse(s, &cp.space).unwrap())
            .collect();
        for (b, gi) in prog.psd_blocks[1..].iter().zip(&g) {
            assert_eq!(b.label, format!("localizing {gi}"));
            assert_eq!(b.map.size(), 4);
        }
    }

    #[test]
    fn degree_overflow() {
        let cp = compact(&OSC.replace("(u^2-1)^2 + y^2", "u^6"));
        assert!(matches!(assemble(&cp, 2), Err(HierarchyError::DegreeOverflow { .. })));
        assert!(matches!(assemble(&cp, 0), Err(HierarchyError::ZeroOrder)));
        assert!(assemble(&cp, 3).is_ok());
    }

    #[test]
    fn sdpa_round_trip() {
        let prog = assemble(&compact(SEC7), 2).unwrap();
        let mut buf = Vec::new();
        prog.write_sdpa(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with('"')).count(), 1);
        let back = ConicProgram::read_sdpa(&buf[..]).unwrap();
        assert_eq!(back.space, prog.space);
        assert_eq!(back.objective, prog.objective);
        assert_eq!(back.equalities, prog.equalities);
        assert_eq!(back.psd_blocks.len(), prog.psd_blocks.len());
        for (a, b) in back.psd_blocks.iter().zip(&prog.psd_blocks) {
            assert_eq!(a.map, b.map);
        }
    }

    #[test]
    fn sdpa_rejects_garbage() {
        assert!(ConicProgram::read_sdpa(&b"1\n1\n1\n1\n"[..]).is_err());
    }
}
