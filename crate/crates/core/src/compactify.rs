//! Compactification of an [`OcpProblem`] into a linear program over
//! nonnegative measures supported on a compact semialgebraic set.
//!
//! An unbounded control `u >= 0` with growth `p = 1` is replaced by
//! `r = u/(1+u)` in `[0,1]`. Every integrand is divided by `1+u`, so a
//! numerator `P(u) = sum_j P_j u^j` over `(1+u)^k` becomes the polynomial
//! `sum_j P_j r^j (1-r)^(k-j)` provided `deg_u P <= k`. A compact control
//! is kept as is. States are rescaled affinely onto `[0,1]`.
//!
//! The resulting measure `gamma` satisfies, for every test function `v(t,y)`,
//!
//! ```text
//! int (dv/dt * D_t + sum_i dv/dy_i * D_i) dgamma = v(1, y1) - v(0, y0)
//! ```
//!
//! and the relaxed cost is `int objective dgamma`.

use thiserror::Error;

use crate::ocpmodel::{Interval, OcpProblem};
use crate::polyalg::{monomials_up_to, Monomial, PolyError, Polynomial, VariableSpace};

#[derive(Debug, Error)]
pub enum CompactifyError {
    #[error("problem is invalid: {0}")]
    Invalid(String),
    #[error("growth/homogenization mismatch: {0}")]
    GrowthMismatch(String),
    #[error("unbounded control requires growth exponent p = 1 (got p = {0})")]
    UnsupportedGrowth(u32),
    #[error("denominator of {0} is not a power of (1+u)")]
    BadDenominator(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// How the control was mapped into the compactified space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlMap {
    /// `r = u/(1+u)` on `[0, inf)`.
    Rational,
    /// The control is kept; its bounds are given.
    Identity(Interval),
}

#[derive(Debug, Clone)]
pub struct CompactifiedProblem {
    pub name: String,
    /// `(t, states.., r or u, aux..)`.
    pub space: VariableSpace,
    pub state_count: usize,
    pub control: ControlMap,
    pub objective: Polynomial,
    /// Weight of `dv/dt`: `1-r` after compactification, `1` otherwise.
    pub time_factor: Polynomial,
    /// Weight of `dv/dy_i`.
    pub state_factors: Vec<Polynomial>,
    /// Support inequalities `g >= 0`.
    pub inequalities: Vec<Polynomial>,
    /// Support equalities `h = 0`.
    pub equalities: Vec<Polynomial>,
    /// Boundary values in rescaled coordinates.
    pub y0: Vec<f64>,
    pub y1: Vec<f64>,
    /// `y = lo + width * y_scaled`, one pair per state.
    pub state_scaling: Vec<(f64, f64)>,
}

/// One linear constraint `int integrand dgamma = rhs` coming from a test
/// monomial.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakConstraint {
    pub test: Monomial,
    pub integrand: Polynomial,
    pub rhs: f64,
}

fn homogenize(
    p: &Polynomial,
    u: usize,
    k: u32,
    r: &Polynomial,
    target: &VariableSpace,
    what: &str,
) -> Result<Polynomial, CompactifyError> {
    let coeffs = p.coefficients_in(u);
    if coeffs.len() as u32 > k + 1 {
        return Err(CompactifyError::GrowthMismatch(format!(
            "{what} has degree {} in the control but at most {k} is allowed",
            coeffs.len() - 1
        )));
    }
    let one_minus_r = &Polynomial::constant(target, 1.0) - r;
    let mut out = Polynomial::zero(target);
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // c does not contain u; variables carry over by name.
        let cj = c.substitute(&[(p.space().names()[u].as_str(), r.clone())])?;
        out = &out + &(&(&cj * &r.pow(j as u32)) * &one_minus_r.pow(k - j as u32));
    }
    Ok(out)
}

/// Power `q` such that `den = (1+u)^q`, if any.
fn denominator_power(den: &Polynomial, u: usize) -> Option<u32> {
    let q = den.degree_in(u);
    let one_plus_u = &Polynomial::constant(den.space(), 1.0)
        + &Polynomial::monomial(den.space(), unit(den.space().dim(), u), 1.0);
    let expect = one_plus_u.pow(q);
    (den.max_coeff_diff(&expect) <= 1e-12).then_some(q)
}

fn unit(dim: usize, i: usize) -> Monomial {
    let mut e = vec![0; dim];
    e[i] = 1;
    Monomial::new(e)
}

/// `(x - lo)(hi - x)`, or `x - x^2` on the unit interval.
fn box_constraint(space: &VariableSpace, var: &str, b: Interval) -> Result<Polynomial, PolyError> {
    let x = space.var(var)?;
    let lo = Polynomial::constant(space, b.lo);
    let hi = Polynomial::constant(space, b.hi);
    Ok(&(&x - &lo) * &(&hi - &x))
}

pub fn compactify(problem: &OcpProblem) -> Result<CompactifiedProblem, CompactifyError> {
    let diags = problem.validate();
    if !diags.is_empty() {
        let msg: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        return Err(CompactifyError::Invalid(msg.join("; ")));
    }
    let n = problem.state_dim();
    let space = problem.compact_space().clone();
    let src = problem.space();
    let u_src = src.var_index(problem.control_name())?;

    // y = lo + width * y~, expressed in the compact space
    let scaling: Vec<(f64, f64)> = problem
        .state_bounds
        .iter()
        .map(|b| (b.lo, b.width()))
        .collect();
    let state_images = |target: &VariableSpace| -> Result<Vec<(&str, Polynomial)>, PolyError> {
        problem
            .states
            .iter()
            .zip(&scaling)
            .map(|(s, &(lo, w))| {
                Ok((
                    s.as_str(),
                    &Polynomial::constant(target, lo) + &target.var(s)?.scale(w),
                ))
            })
            .collect()
    };

    let control_slot = 1 + n;
    let control_var = space.names()[control_slot].clone();
    let (objective, time_factor, state_factors, control, control_support) =
        if problem.control_is_unbounded() {
            if problem.growth != 1 {
                return Err(CompactifyError::UnsupportedGrowth(problem.growth));
            }
            let r = space.var(&control_var)?;
            let p = problem.growth;
            // state rescaling happens in the source space first
            let scaled_src = state_images(src)?;
            let objective = homogenize(
                &problem.lagrangian.substitute(&scaled_src)?,
                u_src,
                p,
                &r,
                &space,
                "lagrangian",
            )?;
            let time_factor = &Polynomial::constant(&space, 1.0) - &r;
            let mut factors = Vec::with_capacity(n);
            for (i, d) in problem.dynamics.iter().enumerate() {
                let what = format!("dynamics[{i}]");
                let q = match &d.denominator {
                    None => 0,
                    Some(den) => denominator_power(den, u_src)
                        .ok_or_else(|| CompactifyError::BadDenominator(what.clone()))?,
                };
                let num = d.numerator.substitute(&scaled_src)?;
                let f0 = homogenize(&num, u_src, p + q, &r, &space, &what)?;
                factors.push(f0.scale(1.0 / scaling[i].1));
            }
            let support = &r - &r.pow(2);
            (objective, time_factor, factors, ControlMap::Rational, support)
        } else {
            let b = problem.control_bounds[0];
            let scaled = state_images(&space)?;
            let to_compact = |p: &Polynomial| p.substitute(&scaled);
            let objective = to_compact(&problem.lagrangian)?;
            let mut factors = Vec::with_capacity(n);
            for (i, d) in problem.dynamics.iter().enumerate() {
                if d.denominator.as_ref().map_or(false, |q| q.degree() > 0) {
                    return Err(CompactifyError::BadDenominator(format!(
                        "dynamics[{i}] (denominators need an unbounded control)"
                    )));
                }
                let den = d
                    .denominator
                    .as_ref()
                    .map_or(1.0, |q| q.coefficient(&Monomial::one(src.dim())));
                factors.push(to_compact(&d.numerator)?.scale(1.0 / (den * scaling[i].1)));
            }
            let support = box_constraint(&space, &control_var, b)?;
            (
                objective,
                Polynomial::constant(&space, 1.0),
                factors,
                ControlMap::Identity(b),
                support,
            )
        };

    let mut inequalities = Vec::new();
    inequalities.push(box_constraint(&space, "t", Interval::new(0.0, 1.0))?);
    for s in &problem.states {
        inequalities.push(box_constraint(&space, s, Interval::new(0.0, 1.0))?);
    }
    inequalities.push(control_support);
    let mut equalities = Vec::new();
    let scaled = state_images(&space)?;
    for a in &problem.aux {
        inequalities.push(box_constraint(&space, &a.name, a.bounds)?);
        for h in &a.constraints {
            equalities.push(h.substitute(&scaled)?);
        }
    }

    let rescale = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .zip(&scaling)
            .map(|(x, (lo, w))| (x - lo) / w)
            .collect()
    };
    Ok(CompactifiedProblem {
        name: problem.name.clone(),
        space,
        state_count: n,
        control,
        objective,
        time_factor,
        state_factors,
        inequalities,
        equalities,
        y0: rescale(&problem.y0),
        y1: rescale(&problem.y1),
        state_scaling: scaling,
    })
}

impl CompactifiedProblem {
    /// Index of the control (or `r`) variable in [`Self::space`].
    pub fn control_index(&self) -> usize {
        1 + self.state_count
    }

    /// Largest degree among the time and state factors.
    pub fn factor_degree(&self) -> u32 {
        self.state_factors
            .iter()
            .chain(std::iter::once(&self.time_factor))
            .map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    /// Value of `v(t, y)` at `t` with rescaled state `y`.
    fn eval_test(&self, v: &Monomial, t: f64, y: &[f64]) -> f64 {
        let e = v.exponents();
        let mut x = t.powi(e[0] as i32);
        for (i, yi) in y.iter().enumerate() {
            x *= yi.powi(e[1 + i] as i32);
        }
        x
    }

    /// Integrand and boundary value for one test monomial `v(t, y)`.
    pub fn weak_constraint(&self, v: &Monomial) -> WeakConstraint {
        let names = self.space.names();
        let vp = Polynomial::monomial(&self.space, v.clone(), 1.0);
        let mut integrand = &vp.differentiate(&names[0]).expect("t") * &self.time_factor;
        for i in 0..self.state_count {
            let dv = vp.differentiate(&names[1 + i]).expect("state");
            integrand = &integrand + &(&dv * &self.state_factors[i]);
        }
        let rhs = self.eval_test(v, 1.0, &self.y1) - self.eval_test(v, 0.0, &self.y0);
        WeakConstraint {
            test: v.clone(),
            integrand,
            rhs,
        }
    }

    /// Test monomials in `(t, y)` of degree `1..=degree`, embedded in the
    /// compactified space.
    pub fn test_monomials(&self, degree: u32) -> Vec<Monomial> {
        let dim = self.space.dim();
        monomials_up_to(1 + self.state_count, degree)
            .into_iter()
            .filter(|m| !m.is_one())
            .map(|m| {
                let mut e = m.exponents().to_vec();
                e.resize(dim, 0);
                Monomial::new(e)
            })
            .collect()
    }

    /// Maps a raw marginal moment sequence of a compact variable back to the
    /// original coordinates. `raw[j]` is the moment of `x^j`; states are
    /// un-scaled with the binomial formula, other variables pass through.
    pub fn unscale_marginal(&self, var: usize, raw: &[f64]) -> Vec<f64> {
        if var == 0 || var > self.state_count {
            return raw.to_vec();
        }
        let (lo, w) = self.state_scaling[var - 1];
        (0..raw.len())
            .map(|k| {
                let mut binom = 1.0;
                let mut acc = 0.0;
                for j in 0..=k {
                    acc += binom * lo.powi((k - j) as i32) * w.powi(j as i32) * raw[j];
                    binom = binom * (k - j) as f64 / (j + 1) as f64;
                }
                acc
            })
            .collect()
    }
}

/// One constraint per test monomial `v = t^a y^b` with `1 <= deg v <= degree`.
pub fn weak_constraints(cp: &CompactifiedProblem, degree: u32) -> Vec<WeakConstraint> {
    cp.test_monomials(degree)
        .iter()
        .map(|v| cp.weak_constraint(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

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

    fn load(text: &str) -> OcpProblem {
        OcpProblem::from_json_str(text, &BTreeMap::new()).unwrap()
    }

    fn poly(cp: &CompactifiedProblem, s: &str) -> Polynomial {
        Polynomial::parse(s, &cp.space).unwrap()
    }

    #[test]
    fn concentration_example() {
        let cp = compactify(&load(SEC7)).unwrap();
        assert_eq!(cp.space.names(), &["t", "y", "r", "w"]);
        assert_eq!(cp.objective, poly(&cp, "(t+y)*r"));
        assert_eq!(cp.time_factor, poly(&cp, "1-r"));
        assert_eq!(cp.state_factors, vec![poly(&cp, "w")]);
        let expect: Vec<Polynomial> = ["t-t^2", "y-y^2", "r-r^2", "w-w^2"]
            .iter()
            .map(|s| poly(&cp, s))
            .collect();
        assert_eq!(cp.inequalities, expect);
        assert_eq!(cp.equalities.len(), 1);
        assert!(cp.equalities[0].max_coeff_diff(&poly(&cp, "w^2 - r^2 - 0.04*(1-r)^2")) < 1e-15);
        assert_eq!(cp.control, ControlMap::Rational);
    }

    #[test]
    fn oscillation_example_keeps_control() {
        let cp = compactify(&load(OSC)).unwrap();
        assert_eq!(cp.space.names(), &["t", "y", "u"]);
        assert_eq!(cp.control, ControlMap::Identity(Interval::new(-1.0, 1.0)));
        assert!(cp.inequalities.contains(&poly(&cp, "1-u^2")));
        // y = -1 + 2 y~
        assert_eq!(cp.objective, poly(&cp, "(u^2-1)^2 + (2*y-1)^2"));
        assert_eq!(cp.state_factors, vec![poly(&cp, "0.5*u")]);
        assert_eq!(cp.y0, vec![0.5]);
        assert_eq!(cp.y1, vec![0.5]);
        assert_eq!(cp.inequalities.len(), 3);
    }

    #[test]
    fn quadratic_cost_with_linear_growth_fails() {
        let text = SEC7.replace("(t+y)*u", "u^2");
        let err = compactify(&load(&text)).unwrap_err();
        assert!(err.to_string().contains("growth/homogenization mismatch"), "{err}");
    }

    #[test]
    fn other_growth_is_rejected_for_unbounded_control() {
        let text = SEC7.replace(r#""p": 1"#, r#""p": 2"#);
        assert!(matches!(
            compactify(&load(&text)),
            Err(CompactifyError::UnsupportedGrowth(2))
        ));
    }

    #[test]
    fn denominators_are_cleared() {
        let text = SEC7.replace(
            r#"["w*(1+u)"]"#,
            r#"[{"poly": "w*(1+u)^2", "denominator_power": 1}]"#,
        );
        let cp = compactify(&load(&text)).unwrap();
        assert!(cp.state_factors[0].max_coeff_diff(&poly(&cp, "w")) < 1e-14);

        let text = SEC7.replace(
            r#"["w*(1+u)"]"#,
            r#"[{"poly": "w", "denominator": "1+u^2"}]"#,
        );
        assert!(matches!(
            compactify(&load(&text)),
            Err(CompactifyError::BadDenominator(_))
        ));
    }

    #[test]
    fn weak_constraint_examples() {
        let cp = compactify(&load(SEC7)).unwrap();
        let m = |e: &[u32]| Monomial::new(e.to_vec());
        let c = cp.weak_constraint(&m(&[1, 0, 0, 0]));
        assert_eq!((c.integrand.clone(), c.rhs), (poly(&cp, "1-r"), 1.0));
        let c = cp.weak_constraint(&m(&[0, 1, 0, 0]));
        assert_eq!((c.integrand.clone(), c.rhs), (poly(&cp, "w"), 1.0));
        let c = cp.weak_constraint(&m(&[1, 1, 0, 0]));
        assert_eq!((c.integrand.clone(), c.rhs), (poly(&cp, "y*(1-r) + t*w"), 1.0));
    }

    #[test]
    fn constraint_count() {
        let cp = compactify(&load(SEC7)).unwrap();
        for d in 1..=6u32 {
            let n = weak_constraints(&cp, 2 * d).len() as u32;
            assert_eq!(n, (2 * d + 1) * (2 * d + 2) / 2 - 1);
        }
    }

    #[test]
    fn marginal_unscaling() {
        let cp = compactify(&load(OSC)).unwrap();
        // y~ uniform on [0,1] means y uniform on [-1,1]
        let raw: Vec<f64> = (0..5).map(|j| 1.0 / (j as f64 + 1.0)).collect();
        let back = cp.unscale_marginal(1, &raw);
        let expect = [1.0, 0.0, 1.0 / 3.0, 0.0, 0.2];
        for (a, b) in back.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
