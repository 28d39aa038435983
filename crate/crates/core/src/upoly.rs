//! Dense univariate polynomials `c[0] + c[1] x + ...` used for exact
//! integration along segments.

use crate::polyalg::{PolyError, Polynomial};

/// Coefficients of `p` as a polynomial in `var`. Every other variable of
/// `p`'s space must be absent.
pub(crate) fn from_poly(p: &Polynomial, var: &str) -> Result<Vec<f64>, PolyError> {
    let space = p.space();
    let idx = space.index_of(var);
    let mut out = vec![0.0; idx.map_or(0, |i| p.degree_in(i) as usize) + 1];
    for (m, c) in p.terms() {
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 && Some(i) != idx {
                return Err(PolyError::SpaceMismatch(format!(
                    "expected a polynomial in `{var}` only, found `{}`",
                    space.names()[i]
                )));
            }
        }
        let e = idx.map_or(0, |i| m.exponents()[i] as usize);
        out[e] += c;
    }
    Ok(out)
}

pub(crate) fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

pub(crate) fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `c(a + b x)`.
pub(crate) fn compose_affine(c: &[f64], a: f64, b: f64) -> Vec<f64> {
    // Horner in polynomial arithmetic
    let mut out: Vec<f64> = Vec::new();
    for &k in c.iter().rev() {
        out = if out.is_empty() { vec![0.0] } else { mul(&out, &[a, b]) };
        out[0] += k;
    }
    out
}

/// `int_0^len c(x) dx`.
pub(crate) fn integrate_from_zero(c: &[f64], len: f64) -> f64 {
    let mut pw = len;
    let mut s = 0.0;
    for (j, k) in c.iter().enumerate() {
        s += k * pw / (j as f64 + 1.0);
        pw *= len;
    }
    s
}
