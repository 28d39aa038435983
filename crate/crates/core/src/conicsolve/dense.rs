//! Dense kernels shared by the reduction and the interior-point backend.

use nalgebra::DMatrix;

/// Column-major `C = alpha * op(A) * op(B) + beta * C` on raw slices with
/// explicit strides.
#[allow(clippy::too_many_arguments)]
pub fn gemm(
    m: usize,
    k: usize,
    n: usize,
    alpha: f64,
    a: &[f64],
    a_strides: (usize, usize),
    b: &[f64],
    b_strides: (usize, usize),
    beta: f64,
    c: &mut [f64],
    c_strides: (usize, usize),
) {
    if m == 0 || n == 0 {
        return;
    }
    let last = |(rs, cs): (usize, usize), rows: usize, cols: usize| {
        (rows.saturating_sub(1)) * rs + (cols.saturating_sub(1)) * cs
    };
    if k > 0 {
        assert!(last(a_strides, m, k) < a.len());
        assert!(last(b_strides, k, n) < b.len());
    }
    assert!(last(c_strides, m, n) < c.len());
    // SAFETY: all accessed offsets are bounds-checked above and `c` does not
    // alias `a` or `b` (distinct borrows).
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.as_ptr(),
            a_strides.0 as isize,
            a_strides.1 as isize,
            b.as_ptr(),
            b_strides.0 as isize,
            b_strides.1 as isize,
            beta,
            c.as_mut_ptr(),
            c_strides.0 as isize,
            c_strides.1 as isize,
        );
    }
}

pub fn svec_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Packs the symmetric part of `y` column by column over the upper triangle,
/// off-diagonal entries scaled by `sqrt(2)` so that `<A, B> = svec(A) . svec(B)`.
pub fn svec_into(y: &DMatrix<f64>, out: &mut [f64]) {
    let n = y.nrows();
    let s2 = std::f64::consts::SQRT_2;
    let mut p = 0;
    for k in 0..n {
        for i in 0..k {
            out[p] = 0.5 * (y[(i, k)] + y[(k, i)]) * s2;
            p += 1;
        }
        out[p] = y[(k, k)];
        p += 1;
    }
}

#[cfg(test)]
pub fn svec(y: &DMatrix<f64>) -> Vec<f64> {
    let mut out = vec![0.0; svec_len(y.nrows())];
    svec_into(y, &mut out);
    out
}

pub fn smat_into(v: &[f64], out: &mut DMatrix<f64>) {
    let n = out.nrows();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut p = 0;
    for k in 0..n {
        for i in 0..k {
            let x = v[p] * h;
            out[(i, k)] = x;
            out[(k, i)] = x;
            p += 1;
        }
        out[(k, k)] = v[p];
        p += 1;
    }
}

pub fn smat(v: &[f64], n: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(n, n);
    smat_into(v, &mut out);
    out
}

pub fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for k in 0..n {
        for i in 0..k {
            let x = 0.5 * (m[(i, k)] + m[(k, i)]);
            m[(i, k)] = x;
            m[(k, i)] = x;
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Frobenius inner product.
pub fn frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    dot(a.as_slice(), b.as_slice())
}

/// Smallest eigenvalue of a symmetric matrix (`+inf` when empty).
pub fn min_eig(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    m.clone().symmetric_eigenvalues().min()
}

/// Largest `alpha` with `x + alpha * dx` PSD, given the Cholesky factor
/// `l` of `x`. Returns `inf` when every step keeps `x` PSD.
pub fn max_step(l: &DMatrix<f64>, dx: &DMatrix<f64>) -> f64 {
    if l.nrows() == 0 {
        return f64::INFINITY;
    }
    // l^-1 dx l^-T
    let a = l
        .solve_lower_triangular(dx)
        .expect("cholesky factor is nonsingular");
    let at = a.transpose();
    let mut m = l
        .solve_lower_triangular(&at)
        .expect("cholesky factor is nonsingular");
    symmetrize(&mut m);
    let lam = min_eig(&m);
    if lam >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lam
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svec_preserves_inner_products() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 5.0, 6.0, 3.0, 6.0, 9.0]);
        let b = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.5, -1.0, 1.0, 4.0, 0.5, 4.0, -3.0]);
        assert!((dot(&svec(&a), &svec(&b)) - frob(&a, &b)).abs() < 1e-12);
        assert!((smat(&svec(&a), 3) - &a).amax() < 1e-14);
    }

    #[test]
    fn gemm_matches_nalgebra() {
        let a = DMatrix::from_fn(4, 3, |i, j| (i * 3 + j) as f64 - 2.0);
        let b = DMatrix::from_fn(3, 5, |i, j| (i as f64 + 1.0) * (j as f64 - 1.5));
        let mut c = vec![0.0; 20];
        gemm(4, 3, 5, 1.0, a.as_slice(), (1, 4), b.as_slice(), (1, 3), 0.0, &mut c, (1, 4));
        let expect = &a * &b;
        assert_eq!(c, expect.as_slice());
    }

    #[test]
    fn step_to_boundary() {
        let x = DMatrix::<f64>::identity(2, 2);
        let dx = DMatrix::from_row_slice(2, 2, &[-2.0, 0.0, 0.0, 1.0]);
        let l = x.clone().cholesky().unwrap().l();
        assert!((max_step(&l, &dx) - 0.5).abs() < 1e-14);
        assert_eq!(max_step(&l, &(-dx)), 1.0);
    }
}
