//! Elimination of the linear equalities and facial reduction of the PSD
//! blocks.
//!
//! The equalities `E y = f` are solved as `y = y_p + N z`, with `y_p` the
//! least-norm solution and `N` an orthonormal basis of `ker E`, both taken
//! from a column-pivoted Householder QR of `E^T`. Each block `A(y)` then
//! reads `A(y_p) + sum_j z_j A(N_j)`. Directions in the common kernel of all
//! these matrices are removed by projecting onto the range of
//! `A(y_p)^2 + sum_j A(N_j)^2`; support equalities such as `w^2 = ...` put
//! such kernels into every moment and localizing matrix.

use nalgebra::{DMatrix, SymmetricEigen};

use super::dense::{gemm, svec_into, svec_len};
use crate::hierarchy::ConicProgram;

/// Relative threshold below which a pivot or an eigenvalue counts as zero.
const RANK_TOL: f64 = 1e-10;
const FACE_TOL: f64 = 1e-10;

/// Affine parametrization of the equality-feasible moments.
pub struct Elimination {
    /// Least-norm particular solution.
    pub yp: Vec<f64>,
    /// Kernel basis, row-major `moments x dim`.
    pub n_rows: Vec<f64>,
    pub dim: usize,
    pub rank: usize,
    /// Largest equality residual of `yp`.
    pub residual: f64,
    pub rhs_scale: f64,
}

impl Elimination {
    /// `y = yp + N z`.
    pub fn lift(&self, z: &[f64]) -> Vec<f64> {
        let m = self.yp.len();
        let mut y = self.yp.clone();
        if self.dim > 0 {
            gemm(m, self.dim, 1, 1.0, &self.n_rows, (self.dim, 1), z, (1, 1), 1.0, &mut y, (1, 1));
        }
        y
    }

    pub fn consistent(&self) -> bool {
        self.residual <= 1e-8 * (1.0 + self.rhs_scale)
    }
}

/// Householder reflector `I - beta v v^T` acting on rows `k..`.
struct Reflector {
    k: usize,
    v: Vec<f64>,
    beta: f64,
}

impl Reflector {
    fn apply(&self, col: &mut [f64]) {
        let tail = &mut col[self.k..];
        let w: f64 = self.v.iter().zip(tail.iter()).map(|(a, b)| a * b).sum();
        let s = self.beta * w;
        for (x, v) in tail.iter_mut().zip(&self.v) {
            *x -= s * v;
        }
    }
}

pub fn eliminate(prog: &ConicProgram) -> Elimination {
    let m = prog.num_moments();
    let rows = prog.equalities.len();
    let f: Vec<f64> = prog.equalities.iter().map(|r| r.rhs).collect();
    let rhs_scale = f.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    // a = E^T, column-major m x rows: column i holds equality i
    let mut a = vec![0.0; m * rows];
    for (i, r) in prog.equalities.iter().enumerate() {
        for &(k, c) in &r.coeffs {
            a[i * m + k] += c;
        }
    }
    let mut perm: Vec<usize> = (0..rows).collect();
    let col_norm = |a: &[f64], j: usize, from: usize| -> f64 {
        a[j * m + from..(j + 1) * m].iter().map(|x| x * x).sum::<f64>().sqrt()
    };
    let mut norms: Vec<f64> = (0..rows).map(|j| col_norm(&a, j, 0)).collect();
    let mut ref_norms = norms.clone();
    let max0 = norms.iter().cloned().fold(0.0, f64::max);
    let mut refl: Vec<Reflector> = Vec::new();
    let mut rdiag: Vec<f64> = Vec::new();
    let steps = rows.min(m);
    let mut rank = 0;
    for k in 0..steps {
        let (p, &best) = norms[k..]
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
            .map(|(i, v)| (i + k, v))
            .unwrap();
        if best <= RANK_TOL * max0.max(1e-300) {
            break;
        }
        if p != k {
            for r in 0..m {
                a.swap(k * m + r, p * m + r);
            }
            perm.swap(k, p);
            norms.swap(k, p);
            ref_norms.swap(k, p);
        }
        let col = &a[k * m + k..(k + 1) * m];
        let alpha = col_norm(&a, k, k);
        let x0 = col[0];
        let r_kk = if x0 >= 0.0 { -alpha } else { alpha };
        let mut v: Vec<f64> = col.to_vec();
        v[0] -= r_kk;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        let beta = if vnorm2 > 0.0 { 2.0 / vnorm2 } else { 0.0 };
        let h = Reflector { k, v, beta };
        for j in k + 1..rows {
            h.apply(&mut a[j * m..(j + 1) * m]);
            let top = a[j * m + k];
            let nn = norms[j] * norms[j] - top * top;
            norms[j] = if nn <= 0.01 * ref_norms[j] * ref_norms[j] {
                let fresh = col_norm(&a, j, k + 1);
                ref_norms[j] = fresh;
                fresh
            } else {
                nn.sqrt()
            };
        }
        a[k * m + k] = r_kk;
        rdiag.push(r_kk);
        refl.push(h);
        rank = k + 1;
    }

    // R11^T w = (P^T f)[..rank], forward substitution; R11[i][k] = a[k*m + i]
    let mut w = vec![0.0; m];
    for i in 0..rank {
        let mut s = f[perm[i]];
        for j in 0..i {
            s -= a[i * m + j] * w[j];
        }
        w[i] = s / rdiag[i];
    }
    for h in refl.iter().rev() {
        h.apply(&mut w);
    }
    let yp = w;

    let dim = m - rank;
    let mut basis = vec![0.0; m * dim];
    for c in 0..dim {
        let col = &mut basis[c * m..(c + 1) * m];
        col[rank + c] = 1.0;
        for h in refl.iter().rev() {
            h.apply(col);
        }
    }
    let mut n_rows = vec![0.0; m * dim];
    for c in 0..dim {
        for r in 0..m {
            n_rows[r * dim + c] = basis[c * m + r];
        }
    }
    let residual = prog.equality_residual(&yp);
    Elimination {
        yp,
        n_rows,
        dim,
        rank,
        residual,
        rhs_scale,
    }
}

/// One PSD block of the reduced program `Z = sum_j z_j F_j + F_0`.
pub struct ReducedBlock {
    pub label: String,
    /// Original size.
    pub full: usize,
    /// `full x size` orthonormal basis of the retained face.
    pub basis: DMatrix<f64>,
    pub f0: DMatrix<f64>,
    /// Column `j` is `svec(F_j)`; column-major `svec_len(size) x dim`.
    pub phi: Vec<f64>,
}

impl ReducedBlock {
    pub fn size(&self) -> usize {
        self.basis.ncols()
    }
}

pub fn reduce_blocks(prog: &ConicProgram, el: &Elimination) -> Vec<ReducedBlock> {
    let dim = el.dim;
    let mut out = Vec::with_capacity(prog.psd_blocks.len());
    for block in &prog.psd_blocks {
        let s = block.map.size();
        // full[j] = A(N_j), column-major, blocks of s*s
        let mut full = vec![0.0; s * s * dim];
        let mut f0 = DMatrix::zeros(s, s);
        let mut acc = vec![0.0; dim];
        for (i, k, terms) in block.map.upper() {
            acc.iter_mut().for_each(|x| *x = 0.0);
            let mut c0 = 0.0;
            for &(idx, c) in terms {
                c0 += c * el.yp[idx];
                let row = &el.n_rows[idx * dim..(idx + 1) * dim];
                for (a, n) in acc.iter_mut().zip(row) {
                    *a += c * n;
                }
            }
            f0[(i, k)] = c0;
            f0[(k, i)] = c0;
            for (j, &v) in acc.iter().enumerate() {
                full[j * s * s + k * s + i] = v;
                full[j * s * s + i * s + k] = v;
            }
        }
        // gram = [F_1 .. F_dim] [F_1 .. F_dim]^T + F_0^2
        let mut gram = &f0 * &f0;
        gemm(
            s,
            s * dim,
            s,
            1.0,
            &full,
            (1, s),
            &full,
            (s, 1),
            1.0,
            gram.as_mut_slice(),
            (1, s),
        );
        let eig = SymmetricEigen::new(gram);
        let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..s)
            .filter(|&i| eig.eigenvalues[i] > FACE_TOL * top)
            .collect();
        let r = keep.len();
        let basis = DMatrix::from_fn(s, r, |i, c| eig.eigenvectors[(i, keep[c])]);
        let bt = basis.transpose();
        let f0r = &bt * &f0 * &basis;
        let l = svec_len(r);
        let mut phi = vec![0.0; l * dim];
        // t = B^T [F_1 .. F_dim], then F~_j = t_j B
        let mut t = vec![0.0; r * s * dim];
        gemm(r, s, s * dim, 1.0, bt.as_slice(), (1, r), &full, (1, s), 0.0, &mut t, (1, r));
        drop(full);
        let mut fj = DMatrix::zeros(r, r);
        for j in 0..dim {
            gemm(
                r,
                s,
                r,
                1.0,
                &t[j * r * s..(j + 1) * r * s],
                (1, r),
                basis.as_slice(),
                (1, s),
                0.0,
                fj.as_mut_slice(),
                (1, r),
            );
            svec_into(&fj, &mut phi[j * l..(j + 1) * l]);
        }
        out.push(ReducedBlock {
            label: block.label.clone(),
            full: s,
            basis,
            f0: f0r,
            phi,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{LinearRow, MomentIndex, PsdBlock};
    use crate::polyalg::{Polynomial, VariableSpace};

    fn toy() -> ConicProgram {
        // moments of t up to degree 2, mass fixed to 1 and y_1 + y_2 = 1
        let space = VariableSpace::new(["t"]).unwrap();
        let index = MomentIndex::cached(1, 2);
        let one = Polynomial::constant(&space, 1.0);
        let map = crate::hierarchy::localizing_matrix(&one, &space, 1, &index).unwrap();
        ConicProgram {
            space,
            index,
            objective: vec![(2, 1.0)],
            equalities: vec![
                LinearRow { coeffs: vec![(0, 1.0)], rhs: 1.0 },
                LinearRow { coeffs: vec![(1, 1.0), (2, 1.0)], rhs: 1.0 },
                LinearRow { coeffs: vec![(0, 2.0), (1, 2.0), (2, 2.0)], rhs: 4.0 },
            ],
            psd_blocks: vec![PsdBlock { label: "m".into(), map }],
        }
    }

    #[test]
    fn kernel_parametrization() {
        let prog = toy();
        let el = eliminate(&prog);
        assert_eq!(el.rank, 2);
        assert_eq!(el.dim, 1);
        assert!(el.consistent());
        for z in [-1.0, 0.3, 2.0] {
            assert!(prog.equality_residual(&el.lift(&[z])) < 1e-14);
        }
        // least norm: y = (1, 0.5, 0.5)
        assert!((el.yp[1] - 0.5).abs() < 1e-14 && (el.yp[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn inconsistent_rows_are_detected() {
        let mut prog = toy();
        prog.equalities[2].rhs = 5.0;
        assert!(!eliminate(&prog).consistent());
    }

    #[test]
    fn common_kernel_is_removed() {
        // y_0 = y_1 = y_2 forces the moment matrix [[1,1],[1,1]]-like
        let mut prog = toy();
        prog.equalities = vec![
            LinearRow { coeffs: vec![(0, 1.0), (1, -1.0)], rhs: 0.0 },
            LinearRow { coeffs: vec![(1, 1.0), (2, -1.0)], rhs: 0.0 },
        ];
        let el = eliminate(&prog);
        assert_eq!(el.dim, 1);
        let blocks = reduce_blocks(&prog, &el);
        assert_eq!(blocks[0].full, 2);
        assert_eq!(blocks[0].size(), 1);
    }
}
