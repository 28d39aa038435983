//! Infeasible primal-dual interior-point method for
//!
//! ```text
//! (P) max <C, X>  s.t.  <F_j, X> = b_j,  X >= 0
//! (D) min b^T z   s.t.  Z = sum_j z_j F_j - C >= 0
//! ```
//!
//! with the HKM search direction and a Mehrotra predictor-corrector.

use nalgebra::{DMatrix, DVector};

use super::dense::{frob, gemm, max_step, smat, smat_into, svec_into, svec_len, symmetrize};
use super::{SdpBackend, SolveOptions};

pub struct SdpBlock {
    pub size: usize,
    pub c: DMatrix<f64>,
    /// Column-major `svec_len(size) x m`, column `j` is `svec(F_j)`.
    pub phi: Vec<f64>,
}

pub struct SdpData {
    pub m: usize,
    pub b: Vec<f64>,
    pub blocks: Vec<SdpBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    /// Steps became too short to make progress.
    Stalled,
    IterationLimit,
    /// `X` diverges along a ray: the moment problem has no feasible point.
    PrimalRay,
    /// `z` diverges with decreasing objective: the moment problem is unbounded.
    DualRay,
    Breakdown,
}

pub struct SdpSolution {
    pub z: Vec<f64>,
    pub x: Vec<DMatrix<f64>>,
    pub outcome: Outcome,
    pub iterations: usize,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub gap: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
}

/// The default backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct InteriorPoint;

const GAMMA: f64 = 0.95;
const PANEL: usize = 64;
/// Iterations without a better iterate before giving up.
const STALL_ITERATIONS: usize = 8;

impl SdpData {
    fn apply(&self, ys: &[DMatrix<f64>]) -> Vec<f64> {
        // A(Y)_j = sum_b svec(F_bj) . svec(Y_b)
        let mut out = vec![0.0; self.m];
        for (blk, y) in self.blocks.iter().zip(ys) {
            let l = svec_len(blk.size);
            if l == 0 {
                continue;
            }
            let v = svec_of(y);
            gemm(1, l, self.m, 1.0, &v, (1, 1), &blk.phi, (1, l), 1.0, &mut out, (1, 1));
        }
        out
    }

    fn adjoint(&self, z: &[f64]) -> Vec<DMatrix<f64>> {
        self.blocks
            .iter()
            .map(|blk| {
                let l = svec_len(blk.size);
                let mut v = vec![0.0; l];
                if l > 0 && self.m > 0 {
                    gemm(l, self.m, 1, 1.0, &blk.phi, (1, l), z, (1, 1), 0.0, &mut v, (1, 1));
                }
                smat(&v, blk.size)
            })
            .collect()
    }
}

fn svec_of(y: &DMatrix<f64>) -> Vec<f64> {
    let mut v = vec![0.0; svec_len(y.nrows())];
    svec_into(y, &mut v);
    v
}

fn inner(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| frob(x, y)).sum()
}

fn fro_norm(a: &[DMatrix<f64>]) -> f64 {
    inner(a, a).sqrt()
}

fn vnorm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

struct Factors {
    x_chol: Vec<DMatrix<f64>>,
    z_chol: Vec<DMatrix<f64>>,
    z_inv: Vec<DMatrix<f64>>,
}

fn factor(xs: &[DMatrix<f64>], zs: &[DMatrix<f64>]) -> Option<Factors> {
    let mut f = Factors {
        x_chol: Vec::new(),
        z_chol: Vec::new(),
        z_inv: Vec::new(),
    };
    for (x, z) in xs.iter().zip(zs) {
        let cx = x.clone().cholesky()?;
        let cz = z.clone().cholesky()?;
        f.z_inv.push(cz.inverse());
        f.x_chol.push(cx.l());
        f.z_chol.push(cz.l());
    }
    Some(f)
}

/// Schur matrix `S_ij = <F_i, X F_j Z^-1>`, upper panels mirrored.
fn schur(data: &SdpData, xs: &[DMatrix<f64>], z_inv: &[DMatrix<f64>]) -> DMatrix<f64> {
    let m = data.m;
    let mut s = DMatrix::<f64>::zeros(m, m);
    for ((blk, x), zi) in data.blocks.iter().zip(xs).zip(z_inv) {
        let n = blk.size;
        let l = svec_len(n);
        if l == 0 {
            continue;
        }
        let mut w = vec![0.0; l * m];
        let mut fj = DMatrix::zeros(n, n);
        let mut t = DMatrix::zeros(n, n);
        let mut u = DMatrix::zeros(n, n);
        for j in 0..m {
            smat_into(&blk.phi[j * l..(j + 1) * l], &mut fj);
            t.gemm(1.0, x, &fj, 0.0);
            u.gemm(1.0, &t, zi, 0.0);
            svec_into(&u, &mut w[j * l..(j + 1) * l]);
        }
        let mut p0 = 0;
        while p0 < m {
            let p1 = (p0 + PANEL).min(m);
            // s[p0..p1, p0..m] += phi[:, p0..p1]^T w[:, p0..m]
            let rows = p1 - p0;
            let cols = m - p0;
            let c_off = p0 * m + p0;
            gemm(
                rows,
                l,
                cols,
                1.0,
                &blk.phi[p0 * l..],
                (l, 1),
                &w[p0 * l..],
                (1, l),
                1.0,
                &mut s.as_mut_slice()[c_off..],
                (1, m),
            );
            p0 = p1;
        }
    }
    for j in 0..m {
        for i in j + 1..m {
            // lower triangle from the upper one
            s[(i, j)] = s[(j, i)];
        }
    }
    s
}

impl SdpBackend for InteriorPoint {
    fn name(&self) -> &'static str {
        "primal-dual interior point (HKM, predictor-corrector)"
    }

    fn solve(&self, data: &SdpData, opts: &SolveOptions) -> SdpSolution {
        solve(data, opts)
    }
}

fn solve(data: &SdpData, opts: &SolveOptions) -> SdpSolution {
    let m = data.m;
    let nb = data.blocks.len();
    let n_total: usize = data.blocks.iter().map(|b| b.size).sum();
    let cs: Vec<DMatrix<f64>> = data.blocks.iter().map(|b| b.c.clone()).collect();
    let b_norm = vnorm(&data.b);
    let c_norm = fro_norm(&cs);

    // X0 = I: moment data is normalised to the unit box, and the large
    // primal start of CSDP drives X far from its optimal scale.
    // Z0 follows the CSDP rule.
    let mut f_norm = 0.0f64;
    for blk in &data.blocks {
        let l = svec_len(blk.size);
        for j in 0..m {
            let col = &blk.phi[j * l..(j + 1) * l];
            f_norm = f_norm.max(col.iter().map(|x| x * x).sum::<f64>().sqrt());
        }
    }
    let nt = n_total.max(1) as f64;
    let beta = (1.0 + f_norm.max(c_norm)) / nt.sqrt();
    let mut xs: Vec<DMatrix<f64>> = data.blocks.iter().map(|b| DMatrix::identity(b.size, b.size)).collect();
    let mut zs: Vec<DMatrix<f64>> = data
        .blocks
        .iter()
        .map(|b| DMatrix::identity(b.size, b.size) * (10.0 * beta))
        .collect();
    let mut z = vec![0.0; m];

    let mut outcome = Outcome::IterationLimit;
    let mut iterations = 0;
    let mut short_steps = 0;
    let mut stats = (f64::INFINITY, f64::INFINITY, f64::INFINITY, 0.0, 0.0);
    // iterate with the smallest max(pinf, dinf, gap)
    let mut best: Option<(f64, usize, Vec<f64>, Vec<DMatrix<f64>>, (f64, f64, f64, f64, f64))> = None;

    for it in 0..=opts.max_iterations {
        iterations = it;
        let ax = data.apply(&xs);
        let rp: Vec<f64> = data.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let atz = data.adjoint(&z);
        // Rd = A^T z - Z - C
        let rd: Vec<DMatrix<f64>> = (0..nb).map(|i| &atz[i] - &zs[i] - &cs[i]).collect();
        let pobj = inner(&cs, &xs);
        let dobj: f64 = data.b.iter().zip(&z).map(|(b, z)| b * z).sum();
        let rel_p = vnorm(&rp) / (1.0 + b_norm);
        let rel_d = fro_norm(&rd) / (1.0 + c_norm);
        let gap = (dobj - pobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        stats = (rel_p, rel_d, gap, pobj, dobj);
        let merit = rel_p.max(rel_d).max(gap);
        if best.as_ref().map_or(true, |b| merit < b.0) {
            best = Some((merit, it, z.clone(), xs.clone(), stats));
        }
        let mu = inner(&xs, &zs) / nt;
        if opts.verbose {
            eprintln!(
                "ipm {it:3}  pobj {pobj:+.10e}  dobj {dobj:+.10e}  pinf {rel_p:.2e}  dinf {rel_d:.2e}  gap {gap:.2e}  mu {mu:.2e}"
            );
        }
        if rel_p <= opts.feasibility_tol && rel_d <= opts.feasibility_tol && gap <= opts.gap_tol {
            outcome = Outcome::Converged;
            break;
        }
        if best.as_ref().is_some_and(|b| it >= b.1 + STALL_ITERATIONS) {
            outcome = Outcome::Stalled;
            break;
        }
        if it == opts.max_iterations {
            break;
        }
        let xn = fro_norm(&xs);
        if xn > 1e10 && rel_d < 1e-6 {
            outcome = Outcome::PrimalRay;
            break;
        }
        if vnorm(&z) > 1e10 && rel_p < 1e-6 && dobj < -1e8 {
            outcome = Outcome::DualRay;
            break;
        }
        let Some(fac) = factor(&xs, &zs) else {
            outcome = Outcome::Breakdown;
            break;
        };
        let s = schur(data, &xs, &fac.z_inv);
        let chol = match s.clone().cholesky() {
            Some(c) => c,
            None => {
                let reg = 1e-12 * (0..m).map(|i| s[(i, i)].abs()).fold(1e-300, f64::max);
                match (s + DMatrix::identity(m, m) * reg).cholesky() {
                    Some(c) => c,
                    None => {
                        outcome = Outcome::Breakdown;
                        break;
                    }
                }
            }
        };

        // direction for a given centering target and second-order term
        let direction = |sigma_mu: f64, corr: Option<&[DMatrix<f64>]>| {
            // Y = sigma_mu Z^-1 - X Rd Z^-1 - corr Z^-1
            let ys: Vec<DMatrix<f64>> = (0..nb)
                .map(|i| {
                    let mut k = -(&xs[i] * &rd[i]);
                    if let Some(c) = corr {
                        k -= &c[i];
                    }
                    &fac.z_inv[i] * sigma_mu + k * &fac.z_inv[i]
                })
                .collect();
            let ay = data.apply(&ys);
            let rhs: Vec<f64> = ay.iter().zip(&data.b).map(|(a, b)| a - b).collect();
            let rhs = DVector::from_vec(rhs);
            let mut dz: Vec<f64> = chol.solve(&rhs).iter().cloned().collect();
            let build = |dz: &[f64]| {
                let atdz = data.adjoint(dz);
                let dzs: Vec<DMatrix<f64>> = (0..nb).map(|i| &atdz[i] + &rd[i]).collect();
                let dxs: Vec<DMatrix<f64>> = (0..nb)
                    .map(|i| {
                        let mut k = &xs[i] * &dzs[i];
                        if let Some(c) = corr {
                            k += &c[i];
                        }
                        let mut dx = &fac.z_inv[i] * sigma_mu - &xs[i] - k * &fac.z_inv[i];
                        symmetrize(&mut dx);
                        dx
                    })
                    .collect();
                (dxs, dzs)
            };
            let (mut dxs, mut dzs) = build(&dz);
            // refine against the primal residual of the assembled step
            for _ in 0..2 {
                let adx = data.apply(&dxs);
                let res: Vec<f64> = (0..m).map(|j| adx[j] - rp[j]).collect();
                if vnorm(&res) <= 1e-14 * (1.0 + b_norm) {
                    break;
                }
                let delta = chol.solve(&DVector::from_vec(res));
                for (d, e) in dz.iter_mut().zip(delta.iter()) {
                    *d += e;
                }
                (dxs, dzs) = build(&dz);
            }
            (dxs, dz, dzs)
        };
        let steps = |dxs: &[DMatrix<f64>], dzs: &[DMatrix<f64>]| {
            let ap = (0..nb)
                .map(|i| max_step(&fac.x_chol[i], &dxs[i]))
                .fold(f64::INFINITY, f64::min);
            let ad = (0..nb)
                .map(|i| max_step(&fac.z_chol[i], &dzs[i]))
                .fold(f64::INFINITY, f64::min);
            (ap, ad)
        };

        let (dxa, _, dza) = direction(0.0, None);
        let (ap, ad) = steps(&dxa, &dza);
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mut mu_aff = 0.0;
        for i in 0..nb {
            let xa = &xs[i] + &dxa[i] * ap;
            let za = &zs[i] + &dza[i] * ad;
            mu_aff += frob(&xa, &za);
        }
        mu_aff /= nt;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let corr: Vec<DMatrix<f64>> = (0..nb).map(|i| &dxa[i] * &dza[i]).collect();
        let (dx, dz, dzs) = direction(sigma * mu, Some(&corr));
        let (ap, ad) = steps(&dx, &dzs);
        let ap = (GAMMA * ap).min(1.0);
        let ad = (GAMMA * ad).min(1.0);
        for i in 0..nb {
            xs[i] += &dx[i] * ap;
            zs[i] += &dzs[i] * ad;
            symmetrize(&mut xs[i]);
            symmetrize(&mut zs[i]);
        }
        for (zi, d) in z.iter_mut().zip(&dz) {
            *zi += ad * d;
        }
        if ap < 1e-8 && ad < 1e-8 {
            short_steps += 1;
            if short_steps >= 3 {
                outcome = Outcome::Stalled;
                break;
            }
        } else {
            short_steps = 0;
        }
    }
    if outcome != Outcome::Converged {
        if let Some((_, _, bz, bx, bs)) = best {
            z = bz;
            xs = bx;
            stats = bs;
        }
    }
    SdpSolution {
        z,
        x: xs,
        outcome,
        iterations,
        primal_infeasibility: stats.0,
        dual_infeasibility: stats.1,
        gap: stats.2,
        primal_objective: stats.3,
        dual_objective: stats.4,
    }
}
