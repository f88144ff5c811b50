//! Embedded primal-dual interior-point solver for small dense SDPs.
//!
//! Solves `min ⟨C,X⟩ : ⟨A_i,X⟩ = b_i, X ⪰ 0` over block-diagonal complex
//! Hermitian variables, with Nesterov–Todd scaling and a Mehrotra-style
//! adaptive centering parameter. Problems here have total dimension well
//! under a hundred, so every subproblem (scaling points, step lengths, the
//! Schur system) is handled by dense spectral factorizations. The solve is
//! deterministic: identical inputs and options give bitwise-identical
//! results.

use serde::{Deserialize, Serialize};

use crate::linalg::ComplexMatrix;

use super::{SdpProblem, Sense};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iter: usize,
    pub gap_tol: f64,
    pub feas_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            gap_tol: 1e-8,
            feas_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    MaxIter,
}

/// Solver output. Values are reported in the problem's own sense, so the
/// optimum of a `Max` program appears as its (maximal) objective value.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub primal_value: f64,
    pub dual_value: f64,
    /// |primal_value − dual_value|.
    pub gap: f64,
    pub primal_point: Vec<ComplexMatrix>,
    pub dual_point: Vec<ComplexMatrix>,
    /// Constraint multipliers; at `Infeasible` these hold the certificate
    /// direction.
    pub y: Vec<f64>,
    pub status: SdpStatus,
    pub iterations: usize,
    pub perturbation: f64,
}

type Blocks = Vec<ComplexMatrix>;

fn blocks_identity(dims: &[usize], scale: f64) -> Blocks {
    dims.iter()
        .map(|&d| ComplexMatrix::identity(d).scaled(scale))
        .collect()
}

fn blocks_inner(a: &Blocks, b: &Blocks) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.hs_inner(y)).sum()
}

fn blocks_fro(a: &Blocks) -> f64 {
    a.iter()
        .map(|x| {
            let f = x.frobenius_norm();
            f * f
        })
        .sum::<f64>()
        .sqrt()
}

/// ⟨A_i, X⟩ over the constraint's sparse term list.
fn constraint_inner(problem: &SdpProblem, i: usize, x: &Blocks) -> f64 {
    problem.constraints[i]
        .terms
        .iter()
        .map(|(block, coeff)| coeff.hs_inner(&x[*block]))
        .sum()
}

/// A†(y) = Σ_i y_i A_i as dense blocks.
fn adjoint(problem: &SdpProblem, y: &[f64]) -> Blocks {
    let mut out: Blocks = problem.blocks.iter().map(|&d| ComplexMatrix::zeros(d)).collect();
    for (i, ci) in problem.constraints.iter().enumerate() {
        if y[i] == 0.0 {
            continue;
        }
        for (block, coeff) in &ci.terms {
            out[*block] = out[*block].add(&coeff.scaled(y[i]));
        }
    }
    out
}

/// Spectral helper: f applied to the eigenvalues of a Hermitian matrix.
fn spectral_map(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let spec = h
        .eig_hermitian()
        .expect("solver iterates are kept Hermitian");
    let vals: Vec<f64> = spec.eigenvalues.iter().map(|&l| f(l)).collect();
    spec.recompose(&vals)
}

/// Largest step α ≤ 1 keeping S + αD ⪰ 0.
fn max_step(s: &ComplexMatrix, d: &ComplexMatrix) -> f64 {
    let spec = s.eig_hermitian().expect("iterate Hermitian");
    let lmax = spec.eigenvalues.first().copied().unwrap_or(0.0).max(1e-300);
    let inv_sqrt: Vec<f64> = spec
        .eigenvalues
        .iter()
        .map(|&l| 1.0 / l.max(1e-14 * lmax).sqrt())
        .collect();
    let s_mhalf = spec.recompose(&inv_sqrt);
    let t = s_mhalf.mul(d).mul(&s_mhalf).hermitized();
    let lmin = t.min_eig_hermitian().expect("Hermitized");
    if lmin >= -1e-13 {
        1.0
    } else {
        (-1.0 / lmin).min(1.0)
    }
}

/// Dense Cholesky with escalating diagonal jitter.
struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    fn factor(m: &[f64], n: usize) -> Option<Self> {
        let mut max_diag = 0.0f64;
        for i in 0..n {
            max_diag = max_diag.max(m[i * n + i].abs());
        }
        let mut jitter = 0.0;
        for attempt in 0..8 {
            if attempt > 0 {
                jitter = max_diag.max(1e-300) * 1e-14 * 10f64.powi(attempt - 1);
            }
            if let Some(l) = Self::try_factor(m, n, jitter) {
                return Some(Self { n, l });
            }
        }
        None
    }

    fn try_factor(m: &[f64], n: usize, jitter: f64) -> Option<Vec<f64>> {
        let mut l = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = m[i * n + j];
                if i == j {
                    sum += jitter;
                }
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= 0.0 {
                        return None;
                    }
                    l[i * n + i] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Some(l)
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = rhs.to_vec();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.l[i * n + k] * x[k];
            }
            x[i] /= self.l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                x[i] -= self.l[k * n + i] * x[k];
            }
            x[i] /= self.l[i * n + i];
        }
        x
    }
}

/// Solve the program with an infeasible-start NT-scaled interior-point
/// method.
pub fn solve_sdp(problem: &SdpProblem, opts: &SolveOptions) -> SdpSolution {
    let sign = match problem.sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };
    let c: Blocks = problem.objective.iter().map(|m| m.scaled(sign)).collect();
    let m = problem.constraints.len();
    let b: Vec<f64> = problem.constraints.iter().map(|ci| ci.rhs).collect();
    let n_total: usize = problem.blocks.iter().sum();
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let cnorm = blocks_fro(&c);

    let xi = 1.0 + b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let eta = 1.0 + cnorm / (n_total.max(1) as f64).sqrt();
    let mut x = blocks_identity(&problem.blocks, xi);
    let mut z = blocks_identity(&problem.blocks, eta);
    let mut y = vec![0.0f64; m];

    let finish = |x: Blocks, z: Blocks, y: Vec<f64>, status: SdpStatus, iterations: usize| {
        let pobj = blocks_inner(&c, &x);
        let dobj: f64 = b.iter().zip(&y).map(|(bi, yi)| bi * yi).sum();
        SdpSolution {
            primal_value: sign * pobj,
            dual_value: sign * dobj,
            gap: (pobj - dobj).abs(),
            primal_point: x,
            dual_point: z,
            y,
            status,
            iterations,
            perturbation: problem.perturbation,
        }
    };

    if m == 0 {
        // unconstrained: optimum of ⟨C,X⟩ over X ⪰ 0 is 0 when C ⪰ 0
        return finish(
            blocks_identity(&problem.blocks, 0.0),
            z,
            y,
            SdpStatus::Optimal,
            0,
        );
    }

    for iter in 0..opts.max_iter {
        let r_p: Vec<f64> = (0..m)
            .map(|i| b[i] - constraint_inner(problem, i, &x))
            .collect();
        let aty = adjoint(problem, &y);
        let r_d: Blocks = (0..problem.blocks.len())
            .map(|bi| c[bi].sub(&aty[bi]).sub(&z[bi]))
            .collect();
        let pobj = blocks_inner(&c, &x);
        let dobj: f64 = b.iter().zip(&y).map(|(bi, yi)| bi * yi).sum();
        let pinf = r_p.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + bnorm);
        let dinf = blocks_fro(&r_d) / (1.0 + cnorm);
        let relgap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());

        if pinf <= opts.feas_tol && dinf <= opts.feas_tol && relgap <= opts.gap_tol {
            return finish(x, z, y, SdpStatus::Optimal, iter);
        }

        // primal infeasibility: f y with A†(y) ⪯ 0 and b·y > 0 certifies it
        if dobj > 1e8 * (1.0 + bnorm) {
            let ymax = y.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1e-300);
            let yhat: Vec<f64> = y.iter().map(|v| v / ymax).collect();
            let s = adjoint(problem, &yhat);
            let mut lmax = f64::NEG_INFINITY;
            for bm in &s {
                match bm.eig_hermitian() {
                    Ok(spec) => {
                        lmax = lmax.max(spec.eigenvalues.first().copied().unwrap_or(0.0))
                    }
                    Err(_) => lmax = f64::INFINITY,
                }
            }
            let byhat: f64 = b.iter().zip(&yhat).map(|(bi, yi)| bi * yi).sum();
            if lmax <= 1e-6 && byhat > 1e-6 {
                return finish(x, z, yhat, SdpStatus::Infeasible, iter);
            }
        }

        let mu = blocks_inner(&x, &z) / n_total as f64;

        // Nesterov–Todd scaling point per block: W Z W = X
        let nblocks = problem.blocks.len();
        let mut w = Vec::with_capacity(nblocks);
        let mut zinv = Vec::with_capacity(nblocks);
        for bi in 0..nblocks {
            let specx = x[bi].eig_hermitian().expect("X Hermitian");
            let xmax = specx.eigenvalues.first().copied().unwrap_or(0.0).max(1e-300);
            let sqrt_x: Vec<f64> = specx
                .eigenvalues
                .iter()
                .map(|&l| l.max(1e-14 * xmax).sqrt())
                .collect();
            let xs = specx.recompose(&sqrt_x);
            let mid = xs.mul(&z[bi]).mul(&xs).hermitized();
            let wb = spectral_map(&mid, |l| 1.0 / l.max(1e-300).sqrt());
            w.push(xs.mul(&wb).mul(&xs).hermitized());
            zinv.push(spectral_map(&z[bi], |l| 1.0 / l.max(1e-300)));
        }

        // scaled constraint operators and the Schur complement system
        let waw: Vec<Vec<(usize, ComplexMatrix)>> = problem
            .constraints
            .iter()
            .map(|ci| {
                ci.terms
                    .iter()
                    .map(|(block, coeff)| (*block, w[*block].mul(coeff).mul(&w[*block]).hermitized()))
                    .collect()
            })
            .collect();
        let mut schur = vec![0.0f64; m * m];
        for i in 0..m {
            for j in 0..=i {
                let mut acc = 0.0;
                for (bi, wawm) in &waw[i] {
                    for (bj, aj) in &problem.constraints[j].terms {
                        if bi == bj {
                            acc += wawm.hs_inner(aj);
                        }
                    }
                }
                schur[i * m + j] = acc;
                schur[j * m + i] = acc;
            }
        }
        let chol = match Cholesky::factor(&schur, m) {
            Some(c) => c,
            None => return finish(x, z, y, SdpStatus::MaxIter, iter),
        };

        // rhs pieces: ⟨A_i, Z⁻¹⟩ and ⟨A_i, W R_d W⟩
        let wrdw: Blocks = (0..nblocks)
            .map(|bi| w[bi].mul(&r_d[bi]).mul(&w[bi]).hermitized())
            .collect();
        let a_zinv: Vec<f64> = (0..m)
            .map(|i| {
                problem.constraints[i]
                    .terms
                    .iter()
                    .map(|(block, coeff)| coeff.hs_inner(&zinv[*block]))
                    .sum()
            })
            .collect();
        let a_wrdw: Vec<f64> = (0..m)
            .map(|i| {
                problem.constraints[i]
                    .terms
                    .iter()
                    .map(|(block, coeff)| coeff.hs_inner(&wrdw[*block]))
                    .sum()
            })
            .collect();

        let direction = |sigma_mu: f64| {
            let rhs: Vec<f64> = (0..m)
                .map(|i| b[i] + a_wrdw[i] - sigma_mu * a_zinv[i])
                .collect();
            let dy = chol.solve(&rhs);
            let atdy = adjoint(problem, &dy);
            let dz: Blocks = (0..nblocks)
                .map(|bi| r_d[bi].sub(&atdy[bi]))
                .collect();
            let dx: Blocks = (0..nblocks)
                .map(|bi| {
                    let mut t = zinv[bi].scaled(sigma_mu);
                    t = t.sub(&x[bi]);
                    t.sub(&w[bi].mul(&dz[bi]).mul(&w[bi])).hermitized()
                })
                .collect();
            (dy, dx, dz)
        };

        // predictor (affine direction), then adaptive centering
        let (_, dx_aff, dz_aff) = direction(0.0);
        let mut ap = 1.0f64;
        let mut ad = 1.0f64;
        for bi in 0..nblocks {
            ap = ap.min(max_step(&x[bi], &dx_aff[bi]));
            ad = ad.min(max_step(&z[bi], &dz_aff[bi]));
        }
        let mut mu_aff = 0.0;
        for bi in 0..nblocks {
            let xa = x[bi].add(&dx_aff[bi].scaled(0.99 * ap));
            let za = z[bi].add(&dz_aff[bi].scaled(0.99 * ad));
            mu_aff += xa.hs_inner(&za);
        }
        mu_aff = (mu_aff / n_total as f64).max(0.0);
        let sigma = ((mu_aff / mu).powi(3)).clamp(1e-6, 1.0);

        let (dy, dx, dz) = direction(sigma * mu);
        let mut ap = 1.0f64;
        let mut ad = 1.0f64;
        for bi in 0..nblocks {
            ap = ap.min(max_step(&x[bi], &dx[bi]));
            ad = ad.min(max_step(&z[bi], &dz[bi]));
        }
        let ap = (0.99 * ap).min(1.0);
        let ad = (0.99 * ad).min(1.0);

        for bi in 0..nblocks {
            x[bi] = x[bi].add(&dx[bi].scaled(ap)).hermitized();
            z[bi] = z[bi].add(&dz[bi].scaled(ad)).hermitized();
        }
        for i in 0..m {
            y[i] += ad * dy[i];
        }
    }

    finish(x, z, y, SdpStatus::MaxIter, opts.max_iter)
}
