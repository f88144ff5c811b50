//! Semidefinite programs for the RLD Fisher information value.
//!
//! The state value Tr[W Î] is the optimum of
//!
//! ```text
//!   inf { Tr[(W⊗I) M] : [[M, V], [V†, ρ]] ⪰ 0 },   V = Σ_j |j⟩ ⊗ ∂_jρ,
//! ```
//!
//! and the channel value ‖Σ⟨k|W|j⟩Tr_B[(∂_jΓ)Γ⁻¹(∂_kΓ)]‖_∞ is the optimum
//! of `inf λ` subject to `λI_R ⪰ Tr_FB[(W⊗I)M]` and the analogous block
//! constraint with Γ. Both have explicit dual programs. All four are
//! expressed here in one equality standard form over block-diagonal complex
//! Hermitian variables,
//!
//! ```text
//!   min ⟨C, X⟩   s.t.   ⟨A_i, X⟩ = b_i,   X ⪰ 0,
//! ```
//!
//! and solved by the embedded interior-point method in [`solver`].

mod solver;

pub use solver::{solve_sdp, SdpSolution, SdpStatus, SolveOptions};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{ChannelFamilyPoint, StateFamilyPoint, WeightMatrix};
use crate::linalg::{ComplexMatrix, TraceSide, C64};
use crate::rld;
use crate::ExtendedReal;

/// Reported optimum direction of a program. Internally everything is
/// minimized; `Max` programs are negated on the way in and out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Min,
    Max,
}

/// One affine constraint Σ_blocks ⟨coeff, X_block⟩ = rhs with Hermitian
/// coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constraint {
    pub terms: Vec<(usize, ComplexMatrix)>,
    pub rhs: f64,
}

/// Standard-form semidefinite program over block-diagonal Hermitian
/// variables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SdpProblem {
    pub sense: Sense,
    pub blocks: Vec<usize>,
    pub objective: Vec<ComplexMatrix>,
    pub constraints: Vec<Constraint>,
    /// ε added to a near-singular pinned base operator (0 when untouched).
    pub perturbation: f64,
}

impl SdpProblem {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            blocks: Vec::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
            perturbation: 0.0,
        }
    }

    pub fn add_block(&mut self, dim: usize) -> usize {
        self.blocks.push(dim);
        self.objective.push(ComplexMatrix::zeros(dim));
        self.blocks.len() - 1
    }

    pub fn set_objective(&mut self, block: usize, m: ComplexMatrix) {
        assert_eq!(m.dim(), self.blocks[block]);
        self.objective[block] = m;
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, ComplexMatrix)>, rhs: f64) {
        self.constraints.push(Constraint { terms, rhs });
    }

    /// Pin the Hermitian sub-block at `(offset, offset)` of a PSD block to
    /// `target`.
    fn pin_hermitian_block(&mut self, block: usize, offset: usize, target: &ComplexMatrix) {
        let dim = self.blocks[block];
        let d = target.dim();
        for p in 0..d {
            self.add_constraint(
                vec![(block, basis_diag(dim, offset + p))],
                target.at(p, p).re,
            );
            for q in (p + 1)..d {
                let t = target.at(p, q);
                self.add_constraint(
                    vec![(block, basis_re(dim, offset + p, offset + q))],
                    t.re,
                );
                self.add_constraint(
                    vec![(block, basis_im(dim, offset + p, offset + q))],
                    t.im,
                );
            }
        }
    }

    /// Pin an off-diagonal rectangular region (row and column ranges must
    /// not overlap) entry by entry.
    fn pin_rect_region(
        &mut self,
        block: usize,
        row0: usize,
        col0: usize,
        rows: usize,
        cols: usize,
        value: impl Fn(usize, usize) -> C64,
    ) {
        let dim = self.blocks[block];
        assert!(row0 + rows <= col0 || col0 + cols <= row0, "region must be off-diagonal");
        for i in 0..rows {
            for j in 0..cols {
                let v = value(i, j);
                self.add_constraint(vec![(block, basis_re(dim, row0 + i, col0 + j))], v.re);
                self.add_constraint(vec![(block, basis_im(dim, row0 + i, col0 + j))], v.im);
            }
        }
    }

    /// Self-describing dump (block sizes, objective, constraint tensors)
    /// for cross-validation against an external solver.
    pub fn dump_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }
}

fn basis_diag(dim: usize, p: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    m.set(p, p, C64::new(1.0, 0.0));
    m
}

/// ⟨basis_re(p,q), X⟩ = Re X_pq for Hermitian X.
fn basis_re(dim: usize, p: usize, q: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    m.set(p, q, C64::new(0.5, 0.0));
    m.set(q, p, C64::new(0.5, 0.0));
    m
}

/// ⟨basis_im(p,q), X⟩ = Im X_pq for Hermitian X.
fn basis_im(dim: usize, p: usize, q: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    m.set(p, q, C64::new(0.0, 0.5));
    m.set(q, p, C64::new(0.0, -0.5));
    m
}

/// Strict-feasibility guard: returns the operator (possibly shifted by
/// ε·I with ε = 1e−9·λ_max) and the ε applied.
fn perturb_if_near_singular(base: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let spec = base.eig_hermitian().expect("base operator is Hermitian");
    let lmax = spec.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let lmin = spec.eigenvalues.last().copied().unwrap_or(0.0);
    let eps = 1e-9 * lmax;
    if lmin <= eps {
        (
            base.add(&ComplexMatrix::identity(base.dim()).scaled(eps)),
            eps,
        )
    } else {
        (base.clone(), 0.0)
    }
}

/// Σ_j |j⟩ ⊗ (∂_j M) as an entry map for the (D·d)×d column block.
fn stacked_derivs(derivs: &[ComplexMatrix]) -> impl Fn(usize, usize) -> C64 + '_ {
    let d = derivs.first().map_or(0, |m| m.dim());
    move |i, j| derivs[i / d].at(i % d, j)
}

fn check_weight_dim(d_params: usize, w: &WeightMatrix) -> Result<()> {
    if w.dim() != d_params {
        return Err(Error::DimensionMismatch(format!(
            "weight matrix is {}×{} but the family has D = {}",
            w.dim(),
            w.dim(),
            d_params
        )));
    }
    if d_params == 0 {
        return Err(Error::InvalidParam(
            "SDP construction needs at least one parameter".into(),
        ));
    }
    Ok(())
}

/// Primal program for the state value: minimize Tr[(W⊗I)M] over the PSD
/// completion [[M, V],[V†, ρ]] ⪰ 0.
pub fn build_state_primal(state: &StateFamilyPoint, w: &WeightMatrix) -> Result<SdpProblem> {
    check_weight_dim(state.num_params(), w)?;
    let d = state.dim();
    let dd = state.num_params() * d;
    let (rho, eps) = perturb_if_near_singular(state.rho());

    let mut problem = SdpProblem::new(Sense::Min);
    problem.perturbation = eps;
    let t = problem.add_block(dd + d);
    problem.set_objective(t, w.to_complex().kron(&ComplexMatrix::identity(d)).embed(dd + d, 0, 0));
    problem.pin_rect_region(t, 0, dd, dd, d, stacked_derivs(state.derivs()));
    problem.pin_hermitian_block(t, dd, &rho);
    Ok(problem)
}

/// Dual program for the state value: maximize
/// 2Σ_j Re Tr[Q(|j⟩⊗∂_jρ)] − Tr[Rρ] over P ⪯ W⊗I and [[P,Q†],[Q,R]] ⪰ 0.
pub fn build_state_dual(state: &StateFamilyPoint, w: &WeightMatrix) -> Result<SdpProblem> {
    check_weight_dim(state.num_params(), w)?;
    let d = state.dim();
    let dd = state.num_params() * d;
    let (rho, eps) = perturb_if_near_singular(state.rho());

    let mut problem = SdpProblem::new(Sense::Max);
    problem.perturbation = eps;
    // T = [[P, Q†],[Q, R]]; S is the slack in P + S = W⊗I
    let t = problem.add_block(dd + d);
    let s = problem.add_block(dd);

    // objective ⟨G, T⟩ with G = [[0, V],[V†, −ρ]]
    let v = stacked_derivs(state.derivs());
    let g = ComplexMatrix::from_fn(dd + d, |i, j| {
        if i < dd && j >= dd {
            v(i, j - dd)
        } else if i >= dd && j < dd {
            v(j, i - dd).conj()
        } else if i >= dd && j >= dd {
            -rho.at(i - dd, j - dd)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    problem.set_objective(t, g);

    let wi = w.to_complex().kron(&ComplexMatrix::identity(d));
    for p in 0..dd {
        problem.add_constraint(
            vec![(t, basis_diag(dd + d, p)), (s, basis_diag(dd, p))],
            wi.at(p, p).re,
        );
        for q in (p + 1)..dd {
            problem.add_constraint(
                vec![(t, basis_re(dd + d, p, q)), (s, basis_re(dd, p, q))],
                wi.at(p, q).re,
            );
            problem.add_constraint(
                vec![(t, basis_im(dd + d, p, q)), (s, basis_im(dd, p, q))],
                wi.at(p, q).im,
            );
        }
    }
    Ok(problem)
}

/// Primal program for the channel value: minimize λ subject to
/// λI_R ⪰ Tr_FB[(W⊗I)M] and [[M, V],[V†, Γ]] ⪰ 0.
pub fn build_channel_primal(
    channel: &ChannelFamilyPoint,
    w: &WeightMatrix,
) -> Result<SdpProblem> {
    check_weight_dim(channel.num_params(), w)?;
    let dr = channel.dim_in();
    let db = channel.dim_out();
    let drb = dr * db;
    let dd = channel.num_params() * drb;
    let (choi, eps) = perturb_if_near_singular(channel.choi());

    let mut problem = SdpProblem::new(Sense::Min);
    problem.perturbation = eps;
    let lam = problem.add_block(1);
    let s1 = problem.add_block(dr);
    let t = problem.add_block(dd + drb);

    problem.set_objective(lam, ComplexMatrix::identity(1));
    problem.pin_rect_region(t, 0, dd, dd, drb, stacked_derivs(channel.derivs()));
    problem.pin_hermitian_block(t, dd, &choi);

    // S1 + Tr_FB[(W⊗I)M] − λ I_R = 0, projected on a Hermitian basis of R.
    // The M coefficient for basis element E is W_F ⊗ E ⊗ I_B.
    let w_c = w.to_complex();
    let ib = ComplexMatrix::identity(db);
    let mut couple = |e: ComplexMatrix, lam_coeff: f64| {
        let m_coeff = w_c.kron(&e.kron(&ib)).embed(dd + drb, 0, 0);
        let mut terms = vec![(s1, e), (t, m_coeff)];
        if lam_coeff != 0.0 {
            terms.push((lam, ComplexMatrix::identity(1).scaled(-lam_coeff)));
        }
        problem.constraints.push(Constraint { terms, rhs: 0.0 });
    };
    for p in 0..dr {
        couple(basis_diag(dr, p), 1.0);
        for q in (p + 1)..dr {
            couple(basis_re(dr, p, q), 0.0);
            couple(basis_im(dr, p, q), 0.0);
        }
    }
    Ok(problem)
}

/// Dual program for the channel value: maximize
/// 2Σ_j Re Tr[Z(|j⟩⊗∂_jΓ)] − Tr[QΓ] subject to Tr[ρ_R] ≤ 1, ρ_R ⪰ 0,
/// [[P,Z†],[Z,Q]] ⪰ 0, and P ⪯ ρ_R ⊗ I_FB.
pub fn build_channel_dual(channel: &ChannelFamilyPoint, w: &WeightMatrix) -> Result<SdpProblem> {
    check_weight_dim(channel.num_params(), w)?;
    let dr = channel.dim_in();
    let db = channel.dim_out();
    let drb = dr * db;
    let d_params = channel.num_params();
    let dd = d_params * drb;
    let (choi, eps) = perturb_if_near_singular(channel.choi());

    let mut problem = SdpProblem::new(Sense::Max);
    problem.perturbation = eps;
    let t = problem.add_block(dd + drb);
    let s1 = problem.add_block(dd);
    let r = problem.add_block(dr);
    let slack = problem.add_block(1);

    let v = stacked_derivs(channel.derivs());
    let g = ComplexMatrix::from_fn(dd + drb, |i, j| {
        if i < dd && j >= dd {
            v(i, j - dd)
        } else if i >= dd && j < dd {
            v(j, i - dd).conj()
        } else if i >= dd && j >= dd {
            -choi.at(i - dd, j - dd)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    problem.set_objective(t, g);

    // P + S1 = W_F ⊗ ρ_R ⊗ I_B entrywise on FRB. Projected on a Hermitian
    // basis element E, the ρ_R coefficient is Tr_{F,B}[(W⊗I_RB)E]. The
    // weighted lift makes the dual optimum match the weighted primal for
    // every W, with the unweighted constraint recovered at W = I.
    let w_c = w.to_complex();
    let mut couple = |e_t: ComplexMatrix, e_s: ComplexMatrix, rhs: f64| {
        let lifted = w_c
            .kron(&ComplexMatrix::identity(drb))
            .mul(&e_s)
            .partial_trace(d_params, drb, TraceSide::Left)
            .expect("dims divide")
            .partial_trace(dr, db, TraceSide::Right)
            .expect("dims divide")
            .hermitized();
        let mut terms = vec![(t, e_t), (s1, e_s)];
        if lifted.max_abs() > 0.0 {
            terms.push((r, lifted.scaled(-1.0)));
        }
        problem.constraints.push(Constraint { terms, rhs });
    };
    for p in 0..dd {
        couple(basis_diag(dd + drb, p), basis_diag(dd, p), 0.0);
        for q in (p + 1)..dd {
            couple(basis_re(dd + drb, p, q), basis_re(dd, p, q), 0.0);
            couple(basis_im(dd + drb, p, q), basis_im(dd, p, q), 0.0);
        }
    }
    // Tr[ρ_R] + slack = 1
    problem.add_constraint(
        vec![(r, ComplexMatrix::identity(dr)), (slack, ComplexMatrix::identity(1))],
        1.0,
    );
    Ok(problem)
}

/// Closed form vs. primal vs. dual comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub closed_form: ExtendedReal,
    pub primal_value: Option<f64>,
    pub dual_value: Option<f64>,
    pub max_rel_deviation: Option<f64>,
    pub duality_gap: Option<f64>,
    pub passed: bool,
    pub skipped_infinite: bool,
}

fn relative_spread(values: &[f64]) -> f64 {
    let mut max_dev = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in values.iter().skip(i + 1) {
            let scale = a.abs().max(b.abs()).max(1e-30);
            max_dev = max_dev.max((a - b).abs() / scale);
        }
    }
    max_dev
}

/// Solve primal and dual and compare them with the closed form; `passed`
/// iff all pairwise relative deviations are within `tol`. When the
/// finiteness condition fails, the SDPs are skipped and the report is
/// flagged.
pub fn cross_check_channel(
    channel: &ChannelFamilyPoint,
    w: &WeightMatrix,
    tol: f64,
) -> Result<CrossCheckReport> {
    let closed = rld::rld_value_channel(channel, w, crate::DEFAULT_RANK_TOL);
    let closed_value = match closed {
        ExtendedReal::Finite(v) => v,
        ExtendedReal::Infinite => {
            return Ok(CrossCheckReport {
                closed_form: ExtendedReal::Infinite,
                primal_value: None,
                dual_value: None,
                max_rel_deviation: None,
                duality_gap: None,
                passed: true,
                skipped_infinite: true,
            })
        }
    };
    let opts = SolveOptions::default();
    let primal = solve_sdp(&build_channel_primal(channel, w)?, &opts);
    let dual = solve_sdp(&build_channel_dual(channel, w)?, &opts);
    let spread = relative_spread(&[closed_value, primal.primal_value, dual.primal_value]);
    let gap = primal.gap.max(dual.gap);
    Ok(CrossCheckReport {
        closed_form: closed,
        primal_value: Some(primal.primal_value),
        dual_value: Some(dual.primal_value),
        max_rel_deviation: Some(spread),
        duality_gap: Some(gap),
        passed: spread <= tol && primal.status == SdpStatus::Optimal && dual.status == SdpStatus::Optimal,
        skipped_infinite: false,
    })
}

/// State-family version of [`cross_check_channel`].
pub fn cross_check_state(
    state: &StateFamilyPoint,
    w: &WeightMatrix,
    tol: f64,
) -> Result<CrossCheckReport> {
    let closed = rld::rld_value_state(state, w, crate::DEFAULT_RANK_TOL);
    let closed_value = match closed {
        ExtendedReal::Finite(v) => v,
        ExtendedReal::Infinite => {
            return Ok(CrossCheckReport {
                closed_form: ExtendedReal::Infinite,
                primal_value: None,
                dual_value: None,
                max_rel_deviation: None,
                duality_gap: None,
                passed: true,
                skipped_infinite: true,
            })
        }
    };
    let opts = SolveOptions::default();
    let primal = solve_sdp(&build_state_primal(state, w)?, &opts);
    let dual = solve_sdp(&build_state_dual(state, w)?, &opts);
    let spread = relative_spread(&[closed_value, primal.primal_value, dual.primal_value]);
    let gap = primal.gap.max(dual.gap);
    Ok(CrossCheckReport {
        closed_form: closed,
        primal_value: Some(primal.primal_value),
        dual_value: Some(dual.primal_value),
        max_rel_deviation: Some(spread),
        duality_gap: Some(gap),
        passed: spread <= tol && primal.status == SdpStatus::Optimal && dual.status == SdpStatus::Optimal,
        skipped_infinite: false,
    })
}
