//! Scalar Cramér–Rao bounds and the inequalities behind them.
//!
//! The single-letter bounds are Tr[W′Cov] ≥ 1/(n·Î) with W′ unit trace,
//! for both state and channel families. The chain rule
//! Î(N(ρ)) ≤ Î(N) + Î(ρ) and the resulting amortization collapse are
//! certified numerically here, together with the sequential meta-converse:
//! the final state of any n-use protocol with parameter-free interleavers
//! satisfies Î(ω) ≤ n·Î(N).

use crate::error::{Error, Result};
use crate::families::{
    push_through_channel, ChannelFamilyPoint, StateFamilyPoint, WeightMatrix,
};
use crate::linalg::{ComplexMatrix, TraceSide};
use crate::rld::{
    rld_finiteness_channel, rld_matrix_state, rld_value_channel, rld_value_channel_single,
    rld_value_state, traced_block,
};
use crate::ExtendedReal;

/// A Cramér–Rao report: the Fisher value and the induced lower bound
/// 1/(n·value) on the weighted estimator covariance, with 1/∞ = 0 and
/// 1/0 = ∞.
#[derive(Debug, Clone, PartialEq)]
pub struct CrbReport {
    pub n: u64,
    pub fisher_value: ExtendedReal,
    pub bound: ExtendedReal,
    /// Trace of the supplied weight before normalization to unit trace.
    pub weight_trace: f64,
}

fn crb_from_value(n: u64, fisher_value: ExtendedReal, weight_trace: f64) -> CrbReport {
    let bound = match fisher_value {
        ExtendedReal::Infinite => ExtendedReal::Finite(0.0),
        ExtendedReal::Finite(v) if v == 0.0 => ExtendedReal::Infinite,
        ExtendedReal::Finite(v) => ExtendedReal::Finite(1.0 / (n as f64 * v)),
    };
    CrbReport {
        n,
        fisher_value,
        bound,
        weight_trace,
    }
}

/// Bound for n copies of a state family. The weight is normalized to unit
/// trace (recording the factor), as the scalar bound requires.
pub fn crb_state_multi(
    n: u64,
    state: &StateFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> Result<CrbReport> {
    let (w_unit, factor) = w.normalized()?;
    Ok(crb_from_value(
        n,
        rld_value_state(state, &w_unit, rank_tol),
        factor,
    ))
}

/// Single-parameter channel bound Var(θ̂) ≥ 1/(n·Î).
pub fn crb_channel_single(n: u64, channel: &ChannelFamilyPoint) -> Result<CrbReport> {
    let value = rld_value_channel_single(channel)?;
    Ok(crb_from_value(n, value, 1.0))
}

/// Multiparameter channel bound Tr[W′Cov] ≥ 1/(n·Î(W′)).
pub fn crb_channel_multi(
    n: u64,
    channel: &ChannelFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> Result<CrbReport> {
    let (w_unit, factor) = w.normalized()?;
    Ok(crb_from_value(
        n,
        rld_value_channel(channel, &w_unit, rank_tol),
        factor,
    ))
}

/// Outcome of the finiteness test: a finite channel RLD value rules out
/// Heisenberg scaling; an infinite one proves nothing either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeisenbergVerdict {
    ShotNoiseLimited,
    Inconclusive,
}

pub fn heisenberg_verdict(
    channel: &ChannelFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> HeisenbergVerdict {
    if rld_finiteness_channel(channel, w, rank_tol) {
        HeisenbergVerdict::ShotNoiseLimited
    } else {
        HeisenbergVerdict::Inconclusive
    }
}

/// Î(N) + Î(ρ) − Î(N(ρ)); nonnegative up to roundoff by the chain rule.
pub fn chain_rule_slack(
    channel: &ChannelFamilyPoint,
    state: &StateFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> Result<f64> {
    let v_channel = rld_value_channel(channel, w, rank_tol)
        .finite()
        .ok_or(Error::Infinite("channel RLD value; check rld_finiteness_channel"))?;
    let v_state = rld_value_state(state, w, rank_tol)
        .finite()
        .ok_or(Error::Infinite("input-state RLD value; check rld_finiteness_state"))?;
    let pushed = push_through_channel(state, channel)?;
    let v_out = rld_value_state(&pushed, w, rank_tol)
        .finite()
        .ok_or(Error::Infinite("output-state RLD value; check rld_finiteness_state"))?;
    Ok(v_channel + v_state - v_out)
}

/// The D×D matrix gap of the operator chain rule:
/// M_mid + Î(ρ) − Î(N(ρ)), where (M_mid)_{jk} = Tr[ρ_Aᵀ · Tr_B[(∂_jΓ)Γ⁻¹(∂_kΓ)]]
/// and ρ_A is the reduced input state on the channel input system. PSD up
/// to roundoff.
pub fn chain_rule_matrix_gap(
    channel: &ChannelFamilyPoint,
    state: &StateFamilyPoint,
    rank_tol: f64,
) -> Result<ComplexMatrix> {
    let d_params = channel.num_params();
    let da = channel.dim_in();
    let dr = state.dim() / da;
    let rho_a_t = state
        .rho()
        .partial_trace(dr, da, TraceSide::Left)?
        .transpose();

    let mid = ComplexMatrix::from_fn(d_params, |j, k| {
        let block = traced_block(channel, j, k, rank_tol).expect("indices in range");
        rho_a_t.mul(&block).trace()
    });

    let in_matrix = rld_matrix_state(state, rank_tol);
    if !in_matrix.finite {
        return Err(Error::Infinite("input-state RLD matrix"));
    }
    let pushed = push_through_channel(state, channel)?;
    let out_matrix = rld_matrix_state(&pushed, rank_tol);
    if !out_matrix.finite {
        return Err(Error::Infinite("output-state RLD matrix"));
    }
    Ok(mid
        .add(&in_matrix.entries)
        .sub(&out_matrix.entries)
        .hermitized())
}

/// Î(N(ρ)) − Î(ρ): the net information gained by one channel use on a
/// parameter-dependent catalyst. The amortization collapse caps this at
/// Î(N).
pub fn amortized_gain(
    channel: &ChannelFamilyPoint,
    state: &StateFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> Result<f64> {
    let v_state = rld_value_state(state, w, rank_tol)
        .finite()
        .ok_or(Error::Infinite("input-state RLD value"))?;
    let pushed = push_through_channel(state, channel)?;
    let v_out = rld_value_state(&pushed, w, rank_tol)
        .finite()
        .ok_or(Error::Infinite("output-state RLD value"))?;
    Ok(v_out - v_state)
}

/// A sequential estimation protocol: a parameter-free initial state on
/// memory ⊗ input, and n−1 parameter-free interleavers, each mapping
/// (memory ⊗ output) → (memory′ ⊗ input).
#[derive(Debug, Clone)]
pub struct SequentialProtocol {
    pub n: usize,
    pub initial: StateFamilyPoint,
    pub interleavers: Vec<ChannelFamilyPoint>,
}

impl SequentialProtocol {
    pub fn new(
        n: usize,
        initial: StateFamilyPoint,
        interleavers: Vec<ChannelFamilyPoint>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParam("protocol needs n ≥ 1 uses".into()));
        }
        if interleavers.len() != n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "protocol with n = {n} needs {} interleavers, got {}",
                n - 1,
                interleavers.len()
            )));
        }
        for d in initial.derivs() {
            if d.max_abs() != 0.0 {
                return Err(Error::InvalidParam(
                    "initial state must be parameter-free (zero derivatives)".into(),
                ));
            }
        }
        for (i, s) in interleavers.iter().enumerate() {
            for d in s.derivs() {
                if d.max_abs() != 0.0 {
                    return Err(Error::InvalidParam(format!(
                        "interleaver {i} must be parameter-free"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            initial,
            interleavers,
        })
    }
}

/// RLD value of the state after each channel use (prefix values); the last
/// entry is the final-state value bounded by n·Î(N).
pub fn sequential_fi_prefix_values(
    protocol: &SequentialProtocol,
    channel: &ChannelFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> Result<Vec<ExtendedReal>> {
    let mut state = protocol.initial.clone();
    let mut values = Vec::with_capacity(protocol.n);
    for use_idx in 0..protocol.n {
        state = push_through_channel(&state, channel)?;
        values.push(rld_value_state(&state, w, rank_tol));
        if use_idx + 1 < protocol.n {
            let interleaver = &protocol.interleavers[use_idx];
            if state.dim() != interleaver.dim_in() {
                return Err(Error::DimensionMismatch(format!(
                    "interleaver {use_idx} expects input dimension {}, state has {}",
                    interleaver.dim_in(),
                    state.dim()
                )));
            }
            state = push_through_channel(&state, interleaver)?;
        }
    }
    Ok(values)
}

/// RLD value of the final protocol state; Theorem-level guarantee:
/// ≤ n·Î(N) up to roundoff.
pub fn sequential_fi(
    protocol: &SequentialProtocol,
    channel: &ChannelFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> Result<ExtendedReal> {
    Ok(*sequential_fi_prefix_values(protocol, channel, w, rank_tol)?
        .last()
        .expect("n ≥ 1"))
}
