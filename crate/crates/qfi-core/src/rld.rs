//! Right-logarithmic-derivative Fisher information.
//!
//! For a state family the matrix elements are Tr[(∂_jρ) ρ⁻¹ (∂_kρ)] with the
//! inverse taken on the support of ρ; the scalar value is Tr[W Î]. For a
//! channel family the value has the closed form
//! ‖Σ_{j,k} ⟨k|W|j⟩ Tr_B[(∂_jΓ) Γ⁻¹ (∂_kΓ)]‖_∞. Each quantity is finite
//! only under a support (finiteness) condition; when that fails the single
//! verdict `Infinite` is returned rather than per-entry bookkeeping, since
//! every downstream consumer needs only finite/not.

use crate::error::{Error, Result};
use crate::families::{ChannelFamilyPoint, StateFamilyPoint, WeightMatrix};
use crate::linalg::{ComplexMatrix, TraceSide, C64};
use crate::ExtendedReal;

/// D×D Fisher information matrix. `entries` is meaningful only when
/// `finite` is set; it is Hermitian, and PSD up to roundoff.
#[derive(Debug, Clone)]
pub struct FisherMatrix {
    pub entries: ComplexMatrix,
    pub finite: bool,
}

impl FisherMatrix {
    pub fn infinite(num_params: usize) -> Self {
        Self {
            entries: ComplexMatrix::zeros(num_params),
            finite: false,
        }
    }
}

/// Σ_{j,k} ⟨k|W|j⟩ (∂_k M)(∂_j M) — the PSD operator whose kernel overlap
/// decides finiteness.
fn weighted_derivative_gram(derivs: &[ComplexMatrix], w: &WeightMatrix) -> ComplexMatrix {
    let dim = derivs.first().map_or(0, |d| d.dim());
    let mut sum = ComplexMatrix::zeros(dim);
    for j in 0..derivs.len() {
        for k in 0..derivs.len() {
            let wkj = w.entry(k, j);
            if wkj == 0.0 {
                continue;
            }
            sum = sum.add(&derivs[k].mul(&derivs[j]).scaled(wkj));
        }
    }
    sum.hermitized()
}

/// 1 + max_j ‖∂_j‖²_∞, the magnitude scale the support checks compare
/// against.
fn derivative_scale(derivs: &[ComplexMatrix]) -> f64 {
    let mut scale: f64 = 0.0;
    for d in derivs {
        let n = d.spectral_norm();
        scale = scale.max(n * n);
    }
    1.0 + scale
}

fn support_condition(
    base: &ComplexMatrix,
    derivs: &[ComplexMatrix],
    w: &WeightMatrix,
    rank_tol: f64,
) -> bool {
    if derivs.is_empty() {
        return true;
    }
    let projector = base
        .kernel_projector(rank_tol)
        .expect("base operator validated Hermitian at construction");
    if projector.max_abs() == 0.0 {
        return true;
    }
    let gram = weighted_derivative_gram(derivs, w);
    let norm = gram.mul(&projector).spectral_norm();
    norm <= rank_tol * derivative_scale(derivs)
}

/// Whether Σ_{j,k}⟨k|W|j⟩(∂_kρ)(∂_jρ) annihilates the kernel of ρ, so that
/// the weighted state value is finite.
pub fn rld_finiteness_state(state: &StateFamilyPoint, w: &WeightMatrix, rank_tol: f64) -> bool {
    support_condition(state.rho(), state.derivs(), w, rank_tol)
}

/// Channel version of the finiteness condition, on the Choi operator.
pub fn rld_finiteness_channel(
    channel: &ChannelFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> bool {
    support_condition(channel.choi(), channel.derivs(), w, rank_tol)
}

/// Pairwise (unweighted) finiteness: (∂_jρ)(∂_kρ)Π⊥ = 0 for all j,k.
fn pairwise_finiteness(base: &ComplexMatrix, derivs: &[ComplexMatrix], rank_tol: f64) -> bool {
    if derivs.is_empty() {
        return true;
    }
    let projector = base
        .kernel_projector(rank_tol)
        .expect("base operator validated Hermitian at construction");
    if projector.max_abs() == 0.0 {
        return true;
    }
    let scale = derivative_scale(derivs);
    for dj in derivs {
        for dk in derivs {
            let norm = dj.mul(dk).mul(&projector).spectral_norm();
            if norm > rank_tol * scale {
                return false;
            }
        }
    }
    true
}

/// RLD Fisher information matrix of a state family; `finite = false` when
/// the pairwise support condition fails.
pub fn rld_matrix_state(state: &StateFamilyPoint, rank_tol: f64) -> FisherMatrix {
    let d_params = state.num_params();
    if !pairwise_finiteness(state.rho(), state.derivs(), rank_tol) {
        return FisherMatrix::infinite(d_params);
    }
    let pinv = state
        .rho()
        .support_pinv(rank_tol)
        .expect("ρ validated Hermitian at construction");
    let entries = ComplexMatrix::from_fn(d_params, |j, k| {
        state.derivs()[j].mul(&pinv).mul(&state.derivs()[k]).trace()
    });
    FisherMatrix {
        entries: entries.hermitized(),
        finite: true,
    }
}

/// Scalar RLD value Tr[W Î] of a state family, or `Infinite` when the
/// weighted support condition fails.
pub fn rld_value_state(
    state: &StateFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> ExtendedReal {
    if !rld_finiteness_state(state, w, rank_tol) {
        return ExtendedReal::Infinite;
    }
    let pinv = state
        .rho()
        .support_pinv(rank_tol)
        .expect("ρ validated Hermitian at construction");
    let mut value = C64::new(0.0, 0.0);
    for j in 0..state.num_params() {
        let left = state.derivs()[j].mul(&pinv);
        for k in 0..state.num_params() {
            let wkj = w.entry(k, j);
            if wkj == 0.0 {
                continue;
            }
            value += left.mul(&state.derivs()[k]).trace() * wkj;
        }
    }
    ExtendedReal::Finite(value.re.max(0.0))
}

/// The traced block Tr_B[(∂_jΓ) Γ⁻¹ (∂_kΓ)], a d_A×d_A operator. Exposed so
/// closed-form channel models can be checked block by block.
pub fn traced_block(
    channel: &ChannelFamilyPoint,
    j: usize,
    k: usize,
    rank_tol: f64,
) -> Result<ComplexMatrix> {
    if j >= channel.num_params() || k >= channel.num_params() {
        return Err(Error::InvalidParam(format!(
            "block index ({j},{k}) out of range for {} parameters",
            channel.num_params()
        )));
    }
    let pinv = channel.choi().support_pinv(rank_tol)?;
    channel.derivs()[j]
        .mul(&pinv)
        .mul(&channel.derivs()[k])
        .partial_trace(channel.dim_in(), channel.dim_out(), TraceSide::Right)
}

/// Σ_{j,k}⟨k|W|j⟩ Tr_B[(∂_jΓ) Γ⁻¹ (∂_kΓ)], Hermitized. The weighted double
/// sum is Hermitian in exact arithmetic; symmetrizing suppresses roundoff.
pub fn traced_block_sum(
    channel: &ChannelFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> Result<ComplexMatrix> {
    let pinv = channel.choi().support_pinv(rank_tol)?;
    let mut sum = ComplexMatrix::zeros(channel.dim_in());
    for j in 0..channel.num_params() {
        let left = channel.derivs()[j].mul(&pinv);
        for k in 0..channel.num_params() {
            let wkj = w.entry(k, j);
            if wkj == 0.0 {
                continue;
            }
            let block = left.mul(&channel.derivs()[k]).partial_trace(
                channel.dim_in(),
                channel.dim_out(),
                TraceSide::Right,
            )?;
            sum = sum.add(&block.scaled(wkj));
        }
    }
    Ok(sum.hermitized())
}

/// RLD Fisher information value of a channel family:
/// ‖Σ_{j,k}⟨k|W|j⟩ Tr_B[(∂_jΓ) Γ⁻¹ (∂_kΓ)]‖_∞, or `Infinite` when the
/// support condition fails.
pub fn rld_value_channel(
    channel: &ChannelFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> ExtendedReal {
    if !rld_finiteness_channel(channel, w, rank_tol) {
        return ExtendedReal::Infinite;
    }
    let sum = traced_block_sum(channel, w, rank_tol)
        .expect("Choi validated Hermitian at construction");
    let value = sum
        .inf_norm_psd()
        .expect("traced block sum Hermitized above");
    ExtendedReal::Finite(value.max(0.0))
}

/// Single-parameter specialization (D = 1, W = [1]).
pub fn rld_value_channel_single(channel: &ChannelFamilyPoint) -> Result<ExtendedReal> {
    if channel.num_params() != 1 {
        return Err(Error::InvalidParam(format!(
            "single-parameter value requires D = 1, channel has D = {}",
            channel.num_params()
        )));
    }
    let w = WeightMatrix::scalar(1.0)?;
    Ok(rld_value_channel(channel, &w, crate::DEFAULT_RANK_TOL))
}
