//! Symmetric-logarithmic-derivative Fisher information and the Helstrom
//! bound.
//!
//! The SLD operators solve ∂_jρ = ½(ρL_j + L_jρ) on the support of ρ; in
//! the eigenbasis of ρ, L_j = 2 Σ_{λ_a+λ_b>0} ⟨ψ_a|∂_jρ|ψ_b⟩/(λ_a+λ_b)
//! |ψ_a⟩⟨ψ_b|. The off-diagonal trace Tr[ρ L_j L_k] is complex in general;
//! the matrix stores its Hermitian part, which is the standard Helstrom
//! matrix, and the largest discarded imaginary magnitude is available as a
//! diagnostic.

use crate::error::{Error, Result};
use crate::families::{push_through_channel, ChannelFamilyPoint, StateFamilyPoint, WeightMatrix};
use crate::linalg::ComplexMatrix;
use crate::rld::FisherMatrix;
use crate::ExtendedReal;

/// The SLD operators L_j of a state family at one parameter point.
#[derive(Debug, Clone)]
pub struct SldSet {
    pub operators: Vec<ComplexMatrix>,
    pub rank_tol: f64,
}

/// Solve the SLD defining equation spectrally; eigenpairs with
/// λ_a + λ_b ≤ rank_tol·λ_max are excluded (support restriction).
pub fn sld_operators(state: &StateFamilyPoint, rank_tol: f64) -> SldSet {
    let spec = state
        .rho()
        .eig_hermitian()
        .expect("ρ validated Hermitian at construction");
    let n = state.dim();
    let lmax = spec.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = rank_tol * lmax;
    let v = &spec.eigenvectors;

    let operators = state
        .derivs()
        .iter()
        .map(|drho| {
            // B = V† (∂ρ) V, scaled entrywise, mapped back
            let b = v.dagger().mul(drho).mul(v);
            let mut l_eig = ComplexMatrix::zeros(n);
            for a in 0..n {
                for c in 0..n {
                    let denom = spec.eigenvalues[a] + spec.eigenvalues[c];
                    if denom > cutoff {
                        l_eig.set(a, c, b.at(a, c) * (2.0 / denom));
                    }
                }
            }
            v.mul(&l_eig).mul(&v.dagger()).hermitized()
        })
        .collect();

    SldSet {
        operators,
        rank_tol,
    }
}

/// SLD Fisher information matrix (Hermitian part of Tr[ρ L_j L_k]) together
/// with the largest imaginary magnitude discarded by symmetrization.
pub fn sld_matrix_with_diagnostic(
    state: &StateFamilyPoint,
    rank_tol: f64,
) -> (FisherMatrix, f64) {
    let set = sld_operators(state, rank_tol);
    let d_params = state.num_params();
    let mut max_imag = 0.0f64;
    let mut entries = ComplexMatrix::zeros(d_params);
    for j in 0..d_params {
        for k in 0..d_params {
            let t = state.rho().mul(&set.operators[j]).mul(&set.operators[k]).trace();
            max_imag = max_imag.max(t.im.abs());
            entries.set(j, k, t);
        }
    }
    (
        FisherMatrix {
            entries: entries.hermitized(),
            finite: true,
        },
        max_imag,
    )
}

/// SLD Fisher information matrix; real symmetric PSD.
pub fn sld_matrix(state: &StateFamilyPoint, rank_tol: f64) -> FisherMatrix {
    sld_matrix_with_diagnostic(state, rank_tol).0
}

/// Helstrom bound Tr[W I_F⁻¹] — a lower bound on the weighted estimator
/// covariance. `Infinite` when the SLD matrix is singular within rank_tol
/// (some parameter direction is unidentifiable).
pub fn helstrom_value(
    state: &StateFamilyPoint,
    w: &WeightMatrix,
    rank_tol: f64,
) -> ExtendedReal {
    let fisher = sld_matrix(state, rank_tol);
    let spec = fisher
        .entries
        .eig_hermitian()
        .expect("SLD matrix Hermitized above");
    let lmax = spec.eigenvalues.first().copied().unwrap_or(0.0);
    let lmin = spec.eigenvalues.last().copied().unwrap_or(0.0);
    if lmax <= 0.0 || lmin <= rank_tol * lmax {
        return ExtendedReal::Infinite;
    }
    let inv: Vec<f64> = spec.eigenvalues.iter().map(|&l| 1.0 / l).collect();
    let value = spec.recompose(&inv).hs_inner(&w.to_complex());
    ExtendedReal::Finite(value.max(0.0))
}

/// Minimize helstrom_value(push_through_channel(probe(p), channel), W) over
/// p ∈ [δ, 1−δ] by a uniform grid followed by golden-section refinement
/// around the best grid point. Returns (p_star, minimal value).
pub fn optimize_probe<F>(
    channel: &ChannelFamilyPoint,
    probe: F,
    w: &WeightMatrix,
    grid_size: usize,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<StateFamilyPoint>,
{
    if grid_size < 3 {
        return Err(Error::InvalidParam(format!(
            "probe grid needs at least 3 points, got {grid_size}"
        )));
    }
    const DELTA: f64 = 1e-4;
    let rank_tol = crate::DEFAULT_RANK_TOL;
    let eval = |p: f64| -> Result<f64> {
        let out = push_through_channel(&probe(p)?, channel)?;
        Ok(match helstrom_value(&out, w, rank_tol) {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Infinite => f64::INFINITY,
        })
    };

    let step = (1.0 - 2.0 * DELTA) / (grid_size - 1) as f64;
    let mut best_idx = 0usize;
    let mut best_val = f64::INFINITY;
    let mut grid_vals = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let p = DELTA + step * i as f64;
        let v = eval(p)?;
        grid_vals.push(v);
        if v < best_val {
            best_val = v;
            best_idx = i;
        }
    }
    if !best_val.is_finite() {
        return Err(Error::Invalid(
            "channel family is unidentifiable with this probe: all grid points give an infinite bound".into(),
        ));
    }

    // golden-section on the bracketing interval
    let mut lo = DELTA + step * best_idx.saturating_sub(1) as f64;
    let mut hi = (DELTA + step * (best_idx + 1) as f64).min(1.0 - DELTA);
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    for _ in 0..200 {
        if hi - lo < 1e-10 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2)?;
        }
    }
    let p_star = 0.5 * (lo + hi);
    let v_star = eval(p_star)?;
    if v_star <= best_val {
        Ok((p_star, v_star))
    } else {
        Ok((DELTA + step * best_idx as f64, best_val))
    }
}
