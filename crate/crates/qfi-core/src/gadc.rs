//! Generalized amplitude damping channel (GADC) in closed form.
//!
//! The channel A_{γ,N} has loss γ ∈ (0,1) and noise N ∈ (0,1). Its 4×4 Choi
//! operator, the exact inverse, both parameter derivatives, and the four
//! traced blocks Tr_B[(∂_aΓ)Γ⁻¹(∂_bΓ)] all have explicit expressions, which
//! this module provides alongside the weighted RLD value and the loss sweep
//! that compares the RLD and SLD bounds.
//!
//! Parameter order is [γ, N] everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{ChannelFamilyPoint, StateFamilyPoint, WeightMatrix};
use crate::linalg::{ComplexMatrix, C64};
use crate::sld::optimize_probe;
use crate::ExtendedReal;

/// Loss and noise parameters, both restricted to the open interval (0,1);
/// the closed forms divide by γ²N(1−N).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GadcParams {
    pub gamma: f64,
    pub n_noise: f64,
}

impl GadcParams {
    pub fn new(gamma: f64, n_noise: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParam(format!(
                "loss γ = {gamma} must lie in the open interval (0,1)"
            )));
        }
        if !(n_noise > 0.0 && n_noise < 1.0) {
            return Err(Error::InvalidParam(format!(
                "noise N = {n_noise} must lie in the open interval (0,1)"
            )));
        }
        Ok(Self { gamma, n_noise })
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Choi operator: diagonal (1−γN, γN, γ(1−N), 1−γ(1−N)) with √(1−γ) corners.
pub fn gadc_choi(p: GadcParams) -> ComplexMatrix {
    let (g, n) = (p.gamma, p.n_noise);
    let mut m = ComplexMatrix::zeros(4);
    m.set(0, 0, c(1.0 - g * n));
    m.set(1, 1, c(g * n));
    m.set(2, 2, c(g * (1.0 - n)));
    m.set(3, 3, c(1.0 - g * (1.0 - n)));
    m.set(0, 3, c((1.0 - g).sqrt()));
    m.set(3, 0, c((1.0 - g).sqrt()));
    m
}

/// Exact inverse of the Choi operator.
pub fn gadc_choi_inverse(p: GadcParams) -> ComplexMatrix {
    let (g, n) = (p.gamma, p.n_noise);
    let det = g * g * n * (1.0 - n);
    let mut m = ComplexMatrix::zeros(4);
    m.set(0, 0, c((1.0 - g * (1.0 - n)) / det));
    m.set(1, 1, c(1.0 / (g * n)));
    m.set(2, 2, c(1.0 / (g * (1.0 - n))));
    m.set(3, 3, c((1.0 - g * n) / det));
    m.set(0, 3, c(-(1.0 - g).sqrt() / det));
    m.set(3, 0, c(-(1.0 - g).sqrt() / det));
    m
}

/// (∂_γΓ, ∂_NΓ). ∂_γΓ has diagonal (−N, N, 1−N, −(1−N)) and corners
/// −1/(2√(1−γ)); ∂_NΓ = −γ (I₂ ⊗ σ_Z).
pub fn gadc_derivatives(p: GadcParams) -> (ComplexMatrix, ComplexMatrix) {
    let (g, n) = (p.gamma, p.n_noise);
    let mut dg = ComplexMatrix::zeros(4);
    dg.set(0, 0, c(-n));
    dg.set(1, 1, c(n));
    dg.set(2, 2, c(1.0 - n));
    dg.set(3, 3, c(-(1.0 - n)));
    let corner = -1.0 / (2.0 * (1.0 - g).sqrt());
    dg.set(0, 3, c(corner));
    dg.set(3, 0, c(corner));

    let dn = ComplexMatrix::diag_real(&[-g, g, -g, g]);
    (dg, dn)
}

/// The four traced blocks Tr_B[(∂_aΓ)Γ⁻¹(∂_bΓ)] for (a,b) ∈ {γ,N}², in the
/// order [[γγ, γN], [Nγ, NN]]. All four are diagonal 2×2 matrices.
pub fn gadc_traced_blocks(p: GadcParams) -> [[ComplexMatrix; 2]; 2] {
    let (g, n) = (p.gamma, p.n_noise);
    let gg = ComplexMatrix::diag_real(&[
        (1.0 / (n * (1.0 - g)) + 1.0 / (1.0 - n) - 4.0) / (4.0 * g * g),
        (1.0 / ((1.0 - g) * (1.0 - n)) + 1.0 / n - 4.0) / (4.0 * g * g),
    ]);
    let cross = -(1.0 - 2.0 * n) / (2.0 * g * n * (1.0 - n));
    let gn = ComplexMatrix::diag_real(&[cross, cross]);
    let nn_val = 1.0 / (n * (1.0 - n));
    let nn = ComplexMatrix::diag_real(&[nn_val, nn_val]);
    [[gg, gn.clone()], [gn, nn]]
}

/// Weighted RLD Fisher information value
/// ‖Σ_{a,b}⟨b|W|a⟩ Tr_B[(∂_aΓ)Γ⁻¹(∂_bΓ)]‖_∞ from the closed-form blocks.
/// Since every block is diagonal, the norm is the largest diagonal entry.
pub fn gadc_rld_value(p: GadcParams, w: &WeightMatrix) -> f64 {
    let blocks = gadc_traced_blocks(p);
    let mut sum = ComplexMatrix::zeros(2);
    for a in 0..2 {
        for b in 0..2 {
            sum = sum.add(&blocks[a][b].scaled(w.entry(b, a)));
        }
    }
    let d0 = sum.at(0, 0).re;
    let d1 = sum.at(1, 1).re;
    d0.max(d1).max(0.0)
}

/// Standard four-operator Kraus set, validated against the closed-form Choi
/// operator rather than trusted independently.
pub fn gadc_kraus(p: GadcParams) -> Vec<ComplexMatrix> {
    let (g, n) = (p.gamma, p.n_noise);
    let s1g = (1.0 - g).sqrt();
    let k1 = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, s1g]).unwrap().scaled((1.0 - n).sqrt());
    let k2 = ComplexMatrix::from_real(2, &[0.0, g.sqrt(), 0.0, 0.0]).unwrap().scaled((1.0 - n).sqrt());
    let k3 = ComplexMatrix::from_real(2, &[s1g, 0.0, 0.0, 1.0]).unwrap().scaled(n.sqrt());
    let k4 = ComplexMatrix::from_real(2, &[0.0, 0.0, g.sqrt(), 0.0]).unwrap().scaled(n.sqrt());
    vec![k1, k2, k3, k4]
}

/// The two-parameter channel family point at (γ,N), with analytic
/// derivatives in the order [γ, N].
pub fn gadc_channel_point(p: GadcParams) -> ChannelFamilyPoint {
    let (dg, dn) = gadc_derivatives(p);
    ChannelFamilyPoint::new(gadc_choi(p), 2, 2, vec![dg, dn])
        .expect("closed-form GADC data satisfies the channel invariants")
}

/// Single-parameter family in γ with N frozen.
pub fn gadc_channel_point_gamma(p: GadcParams) -> ChannelFamilyPoint {
    let (dg, _) = gadc_derivatives(p);
    ChannelFamilyPoint::new(gadc_choi(p), 2, 2, vec![dg])
        .expect("closed-form GADC data satisfies the channel invariants")
}

/// Entangled probe |ψ(p)⟩ = √p|00⟩ + √(1−p)|11⟩ as a parameter-free state
/// family point (two zero derivatives, matching [γ, N]).
pub fn probe_state(p: f64) -> Result<StateFamilyPoint> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!(
            "probe parameter p = {p} must lie in [0,1]"
        )));
    }
    let v = [c(p.sqrt()), c(0.0), c(0.0), c((1.0 - p).sqrt())];
    StateFamilyPoint::parameter_free(ComplexMatrix::outer(&v), 2)
}

/// The weight matrix ¼[[1,1],[1,3]] used in the loss sweep.
pub fn figure2_weight() -> WeightMatrix {
    WeightMatrix::new(2, vec![0.25, 0.25, 0.25, 0.75]).expect("fixed PSD weight")
}

/// Default sweep grid γ ∈ {0.05, 0.10, …, 0.95}; the closed forms blow up
/// at the endpoints.
pub fn default_gamma_grid() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SweepStatus {
    Ok,
    Failed(String),
}

/// One row of the loss sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub n_noise: f64,
    pub log10_rld_value: f64,
    pub log10_sld_value: f64,
    pub p_star: f64,
    pub rld_value: f64,
    pub sld_value: f64,
    pub status: SweepStatus,
}

/// Compute one sweep row: the closed-form RLD value and the probe-optimized
/// SLD proxy 1/min_p Tr[W I_F(p)⁻¹].
pub fn figure2_row(gamma: f64, n_noise: f64, w: &WeightMatrix, probe_grid: usize) -> SweepRow {
    let failed = |msg: String| SweepRow {
        gamma,
        n_noise,
        log10_rld_value: f64::NAN,
        log10_sld_value: f64::NAN,
        p_star: f64::NAN,
        rld_value: f64::NAN,
        sld_value: f64::NAN,
        status: SweepStatus::Failed(msg),
    };
    let params = match GadcParams::new(gamma, n_noise) {
        Ok(p) => p,
        Err(e) => return failed(e.to_string()),
    };
    let rld_value = gadc_rld_value(params, w);
    let channel = gadc_channel_point(params);
    let (p_star, helstrom_min) = match optimize_probe(&channel, probe_state, w, probe_grid) {
        Ok(r) => r,
        Err(e) => return failed(e.to_string()),
    };
    if helstrom_min <= 0.0 {
        return failed(format!("probe optimization returned bound {helstrom_min}"));
    }
    let sld_value = 1.0 / helstrom_min;
    SweepRow {
        gamma,
        n_noise,
        log10_rld_value: rld_value.log10(),
        log10_sld_value: sld_value.log10(),
        p_star,
        rld_value,
        sld_value,
        status: SweepStatus::Ok,
    }
}

/// Sweep the loss parameter at fixed noise. Rows that fail are flagged and
/// the sweep continues; output order follows the input grid.
pub fn figure2_sweep(
    n_noise: f64,
    gamma_grid: &[f64],
    w: &WeightMatrix,
    probe_grid: usize,
) -> Vec<SweepRow> {
    gamma_grid
        .iter()
        .map(|&gamma| figure2_row(gamma, n_noise, w, probe_grid))
        .collect()
}

/// Channel RLD value as an [`ExtendedReal`], mirroring the generic API.
pub fn gadc_rld_value_extended(p: GadcParams, w: &WeightMatrix) -> ExtendedReal {
    ExtendedReal::Finite(gadc_rld_value(p, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{choi_from_kraus, finite_diff_point, ParamVector};
    use crate::linalg::DEFAULT_RANK_TOL;
    use crate::rld;

    #[test]
    fn choi_at_half_fifth() {
        let m = gadc_choi(GadcParams::new(0.5, 0.2).unwrap());
        let diag = [0.9, 0.1, 0.4, 0.6];
        for i in 0..4 {
            assert!((m.at(i, i).re - diag[i]).abs() < 1e-15);
        }
        assert!((m.at(0, 3).re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn choi_limits() {
        // γ → 0: identity-channel Choi
        let id_like = gadc_choi(GadcParams::new(1e-12, 0.5).unwrap());
        assert!((id_like.at(0, 3).re - 1.0).abs() < 1e-11);
        assert!((id_like.at(0, 0).re - 1.0).abs() < 1e-11);
        assert!(id_like.at(1, 1).re.abs() < 1e-11);
        assert!(id_like.at(2, 2).re.abs() < 1e-11);
        assert!((id_like.at(3, 3).re - 1.0).abs() < 1e-11);

        // γ → 1, N → 0: full damping to |0⟩
        let damp = gadc_choi(GadcParams::new(1.0 - 1e-12, 1e-12).unwrap());
        let expect = ComplexMatrix::diag_real(&[1.0, 0.0, 1.0, 0.0]);
        assert!(damp.sub(&expect).max_abs() < 1e-5);
    }

    #[test]
    fn params_rejected_outside_open_interval() {
        assert!(GadcParams::new(0.0, 0.5).is_err());
        assert!(GadcParams::new(1.0, 0.5).is_err());
        assert!(GadcParams::new(0.5, 0.0).is_err());
        assert!(GadcParams::new(0.5, 1.0).is_err());
        assert!(GadcParams::new(1.5, 0.2).is_err());
    }

    #[test]
    fn inverse_is_exact() {
        let p = GadcParams::new(0.5, 0.2).unwrap();
        let prod = gadc_choi(p).mul(&gadc_choi_inverse(p));
        assert!(prod.sub(&ComplexMatrix::identity(4)).max_abs() < 1e-12);

        // (2,2) entry (1-indexed) is 1/(γN)
        let inv = gadc_choi_inverse(GadcParams::new(0.5, 0.1).unwrap());
        assert!((inv.at(1, 1).re - 20.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_matches_support_pinv_on_grid() {
        for gi in 1..=5 {
            for ni in 1..=5 {
                let p = GadcParams::new(0.1 + 0.18 * (gi - 1) as f64, 0.1 + 0.18 * (ni - 1) as f64)
                    .unwrap();
                let pinv = gadc_choi(p).support_pinv(DEFAULT_RANK_TOL).unwrap();
                let dev = pinv.sub(&gadc_choi_inverse(p)).max_abs();
                assert!(dev < 1e-8, "pinv deviation {dev} at {p:?}");
            }
        }
    }

    #[test]
    fn derivatives_match_paper_displays() {
        let (_, dn) = gadc_derivatives(GadcParams::new(0.5, 0.3).unwrap());
        assert!(dn.sub(&ComplexMatrix::diag_real(&[-0.5, 0.5, -0.5, 0.5])).max_abs() < 1e-15);

        let (dg, _) = gadc_derivatives(GadcParams::new(0.75, 0.3).unwrap());
        assert!((dg.at(0, 3).re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = GadcParams::new(0.5, 0.2).unwrap();
        let (dg, dn) = gadc_derivatives(p);
        let theta = ParamVector::new(vec![0.5, 0.2]).unwrap();
        let eval = |t: &[f64]| Ok(gadc_choi(GadcParams::new(t[0], t[1])?));
        let fd = finite_diff_point(eval, &theta, 1e-5).unwrap();
        assert!(fd[0].sub(&dg).max_abs() < 1e-8);
        assert!(fd[1].sub(&dn).max_abs() < 1e-8);
    }

    #[test]
    fn kraus_set_reproduces_choi() {
        let p = GadcParams::new(0.5, 0.2).unwrap();
        let choi = choi_from_kraus(&gadc_kraus(p)).unwrap();
        assert!(choi.sub(&gadc_choi(p)).max_abs() < 1e-10);
    }

    #[test]
    fn traced_blocks_values() {
        // (N,N) at N = 0.2: 1/(0.2·0.8) = 6.25
        let p = GadcParams::new(0.5, 0.2).unwrap();
        let blocks = gadc_traced_blocks(p);
        assert!(blocks[1][1]
            .sub(&ComplexMatrix::identity(2).scaled(6.25))
            .max_abs()
            .abs()
            < 1e-12);

        // cross block vanishes at N = 1/2
        let p_half = GadcParams::new(0.5, 0.5).unwrap();
        let blocks_half = gadc_traced_blocks(p_half);
        assert!(blocks_half[0][1].max_abs() < 1e-15);
    }

    #[test]
    fn traced_blocks_match_generic_pipeline() {
        let p = GadcParams::new(0.35, 0.6).unwrap();
        let channel = gadc_channel_point(p);
        let blocks = gadc_traced_blocks(p);
        for a in 0..2 {
            for b in 0..2 {
                let generic = rld::traced_block(&channel, a, b, DEFAULT_RANK_TOL).unwrap();
                let dev = generic.sub(&blocks[a][b]).max_abs();
                assert!(dev < 1e-10, "block ({a},{b}) deviation {dev}");
            }
        }
    }

    #[test]
    fn rld_value_matches_generic_and_norm_reduction() {
        let p = GadcParams::new(0.5, 0.2).unwrap();
        let w = figure2_weight();
        let closed = gadc_rld_value(p, &w);
        let generic = rld::rld_value_channel(&gadc_channel_point(p), &w, DEFAULT_RANK_TOL)
            .finite()
            .unwrap();
        assert!((closed - generic).abs() < 1e-10);

        // blocks are diagonal, so the value equals the PSD infinity norm of
        // the weighted sum
        let sum = rld::traced_block_sum(&gadc_channel_point(p), &w, DEFAULT_RANK_TOL).unwrap();
        assert!((closed - sum.inf_norm_psd().unwrap()).abs() < 1e-10);

        assert_eq!(gadc_rld_value(p, &WeightMatrix::new(2, vec![0.0; 4]).unwrap()), 0.0);
    }

    #[test]
    fn sweep_single_point_row() {
        let w = figure2_weight();
        let rows = figure2_sweep(0.2, &[0.5], &w, 51);
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.status, SweepStatus::Ok);
        assert!(row.rld_value.is_finite() && row.sld_value.is_finite());
        assert!(row.rld_value > 0.0 && row.sld_value > 0.0);
    }

    #[test]
    fn sweep_flags_pole_and_continues() {
        let w = figure2_weight();
        let rows = figure2_sweep(0.2, &[0.0, 0.5], &w, 21);
        assert_eq!(rows.len(), 2);
        assert!(matches!(rows[0].status, SweepStatus::Failed(_)));
        assert_eq!(rows[1].status, SweepStatus::Ok);
    }

    #[test]
    fn sweep_is_deterministic_and_order_preserving() {
        let w = figure2_weight();
        let grid = [0.3, 0.6];
        let fwd = figure2_sweep(0.2, &grid, &w, 21);
        let rev = figure2_sweep(0.2, &[0.6, 0.3], &w, 21);
        assert_eq!(fwd[0].rld_value.to_bits(), rev[1].rld_value.to_bits());
        assert_eq!(fwd[0].sld_value.to_bits(), rev[1].sld_value.to_bits());
        assert_eq!(fwd[1].p_star.to_bits(), rev[0].p_star.to_bits());
    }
}
