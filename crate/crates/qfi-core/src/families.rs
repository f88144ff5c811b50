//! Differentiable families of states and channels at a parameter point.
//!
//! Families are carried pointwise: a density (or Choi) operator together
//! with its D parameter-derivatives at one θ. Channel families are stored
//! Choi-native; Kraus input is converted on construction. The reference
//! system used in input-state optimizations is isomorphic to the channel
//! input system.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TraceSide, C64};

/// Parameter vector θ = [θ₁ … θ_D]ᵀ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub values: Vec<f64>,
}

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParam("parameter vector must have D ≥ 1".into()));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A density operator ρ_θ together with its derivatives ∂_{θj}ρ_θ.
#[derive(Debug, Clone)]
pub struct StateFamilyPoint {
    rho: ComplexMatrix,
    derivs: Vec<ComplexMatrix>,
}

impl StateFamilyPoint {
    /// Validates: ρ Hermitian, unit trace to 1e−10, PSD to 1e−10; each
    /// derivative Hermitian and traceless to 1e−8.
    pub fn new(rho: ComplexMatrix, derivs: Vec<ComplexMatrix>) -> Result<Self> {
        rho.require_hermitian()?;
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidTrace { trace: trace.re });
        }
        let min_eig = rho.min_eig_hermitian()?;
        if min_eig < -1e-10 * (1.0 + rho.max_abs()) {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        for (index, d) in derivs.iter().enumerate() {
            if d.dim() != rho.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "derivative {index} is {}×{} but ρ is {}×{}",
                    d.dim(),
                    d.dim(),
                    rho.dim(),
                    rho.dim()
                )));
            }
            d.require_hermitian()?;
            let t = d.trace().norm();
            if t > 1e-8 * (1.0 + d.max_abs()) {
                return Err(Error::InvalidDerivative {
                    index,
                    what: "tracelessness",
                    residual: t,
                });
            }
        }
        Ok(Self { rho, derivs })
    }

    /// A state with no parameter dependence: D zero derivatives.
    pub fn parameter_free(rho: ComplexMatrix, num_params: usize) -> Result<Self> {
        let dim = rho.dim();
        Self::new(rho, vec![ComplexMatrix::zeros(dim); num_params])
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn derivs(&self) -> &[ComplexMatrix] {
        &self.derivs
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn num_params(&self) -> usize {
        self.derivs.len()
    }
}

/// A Choi operator Γ (input dimension d_A, output d_B) with derivatives
/// ∂_{θj}Γ. Index convention: row `a·d_B + b` pairs input copy `a` with
/// output `b`.
#[derive(Debug, Clone)]
pub struct ChannelFamilyPoint {
    choi: ComplexMatrix,
    derivs: Vec<ComplexMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl ChannelFamilyPoint {
    /// Validates: Γ PSD to 1e−10 with Tr_B Γ = I to 1e−9 (trace
    /// preservation), and Tr_B ∂_jΓ = 0 to 1e−8 for each derivative.
    pub fn new(
        choi: ComplexMatrix,
        dim_in: usize,
        dim_out: usize,
        derivs: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if choi.dim() != dim_in * dim_out {
            return Err(Error::DimensionMismatch(format!(
                "Choi operator is {}×{} but dims give {}·{}",
                choi.dim(),
                choi.dim(),
                dim_in,
                dim_out
            )));
        }
        choi.require_hermitian()?;
        let min_eig = choi.min_eig_hermitian()?;
        if min_eig < -1e-10 * (1.0 + choi.max_abs()) {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        let marginal = choi.partial_trace(dim_in, dim_out, TraceSide::Right)?;
        let residual = marginal.sub(&ComplexMatrix::identity(dim_in)).max_abs();
        if residual > 1e-9 {
            return Err(Error::ChoiNotTracePreserving { residual });
        }
        for (index, d) in derivs.iter().enumerate() {
            if d.dim() != choi.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "Choi derivative {index} has dimension {}",
                    d.dim()
                )));
            }
            d.require_hermitian()?;
            let block = d.partial_trace(dim_in, dim_out, TraceSide::Right)?;
            let r = block.max_abs();
            if r > 1e-8 * (1.0 + d.max_abs()) {
                return Err(Error::InvalidDerivative {
                    index,
                    what: "Tr_B ∂Γ = 0",
                    residual: r,
                });
            }
        }
        Ok(Self {
            choi,
            derivs,
            dim_in,
            dim_out,
        })
    }

    /// A channel with no parameter dependence: D zero derivatives.
    pub fn parameter_free(
        choi: ComplexMatrix,
        dim_in: usize,
        dim_out: usize,
        num_params: usize,
    ) -> Result<Self> {
        let dim = choi.dim();
        Self::new(choi, dim_in, dim_out, vec![ComplexMatrix::zeros(dim); num_params])
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn derivs(&self) -> &[ComplexMatrix] {
        &self.derivs
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn num_params(&self) -> usize {
        self.derivs.len()
    }
}

/// D×D real symmetric PSD weight (risk) matrix W.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl WeightMatrix {
    /// Validates symmetry and positive semidefiniteness (eigenvalues above
    /// −1e−12 relative).
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "weight matrix needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut max_abs = 0.0f64;
        for e in &entries {
            max_abs = max_abs.max(e.abs());
        }
        for j in 0..dim {
            for k in (j + 1)..dim {
                if (entries[j * dim + k] - entries[k * dim + j]).abs() > 1e-12 * (1.0 + max_abs) {
                    return Err(Error::Invalid("weight matrix is not symmetric".into()));
                }
            }
        }
        let w = Self { dim, entries };
        let min_eig = w.to_complex().min_eig_hermitian()?;
        if min_eig < -1e-12 * (1.0 + max_abs) {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        Ok(w)
    }

    pub fn scalar(value: f64) -> Result<Self> {
        Self::new(1, vec![value])
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// ⟨j|W|k⟩.
    pub fn entry(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.dim + k]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    /// Divide-by-trace helper: returns (W/Tr W, Tr W).
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let t = self.trace();
        if t <= 0.0 {
            return Err(Error::Invalid(
                "weight matrix has nonpositive trace; cannot normalize".into(),
            ));
        }
        let entries = self.entries.iter().map(|e| e / t).collect();
        Ok((
            Self {
                dim: self.dim,
                entries,
            },
            t,
        ))
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |i, j| C64::new(self.entry(i, j), 0.0))
    }
}

/// Accepts a weight matrix, optionally insisting on unit trace (to 1e−10).
pub fn validate_weight(w: WeightMatrix, require_unit_trace: bool) -> Result<WeightMatrix> {
    // PSD was checked on construction; re-check so raw deserialized values
    // also pass through this gate.
    let w = WeightMatrix::new(w.dim, w.entries)?;
    if require_unit_trace && (w.trace() - 1.0).abs() > 1e-10 {
        return Err(Error::Invalid(format!(
            "weight matrix trace is {}, expected 1",
            w.trace()
        )));
    }
    Ok(w)
}

/// Choi operator Γ = Σ_{ij} |i⟩⟨j| ⊗ Σ_k K_k|i⟩⟨j|K_k† of the channel with
/// the given Kraus operators (square, d_B = d_A).
pub fn choi_from_kraus(kraus: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let d = match kraus.first() {
        Some(k) => k.dim(),
        None => return Err(Error::Invalid("empty Kraus set".into())),
    };
    for k in kraus {
        if k.dim() != d {
            return Err(Error::DimensionMismatch(
                "Kraus operators have mixed dimensions".into(),
            ));
        }
    }
    // completeness Σ K†K = I
    let mut sum = ComplexMatrix::zeros(d);
    for k in kraus {
        sum = sum.add(&k.dagger().mul(k));
    }
    let residual = sum.sub(&ComplexMatrix::identity(d)).max_abs();
    if residual > 1e-9 {
        return Err(Error::NotTracePreserving { residual });
    }

    let mut choi = ComplexMatrix::zeros(d * d);
    for k in kraus {
        for i in 0..d {
            for j in 0..d {
                for b in 0..d {
                    for bp in 0..d {
                        choi.add_at(i * d + b, j * d + bp, k.at(b, i) * k.at(bp, j).conj());
                    }
                }
            }
        }
    }
    Ok(choi)
}

/// Central finite differences (M(θ+h e_j) − M(θ−h e_j)) / 2h, Hermitized.
pub fn finite_diff_point<F>(evaluator: F, theta: &ParamVector, h: f64) -> Result<Vec<ComplexMatrix>>
where
    F: Fn(&[f64]) -> Result<ComplexMatrix>,
{
    if h <= 0.0 {
        return Err(Error::InvalidParam(format!("step h = {h} must be positive")));
    }
    let mut out = Vec::with_capacity(theta.len());
    for j in 0..theta.len() {
        let mut plus = theta.values.clone();
        let mut minus = theta.values.clone();
        plus[j] += h;
        minus[j] -= h;
        let diff = evaluator(&plus)?.sub(&evaluator(&minus)?).scaled(1.0 / (2.0 * h));
        out.push(diff.hermitized());
    }
    Ok(out)
}

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Applies `id_R ⊗ N` to a family on R⊗A (the channel acts on the last
/// tensor factor), propagating derivatives by the product rule
/// ∂(N(ρ)) = (id⊗N)(∂ρ) + (id⊗∂N)(ρ).
pub fn push_through_channel(
    state: &StateFamilyPoint,
    channel: &ChannelFamilyPoint,
) -> Result<StateFamilyPoint> {
    let da = channel.dim_in();
    if state.dim() % da != 0 {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} is not a multiple of channel input dimension {}",
            state.dim(),
            da
        )));
    }
    if state.num_params() != channel.num_params() {
        return Err(Error::DimensionMismatch(format!(
            "state carries {} derivatives but channel carries {}",
            state.num_params(),
            channel.num_params()
        )));
    }
    let out_rho = apply_choi(state.rho(), channel.choi(), da, channel.dim_out());
    let mut out_derivs = Vec::with_capacity(state.num_params());
    for j in 0..state.num_params() {
        let term_state = apply_choi(&state.derivs()[j], channel.choi(), da, channel.dim_out());
        let term_channel = apply_choi(state.rho(), &channel.derivs()[j], da, channel.dim_out());
        out_derivs.push(term_state.add(&term_channel).hermitized());
    }
    StateFamilyPoint::new(out_rho, out_derivs)
}

/// Choi contraction: out[(r,b),(r',b')] = Σ_{a,a'} m[(r,a),(r',a')] Γ[(a,b),(a',b')].
fn apply_choi(m: &ComplexMatrix, choi: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    let dr = m.dim() / da;
    let out_dim = dr * db;
    let mut out = ComplexMatrix::zeros(out_dim);
    for r in 0..dr {
        for rp in 0..dr {
            for a in 0..da {
                for ap in 0..da {
                    let x = m.at(r * da + a, rp * da + ap);
                    if x == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for b in 0..db {
                        for bp in 0..db {
                            out.add_at(r * db + b, rp * db + bp, x * choi.at(a * db + b, ap * db + bp));
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn identity_choi() -> ComplexMatrix {
        // ones at the four corners of the |00⟩,|11⟩ block
        let mut g = ComplexMatrix::zeros(4);
        g.set(0, 0, c(1.0, 0.0));
        g.set(0, 3, c(1.0, 0.0));
        g.set(3, 0, c(1.0, 0.0));
        g.set(3, 3, c(1.0, 0.0));
        g
    }

    #[test]
    fn choi_of_identity_channel() {
        let choi = choi_from_kraus(&[ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(choi, identity_choi());
        // valid channel point
        ChannelFamilyPoint::new(choi, 2, 2, vec![]).unwrap();
    }

    #[test]
    fn choi_of_full_amplitude_damping() {
        // K1 = |0⟩⟨0|, K2 = |0⟩⟨1|
        let k1 = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let k2 = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let choi = choi_from_kraus(&[k1, k2]).unwrap();
        assert!(choi.sub(&ComplexMatrix::diag_real(&[1.0, 0.0, 1.0, 0.0])).max_abs() < 1e-14);
    }

    #[test]
    fn choi_rejects_non_trace_preserving() {
        let k = ComplexMatrix::from_real(2, &[0.5, 0.0, 0.0, 0.5]).unwrap();
        match choi_from_kraus(&[k]) {
            Err(Error::NotTracePreserving { residual }) => assert!(residual > 0.5),
            other => panic!("expected trace-preservation error, got {other:?}"),
        }
    }

    #[test]
    fn finite_diff_linear_family() {
        let eval = |t: &[f64]| {
            Ok(ComplexMatrix::diag_real(&[t[0], 1.0 - t[0]]))
        };
        let theta = ParamVector::new(vec![0.3]).unwrap();
        let d = finite_diff_point(eval, &theta, 1e-5).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d[0].sub(&ComplexMatrix::diag_real(&[1.0, -1.0])).max_abs() < 1e-9);
    }

    #[test]
    fn finite_diff_constant_family() {
        let eval = |_: &[f64]| Ok(ComplexMatrix::identity(3));
        let theta = ParamVector::new(vec![0.1, 0.9]).unwrap();
        let d = finite_diff_point(eval, &theta, 1e-4).unwrap();
        assert!(d.iter().all(|m| m.max_abs() == 0.0));
    }

    #[test]
    fn finite_diff_is_second_order() {
        // family with nonvanishing third derivative
        let eval = |t: &[f64]| {
            let x = t[0];
            Ok(ComplexMatrix::diag_real(&[x.exp(), -x.exp()]).scaled(0.5))
        };
        let theta = ParamVector::new(vec![0.2]).unwrap();
        let exact = ComplexMatrix::diag_real(&[0.2f64.exp(), -0.2f64.exp()]).scaled(0.5);
        let err = |h: f64| {
            finite_diff_point(eval, &theta, h).unwrap()[0]
                .sub(&exact)
                .max_abs()
        };
        let e1 = err(1e-3);
        let e2 = err(5e-4);
        assert!(e1 / e2 >= 3.0, "halving h only reduced error {e1} → {e2}");
    }

    #[test]
    fn push_through_identity_channel_is_identity() {
        let rho = ComplexMatrix::diag_real(&[0.25, 0.25, 0.25, 0.25]);
        let d0 = ComplexMatrix::diag_real(&[0.1, -0.1, 0.2, -0.2]);
        let state = StateFamilyPoint::new(rho.clone(), vec![d0.clone()]).unwrap();
        let channel = ChannelFamilyPoint::parameter_free(identity_choi(), 2, 2, 1).unwrap();
        let out = push_through_channel(&state, &channel).unwrap();
        assert!(out.rho().sub(&rho).max_abs() < 1e-12);
        assert!(out.derivs()[0].sub(&d0).max_abs() < 1e-12);
    }

    #[test]
    fn push_maximally_entangled_gives_choi_over_dim() {
        let s = 1.0 / 2f64.sqrt();
        let phi = ComplexMatrix::outer(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        let probe = StateFamilyPoint::parameter_free(phi, 1).unwrap();
        // any channel point with a derivative works; use a mixed one
        let half_mix = {
            let id = identity_choi();
            let dep = ComplexMatrix::diag_real(&[0.5, 0.5, 0.5, 0.5]);
            id.scaled(0.5).add(&dep.scaled(0.5))
        };
        let dgamma = identity_choi()
            .sub(&ComplexMatrix::diag_real(&[0.5, 0.5, 0.5, 0.5]))
            .scaled(0.5);
        let channel = ChannelFamilyPoint::new(half_mix.clone(), 2, 2, vec![dgamma.clone()]).unwrap();
        let out = push_through_channel(&probe, &channel).unwrap();
        assert!(out.rho().sub(&half_mix.scaled(0.5)).max_abs() < 1e-12);
        assert!(out.derivs()[0].sub(&dgamma.scaled(0.5)).max_abs() < 1e-12);
    }

    #[test]
    fn weight_validation() {
        let fig2 = WeightMatrix::new(2, vec![0.25, 0.25, 0.25, 0.75]).unwrap();
        let w = validate_weight(fig2, true).unwrap();
        assert!((w.trace() - 1.0).abs() < 1e-15);

        let half_id = WeightMatrix::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        validate_weight(half_id, true).unwrap();

        assert!(matches!(
            WeightMatrix::new(2, vec![1.0, 2.0, 2.0, 1.0]),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn state_point_rejects_bad_inputs() {
        let rho = ComplexMatrix::diag_real(&[0.7, 0.7]);
        assert!(matches!(
            StateFamilyPoint::new(rho, vec![]),
            Err(Error::InvalidTrace { .. })
        ));

        let rho = ComplexMatrix::diag_real(&[1.5, -0.5]);
        assert!(matches!(
            StateFamilyPoint::new(rho, vec![]),
            Err(Error::NotPsd { .. })
        ));

        let rho = ComplexMatrix::diag_real(&[0.5, 0.5]);
        let bad_deriv = ComplexMatrix::diag_real(&[1.0, 1.0]);
        assert!(matches!(
            StateFamilyPoint::new(rho, vec![bad_deriv]),
            Err(Error::InvalidDerivative { .. })
        ));
    }
}
