//! Matrix and family-point file formats (JSON documents), shared with the
//! CLI.
//!
//! A matrix document has fields `dim` and `rows`, where `rows` is an array
//! of rows of `[re, im]` pairs. A family document bundles a parameter
//! point with its operator data and derivatives:
//!
//! ```json
//! {"kind": "state", "theta": [0.3], "matrix": {...}, "derivs": [{...}]}
//! {"kind": "choi",  "theta": [0.5, 0.2], "dim_in": 2, "dim_out": 2,
//!  "matrix": {...}, "derivs": [{...}, {...}]}
//! {"kind": "kraus", "theta": [0.1], "kraus": [{...}],
//!  "kraus_derivs": [[{...}]]}
//! ```
//!
//! Kraus families are converted to Choi data on load; when `kraus_derivs`
//! is omitted the family is parameter-free (zero derivatives, one per θ
//! entry).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{choi_from_kraus, ChannelFamilyPoint, StateFamilyPoint, WeightMatrix};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilyFile {
    State {
        theta: Vec<f64>,
        matrix: ComplexMatrix,
        derivs: Vec<ComplexMatrix>,
    },
    Choi {
        theta: Vec<f64>,
        dim_in: usize,
        dim_out: usize,
        matrix: ComplexMatrix,
        derivs: Vec<ComplexMatrix>,
    },
    Kraus {
        theta: Vec<f64>,
        kraus: Vec<ComplexMatrix>,
        #[serde(default)]
        kraus_derivs: Vec<Vec<ComplexMatrix>>,
    },
}

impl FamilyFile {
    pub fn theta(&self) -> &[f64] {
        match self {
            FamilyFile::State { theta, .. }
            | FamilyFile::Choi { theta, .. }
            | FamilyFile::Kraus { theta, .. } => theta,
        }
    }

    pub fn is_state(&self) -> bool {
        matches!(self, FamilyFile::State { .. })
    }

    pub fn into_state(self) -> Result<StateFamilyPoint> {
        match self {
            FamilyFile::State { matrix, derivs, .. } => StateFamilyPoint::new(matrix, derivs),
            _ => Err(Error::Invalid(
                "family file holds a channel, not a state".into(),
            )),
        }
    }

    pub fn into_channel(self) -> Result<ChannelFamilyPoint> {
        match self {
            FamilyFile::State { .. } => Err(Error::Invalid(
                "family file holds a state, not a channel".into(),
            )),
            FamilyFile::Choi {
                dim_in,
                dim_out,
                matrix,
                derivs,
                ..
            } => ChannelFamilyPoint::new(matrix, dim_in, dim_out, derivs),
            FamilyFile::Kraus {
                theta,
                kraus,
                kraus_derivs,
            } => {
                let d = kraus
                    .first()
                    .map(|k| k.dim())
                    .ok_or_else(|| Error::Invalid("empty Kraus set".into()))?;
                let choi = choi_from_kraus(&kraus)?;
                let derivs = if kraus_derivs.is_empty() {
                    vec![ComplexMatrix::zeros(d * d); theta.len()]
                } else {
                    if kraus_derivs.len() != theta.len() {
                        return Err(Error::DimensionMismatch(format!(
                            "{} Kraus derivative sets for {} parameters",
                            kraus_derivs.len(),
                            theta.len()
                        )));
                    }
                    kraus_derivs
                        .iter()
                        .map(|dk| choi_derivative_from_kraus(&kraus, dk))
                        .collect::<Result<Vec<_>>>()?
                };
                ChannelFamilyPoint::new(choi, d, d, derivs)
            }
        }
    }
}

/// ∂Γ from a Kraus set and its elementwise derivative:
/// Σ_k Σ_{ij} |i⟩⟨j| ⊗ (K̇_k|i⟩⟨j|K_k† + K_k|i⟩⟨j|K̇_k†).
fn choi_derivative_from_kraus(
    kraus: &[ComplexMatrix],
    kraus_dot: &[ComplexMatrix],
) -> Result<ComplexMatrix> {
    if kraus.len() != kraus_dot.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} Kraus operators but {} derivatives",
            kraus.len(),
            kraus_dot.len()
        )));
    }
    let d = kraus[0].dim();
    let mut out = ComplexMatrix::zeros(d * d);
    for (k, kd) in kraus.iter().zip(kraus_dot) {
        for i in 0..d {
            for j in 0..d {
                for b in 0..d {
                    for bp in 0..d {
                        let v = kd.at(b, i) * k.at(bp, j).conj() + k.at(b, i) * kd.at(bp, j).conj();
                        out.add_at(i * d + b, j * d + bp, v);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("matrix file: {e}")))
}

pub fn render_matrix(m: &ComplexMatrix) -> String {
    serde_json::to_string_pretty(m).expect("matrix serializes")
}

pub fn parse_family(text: &str) -> Result<FamilyFile> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("family file: {e}")))
}

pub fn render_family(f: &FamilyFile) -> String {
    serde_json::to_string_pretty(f).expect("family serializes")
}

/// A weight matrix from a matrix document; imaginary parts must vanish.
pub fn weight_from_matrix(m: &ComplexMatrix) -> Result<WeightMatrix> {
    let d = m.dim();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let z: C64 = m.at(i, j);
            if z.im.abs() > 1e-12 {
                return Err(Error::Invalid(
                    "weight matrix must be real; found a nonzero imaginary part".into(),
                ));
            }
            entries.push(z.re);
        }
    }
    WeightMatrix::new(d, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_round_trip_state() {
        let f = FamilyFile::State {
            theta: vec![0.3],
            matrix: ComplexMatrix::diag_real(&[0.3, 0.7]),
            derivs: vec![ComplexMatrix::diag_real(&[1.0, -1.0])],
        };
        let text = render_family(&f);
        let back = parse_family(&text).unwrap();
        assert!(back.is_state());
        let state = back.into_state().unwrap();
        assert_eq!(state.num_params(), 1);
    }

    #[test]
    fn kraus_family_without_derivs_is_parameter_free() {
        let f = FamilyFile::Kraus {
            theta: vec![0.1, 0.2],
            kraus: vec![ComplexMatrix::identity(2)],
            kraus_derivs: vec![],
        };
        let ch = f.into_channel().unwrap();
        assert_eq!(ch.num_params(), 2);
        assert!(ch.derivs().iter().all(|d| d.max_abs() == 0.0));
    }

    #[test]
    fn kraus_derivative_matches_finite_difference() {
        // amplitude damping in γ at γ = 0.36 via Kraus derivatives
        let gamma: f64 = 0.36;
        let kraus_at = |g: f64| {
            vec![
                ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, (1.0f64 - g).sqrt()]).unwrap(),
                ComplexMatrix::from_real(2, &[0.0, g.sqrt(), 0.0, 0.0]).unwrap(),
            ]
        };
        let kraus_dot = vec![
            ComplexMatrix::from_real(2, &[0.0, 0.0, 0.0, -0.5 / (1.0 - gamma).sqrt()]).unwrap(),
            ComplexMatrix::from_real(2, &[0.0, 0.5 / gamma.sqrt(), 0.0, 0.0]).unwrap(),
        ];
        let f = FamilyFile::Kraus {
            theta: vec![gamma],
            kraus: kraus_at(gamma),
            kraus_derivs: vec![kraus_dot],
        };
        let ch = f.into_channel().unwrap();

        let h = 1e-6;
        let plus = choi_from_kraus(&kraus_at(gamma + h)).unwrap();
        let minus = choi_from_kraus(&kraus_at(gamma - h)).unwrap();
        let fd = plus.sub(&minus).scaled(1.0 / (2.0 * h));
        assert!(ch.derivs()[0].sub(&fd).max_abs() < 1e-7);
    }

    #[test]
    fn weight_from_matrix_rejects_complex() {
        let mut m = ComplexMatrix::identity(2);
        m.set(0, 1, C64::new(0.0, 0.3));
        m.set(1, 0, C64::new(0.0, -0.3));
        assert!(weight_from_matrix(&m).is_err());
    }
}
