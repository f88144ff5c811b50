//! Seed-controlled generators for randomized certification suites.
//!
//! Channels are built from random Kraus sets (Ginibre operators renormalized
//! to satisfy Σ K†K = I) and then perturbed along random Hermitian
//! directions projected back onto the trace conditions, with a default
//! direction magnitude of 0.1. Everything is driven by a caller-supplied
//! RNG so suites are reproducible from a root seed.

use rand::Rng;

use crate::families::{choi_from_kraus, ChannelFamilyPoint, StateFamilyPoint, WeightMatrix};
use crate::linalg::{ComplexMatrix, TraceSide, C64};

/// Default perturbation magnitude for random family derivatives.
pub const DEFAULT_DERIV_MAGNITUDE: f64 = 0.1;

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box–Muller; two uniform draws per call keeps the stream deterministic
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Ginibre matrix: i.i.d. complex Gaussian entries.
pub fn random_complex_matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m.set(i, j, C64::new(gaussian(rng), gaussian(rng)));
        }
    }
    m
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    random_complex_matrix(rng, dim).hermitized()
}

/// Haar-ish unitary from modified Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, dim);
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|j| (0..dim).map(|i| g.at(i, j)).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: C64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..dim {
                let correction = proj * cols[k][i];
                cols[j][i] -= correction;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Full-rank random density operator, mixed with the maximally mixed state
/// to keep it well conditioned.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, dim);
    let h = g.mul(&g.dagger());
    let t = h.trace().re;
    let pure_part = h.scaled(0.85 / t);
    let mixed_part = ComplexMatrix::identity(dim).scaled(0.15 / dim as f64);
    pure_part.add(&mixed_part)
}

/// Traceless Hermitian direction with the given spectral norm.
pub fn random_traceless_hermitian(rng: &mut impl Rng, dim: usize, magnitude: f64) -> ComplexMatrix {
    let mut h = random_hermitian(rng, dim);
    h = h.sub(&ComplexMatrix::identity(dim).scaled(h.trace().re / dim as f64));
    let norm = h.spectral_norm();
    if norm == 0.0 {
        return h;
    }
    h.scaled(magnitude / norm)
}

/// Random full-rank state family: well-conditioned ρ and `d_params`
/// traceless Hermitian derivatives of the given magnitude.
pub fn random_state_family(
    rng: &mut impl Rng,
    dim: usize,
    d_params: usize,
    magnitude: f64,
) -> StateFamilyPoint {
    let rho = random_density(rng, dim);
    let derivs = (0..d_params)
        .map(|_| random_traceless_hermitian(rng, dim, magnitude))
        .collect();
    StateFamilyPoint::new(rho, derivs).expect("generated family satisfies the invariants")
}

/// Random trace-preserving Kraus set (enough operators for a full-rank
/// Choi operator).
pub fn random_kraus_set(rng: &mut impl Rng, dim: usize) -> Vec<ComplexMatrix> {
    let count = dim * dim;
    let raw: Vec<ComplexMatrix> = (0..count).map(|_| random_complex_matrix(rng, dim)).collect();
    let mut s = ComplexMatrix::zeros(dim);
    for k in &raw {
        s = s.add(&k.dagger().mul(k));
    }
    let s_inv_sqrt = {
        let spec = s.hermitized().eig_hermitian().expect("Gram matrix Hermitian");
        let vals: Vec<f64> = spec.eigenvalues.iter().map(|&l| 1.0 / l.max(1e-300).sqrt()).collect();
        spec.recompose(&vals)
    };
    raw.into_iter().map(|k| k.mul(&s_inv_sqrt)).collect()
}

/// Hermitian direction with Tr_B H = 0, suitable as a Choi derivative.
pub fn random_choi_direction(
    rng: &mut impl Rng,
    dim_in: usize,
    dim_out: usize,
    magnitude: f64,
) -> ComplexMatrix {
    let mut h = random_hermitian(rng, dim_in * dim_out);
    let marginal = h
        .partial_trace(dim_in, dim_out, TraceSide::Right)
        .expect("dims divide");
    h = h.sub(&marginal.kron(&ComplexMatrix::identity(dim_out)).scaled(1.0 / dim_out as f64));
    let norm = h.spectral_norm();
    if norm == 0.0 {
        return h;
    }
    h.scaled(magnitude / norm)
}

/// Random qubit-scale channel family: full-rank Choi from a random Kraus
/// set, perturbed along `d_params` admissible Hermitian directions.
pub fn random_channel_family(
    rng: &mut impl Rng,
    dim: usize,
    d_params: usize,
    magnitude: f64,
) -> ChannelFamilyPoint {
    let choi = choi_from_kraus(&random_kraus_set(rng, dim)).expect("renormalized Kraus set");
    let derivs = (0..d_params)
        .map(|_| random_choi_direction(rng, dim, dim, magnitude))
        .collect();
    ChannelFamilyPoint::new(choi, dim, dim, derivs)
        .expect("generated channel satisfies the invariants")
}

/// Parameter-free channel (zero derivatives) from a random Kraus set.
pub fn random_parameter_free_channel(
    rng: &mut impl Rng,
    dim_in: usize,
    dim_out: usize,
    d_params: usize,
) -> ChannelFamilyPoint {
    assert_eq!(dim_in, dim_out, "square Kraus generation");
    let choi = choi_from_kraus(&random_kraus_set(rng, dim_in)).expect("renormalized Kraus set");
    ChannelFamilyPoint::parameter_free(choi, dim_in, dim_out, d_params)
        .expect("generated channel satisfies the invariants")
}

/// Random pure probe |ψ⟩⟨ψ| on R⊗A as a parameter-free family.
pub fn random_pure_probe(
    rng: &mut impl Rng,
    dim: usize,
    d_params: usize,
) -> StateFamilyPoint {
    let mut v: Vec<C64> = (0..dim).map(|_| C64::new(gaussian(rng), gaussian(rng))).collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    StateFamilyPoint::parameter_free(ComplexMatrix::outer(&v), d_params)
        .expect("pure state is a valid density operator")
}

/// Random strictly positive unit-trace weight matrix.
pub fn random_weight(rng: &mut impl Rng, d_params: usize) -> WeightMatrix {
    let mut g = vec![0.0f64; d_params * d_params];
    for e in g.iter_mut() {
        *e = gaussian(rng);
    }
    let mut w = vec![0.0f64; d_params * d_params];
    for i in 0..d_params {
        for j in 0..d_params {
            let mut acc = 0.0;
            for k in 0..d_params {
                acc += g[i * d_params + k] * g[j * d_params + k];
            }
            w[i * d_params + j] = acc;
            if i == j {
                w[i * d_params + j] += 0.05;
            }
        }
    }
    let trace: f64 = (0..d_params).map(|i| w[i * d_params + i]).sum();
    for e in w.iter_mut() {
        *e /= trace;
    }
    WeightMatrix::new(d_params, w).expect("Gram construction is PSD")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_unitary(&mut rng, 5);
        let dev = u.dagger().mul(&u).sub(&ComplexMatrix::identity(5)).max_abs();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn kraus_set_is_trace_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ks = random_kraus_set(&mut rng, 2);
        let mut s = ComplexMatrix::zeros(2);
        for k in &ks {
            s = s.add(&k.dagger().mul(k));
        }
        assert!(s.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn channel_family_is_valid_and_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ch = random_channel_family(&mut rng, 2, 2, DEFAULT_DERIV_MAGNITUDE);
        let min_eig = ch.choi().min_eig_hermitian().unwrap();
        assert!(min_eig > 1e-6, "Choi nearly singular: {min_eig}");
    }

    #[test]
    fn generation_is_reproducible() {
        let a = random_state_family(&mut ChaCha8Rng::seed_from_u64(3), 2, 2, 0.1);
        let b = random_state_family(&mut ChaCha8Rng::seed_from_u64(3), 2, 2, 0.1);
        assert_eq!(a.rho(), b.rho());
        assert_eq!(a.derivs()[1], b.derivs()[1]);
    }
}
