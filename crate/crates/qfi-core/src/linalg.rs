//! Dense complex Hermitian linear algebra primitives.
//!
//! Everything downstream — Choi operators, logarithmic derivatives, the
//! interior-point solver — is built on the square [`ComplexMatrix`] type and
//! the spectral routines here. Matrices are immutable values in the public
//! API; all operations return fresh matrices and are safe to call
//! concurrently.
//!
//! Index convention: tensor-product indices are row-major,
//! `(i_left · dim_right + i_right)`, so a two-qubit basis is ordered
//! |00⟩, |01⟩, |10⟩, |11⟩.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Relative eigenvalue cutoff used by support/kernel decisions when the
/// caller does not supply one.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Which tensor factor `partial_trace` sums out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSide {
    /// Trace out the left factor, keeping the right one.
    Left,
    /// Trace out the right factor, keeping the left one.
    Right,
}

/// Dense square complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from an entry function.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from row-major complex entries; `data.len()` must be `dim²`.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}×{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    /// Build from real row-major entries.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        Self::diag(&entries.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Rank-one projector |v⟩⟨v| (v need not be normalized).
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        Self::from_fn(dim, |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] += v;
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.at(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.at(j, i))
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.at(i, j).conj())
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.scaled_c(C64::new(s, 0.0))
    }

    pub fn scaled_c(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Largest entry magnitude max_{ij} |m_ij|.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max_{ij} |m_ij − conj(m_ji)|.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                err = err.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Errors unless the matrix is Hermitian to `1e−12 · (1 + max|m_ij|)`.
    pub fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_error();
        let tolerance = 1e-12 * (1.0 + self.max_abs());
        if deviation <= tolerance {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                deviation,
                tolerance,
            })
        }
    }

    /// ½(M + M†), the Hermitian part.
    pub fn hermitized(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            (self.at(i, j) + self.at(j, i).conj()) * 0.5
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.at(i, k);
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// Hilbert–Schmidt pairing Re Tr[A† B]; for Hermitian inputs this is
    /// Tr[A B], which is real.
    pub fn hs_inner(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    /// Kronecker product; `(a⊗b)[(i·db+p),(j·db+q)] = a[i,j]·b[p,q]`.
    pub fn kron(&self, other: &Self) -> Self {
        let da = self.dim;
        let db = other.dim;
        let mut out = Self::zeros(da * db);
        for i in 0..da {
            for j in 0..da {
                let aij = self.at(i, j);
                if aij == C64::new(0.0, 0.0) {
                    continue;
                }
                for p in 0..db {
                    for q in 0..db {
                        out.set(i * db + p, j * db + q, aij * other.at(p, q));
                    }
                }
            }
        }
        out
    }

    /// Partial trace of a `dim_left · dim_right` square matrix over one
    /// tensor factor. Preserves the total trace.
    pub fn partial_trace(
        &self,
        dim_left: usize,
        dim_right: usize,
        side: TraceSide,
    ) -> Result<Self> {
        if dim_left * dim_right != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "partial trace of a {}×{} matrix with factors {}·{}",
                self.dim, self.dim, dim_left, dim_right
            )));
        }
        match side {
            TraceSide::Right => {
                let mut out = Self::zeros(dim_left);
                for i in 0..dim_left {
                    for j in 0..dim_left {
                        let mut acc = C64::new(0.0, 0.0);
                        for b in 0..dim_right {
                            acc += self.at(i * dim_right + b, j * dim_right + b);
                        }
                        out.set(i, j, acc);
                    }
                }
                Ok(out)
            }
            TraceSide::Left => {
                let mut out = Self::zeros(dim_right);
                for p in 0..dim_right {
                    for q in 0..dim_right {
                        let mut acc = C64::new(0.0, 0.0);
                        for a in 0..dim_left {
                            acc += self.at(a * dim_right + p, a * dim_right + q);
                        }
                        out.set(p, q, acc);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Copy of the square sub-block starting at `(offset, offset)`.
    pub fn sub_square(&self, offset: usize, size: usize) -> Self {
        assert!(offset + size <= self.dim, "sub-block out of range");
        Self::from_fn(size, |i, j| self.at(offset + i, offset + j))
    }

    /// Embed this matrix as a block of a larger zero matrix at
    /// `(row0, col0)`.
    pub fn embed(&self, dim: usize, row0: usize, col0: usize) -> Self {
        assert!(row0 + self.dim <= dim && col0 + self.dim <= dim);
        let mut out = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(row0 + i, col0 + j, self.at(i, j));
            }
        }
        out
    }

    /// Spectral decomposition of a Hermitian matrix by cyclic Jacobi
    /// rotations. Eigenvalues are returned in descending order.
    pub fn eig_hermitian(&self) -> Result<Spectrum> {
        self.require_hermitian()?;
        let n = self.dim;
        if n == 0 {
            return Ok(Spectrum {
                eigenvalues: vec![],
                eigenvectors: ComplexMatrix::zeros(0),
            });
        }
        let mut a = self.hermitized();
        let mut v = ComplexMatrix::identity(n);
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        let skip = scale * 1e-18;

        for _sweep in 0..64 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.at(p, q).norm_sqr();
                }
            }
            if off.sqrt() <= f64::EPSILON * scale * n as f64 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let b = a.at(p, q);
                    let babs = b.norm();
                    if babs <= skip {
                        continue;
                    }
                    let phase = b / babs;
                    let alpha = a.at(p, p).re;
                    let delta = a.at(q, q).re;
                    let tau = (delta - alpha) / (2.0 * babs);
                    let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                    let t = sgn / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // u = diag(1, conj(phase)) · [[c, s], [−s, c]]
                    let u00 = C64::new(c, 0.0);
                    let u01 = C64::new(s, 0.0);
                    let u10 = -s * phase.conj();
                    let u11 = c * phase.conj();
                    // columns: A ← A·u, V ← V·u
                    for k in 0..n {
                        let akp = a.at(k, p);
                        let akq = a.at(k, q);
                        a.set(k, p, akp * u00 + akq * u10);
                        a.set(k, q, akp * u01 + akq * u11);
                        let vkp = v.at(k, p);
                        let vkq = v.at(k, q);
                        v.set(k, p, vkp * u00 + vkq * u10);
                        v.set(k, q, vkp * u01 + vkq * u11);
                    }
                    // rows: A ← u†·A
                    for k in 0..n {
                        let apk = a.at(p, k);
                        let aqk = a.at(q, k);
                        a.set(p, k, u00.conj() * apk + u10.conj() * aqk);
                        a.set(q, k, u01.conj() * apk + u11.conj() * aqk);
                    }
                    let app = a.at(p, p);
                    let aqq = a.at(q, q);
                    a.set(p, p, C64::new(app.re, 0.0));
                    a.set(q, q, C64::new(aqq.re, 0.0));
                    a.set(p, q, C64::new(0.0, 0.0));
                    a.set(q, p, C64::new(0.0, 0.0));
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a.at(j, j)
                .re
                .partial_cmp(&a.at(i, i).re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(i.cmp(&j))
        });
        let eigenvalues: Vec<f64> = order.iter().map(|&i| a.at(i, i).re).collect();
        let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v.at(i, order[j]));
        Ok(Spectrum {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Moore–Penrose inverse restricted to the support: eigenvalues with
    /// `λ ≤ rank_tol · λ_max` are treated as zero.
    pub fn support_pinv(&self, rank_tol: f64) -> Result<Self> {
        let spec = self.eig_hermitian()?;
        let lmax = spec.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        let cutoff = rank_tol * lmax;
        let inv: Vec<f64> = spec
            .eigenvalues
            .iter()
            .map(|&l| if l > cutoff { 1.0 / l } else { 0.0 })
            .collect();
        Ok(spec.recompose(&inv))
    }

    /// Projector onto the numerical kernel: eigenvectors with
    /// `λ ≤ rank_tol · λ_max`.
    pub fn kernel_projector(&self, rank_tol: f64) -> Result<Self> {
        let spec = self.eig_hermitian()?;
        let lmax = spec.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        let cutoff = rank_tol * lmax;
        let flags: Vec<f64> = spec
            .eigenvalues
            .iter()
            .map(|&l| if l > cutoff { 0.0 } else { 1.0 })
            .collect();
        Ok(spec.recompose(&flags))
    }

    /// Largest eigenvalue of a Hermitian PSD matrix; equals the operator
    /// norm, and also sup over unit-trace PSD ρ of Tr[hρ].
    pub fn inf_norm_psd(&self) -> Result<f64> {
        let spec = self.eig_hermitian()?;
        Ok(spec.eigenvalues.first().copied().unwrap_or(0.0))
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eig_hermitian(&self) -> Result<f64> {
        let spec = self.eig_hermitian()?;
        Ok(spec.eigenvalues.last().copied().unwrap_or(0.0))
    }

    /// Operator (largest-singular-value) norm of an arbitrary square
    /// matrix, via the Gram matrix M†M.
    pub fn spectral_norm(&self) -> f64 {
        let gram = self.dagger().mul(self).hermitized();
        let lmax = gram
            .eig_hermitian()
            .map(|s| s.eigenvalues.first().copied().unwrap_or(0.0))
            .unwrap_or(0.0);
        lmax.max(0.0).sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix({}×{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self.at(i, j);
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let z = self.at(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        MatrixRepr {
            dim: self.dim,
            rows,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.rows.len() != repr.dim || repr.rows.iter().any(|r| r.len() != repr.dim) {
            return Err(serde::de::Error::custom(format!(
                "matrix rows do not match dim = {}",
                repr.dim
            )));
        }
        let mut m = ComplexMatrix::zeros(repr.dim);
        for (i, row) in repr.rows.iter().enumerate() {
            for (j, &[re, im]) in row.iter().enumerate() {
                m.set(i, j, C64::new(re, im));
            }
        }
        Ok(m)
    }
}

/// Spectral decomposition of a Hermitian matrix: `V diag(λ) V†` with the
/// eigenvalues sorted in descending order and eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// Rebuild `V diag(values) V†` with substituted spectrum values.
    pub fn recompose(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        assert_eq!(values.len(), n);
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += v.at(i, k) * values[k] * v.at(j, k).conj();
            }
            acc
        })
    }

    /// Reconstruction of the original matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.recompose(&self.eigenvalues)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));

        let zi = sigma_z().kron(&i2);
        assert_eq!(zi, ComplexMatrix::diag_real(&[1.0, 1.0, -1.0, -1.0]));

        let a = ComplexMatrix::diag_real(&[2.0, 3.0]);
        let b = ComplexMatrix::diag_real(&[5.0, 7.0]);
        assert_eq!(a.kron(&b), ComplexMatrix::diag_real(&[10.0, 14.0, 15.0, 21.0]));
    }

    #[test]
    fn partial_trace_identities() {
        let i4 = ComplexMatrix::identity(4);
        let right = i4.partial_trace(2, 2, TraceSide::Right).unwrap();
        assert_eq!(right, ComplexMatrix::identity(2).scaled(2.0));

        let d = ComplexMatrix::diag_real(&[1.0, 2.0, 3.0, 4.0]);
        let left = d.partial_trace(2, 2, TraceSide::Left).unwrap();
        assert_eq!(left, ComplexMatrix::diag_real(&[4.0, 6.0]));

        assert!(d.partial_trace(3, 2, TraceSide::Left).is_err());
    }

    #[test]
    fn partial_trace_of_kron_is_scaled_factor() {
        let a = ComplexMatrix::from_fn(3, |i, j| c((i + 2 * j) as f64, (i as f64) - 1.0));
        let b = ComplexMatrix::from_fn(2, |i, j| c(0.5 * (i + j) as f64, 0.25 * i as f64));
        let tb = b.trace();
        let pt = a.kron(&b).partial_trace(3, 2, TraceSide::Right).unwrap();
        let expect = a.scaled_c(tb);
        assert!(pt.sub(&expect).max_abs() <= 1e-12);
    }

    #[test]
    fn eig_sigma_x() {
        let spec = sigma_x().eig_hermitian().unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] + 1.0).abs() < 1e-14);
        // columns are |±⟩ up to phase
        let v0 = (spec.eigenvectors.at(0, 0).norm() - 1.0 / 2f64.sqrt()).abs();
        assert!(v0 < 1e-12);
        let residual = spec.reconstruct().sub(&sigma_x()).max_abs();
        assert!(residual < 1e-13);
    }

    #[test]
    fn eig_sorted_diagonal() {
        let d = ComplexMatrix::diag_real(&[0.3, 2.0, -1.0, 0.7]);
        let spec = d.eig_hermitian().unwrap();
        assert_eq!(spec.eigenvalues, vec![2.0, 0.7, 0.3, -1.0]);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 1, c(1.0, 0.0));
        assert!(matches!(
            m.eig_hermitian(),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eig_reconstruction_random() {
        // fixed-seed random Hermitian, moderately large
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = 12;
        let g = ComplexMatrix::from_fn(n, |_, _| c(next(), next()));
        let h = g.add(&g.dagger()).scaled(0.5);
        let spec = h.eig_hermitian().unwrap();
        let resid = spec.reconstruct().sub(&h).max_abs();
        assert!(resid <= 1e-10 * (1.0 + h.max_abs()), "residual {resid}");
        // V†V = I
        let vtv = spec.eigenvectors.dagger().mul(&spec.eigenvectors);
        let dev = vtv.sub(&ComplexMatrix::identity(n)).max_abs();
        assert!(dev <= 1e-10, "unitarity deviation {dev}");
    }

    #[test]
    fn support_pinv_examples() {
        let p = ComplexMatrix::diag_real(&[2.0, 0.0])
            .support_pinv(DEFAULT_RANK_TOL)
            .unwrap();
        assert!(p.sub(&ComplexMatrix::diag_real(&[0.5, 0.0])).max_abs() < 1e-14);

        let i4 = ComplexMatrix::identity(4);
        let pi = i4.support_pinv(DEFAULT_RANK_TOL).unwrap();
        assert!(pi.sub(&i4).max_abs() < 1e-13);
    }

    #[test]
    fn kernel_projector_examples() {
        let p = ComplexMatrix::diag_real(&[1.0, 0.0])
            .kernel_projector(DEFAULT_RANK_TOL)
            .unwrap();
        assert!(p.sub(&ComplexMatrix::diag_real(&[0.0, 1.0])).max_abs() < 1e-13);

        let z = ComplexMatrix::identity(3)
            .kernel_projector(DEFAULT_RANK_TOL)
            .unwrap();
        assert!(z.max_abs() < 1e-13);

        // rank-1 |+⟩⟨+| → |−⟩⟨−|
        let s = 1.0 / 2f64.sqrt();
        let plus = ComplexMatrix::outer(&[c(s, 0.0), c(s, 0.0)]);
        let minus = ComplexMatrix::outer(&[c(s, 0.0), c(-s, 0.0)]);
        let proj = plus.kernel_projector(DEFAULT_RANK_TOL).unwrap();
        assert!(proj.sub(&minus).max_abs() < 1e-12);
    }

    #[test]
    fn inf_norm_psd_examples() {
        assert!((ComplexMatrix::diag_real(&[3.0, 1.0]).inf_norm_psd().unwrap() - 3.0).abs() < 1e-14);
        let s = 1.0 / 2f64.sqrt();
        let plus5 = ComplexMatrix::outer(&[c(s, 0.0), c(s, 0.0)]).scaled(5.0);
        assert!((plus5.inf_norm_psd().unwrap() - 5.0).abs() < 1e-13);
    }

    #[test]
    fn spectral_norm_matches_psd_norm_on_hermitian_psd() {
        let h = ComplexMatrix::diag_real(&[4.0, 0.25, 1.0]);
        assert!((h.spectral_norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let m = ComplexMatrix::from_fn(3, |i, j| c(i as f64, j as f64 - 1.0));
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
        assert!(text.contains("\"dim\":3"));
    }
}
