//! Truncated Fock-space operators and the row-major vectorization that turns
//! sandwich products `E X F` into Kronecker products `(E ⊗ Fᵀ) vec X`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseComplexMatrix;

pub const DEFAULT_MARGIN: usize = 2;

/// Fock cutoff `dim` (levels `|0⟩ … |dim−1⟩`) plus the number of top levels
/// excluded when asserting identities that break at the cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationConfig {
    dim: usize,
    margin: usize,
}

impl TruncationConfig {
    pub fn new(dim: usize, margin: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidTruncation(format!(
                "dim must be at least 2, got {dim}"
            )));
        }
        if margin > dim - 2 {
            return Err(Error::InvalidTruncation(format!(
                "margin {margin} exceeds dim - 2 = {}",
                dim - 2
            )));
        }
        Ok(Self { dim, margin })
    }

    /// Truncation with the default margin, clipped to what `dim` allows.
    pub fn with_dim(dim: usize) -> Result<Self> {
        Self::new(dim, DEFAULT_MARGIN.min(dim.saturating_sub(2)))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Highest level inside the trusted subspace, `dim − 1 − margin`.
    pub fn top_trusted_level(&self) -> usize {
        self.dim - 1 - self.margin
    }

    /// Same margin, larger cutoff.
    pub fn padded(&self, extra: usize) -> Self {
        Self {
            dim: self.dim + extra,
            margin: self.margin,
        }
    }

    /// `true` for levels `0 … dim−1−margin`.
    pub fn level_mask(&self) -> Vec<bool> {
        (0..self.dim)
            .map(|n| n <= self.top_trusted_level())
            .collect()
    }

    /// Mask over the `dim²` vectorized pair index `n·dim + m`.
    pub fn pair_mask(&self) -> Vec<bool> {
        let lv = self.level_mask();
        (0..self.dim * self.dim)
            .map(|k| lv[k / self.dim] && lv[k % self.dim])
            .collect()
    }

    /// Mask over the `4·dim²` stacked index of a vectorized block state.
    pub fn block_pair_mask(&self) -> Vec<bool> {
        self.pair_mask().repeat(4)
    }
}

/// `a`: entry `(n−1, n) = √n`.
pub fn annihilation(cfg: &TruncationConfig) -> DenseComplexMatrix {
    let d = cfg.dim();
    let mut m = DenseComplexMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    m
}

/// `a†`.
pub fn creation(cfg: &TruncationConfig) -> DenseComplexMatrix {
    annihilation(cfg).dagger()
}

/// `N = a†a = diag(0, 1, …, dim−1)`.
pub fn number(cfg: &TruncationConfig) -> DenseComplexMatrix {
    DenseComplexMatrix::from_real_diag(&number_spectrum(cfg))
}

pub fn identity(cfg: &TruncationConfig) -> DenseComplexMatrix {
    DenseComplexMatrix::identity(cfg.dim())
}

/// Diagonal of `N`.
pub fn number_spectrum(cfg: &TruncationConfig) -> Vec<f64> {
    (0..cfg.dim()).map(|n| n as f64).collect()
}

/// Row-major stacking `(x₀₀, x₀₁, …; x₁₀, x₁₁, …; …)`.
pub fn vectorize(x: &DenseComplexMatrix) -> Result<Vec<C64>> {
    if !x.is_square() {
        return Err(Error::NotSquare {
            rows: x.rows(),
            cols: x.cols(),
        });
    }
    Ok(x.as_slice().to_vec())
}

pub fn unvectorize(v: &[C64], dim: usize) -> Result<DenseComplexMatrix> {
    DenseComplexMatrix::from_vec(dim, dim, v.to_vec()).map_err(|_| Error::LengthMismatch {
        expected: dim * dim,
        found: v.len(),
    })
}

/// The four vectorized blocks `(ρ̂₀₀; ρ̂₀₁; ρ̂₁₀; ρ̂₁₁)` stacked into one vector.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorizedState {
    block_dim: usize,
    data: Vec<C64>,
}

impl VectorizedState {
    pub fn new(block_dim: usize, data: Vec<C64>) -> Result<Self> {
        let expected = 4 * block_dim * block_dim;
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: data.len(),
            });
        }
        Ok(Self { block_dim, data })
    }

    pub fn zeros(block_dim: usize) -> Self {
        Self {
            block_dim,
            data: vec![C64::new(0.0, 0.0); 4 * block_dim * block_dim],
        }
    }

    #[inline]
    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    /// Block `k ∈ 0..4` in the order 00, 01, 10, 11.
    pub fn block(&self, k: usize) -> &[C64] {
        let n = self.block_dim * self.block_dim;
        &self.data[k * n..(k + 1) * n]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut [C64] {
        let n = self.block_dim * self.block_dim;
        &mut self.data[k * n..(k + 1) * n]
    }

    pub fn norm_l2(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ℓ₂ distance; panics on dimension mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(
            self.data.len(),
            other.data.len(),
            "state dimension mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            self.data.len(),
            other.data.len(),
            "state dimension mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Copies every block into a larger cutoff, zero-filling the new levels.
    pub fn embed(&self, dim: usize) -> Self {
        assert!(dim >= self.block_dim);
        let mut out = Self::zeros(dim);
        for k in 0..4 {
            let src = self.block(k);
            let dst = out.block_mut(k);
            for n in 0..self.block_dim {
                dst[n * dim..n * dim + self.block_dim]
                    .copy_from_slice(&src[n * self.block_dim..(n + 1) * self.block_dim]);
            }
        }
        out
    }

    /// Keeps the levels below `dim` of every block.
    pub fn compress(&self, dim: usize) -> Self {
        assert!(dim <= self.block_dim);
        let mut out = Self::zeros(dim);
        for k in 0..4 {
            let src = self.block(k);
            let dst = out.block_mut(k);
            for n in 0..dim {
                dst[n * dim..(n + 1) * dim]
                    .copy_from_slice(&src[n * self.block_dim..n * self.block_dim + dim]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: usize) -> TruncationConfig {
        TruncationConfig::with_dim(d).unwrap()
    }

    fn unit(d: usize, n: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[n] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn annihilation_two_levels() {
        let a = annihilation(&cfg(2));
        assert_eq!(
            a.as_slice(),
            &[0.0, 1.0, 0.0, 0.0].map(|x| C64::new(x, 0.0))
        );
    }

    #[test]
    fn annihilation_sqrt_two() {
        let a = annihilation(&cfg(3));
        assert!((a[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn annihilation_lowers_five() {
        let a = annihilation(&cfg(8));
        let v = a.matvec(&unit(8, 5)).unwrap();
        let want: Vec<C64> = unit(8, 4).iter().map(|z| z * 5f64.sqrt()).collect();
        for (x, y) in v.iter().zip(&want) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn creation_two_levels() {
        let c = creation(&cfg(2));
        assert_eq!(
            c.as_slice(),
            &[0.0, 0.0, 1.0, 0.0].map(|x| C64::new(x, 0.0))
        );
    }

    #[test]
    fn creation_builds_fock_three() {
        let c = creation(&cfg(8));
        let mut v = unit(8, 0);
        for _ in 0..3 {
            v = c.matvec(&v).unwrap();
        }
        let s = 6f64.sqrt();
        for (n, z) in v.iter().enumerate() {
            let want = if n == 3 { 1.0 } else { 0.0 };
            assert!((z / s - C64::new(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn number_is_exact_product() {
        for d in 2..10 {
            let c = cfg(d);
            assert!((&number(&c) - &(&creation(&c) * &annihilation(&c))).max_abs() < 1e-14);
        }
        assert_eq!(
            number(&cfg(3)).diag(),
            vec![0.0, 1.0, 2.0]
                .into_iter()
                .map(|x| C64::new(x, 0.0))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn ccr_boundary_defect() {
        let c = cfg(8);
        let a = annihilation(&c);
        let ad = creation(&c);
        let comm = crate::linalg::commutator(&a, &ad);
        for i in 0..7 {
            for j in 0..7 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((comm[(i, j)] - C64::new(want, 0.0)).norm() < 1e-14);
            }
        }
        assert!((comm[(7, 7)] - C64::new(-7.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn vectorize_is_row_major() {
        let x = DenseComplexMatrix::from_vec(
            2,
            2,
            [1.0, 2.0, 3.0, 4.0].map(|v| C64::new(v, 0.0)).to_vec(),
        )
        .unwrap();
        assert_eq!(
            vectorize(&x).unwrap(),
            [1.0, 2.0, 3.0, 4.0].map(|v| C64::new(v, 0.0)).to_vec()
        );
    }

    #[test]
    fn vectorize_rejects_non_square() {
        assert!(vectorize(&DenseComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn unvectorize_scalar_and_mismatch() {
        let m = unvectorize(&[C64::new(2.5, -1.0)], 1).unwrap();
        assert_eq!(m[(0, 0)], C64::new(2.5, -1.0));
        assert!(matches!(
            unvectorize(&[C64::new(0.0, 0.0); 3], 2),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn truncation_validation() {
        assert!(TruncationConfig::new(1, 0).is_err());
        assert!(TruncationConfig::new(4, 3).is_err());
        assert!(TruncationConfig::new(4, 2).is_ok());
        assert_eq!(TruncationConfig::with_dim(3).unwrap().margin(), 1);
    }

    #[test]
    fn embed_then_compress_round_trips() {
        let data: Vec<C64> = (0..36).map(|k| C64::new(k as f64, -(k as f64))).collect();
        let s = VectorizedState::new(3, data).unwrap();
        assert_eq!(s.embed(5).compress(3), s);
    }
}
