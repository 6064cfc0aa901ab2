//! Qubit ⊗ cavity density matrices stored as a 2×2 array of Fock-space blocks.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{unvectorize, VectorizedState};
use crate::linalg::DenseComplexMatrix;

/// `ρ = [[ρ₀₀, ρ₀₁], [ρ₁₀, ρ₁₁]]`, each block `D×D`. Qubit index 0 is the
/// excited level (`σ₃ = +1`), index 1 the ground level.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDensityMatrix {
    blocks: [[DenseComplexMatrix; 2]; 2],
}

impl BlockDensityMatrix {
    pub fn new(
        rho00: DenseComplexMatrix,
        rho01: DenseComplexMatrix,
        rho10: DenseComplexMatrix,
        rho11: DenseComplexMatrix,
    ) -> Result<Self> {
        let d = rho00.rows();
        for b in [&rho00, &rho01, &rho10, &rho11] {
            if b.rows() != d || b.cols() != d {
                return Err(Error::DimensionMismatch {
                    op: "block density matrix",
                    left: (d, d),
                    right: (b.rows(), b.cols()),
                });
            }
        }
        Ok(Self {
            blocks: [[rho00, rho01], [rho10, rho11]],
        })
    }

    pub fn zeros(dim: usize) -> Self {
        let z = DenseComplexMatrix::zeros(dim, dim);
        Self {
            blocks: [[z.clone(), z.clone()], [z.clone(), z]],
        }
    }

    /// `|q⟩⟨q| ⊗ cavity` for a (not necessarily normalized) qubit amplitude pair.
    pub fn product(qubit: [C64; 2], cavity: &DenseComplexMatrix) -> Result<Self> {
        if !cavity.is_square() {
            return Err(Error::NotSquare {
                rows: cavity.rows(),
                cols: cavity.cols(),
            });
        }
        let b = |i: usize, j: usize| cavity.scale(qubit[i] * qubit[j].conj());
        Self::new(b(0, 0), b(0, 1), b(1, 0), b(1, 1))
    }

    pub fn dim(&self) -> usize {
        self.blocks[0][0].rows()
    }

    pub fn block(&self, i: usize, j: usize) -> &DenseComplexMatrix {
        &self.blocks[i][j]
    }

    pub fn block_mut(&mut self, i: usize, j: usize) -> &mut DenseComplexMatrix {
        &mut self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[[DenseComplexMatrix; 2]; 2] {
        &self.blocks
    }

    pub fn to_vectorized(&self) -> VectorizedState {
        let mut data = Vec::with_capacity(4 * self.dim() * self.dim());
        for i in 0..2 {
            for j in 0..2 {
                data.extend_from_slice(self.blocks[i][j].as_slice());
            }
        }
        VectorizedState::new(self.dim(), data).expect("blocks share a dimension")
    }

    pub fn from_vectorized(v: &VectorizedState) -> Self {
        let d = v.block_dim();
        let b = |k: usize| unvectorize(v.block(k), d).expect("block length is d²");
        Self {
            blocks: [[b(0), b(1)], [b(2), b(3)]],
        }
    }

    /// The full `2D × 2D` matrix.
    pub fn full_matrix(&self) -> DenseComplexMatrix {
        let d = self.dim();
        DenseComplexMatrix::from_blocks(2, d, |i, j| Some(self.blocks[i][j].clone()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                best = best.max((&self.blocks[i][j] - &other.blocks[i][j]).max_abs());
            }
        }
        best
    }
}
