#![allow(dead_code)]

use dampjc_core::fock::VectorizedState;
use dampjc_core::{BlockDensityMatrix, DenseComplexMatrix, ModelParams, TruncationConfig, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn params(dim: usize, omega0: f64, coupling: f64, mu: f64, nu: f64) -> ModelParams {
    ModelParams::new(
        omega0,
        coupling,
        mu,
        nu,
        TruncationConfig::with_dim(dim).unwrap(),
    )
    .unwrap()
}

/// ω₀ = 1, Ω = 0.5, μ = 0.3, ν = 0.1.
pub fn standard(dim: usize) -> ModelParams {
    params(dim, 1.0, 0.5, 0.3, 0.1)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseComplexMatrix {
    DenseComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Random density matrix on qubit ⊗ Fock levels `0..support`, embedded at `dim`.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize, support: usize) -> BlockDensityMatrix {
    let n = 2 * support;
    let g = random_matrix(rng, n, n);
    let mut rho = &g * &g.dagger();
    let tr = rho.trace().re;
    rho = rho.scale_real(1.0 / tr);
    let block = |i: usize, j: usize| {
        DenseComplexMatrix::from_fn(dim, dim, |r, c| {
            if r < support && c < support {
                rho[(i * support + r, j * support + c)]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    };
    BlockDensityMatrix::new(block(0, 0), block(0, 1), block(1, 0), block(1, 1)).unwrap()
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> VectorizedState {
    let data = (0..4 * dim * dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    VectorizedState::new(dim, data).unwrap()
}

/// Stacked indices of a `big`-level vectorized state that survive cropping to `small` levels.
pub fn retained_indices(big: usize, small: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for b in 0..4 {
        for n in 0..small {
            for m in 0..small {
                out.push(b * big * big + n * big + m);
            }
        }
    }
    out
}

/// Compression of a `4·big² × 4·big²` superoperator onto the first `small` levels.
pub fn crop_superop(m: &DenseComplexMatrix, big: usize, small: usize) -> DenseComplexMatrix {
    let idx = retained_indices(big, small);
    DenseComplexMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Compression of a `big² × big²` single-block map onto the first `small` levels.
pub fn crop_block_map(m: &DenseComplexMatrix, big: usize, small: usize) -> DenseComplexMatrix {
    let idx: Vec<usize> = (0..small)
        .flat_map(|n| (0..small).map(move |k| n * big + k))
        .collect();
    DenseComplexMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

pub fn max_diff(a: &DenseComplexMatrix, b: &DenseComplexMatrix) -> f64 {
    (a - b).max_abs()
}

/// Projected max-entry difference of two `4D² × 4D²` superoperators.
pub fn projected_superop_diff(
    a: &DenseComplexMatrix,
    b: &DenseComplexMatrix,
    trunc: &TruncationConfig,
) -> f64 {
    (a - b).masked_max_abs(&trunc.block_pair_mask())
}

/// Projected max-entry difference of two `D² × D²` maps.
pub fn projected_pair_diff(
    a: &DenseComplexMatrix,
    b: &DenseComplexMatrix,
    trunc: &TruncationConfig,
) -> f64 {
    (a - b).masked_max_abs(&trunc.pair_mask())
}

/// `expm(scale · G)` of a superoperator built `pad` levels higher, cropped back to `p`'s cutoff.
pub fn padded_superop_expm(
    p: &ModelParams,
    pad: usize,
    build: impl Fn(&ModelParams) -> DenseComplexMatrix,
    scale: C64,
) -> DenseComplexMatrix {
    let big = p.padded(pad);
    let e = dampjc_core::linalg::expm(&build(&big).scale(scale)).unwrap();
    crop_superop(&e, big.dim(), p.dim())
}

pub fn unit_fock(dim: usize, n: usize) -> DenseComplexMatrix {
    let mut m = DenseComplexMatrix::zeros(dim, dim);
    m[(n, n)] = C64::new(1.0, 0.0);
    m
}

pub fn excited() -> [C64; 2] {
    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
}

pub fn ground() -> [C64; 2] {
    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
}
