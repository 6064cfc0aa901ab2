//! Fixtures shared by the criterion benches in `benches/`.

use dampjc_core::{BlockDensityMatrix, DenseComplexMatrix, ModelParams, TruncationConfig, C64};

/// ω₀ = 1, Ω = 0.5, μ = 0.3, ν = 0.1 at cutoff `dim`.
pub fn standard(dim: usize) -> ModelParams {
    ModelParams::new(
        1.0,
        0.5,
        0.3,
        0.1,
        TruncationConfig::with_dim(dim).expect("dim >= 2"),
    )
    .expect("mu > nu")
}

/// Equal qubit superposition times a uniform mixture of the lowest three Fock levels.
pub fn initial_state(dim: usize) -> BlockDensityMatrix {
    let levels = dim.min(3);
    let cav = DenseComplexMatrix::from_fn(dim, dim, |i, j| {
        if i == j && i < levels {
            C64::new(1.0 / levels as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let amp = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    BlockDensityMatrix::product([amp, amp], &cav).expect("square cavity state")
}
