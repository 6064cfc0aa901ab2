//! Scalar diagnostics of a block density matrix.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseComplexMatrix;
use crate::state::BlockDensityMatrix;

/// Number of top Fock levels whose population counts as leakage.
pub const LEAKAGE_LEVELS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRow {
    pub time: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    pub herm_defect: f64,
    pub purity: f64,
    pub pop_excited: f64,
    pub pop_ground: f64,
    pub mean_photons: f64,
    pub leakage: f64,
    /// Overlap fidelity `re tr(ρσ) / √(tr ρ² · tr σ²)` against a reference state
    /// (a normalized overlap, not the Uhlmann fidelity).
    pub fidelity: Option<f64>,
    /// ℓ₂ distance between the vectorized state and the reference.
    pub err_norm: Option<f64>,
}

/// `tr(XY)` without forming the product.
fn trace_of_product(x: &DenseComplexMatrix, y: &DenseComplexMatrix) -> C64 {
    let n = x.rows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += x[(i, j)] * y[(j, i)];
        }
    }
    s
}

/// `tr(ρσ)` over the full `2D × 2D` matrices.
fn overlap(rho: &BlockDensityMatrix, sigma: &BlockDensityMatrix) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..2 {
        for k in 0..2 {
            s += trace_of_product(rho.block(i, k), sigma.block(k, i));
        }
    }
    s
}

/// Max-entry modulus of `ρ − ρ†`.
pub fn hermiticity_defect(rho: &BlockDensityMatrix) -> f64 {
    let d00 = (rho.block(0, 0) - &rho.block(0, 0).dagger()).max_abs();
    let d11 = (rho.block(1, 1) - &rho.block(1, 1).dagger()).max_abs();
    let d01 = (rho.block(0, 1) - &rho.block(1, 0).dagger()).max_abs();
    d00.max(d11).max(d01)
}

pub fn purity(rho: &BlockDensityMatrix) -> f64 {
    overlap(rho, rho).re
}

/// Population in the top [`LEAKAGE_LEVELS`] Fock levels of both qubit sectors.
pub fn leakage(rho: &BlockDensityMatrix) -> f64 {
    let d = rho.dim();
    let lo = d.saturating_sub(LEAKAGE_LEVELS);
    (lo..d)
        .map(|n| rho.block(0, 0)[(n, n)].re + rho.block(1, 1)[(n, n)].re)
        .sum::<f64>()
        .abs()
}

pub fn overlap_fidelity(rho: &BlockDensityMatrix, sigma: &BlockDensityMatrix) -> f64 {
    let denom = (purity(rho) * purity(sigma)).sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    (overlap(rho, sigma).re / denom).clamp(0.0, 1.0)
}

pub fn diagnostics(
    time: f64,
    rho: &BlockDensityMatrix,
    oracle: Option<&BlockDensityMatrix>,
) -> Result<DiagnosticsRow> {
    if let Some(o) = oracle {
        if o.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                op: "diagnostics",
                left: (rho.dim(), rho.dim()),
                right: (o.dim(), o.dim()),
            });
        }
    }
    let t00 = rho.block(0, 0).trace();
    let t11 = rho.block(1, 1).trace();
    let trace = t00 + t11;
    let mean_photons: f64 = (0..rho.dim())
        .map(|n| n as f64 * (rho.block(0, 0)[(n, n)].re + rho.block(1, 1)[(n, n)].re))
        .sum();
    let (fidelity, err_norm) = match oracle {
        Some(o) => (
            Some(overlap_fidelity(rho, o)),
            Some(rho.to_vectorized().distance(&o.to_vectorized())),
        ),
        None => (None, None),
    };
    Ok(DiagnosticsRow {
        time,
        trace_re: trace.re,
        trace_im: trace.im,
        herm_defect: hermiticity_defect(rho),
        purity: purity(rho),
        pop_excited: t00.re,
        pop_ground: t11.re,
        mean_photons,
        leakage: leakage(rho),
        fidelity,
        err_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vacuum(d: usize) -> DenseComplexMatrix {
        let mut m = DenseComplexMatrix::zeros(d, d);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m
    }

    #[test]
    fn mixed_qubit_vacuum() {
        let v = vacuum(4).scale_real(0.5);
        let z = DenseComplexMatrix::zeros(4, 4);
        let rho = BlockDensityMatrix::new(v.clone(), z.clone(), z, v).unwrap();
        let row = diagnostics(0.0, &rho, None).unwrap();
        assert!((row.trace_re - 1.0).abs() < 1e-15);
        assert!((row.purity - 0.5).abs() < 1e-15);
        assert_eq!(row.mean_photons, 0.0);
        assert_eq!(row.fidelity, None);
    }

    #[test]
    fn pure_excited_vacuum() {
        let rho = BlockDensityMatrix::product([C64::new(1.0, 0.0), C64::new(0.0, 0.0)], &vacuum(3))
            .unwrap();
        let row = diagnostics(0.0, &rho, Some(&rho)).unwrap();
        assert_eq!(row.pop_excited, 1.0);
        assert!((row.purity - 1.0).abs() < 1e-15);
        assert!((row.fidelity.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(row.err_norm, Some(0.0));
        assert_eq!(row.herm_defect, 0.0);
        assert_eq!(row.leakage, 0.0);
    }

    #[test]
    fn leakage_counts_top_levels() {
        let mut cav = DenseComplexMatrix::zeros(4, 4);
        cav[(3, 3)] = C64::new(0.25, 0.0);
        cav[(2, 2)] = C64::new(0.25, 0.0);
        cav[(0, 0)] = C64::new(0.5, 0.0);
        let rho =
            BlockDensityMatrix::product([C64::new(0.0, 0.0), C64::new(1.0, 0.0)], &cav).unwrap();
        assert!((leakage(&rho) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_mismatched_oracle() {
        assert!(diagnostics(
            0.0,
            &BlockDensityMatrix::zeros(3),
            Some(&BlockDensityMatrix::zeros(4))
        )
        .is_err());
    }
}
