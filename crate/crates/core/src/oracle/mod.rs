//! Reference propagation independent of the closed forms: RK4 on the block
//! equations, dense `expm` of the full generator, and convergence-order fits.

mod fit;
mod rk4;

pub use fit::{
    fit_error_order, fit_log_log, ErrorFit, FitRegime, Reference, ASYMPTOTIC_R_SQUARED,
    DEGENERATE_ERROR,
};
pub use rk4::{
    generator_norm_estimate, rk4_master, IntegrationPlan, Rk4Trajectory, STEP_WARNING_THRESHOLD,
};

use crate::error::{Error, Result};
use crate::fock::VectorizedState;
use crate::linalg::{expm, DenseComplexMatrix};
use crate::model::{full_generator, ModelParams};

fn check_state(p: &ModelParams, rho0: &VectorizedState) -> Result<()> {
    if rho0.block_dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            op: "expm propagate",
            left: (p.dim(), p.dim()),
            right: (rho0.block_dim(), rho0.block_dim()),
        });
    }
    Ok(())
}

/// `expm(t(−iX + Y)) ρ̂₀` with the generator truncated at `p`'s cutoff.
pub fn expm_propagate(p: &ModelParams, rho0: &VectorizedState, t: f64) -> Result<VectorizedState> {
    expm_propagate_padded(p, rho0, t, 0)
}

/// Same, with the generator built `pad` levels above the cutoff and the result
/// cropped back. As `pad` grows this converges to the untruncated evolution
/// restricted to the retained levels.
pub fn expm_propagate_padded(
    p: &ModelParams,
    rho0: &VectorizedState,
    t: f64,
    pad: usize,
) -> Result<VectorizedState> {
    check_state(p, rho0)?;
    let big = p.padded(pad);
    let map = expm(&full_generator(&big).scale_real(t))?;
    let out = VectorizedState::new(big.dim(), map.matvec(rho0.embed(big.dim()).as_slice())?)?;
    Ok(out.compress(p.dim()))
}

/// Repeated application of one precomputed `expm(Δt·G)` for uniform grids.
///
/// The state is kept on the padded cutoff between steps and cropped only on
/// output.
#[derive(Clone, Debug)]
pub struct ExpmPropagator {
    dim: usize,
    work_dim: usize,
    dt: f64,
    step: DenseComplexMatrix,
}

impl ExpmPropagator {
    pub fn new(p: &ModelParams, dt: f64, pad: usize) -> Result<Self> {
        p.validate()?;
        let big = p.padded(pad);
        let step = expm(&full_generator(&big).scale_real(dt))?;
        Ok(Self {
            dim: p.dim(),
            work_dim: big.dim(),
            dt,
            step,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// States at `0, Δt, …, steps·Δt`.
    pub fn trajectory(&self, rho0: &VectorizedState, steps: usize) -> Result<Vec<VectorizedState>> {
        if rho0.block_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                op: "expm propagate",
                left: (self.dim, self.dim),
                right: (rho0.block_dim(), rho0.block_dim()),
            });
        }
        let mut w = rho0.embed(self.work_dim);
        let mut out = Vec::with_capacity(steps + 1);
        out.push(rho0.clone());
        for _ in 0..steps {
            w = VectorizedState::new(self.work_dim, self.step.matvec(w.as_slice())?)?;
            out.push(w.compress(self.dim));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TruncationConfig;
    use num_complex::Complex64 as C64;

    fn state(d: usize) -> VectorizedState {
        let data = (0..4 * d * d)
            .map(|k| C64::new((k as f64 * 0.7).sin(), (k as f64 * 0.2).cos()))
            .collect();
        VectorizedState::new(d, data).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let p =
            ModelParams::new(1.0, 0.5, 0.3, 0.1, TruncationConfig::with_dim(3).unwrap()).unwrap();
        let s = state(3);
        assert!(expm_propagate(&p, &s, 0.0).unwrap().max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn stepper_matches_single_shot() {
        let p =
            ModelParams::new(1.0, 0.5, 0.3, 0.1, TruncationConfig::with_dim(3).unwrap()).unwrap();
        let s = state(3);
        let traj = ExpmPropagator::new(&p, 0.25, 0)
            .unwrap()
            .trajectory(&s, 4)
            .unwrap();
        let direct = expm_propagate(&p, &s, 1.0).unwrap();
        assert!(traj[4].max_abs_diff(&direct) < 1e-12);
    }
}
