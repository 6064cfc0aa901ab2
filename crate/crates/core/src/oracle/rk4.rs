//! Fixed-step RK4 on the four coupled block equations
//!
//! ```text
//! ρ̇ᵢⱼ = −i Σₖ (Hᵢₖ ρₖⱼ − ρᵢₖ Hₖⱼ) + (μ/2)(2aρᵢⱼa† − a†aρᵢⱼ − ρᵢⱼa†a)
//!                                 + (ν/2)(2a†ρᵢⱼa − aa†ρᵢⱼ − ρᵢⱼaa†)
//! ```
//!
//! with `H = [[ω₀/2 + ω₀N, Ωa], [Ωa†, −ω₀/2 + ω₀N]]`. The product `aa†` is
//! taken as `N + 1`, the form used by the superoperator `Y`; the truncated
//! matrix product differs from it in the top level.

use log::warn;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{annihilation, creation, number};
use crate::linalg::DenseComplexMatrix;
use crate::model::{hamiltonian_blocks, ModelParams};
use crate::state::BlockDensityMatrix;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Above this value of `h·(‖X‖ + ‖Y‖)` the step is flagged as too coarse.
pub const STEP_WARNING_THRESHOLD: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrationPlan {
    t_end: f64,
    steps: usize,
    record_every: usize,
}

impl IntegrationPlan {
    pub fn new(t_end: f64, steps: usize, record_every: usize) -> Result<Self> {
        if !t_end.is_finite() || t_end < 0.0 {
            return Err(Error::InvalidPlan(format!(
                "tEnd must be finite and nonnegative, got {t_end}"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidPlan("steps must be at least 1".into()));
        }
        if record_every == 0 || record_every > steps {
            return Err(Error::InvalidPlan(format!(
                "recordEvery must lie in 1..={steps}, got {record_every}"
            )));
        }
        Ok(Self {
            t_end,
            steps,
            record_every,
        })
    }

    /// Records only the initial and final states.
    pub fn endpoints(t_end: f64, steps: usize) -> Result<Self> {
        Self::new(t_end, steps, steps.max(1))
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn record_every(&self) -> usize {
        self.record_every
    }

    pub fn step_size(&self) -> f64 {
        self.t_end / self.steps as f64
    }
}

#[derive(Clone, Debug)]
pub struct Rk4Trajectory {
    /// `(time, state)` at step 0, every `record_every` steps, and the last step.
    pub samples: Vec<(f64, BlockDensityMatrix)>,
    /// Set when the step size exceeded the stability heuristic.
    pub step_warning: bool,
}

impl Rk4Trajectory {
    pub fn last(&self) -> &BlockDensityMatrix {
        &self
            .samples
            .last()
            .expect("trajectory has the initial sample")
            .1
    }
}

/// Cheap upper estimates of `‖X‖₁` and `‖Y‖₁` for the step heuristic.
pub fn generator_norm_estimate(p: &ModelParams) -> f64 {
    let d = p.dim() as f64;
    let x = p.omega0.abs() * d + 4.0 * p.coupling.abs() * (d - 1.0).sqrt();
    let y = 2.0 * (p.mu + p.nu) * d + (p.mu - p.nu).abs();
    x + y
}

struct BlockRhs {
    h: [[DenseComplexMatrix; 2]; 2],
    a: DenseComplexMatrix,
    ad: DenseComplexMatrix,
    n_diag: Vec<f64>,
    mu: f64,
    nu: f64,
}

impl BlockRhs {
    fn new(p: &ModelParams) -> Self {
        let hb = hamiltonian_blocks(p);
        let n = number(&p.trunc);
        Self {
            h: [[hb.a, hb.b], [hb.c, hb.d]],
            a: annihilation(&p.trunc),
            ad: creation(&p.trunc),
            n_diag: n.diag().iter().map(|z| z.re).collect(),
            mu: p.mu,
            nu: p.nu,
        }
    }

    /// `diag(v) X + X diag(v)`.
    fn anticommute_diag(v: &[f64], x: &DenseComplexMatrix) -> DenseComplexMatrix {
        DenseComplexMatrix::from_fn(x.rows(), x.cols(), |i, j| x[(i, j)] * (v[i] + v[j]))
    }

    fn dissipator(&self, x: &DenseComplexMatrix) -> DenseComplexMatrix {
        let loss =
            &(&(&self.a * x) * &self.ad).scale_real(2.0) - &Self::anticommute_diag(&self.n_diag, x);
        let n_plus_one: Vec<f64> = self.n_diag.iter().map(|n| n + 1.0).collect();
        let gain =
            &(&(&self.ad * x) * &self.a).scale_real(2.0) - &Self::anticommute_diag(&n_plus_one, x);
        &loss.scale_real(self.mu / 2.0) + &gain.scale_real(self.nu / 2.0)
    }

    fn eval(&self, rho: &BlockDensityMatrix) -> BlockDensityMatrix {
        let r = rho.blocks();
        let d = rho.dim();
        let mut out: Vec<DenseComplexMatrix> = Vec::with_capacity(4);
        for i in 0..2 {
            for j in 0..2 {
                let mut comm = DenseComplexMatrix::zeros(d, d);
                for k in 0..2 {
                    comm += &(&self.h[i][k] * &r[k][j]);
                    comm = &comm - &(&r[i][k] * &self.h[k][j]);
                }
                out.push(&comm.scale(-I) + &self.dissipator(&r[i][j]));
            }
        }
        let mut it = out.into_iter();
        let mut next = || it.next().expect("four blocks");
        BlockDensityMatrix::new(next(), next(), next(), next()).expect("shapes agree")
    }
}

fn axpy(base: &BlockDensityMatrix, h: f64, k: &BlockDensityMatrix) -> BlockDensityMatrix {
    let b = |i: usize, j: usize| base.block(i, j) + &k.block(i, j).scale_real(h);
    BlockDensityMatrix::new(b(0, 0), b(0, 1), b(1, 0), b(1, 1)).expect("shapes agree")
}

/// Integrates the block equations from `rho0` over `plan`.
pub fn rk4_master(
    p: &ModelParams,
    rho0: &BlockDensityMatrix,
    plan: &IntegrationPlan,
) -> Result<Rk4Trajectory> {
    p.validate()?;
    if rho0.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            op: "rk4",
            left: (p.dim(), p.dim()),
            right: (rho0.dim(), rho0.dim()),
        });
    }
    let h = plan.step_size();
    let indicator = h * generator_norm_estimate(p);
    let step_warning = indicator > STEP_WARNING_THRESHOLD;
    if step_warning {
        warn!("RK4 step h = {h:.3e} is coarse: h*(|X|+|Y|) ~ {indicator:.3} > {STEP_WARNING_THRESHOLD}");
    }
    let rhs = BlockRhs::new(p);
    let mut rho = rho0.clone();
    let mut samples = vec![(0.0, rho.clone())];
    for step in 1..=plan.steps {
        let k1 = rhs.eval(&rho);
        let k2 = rhs.eval(&axpy(&rho, h / 2.0, &k1));
        let k3 = rhs.eval(&axpy(&rho, h / 2.0, &k2));
        let k4 = rhs.eval(&axpy(&rho, h, &k3));
        let mut next = axpy(&rho, h / 6.0, &k1);
        next = axpy(&next, h / 3.0, &k2);
        next = axpy(&next, h / 3.0, &k3);
        rho = axpy(&next, h / 6.0, &k4);
        if step % plan.record_every == 0 || step == plan.steps {
            // Times are formed from the step index so they carry no drift.
            samples.push((step as f64 * h, rho.clone()));
        }
    }
    Ok(Rk4Trajectory {
        samples,
        step_warning,
    })
}
