//! Executes a validated config over its time grid.

use std::thread;

use dampjc_core::oracle::{fit_error_order, rk4_master, ExpmPropagator};
use dampjc_core::propagators::ZassenhausPropagator;
use dampjc_core::{
    diagnostics, BlockDensityMatrix, DiagnosticsRow, ErrorFit, FitRegime, IntegrationPlan,
    Reference,
};
use log::{info, warn};

use crate::config::{Method, RunConfig};
use crate::CliError;

/// Rows with more population than this in the top Fock levels trip the guard.
pub const LEAKAGE_GUARD: f64 = 1e-6;
/// Rows whose trace departs from one by more than this trip the guard.
pub const TRACE_GUARD: f64 = 1e-6;
/// Cutoff padding for the `expm` reference of the error study.
pub const ERROR_STUDY_PAD: usize = 4;

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub rows: Vec<DiagnosticsRow>,
    pub error_fit: Option<ErrorFit>,
    /// One message per tripped tolerance guard; empty on a clean run.
    pub guards: Vec<String>,
}

/// Worker count from `SIM_THREADS`, else the machine's parallelism.
pub fn thread_count() -> Result<usize, CliError> {
    match std::env::var("SIM_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Invalid(format!(
                "SIM_THREADS must be a positive integer, got '{s}'"
            ))),
        },
        Err(_) => Ok(thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
    }
}

/// States on a uniform grid by exact stepping of `e^{Δt L}`.
fn expm_states(
    cfg: &RunConfig,
    rho0: &BlockDensityMatrix,
    grid: &[f64],
) -> Result<Vec<BlockDensityMatrix>, CliError> {
    if grid.len() == 1 {
        return Ok(vec![rho0.clone()]);
    }
    let stepper = ExpmPropagator::new(&cfg.params, grid[1] - grid[0], 0)?;
    let traj = stepper.trajectory(&rho0.to_vectorized(), grid.len() - 1)?;
    Ok(traj
        .iter()
        .map(BlockDensityMatrix::from_vectorized)
        .collect())
}

fn rk4_states(
    cfg: &RunConfig,
    rho0: &BlockDensityMatrix,
    grid: &[f64],
) -> Result<Vec<BlockDensityMatrix>, CliError> {
    if grid.len() == 1 {
        return Ok(vec![rho0.clone()]);
    }
    let per = cfg.raw.rk4_steps_per_sample.expect("validated for rk4");
    let plan = IntegrationPlan::new(cfg.raw.t_max, per * (grid.len() - 1), per)?;
    let traj = rk4_master(&cfg.params, rho0, &plan)?;
    if traj.step_warning {
        warn!("rk4StepsPerSample = {per} gives a coarse step; results may be inaccurate");
    }
    Ok(traj.samples.into_iter().map(|(_, s)| s).collect())
}

/// Single-shot Zassenhaus maps from `t = 0`, spread over `threads` workers.
fn zassenhaus_states(
    cfg: &RunConfig,
    rho0: &BlockDensityMatrix,
    grid: &[f64],
    threads: usize,
) -> Result<Vec<BlockDensityMatrix>, CliError> {
    let order = cfg.method().zassenhaus_order().expect("zassenhaus method");
    let v0 = rho0.to_vectorized();
    let one = |t: f64| -> Result<BlockDensityMatrix, CliError> {
        let prop = ZassenhausPropagator::new(&cfg.params, t, order)?;
        Ok(BlockDensityMatrix::from_vectorized(&prop.propagate(&v0)?))
    };
    let chunk = grid.len().div_ceil(threads.max(1));
    thread::scope(|s| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|ts| s.spawn(move || ts.iter().map(|&t| one(t)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

pub fn run_simulation(cfg: &RunConfig, threads: usize) -> Result<RunOutput, CliError> {
    let grid = cfg.time_grid();
    let rho0 = cfg.initial.build();
    info!(
        "running {:?} on {} samples up to t = {}",
        cfg.method(),
        grid.len(),
        cfg.raw.t_max
    );
    let states = match cfg.method() {
        Method::Expm => expm_states(cfg, &rho0, &grid)?,
        Method::Rk4 => rk4_states(cfg, &rho0, &grid)?,
        Method::Zassenhaus2 | Method::Zassenhaus3 => zassenhaus_states(cfg, &rho0, &grid, threads)?,
    };
    let oracle = if cfg.raw.compare_oracle {
        Some(expm_states(cfg, &rho0, &grid)?)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(grid.len());
    let mut guards = Vec::new();
    for (k, (&t, rho)) in grid.iter().zip(&states).enumerate() {
        let row = diagnostics(t, rho, oracle.as_ref().map(|o| &o[k]))?;
        if row.leakage > LEAKAGE_GUARD {
            guards.push(format!(
                "t = {t}: leakage {:.3e} exceeds {LEAKAGE_GUARD:e}",
                row.leakage
            ));
        }
        let drift = (row.trace_re - 1.0).hypot(row.trace_im);
        if drift > TRACE_GUARD {
            guards.push(format!(
                "t = {t}: trace drift {drift:.3e} exceeds {TRACE_GUARD:e}"
            ));
        }
        rows.push(row);
    }

    let error_fit = match (&cfg.raw.error_study, cfg.method().zassenhaus_order()) {
        (Some(ts), Some(order)) => {
            let fit = fit_error_order(
                &cfg.params,
                &rho0.to_vectorized(),
                ts,
                order,
                Reference::Padded(ERROR_STUDY_PAD),
            )?;
            if fit.regime == FitRegime::NonAsymptotic {
                guards.push(format!(
                    "error study is not asymptotic (slope {:.3}, r^2 {:.4})",
                    fit.slope, fit.r_squared
                ));
            }
            Some(fit)
        }
        _ => None,
    };
    for g in &guards {
        warn!("guard tripped: {g}");
    }
    Ok(RunOutput {
        rows,
        error_fit,
        guards,
    })
}
