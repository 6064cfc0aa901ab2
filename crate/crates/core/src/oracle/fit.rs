use serde::{Deserialize, Serialize};

use super::expm_propagate_padded;
use crate::error::{Error, Result};
use crate::fock::VectorizedState;
use crate::model::ModelParams;
use crate::propagators::{zassenhaus_propagate, ZassenhausOrder};

/// Fits with `r²` below this are flagged non-asymptotic.
pub const ASYMPTOTIC_R_SQUARED: f64 = 0.98;
/// When every error is below this the fit is flagged degenerate.
pub const DEGENERATE_ERROR: f64 = 1e-12;
/// Largest error still considered inside the asymptotic regime.
const ASYMPTOTIC_MAX_ERROR: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitRegime {
    Asymptotic,
    NonAsymptotic,
    /// All errors at rounding level; no slope can be fitted.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorFit {
    pub t_values: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub regime: FitRegime,
}

/// Cutoff used for the exact reference in an error study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reference {
    /// Generator truncated at the working cutoff.
    Truncated,
    /// Generator built this many levels higher, result cropped.
    Padded(usize),
}

impl Reference {
    fn pad(self) -> usize {
        match self {
            Self::Truncated => 0,
            Self::Padded(k) => k,
        }
    }
}

fn validate_grid(t: &[f64]) -> Result<()> {
    if t.len() < 4 {
        return Err(Error::InvalidFit(format!(
            "need at least 4 time values, got {}",
            t.len()
        )));
    }
    if t.iter().any(|&x| !x.is_finite() || x <= 0.0) {
        return Err(Error::InvalidFit(
            "time values must be positive and finite".into(),
        ));
    }
    if t.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidFit(
            "time values must be strictly increasing".into(),
        ));
    }
    if t[t.len() - 1] / t[0] < 4.0 {
        return Err(Error::InvalidFit(
            "time values must span at least two octaves".into(),
        ));
    }
    Ok(())
}

/// Least-squares line through `(ln t, ln error)`.
pub fn fit_log_log(t_values: &[f64], errors: &[f64]) -> Result<ErrorFit> {
    validate_grid(t_values)?;
    if errors.len() != t_values.len() {
        return Err(Error::LengthMismatch {
            expected: t_values.len(),
            found: errors.len(),
        });
    }
    if errors.iter().any(|&e| !e.is_finite() || e < 0.0) {
        return Err(Error::InvalidFit(
            "errors must be finite and nonnegative".into(),
        ));
    }
    let base = ErrorFit {
        t_values: t_values.to_vec(),
        errors: errors.to_vec(),
        slope: 0.0,
        intercept: 0.0,
        r_squared: 0.0,
        regime: FitRegime::Degenerate,
    };
    if errors.iter().all(|&e| e < DEGENERATE_ERROR) {
        return Ok(base);
    }
    let xs: Vec<f64> = t_values.iter().map(|t| t.ln()).collect();
    // Exact zeros cannot be logged; clamp them to the rounding floor.
    let ys: Vec<f64> = errors
        .iter()
        .map(|e| e.max(f64::MIN_POSITIVE).ln())
        .collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    let max_err = errors.iter().cloned().fold(0.0, f64::max);
    let regime = if r_squared < ASYMPTOTIC_R_SQUARED || max_err >= ASYMPTOTIC_MAX_ERROR {
        FitRegime::NonAsymptotic
    } else {
        FitRegime::Asymptotic
    };
    Ok(ErrorFit {
        slope,
        intercept,
        r_squared,
        regime,
        ..base
    })
}

/// ℓ₂ distance between the Zassenhaus product and the `expm` reference at
/// each `t`, fitted on a log-log scale.
pub fn fit_error_order(
    p: &ModelParams,
    rho0: &VectorizedState,
    t_values: &[f64],
    order: ZassenhausOrder,
    reference: Reference,
) -> Result<ErrorFit> {
    validate_grid(t_values)?;
    let errors = t_values
        .iter()
        .map(|&t| {
            let approx = zassenhaus_propagate(p, t, rho0, order)?;
            let exact = expm_propagate_padded(p, rho0, t, reference.pad())?;
            Ok(approx.distance(&exact))
        })
        .collect::<Result<Vec<f64>>>()?;
    fit_log_log(t_values, &errors)
}
