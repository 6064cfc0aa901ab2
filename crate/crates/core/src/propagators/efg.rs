use serde::Serialize;

use crate::error::{Error, Result};

/// The functions `E(t)`, `F(t)`, `G(t)` of the su(1,1) disentangling of `e^{tL}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EfgValues {
    pub t: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `log F(t)`, evaluated without forming `F` so it stays finite for large `t`.
    pub log_f: f64,
}

/// With `x = (μ−ν)t/2` and `r = (μ+ν)/(μ−ν)`:
/// `F = cosh x + r sinh x`, `E = (2μ/(μ−ν)) sinh x / F`, `G = (2ν/(μ−ν)) sinh x / F`.
///
/// `E` and `G` share the factor `2 sinh x / ((μ−ν) F)`, computed once through
/// `tanh x` so that neither overflows.
pub fn efg(t: f64, mu: f64, nu: f64) -> Result<EfgValues> {
    if !(mu > nu && nu >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "requires mu > nu >= 0, got mu = {mu}, nu = {nu}"
        )));
    }
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    let gap = mu - nu;
    let x = gap * t / 2.0;
    let r = (mu + nu) / gap;
    let th = x.tanh();
    let shared = 2.0 * th / (gap * (1.0 + r * th));
    // log cosh x = x + log((1 + e^{-2x}) / 2)
    let log_cosh = x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2;
    let log_f = log_cosh + (r * th).ln_1p();
    Ok(EfgValues {
        t,
        e: mu * shared,
        f: log_f.exp(),
        g: nu * shared,
        log_f,
    })
}
