//! Initial product states `|q⟩⟨q| ⊗ ρ_cav`.

use dampjc_core::{BlockDensityMatrix, DenseComplexMatrix, C64};
use log::warn;

use crate::CliError;

/// Truncated coherent or thermal states losing more than this are reported.
pub const TRUNCATION_WARNING: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QubitSpec {
    Excited,
    Ground,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CavitySpec {
    Fock(usize),
    Coherent(C64),
    Thermal(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialStateSpec {
    pub qubit: QubitSpec,
    pub cavity: CavitySpec,
    pub dim: usize,
    /// Population the untruncated cavity state has at or above level `dim`.
    pub truncated_weight: f64,
}

impl InitialStateSpec {
    pub fn parse(qubit: &str, cavity: &str, dim: usize) -> Result<Self, CliError> {
        let qubit = match qubit {
            "excited" => QubitSpec::Excited,
            "ground" => QubitSpec::Ground,
            "plus" => QubitSpec::Plus,
            other => {
                return Err(CliError::Invalid(format!(
                    "unknown qubit state '{other}' (excited, ground, plus)"
                )))
            }
        };
        let (kind, arg) = cavity.split_once(':').ok_or_else(|| {
            CliError::Invalid(format!("cavity state '{cavity}' must look like kind:value"))
        })?;
        let num = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| {
                CliError::Invalid(format!("bad number '{s}' in cavity state '{cavity}'"))
            })
        };
        let cavity = match kind {
            "fock" => {
                let n: usize = arg
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Invalid(format!("bad Fock level '{arg}'")))?;
                if n >= dim {
                    return Err(CliError::Invalid(format!(
                        "Fock level {n} must be below dim {dim}"
                    )));
                }
                CavitySpec::Fock(n)
            }
            "coherent" => {
                let alpha = match arg.split_once(',') {
                    Some((re, im)) => C64::new(num(re)?, num(im)?),
                    None => C64::new(num(arg)?, 0.0),
                };
                if !alpha.is_finite() {
                    return Err(CliError::Invalid(format!(
                        "coherent amplitude must be finite, got {alpha}"
                    )));
                }
                CavitySpec::Coherent(alpha)
            }
            "thermal" => {
                let nbar = num(arg)?;
                if !nbar.is_finite() || nbar < 0.0 {
                    return Err(CliError::Invalid(format!(
                        "thermal occupancy must be nonnegative, got {nbar}"
                    )));
                }
                CavitySpec::Thermal(nbar)
            }
            other => {
                return Err(CliError::Invalid(format!(
                    "unknown cavity state '{other}' (fock, coherent, thermal)"
                )))
            }
        };
        let truncated_weight = match cavity {
            CavitySpec::Fock(_) => 0.0,
            CavitySpec::Coherent(alpha) => 1.0 - coherent_weights(alpha, dim).iter().sum::<f64>(),
            CavitySpec::Thermal(nbar) => (nbar / (1.0 + nbar)).powi(dim as i32),
        };
        if truncated_weight > TRUNCATION_WARNING {
            warn!("initial cavity state {cavity:?} loses {truncated_weight:.3e} of its population to truncation at dim {dim}; renormalized");
        }
        Ok(Self {
            qubit,
            cavity,
            dim,
            truncated_weight,
        })
    }

    pub fn qubit_amplitudes(&self) -> [C64; 2] {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        match self.qubit {
            QubitSpec::Excited => [one, zero],
            QubitSpec::Ground => [zero, one],
            QubitSpec::Plus => [one.scale(std::f64::consts::FRAC_1_SQRT_2); 2],
        }
    }

    pub fn cavity_matrix(&self) -> DenseComplexMatrix {
        let d = self.dim;
        match self.cavity {
            CavitySpec::Fock(n) => {
                let mut m = DenseComplexMatrix::zeros(d, d);
                m[(n, n)] = C64::new(1.0, 0.0);
                m
            }
            CavitySpec::Coherent(alpha) => {
                let amps = coherent_amplitudes(alpha, d);
                let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
                DenseComplexMatrix::from_fn(d, d, |i, j| amps[i] * amps[j].conj() / norm)
            }
            CavitySpec::Thermal(nbar) => {
                let q = nbar / (1.0 + nbar);
                let w: Vec<f64> = (0..d).map(|n| q.powi(n as i32)).collect();
                let total: f64 = w.iter().sum();
                DenseComplexMatrix::from_real_diag(&w.iter().map(|x| x / total).collect::<Vec<_>>())
            }
        }
    }

    pub fn build(&self) -> BlockDensityMatrix {
        BlockDensityMatrix::product(self.qubit_amplitudes(), &self.cavity_matrix())
            .expect("cavity matrix is square")
    }
}

/// `e^{−|α|²/2} αⁿ/√n!` for `n < dim`, built by recurrence.
fn coherent_amplitudes(alpha: C64, dim: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(dim);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        out.push(c);
        c = c * alpha / ((n + 1) as f64).sqrt();
    }
    out
}

fn coherent_weights(alpha: C64, dim: usize) -> Vec<f64> {
    coherent_amplitudes(alpha, dim)
        .iter()
        .map(|c| c.norm_sqr())
        .collect()
}
