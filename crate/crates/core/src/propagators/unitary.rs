//! Closed form of the coherent factor `e^{−itX}`.
//!
//! `X` splits into a diagonal part and two exchange parts acting on the left
//! and right Fock legs; all three commute, so the factor is a row-block phase
//! times a tensor product of one 2×2 operator matrix per leg. Each leg matrix
//! comes from
//! `exp(−iα [[0, M], [M†, 0]]) = [[cos(α√(MM†)), −i sin(α√(MM†))/√(MM†) M], [−i sin(α√(M†M))/√(M†M) M†, cos(α√(M†M))]]`
//! with `α = Ωt`.
//!
//! The functions of `N + 1` are evaluated on `1, …, D`, so the factor is the
//! exact compression of the untruncated map onto the retained levels.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{annihilation, creation, VectorizedState};
use crate::linalg::{kron, DenseComplexMatrix};
use crate::model::ModelParams;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Diagonal functions of the number operator used by the coherent factor.
#[derive(Clone, Debug)]
pub struct NumberFunctions {
    /// `cos(α√(N+1))`
    pub cos_up: Vec<f64>,
    /// `cos(α√N)`
    pub cos_n: Vec<f64>,
    /// `sin(α√(N+1))/√(N+1)`
    pub sinc_up: Vec<f64>,
    /// `sin(α√N)/√N`, with the `n = 0` entry set to its limit `α`.
    pub sinc_n: Vec<f64>,
    /// `e^{−itω₀N}`
    pub phase_left: Vec<C64>,
    /// `e^{itω₀N}`
    pub phase_right: Vec<C64>,
}

fn sinc_sqrt(alpha: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        alpha
    } else {
        let r = lambda.sqrt();
        (alpha * r).sin() / r
    }
}

impl NumberFunctions {
    pub fn new(p: &ModelParams, t: f64) -> Self {
        let alpha = p.coupling * t;
        let d = p.dim();
        let levels = (0..d).map(|n| n as f64);
        Self {
            cos_up: levels
                .clone()
                .map(|n| (alpha * (n + 1.0).sqrt()).cos())
                .collect(),
            cos_n: levels.clone().map(|n| (alpha * n.sqrt()).cos()).collect(),
            sinc_up: levels.clone().map(|n| sinc_sqrt(alpha, n + 1.0)).collect(),
            sinc_n: levels.clone().map(|n| sinc_sqrt(alpha, n)).collect(),
            phase_left: levels
                .clone()
                .map(|n| C64::from_polar(1.0, -t * p.omega0 * n))
                .collect(),
            phase_right: levels
                .map(|n| C64::from_polar(1.0, t * p.omega0 * n))
                .collect(),
        }
    }
}

fn diag_times(
    phase: &[C64],
    f: &[f64],
    m: Option<&DenseComplexMatrix>,
    coef: C64,
) -> DenseComplexMatrix {
    let d: Vec<C64> = phase.iter().zip(f).map(|(p, x)| p * x * coef).collect();
    let dm = DenseComplexMatrix::from_diag(&d);
    match m {
        Some(m) => &dm * m,
        None => dm,
    }
}

/// `e^{−itX}` stored as per-leg operator matrices.
#[derive(Clone, Debug)]
pub struct UnitaryFactor {
    dim: usize,
    /// Left-leg operators including `e^{−itω₀N}`; index `[i][k]`.
    left: [[DenseComplexMatrix; 2]; 2],
    /// Right-leg superoperator factors including `e^{itω₀N}`; index `[j][l]`.
    right: [[DenseComplexMatrix; 2]; 2],
    /// `e^{−itω₀}` raised to `j − i` for output block `(i, j)`.
    row_phase: [[C64; 2]; 2],
}

impl UnitaryFactor {
    pub fn new(p: &ModelParams, t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidParams(format!(
                "time must be finite, got {t}"
            )));
        }
        let f = NumberFunctions::new(p, t);
        let a = annihilation(&p.trunc);
        let ad = creation(&p.trunc);
        let one = C64::new(1.0, 0.0);
        let (ul, ur) = (&f.phase_left, &f.phase_right);
        let left = [
            [
                diag_times(ul, &f.cos_up, None, one),
                diag_times(ul, &f.sinc_up, Some(&a), -I),
            ],
            [
                diag_times(ul, &f.sinc_n, Some(&ad), -I),
                diag_times(ul, &f.cos_n, None, one),
            ],
        ];
        let right = [
            [
                diag_times(ur, &f.cos_up, None, one),
                diag_times(ur, &f.sinc_up, Some(&ad.transpose()), I),
            ],
            [
                diag_times(ur, &f.sinc_n, Some(&a.transpose()), I),
                diag_times(ur, &f.cos_n, None, one),
            ],
        ];
        let w = C64::from_polar(1.0, -t * p.omega0);
        let row_phase = [[one, w], [w.conj(), one]];
        Ok(Self {
            dim: p.dim(),
            left,
            right,
            row_phase,
        })
    }

    pub fn block_dim(&self) -> usize {
        self.dim
    }

    /// Sixteen blocks `e^{∓itω₀}(left[i][k] ⊗ right[j][l])`, rows `(i,j)`, columns `(k,l)`.
    pub fn to_dense(&self) -> DenseComplexMatrix {
        let d2 = self.dim * self.dim;
        DenseComplexMatrix::from_blocks(4, d2, |r, c| {
            let (i, j) = (r / 2, r % 2);
            let (k, l) = (c / 2, c % 2);
            Some(kron(&self.left[i][k], &self.right[j][l]).scale(self.row_phase[i][j]))
        })
    }

    /// Operator-form action `ρ'ᵢⱼ = phase · Σₖₗ left[i][k] ρₖₗ right[j][l]ᵀ`.
    pub fn apply(&self, state: &VectorizedState) -> Result<VectorizedState> {
        check_dim(state, self.dim)?;
        let d = self.dim;
        let blocks: Vec<DenseComplexMatrix> = (0..4)
            .map(|k| {
                DenseComplexMatrix::from_vec(d, d, state.block(k).to_vec()).expect("block size")
            })
            .collect();
        let right_t: Vec<Vec<DenseComplexMatrix>> = self
            .right
            .iter()
            .map(|row| row.iter().map(|m| m.transpose()).collect())
            .collect();
        let mut out = VectorizedState::zeros(d);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = DenseComplexMatrix::zeros(d, d);
                for k in 0..2 {
                    for l in 0..2 {
                        acc += &(&(&self.left[i][k] * &blocks[2 * k + l]) * &right_t[j][l]);
                    }
                }
                let acc = acc.scale(self.row_phase[i][j]);
                out.block_mut(2 * i + j).copy_from_slice(acc.as_slice());
            }
        }
        Ok(out)
    }
}

pub(crate) fn check_dim(state: &VectorizedState, dim: usize) -> Result<()> {
    if state.block_dim() != dim {
        return Err(Error::DimensionMismatch {
            op: "propagator apply",
            left: (dim, dim),
            right: (state.block_dim(), state.block_dim()),
        });
    }
    Ok(())
}

/// `e^{−itX}` in closed form.
pub fn exp_itx_closed_form(p: &ModelParams, t: f64) -> Result<UnitaryFactor> {
    UnitaryFactor::new(p, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TruncationConfig;
    use crate::model::su11_generators;

    fn params(d: usize, om: f64) -> ModelParams {
        ModelParams::new(1.0, om, 0.3, 0.1, TruncationConfig::with_dim(d).unwrap()).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let u = UnitaryFactor::new(&params(4, 0.7), 0.0).unwrap().to_dense();
        assert!((&u - &DenseComplexMatrix::identity(64)).max_abs() < 1e-15);
    }

    #[test]
    fn uncoupled_factor_is_pure_phase() {
        let p = params(3, 0.0);
        let t = 0.8;
        let u = UnitaryFactor::new(&p, t).unwrap().to_dense();
        let k0 = su11_generators(&p.trunc).k0;
        let d2 = 9;
        for (b, shift) in [(0usize, 0.0), (1, 1.0), (2, -1.0), (3, 0.0)] {
            for k in 0..d2 {
                let want = C64::from_polar(1.0, -t * (k0[(k, k)].re + shift));
                assert!((u[(b * d2 + k, b * d2 + k)] - want).norm() < 1e-14);
            }
        }
        let offdiag: f64 = (0..36)
            .flat_map(|i| (0..36).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| u[(i, j)].norm())
            .fold(0.0, f64::max);
        assert_eq!(offdiag, 0.0);
    }

    #[test]
    fn operator_apply_matches_dense() {
        let p = params(4, 0.9);
        let u = UnitaryFactor::new(&p, 0.6).unwrap();
        let data: Vec<C64> = (0..64)
            .map(|k| C64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let s = VectorizedState::new(4, data).unwrap();
        let via_dense = u.to_dense().matvec(s.as_slice()).unwrap();
        let via_ops = u.apply(&s).unwrap();
        for (x, y) in via_dense.iter().zip(via_ops.as_slice()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_wrong_state_dimension() {
        let u = UnitaryFactor::new(&params(4, 0.9), 0.6).unwrap();
        assert!(u.apply(&VectorizedState::zeros(3)).is_err());
    }
}
