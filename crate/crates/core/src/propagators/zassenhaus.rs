use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::commutator::dense_from_apply;
use super::unitary::check_dim;
use super::{CommutatorFactor, DissipativeFactor, PropagatorFactor, UnitaryFactor};
use crate::error::{Error, Result};
use crate::fock::VectorizedState;
use crate::linalg::{commutator, DenseComplexMatrix};
use crate::model::{build_x, build_y, ModelParams};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Extra levels used when exponentiating the nested commutator.
const NESTED_PAD: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZassenhausOrder {
    /// Truncated after the `t²` factor; local error `O(t³)`.
    Two,
    /// Adds the `t³` factor; local error `O(t⁴)`.
    Three,
}

impl ZassenhausOrder {
    pub fn as_u8(self) -> u8 {
        match self {
            Self::Two => 2,
            Self::Three => 3,
        }
    }
}

impl TryFrom<u8> for ZassenhausOrder {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            _ => Err(Error::InvalidParams(format!(
                "Zassenhaus order must be 2 or 3, got {v}"
            ))),
        }
    }
}

/// `2[[A,B],B] + [[A,B],A]` with `A = −iX`, `B = Y`.
pub fn nested_commutator(p: &ModelParams) -> DenseComplexMatrix {
    let a = build_x(p).scale(-I);
    let b = build_y(p);
    let ab = commutator(&a, &b);
    &commutator(&ab, &b).scale_real(2.0) + &commutator(&ab, &a)
}

/// `e^{−(t³/6)(2[[A,B],B] + [[A,B],A])}` on a padded cutoff, compressed back.
///
/// The exponential is applied to each state by its Taylor series, which for
/// the small `t³/6` scale converges in a handful of sparse matrix-vector
/// products and avoids a dense exponential of the padded generator.
#[derive(Clone, Debug)]
pub struct NestedCommutatorFactor {
    dim: usize,
    work_dim: usize,
    /// `−(t³/6)` times the nested commutator, stored row-sparse.
    rows: Vec<Vec<(usize, C64)>>,
}

const TAYLOR_TOLERANCE: f64 = 1e-17;
const TAYLOR_MAX_TERMS: usize = 200;

impl NestedCommutatorFactor {
    pub fn new(p: &ModelParams, t: f64) -> Result<Self> {
        let padded = p.padded(NESTED_PAD);
        let gen = nested_commutator(&padded).scale_real(-t.powi(3) / 6.0);
        let rows = (0..gen.rows())
            .map(|i| {
                gen.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| z.norm() != 0.0)
                    .map(|(j, z)| (j, *z))
                    .collect()
            })
            .collect();
        Ok(Self {
            dim: p.dim(),
            work_dim: padded.dim(),
            rows,
        })
    }

    pub fn block_dim(&self) -> usize {
        self.dim
    }

    fn matvec(&self, v: &[C64]) -> Vec<C64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(j, z)| z * v[*j]).sum())
            .collect()
    }

    pub fn apply(&self, state: &VectorizedState) -> Result<VectorizedState> {
        check_dim(state, self.dim)?;
        let w = state.embed(self.work_dim);
        let scale = w.norm_l2().max(f64::MIN_POSITIVE);
        let mut acc = w.as_slice().to_vec();
        let mut term = acc.clone();
        let mut converged = false;
        for k in 1..=TAYLOR_MAX_TERMS {
            term = self.matvec(&term);
            let inv = 1.0 / k as f64;
            term.iter_mut().for_each(|z| *z *= inv);
            let size = term.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            acc.iter_mut().zip(&term).for_each(|(a, z)| *a += z);
            if size <= TAYLOR_TOLERANCE * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ExpmNonConvergence("Taylor series of the t^3 factor"));
        }
        Ok(VectorizedState::new(self.work_dim, acc)?.compress(self.dim))
    }

    pub fn to_dense(&self) -> DenseComplexMatrix {
        dense_from_apply(self.dim, |s| self.apply(s).expect("dimension checked"))
    }
}

/// The ordered factors at one time; `factors()[0]` acts first.
#[derive(Clone, Debug)]
pub struct ZassenhausPropagator {
    t: f64,
    order: ZassenhausOrder,
    factors: Vec<PropagatorFactor>,
}

impl ZassenhausPropagator {
    pub fn new(p: &ModelParams, t: f64, order: ZassenhausOrder) -> Result<Self> {
        p.validate()?;
        if !t.is_finite() || t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let mut factors: Vec<PropagatorFactor> = vec![
            UnitaryFactor::new(p, t)?.into(),
            DissipativeFactor::new(p, t)?.into(),
            CommutatorFactor::new(p, t)?.into(),
        ];
        if order == ZassenhausOrder::Three {
            factors.push(NestedCommutatorFactor::new(p, t)?.into());
        }
        Ok(Self { t, order, factors })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn order(&self) -> ZassenhausOrder {
        self.order
    }

    pub fn factors(&self) -> &[PropagatorFactor] {
        &self.factors
    }

    pub fn propagate(&self, rho0: &VectorizedState) -> Result<VectorizedState> {
        let mut s = rho0.clone();
        for f in &self.factors {
            s = f.apply(&s)?;
        }
        Ok(s)
    }

    /// Product of the factors as one `4D² × 4D²` matrix.
    pub fn to_dense(&self) -> DenseComplexMatrix {
        let dim = self.factors[0].block_dim();
        dense_from_apply(dim, |s| self.propagate(s).expect("dimension checked"))
    }
}

/// `ρ̂(t)` from `ρ̂(0)` by the Zassenhaus product of the given order.
pub fn zassenhaus_propagate(
    p: &ModelParams,
    t: f64,
    rho0: &VectorizedState,
    order: ZassenhausOrder,
) -> Result<VectorizedState> {
    check_dim(rho0, p.dim())?;
    ZassenhausPropagator::new(p, t, order)?.propagate(rho0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TruncationConfig;

    #[test]
    fn zero_time_leaves_state() {
        let p =
            ModelParams::new(1.0, 0.5, 0.3, 0.1, TruncationConfig::with_dim(4).unwrap()).unwrap();
        let data: Vec<C64> = (0..64)
            .map(|k| C64::new(k as f64, -(k as f64) / 3.0))
            .collect();
        let s = VectorizedState::new(4, data).unwrap();
        for order in [ZassenhausOrder::Two, ZassenhausOrder::Three] {
            assert!(
                zassenhaus_propagate(&p, 0.0, &s, order)
                    .unwrap()
                    .max_abs_diff(&s)
                    < 1e-13
            );
        }
    }

    #[test]
    fn rejects_negative_time_and_bad_dimension() {
        let p =
            ModelParams::new(1.0, 0.5, 0.3, 0.1, TruncationConfig::with_dim(4).unwrap()).unwrap();
        let s = VectorizedState::zeros(4);
        assert!(matches!(
            zassenhaus_propagate(&p, -0.5, &s, ZassenhausOrder::Two),
            Err(Error::NegativeTime(_))
        ));
        assert!(
            zassenhaus_propagate(&p, 0.5, &VectorizedState::zeros(3), ZassenhausOrder::Two)
                .is_err()
        );
    }

    #[test]
    fn order_round_trip() {
        for o in [ZassenhausOrder::Two, ZassenhausOrder::Three] {
            assert_eq!(ZassenhausOrder::try_from(o.as_u8()).unwrap(), o);
        }
        assert!(ZassenhausOrder::try_from(4).is_err());
    }
}
