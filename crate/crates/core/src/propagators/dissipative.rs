//! Closed form of the dissipative factor `e^{tY} = diag(e^{tL}, e^{tL}, e^{tL}, e^{tL})`
//! through the disentangled product
//! `e^{tL} = e^{(μ−ν)t/2} e^{G K₊} e^{−2 log F K₃} e^{E K₋}`.
//!
//! `K₋` only lowers and `K₊` only raises, so at a finite cutoff the product is
//! the exact compression of the untruncated `e^{tL}` onto the retained levels.

use num_complex::Complex64 as C64;

use super::efg::{efg, EfgValues};
use super::unitary::check_dim;
use crate::error::Result;
use crate::fock::VectorizedState;
use crate::linalg::DenseComplexMatrix;
use crate::model::{su11_generators, ModelParams};

/// `Σₖ cᵏ/k! Mᵏ` for nilpotent `M`, summed until the power vanishes identically.
///
/// Returns the sum and the number of nonzero terms (including the identity).
pub fn nilpotent_exp(
    m: &DenseComplexMatrix,
    c: f64,
    max_terms: usize,
) -> (DenseComplexMatrix, usize) {
    let n = m.rows();
    let mut sum = DenseComplexMatrix::identity(n);
    let mut power = DenseComplexMatrix::identity(n);
    let mut coef = 1.0;
    let mut terms = 1;
    for k in 1..=max_terms {
        power = &power * m;
        if power.max_abs() == 0.0 {
            break;
        }
        terms += 1;
        coef *= c / k as f64;
        sum += &power.scale_real(coef);
    }
    (sum, terms)
}

#[derive(Clone, Debug)]
pub struct DissipativeFactor {
    dim: usize,
    efg: EfgValues,
    /// `e^{tL}` assembled from the disentangled product.
    exp_tl: DenseComplexMatrix,
    raise_terms: usize,
    lower_terms: usize,
}

impl DissipativeFactor {
    pub fn new(p: &ModelParams, t: f64) -> Result<Self> {
        let efg = efg(t, p.mu, p.nu)?;
        let g = su11_generators(&p.trunc);
        let d = p.dim();
        let (raise, raise_terms) = nilpotent_exp(&g.k_plus, efg.g, d + 1);
        let (lower, lower_terms) = nilpotent_exp(&g.k_minus, efg.e, d + 1);
        // e^{−2 log F K₃}: K₃ is diagonal.
        let middle: Vec<C64> =
            g.k3.diag()
                .iter()
                .map(|k| C64::new((-2.0 * efg.log_f * k.re).exp(), 0.0))
                .collect();
        let middle = DenseComplexMatrix::from_diag(&middle);
        let scalar = ((p.mu - p.nu) * t / 2.0).exp();
        let exp_tl = (&(&raise * &middle) * &lower).scale_real(scalar);
        Ok(Self {
            dim: d,
            efg,
            exp_tl,
            raise_terms,
            lower_terms,
        })
    }

    pub fn block_dim(&self) -> usize {
        self.dim
    }

    pub fn efg(&self) -> EfgValues {
        self.efg
    }

    /// The `D² × D²` map `e^{tL}`.
    pub fn exp_tl(&self) -> &DenseComplexMatrix {
        &self.exp_tl
    }

    /// Nonzero terms in the `e^{GK₊}` and `e^{EK₋}` series. Both equal the
    /// cutoff `D` whenever `G` and `E` are nonzero.
    pub fn series_terms(&self) -> (usize, usize) {
        (self.raise_terms, self.lower_terms)
    }

    pub fn to_dense(&self) -> DenseComplexMatrix {
        let n = self.exp_tl.rows();
        DenseComplexMatrix::from_blocks(4, n, |i, j| (i == j).then(|| self.exp_tl.clone()))
    }

    pub fn apply(&self, state: &VectorizedState) -> Result<VectorizedState> {
        check_dim(state, self.dim)?;
        let mut out = VectorizedState::zeros(self.dim);
        for k in 0..4 {
            let v = self.exp_tl.matvec(state.block(k))?;
            out.block_mut(k).copy_from_slice(&v);
        }
        Ok(out)
    }
}

/// `e^{tY}` in closed form; `t` must be nonnegative.
pub fn exp_ty_closed_form(p: &ModelParams, t: f64) -> Result<DissipativeFactor> {
    DissipativeFactor::new(p, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fock::TruncationConfig;

    fn params(d: usize) -> ModelParams {
        ModelParams::new(1.0, 0.5, 0.4, 0.15, TruncationConfig::with_dim(d).unwrap()).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let f = DissipativeFactor::new(&params(4), 0.0).unwrap();
        assert!((&f.to_dense() - &DenseComplexMatrix::identity(64)).max_abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_time() {
        assert!(matches!(
            DissipativeFactor::new(&params(4), -0.1),
            Err(Error::NegativeTime(_))
        ));
    }

    #[test]
    fn series_terminate_at_cutoff() {
        for d in 2..8 {
            let f = DissipativeFactor::new(&params(d), 0.7).unwrap();
            assert_eq!(f.series_terms(), (d, d));
        }
    }

    #[test]
    fn k_plus_power_at_cutoff_vanishes() {
        let d = 5;
        let g = su11_generators(&TruncationConfig::with_dim(d).unwrap());
        let mut p = DenseComplexMatrix::identity(d * d);
        for _ in 0..d - 1 {
            p = &p * &g.k_plus;
        }
        assert!(p.max_abs() > 0.0);
        assert_eq!((&p * &g.k_plus).max_abs(), 0.0);
        let mut q = DenseComplexMatrix::identity(d * d);
        for _ in 0..d {
            q = &q * &g.k_minus;
        }
        assert_eq!(q.max_abs(), 0.0);
    }
}
