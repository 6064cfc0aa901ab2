//! The second-order factor `e^{−i(t²/2)[X,Y]}`.
//!
//! `[X,Y] = Ω·antiblock(A, B) + Ω·S·antiblock(C, D)·S` where `A … D` mix the
//! dissipation rates with single-leg shifts. The two parts commute, and each
//! anti-block exponential has the closed form
//! `exp(−iβ [[0, P], [Q, 0]]) = [[cos(β√(PQ)), −i sin(β√(PQ))/√(PQ) P], [−i sin(β√(QP))/√(QP) Q, cos(β√(QP))]]`
//! with `β = Ωt²/2`. The matrix functions are power series in `PQ`, so no
//! square root of the non-normal product is ever formed.
//!
//! The shifts make the two parts commute only in the untruncated space, so
//! the series are evaluated on an enlarged cutoff deep enough that no term can
//! reach its edge and come back, and the result is cropped. The factor is then
//! the exact compression of the untruncated map, up to the series tolerance.

use num_complex::Complex64 as C64;

use super::unitary::check_dim;
use crate::error::{Error, Result};
use crate::fock::VectorizedState;
use crate::linalg::DenseComplexMatrix;
use crate::model::{leg_shifts, swap_blocks, ModelParams};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Upper limit on `β²‖PQ‖` at the working cutoff.
pub const SERIES_BOUND_LIMIT: f64 = 30.0;
/// Target size of the last retained series term.
pub const SERIES_TOLERANCE: f64 = 1e-14;
const MAX_EXTRA_LEVELS: usize = 400;

/// `A = −ν a†⊗1 + (μ+ν)/2 · 1⊗(a†)ᵀ`, `B = μ a⊗1 − (μ+ν)/2 · 1⊗aᵀ`,
/// `C = ν 1⊗aᵀ − (μ+ν)/2 · a⊗1`, `D = −μ 1⊗(a†)ᵀ + (μ+ν)/2 · a†⊗1`.
#[derive(Clone, Debug)]
pub struct DissipationMixedOps {
    pub a: DenseComplexMatrix,
    pub b: DenseComplexMatrix,
    pub c: DenseComplexMatrix,
    pub d: DenseComplexMatrix,
}

pub fn dissipation_mixed_ops(p: &ModelParams) -> DissipationMixedOps {
    let s = leg_shifts(&p.trunc);
    let half = (p.mu + p.nu) / 2.0;
    DissipationMixedOps {
        a: &s.ad_left.scale_real(-p.nu) + &s.ad_right.scale_real(half),
        b: &s.a_left.scale_real(p.mu) - &s.a_right.scale_real(half),
        c: &s.a_right.scale_real(p.nu) - &s.a_left.scale_real(half),
        d: &s.ad_left.scale_real(half) - &s.ad_right.scale_real(p.mu),
    }
}

/// `[X, Y]` assembled from the mixed operators.
pub fn commutator_xy(p: &ModelParams) -> DenseComplexMatrix {
    let d2 = p.dim() * p.dim();
    let ops = dissipation_mixed_ops(p);
    let first = DenseComplexMatrix::from_blocks(4, d2, |i, j| match (i, j) {
        (0, 1) | (2, 3) => Some(ops.a.clone()),
        (1, 0) | (3, 2) => Some(ops.b.clone()),
        _ => None,
    });
    let second = DenseComplexMatrix::from_blocks(4, d2, |i, j| match (i, j) {
        (0, 1) | (2, 3) => Some(ops.c.clone()),
        (1, 0) | (3, 2) => Some(ops.d.clone()),
        _ => None,
    });
    (&first + &swap_blocks(&second, d2)).scale_real(p.coupling)
}

/// Matrix-free actions of the mixed operators on `vec(ρ)` of a `dim × dim` block.
#[derive(Clone, Copy, Debug)]
struct MixedActions {
    dim: usize,
    mu: f64,
    nu: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mixed {
    A,
    B,
    C,
    D,
}

impl MixedActions {
    // aρ, a†ρ, ρa, ρa† on a row-major block; each writes `coef ×` the result into `out`.
    fn lower_left(&self, x: &[C64], coef: f64, out: &mut [C64]) {
        let d = self.dim;
        for n in 0..d - 1 {
            let s = coef * ((n + 1) as f64).sqrt();
            for m in 0..d {
                out[n * d + m] += x[(n + 1) * d + m] * s;
            }
        }
    }

    fn raise_left(&self, x: &[C64], coef: f64, out: &mut [C64]) {
        let d = self.dim;
        for n in 1..d {
            let s = coef * (n as f64).sqrt();
            for m in 0..d {
                out[n * d + m] += x[(n - 1) * d + m] * s;
            }
        }
    }

    fn lower_right(&self, x: &[C64], coef: f64, out: &mut [C64]) {
        let d = self.dim;
        for n in 0..d {
            for m in 1..d {
                out[n * d + m] += x[n * d + m - 1] * (coef * (m as f64).sqrt());
            }
        }
    }

    fn raise_right(&self, x: &[C64], coef: f64, out: &mut [C64]) {
        let d = self.dim;
        for n in 0..d {
            for m in 0..d - 1 {
                out[n * d + m] += x[n * d + m + 1] * (coef * ((m + 1) as f64).sqrt());
            }
        }
    }

    fn apply(&self, which: Mixed, x: &[C64]) -> Vec<C64> {
        let half = (self.mu + self.nu) / 2.0;
        let mut out = vec![C64::new(0.0, 0.0); x.len()];
        match which {
            Mixed::A => {
                self.raise_left(x, -self.nu, &mut out);
                self.raise_right(x, half, &mut out);
            }
            Mixed::B => {
                self.lower_left(x, self.mu, &mut out);
                self.lower_right(x, -half, &mut out);
            }
            Mixed::C => {
                self.lower_right(x, self.nu, &mut out);
                self.lower_left(x, -half, &mut out);
            }
            Mixed::D => {
                self.raise_left(x, half, &mut out);
                self.raise_right(x, -self.mu, &mut out);
            }
        }
        out
    }

    /// `(cos(β√(PQ)) x, sin(β√(PQ))/√(PQ) x)` by their power series in `PQ`.
    fn cos_sinc(
        &self,
        p: Mixed,
        q: Mixed,
        x: &[C64],
        beta: f64,
        terms: usize,
        want_cos: bool,
    ) -> Vec<C64> {
        let mut power = x.to_vec();
        let mut acc = vec![C64::new(0.0, 0.0); x.len()];
        // cos: (−β²)ᵏ/(2k)!   sinc: β(−β²)ᵏ/(2k+1)!
        let mut coef = if want_cos { 1.0 } else { beta };
        for k in 0..terms {
            for (a, v) in acc.iter_mut().zip(&power) {
                *a += v * coef;
            }
            let (n1, n2) = if want_cos {
                (2 * k + 1, 2 * k + 2)
            } else {
                (2 * k + 2, 2 * k + 3)
            };
            coef *= -beta * beta / (n1 * n2) as f64;
            power = self.apply(p, &self.apply(q, &power));
        }
        acc
    }
}

/// `e^{−i(t²/2)[X,Y]}` realized as the commuting product of two anti-block
/// exponentials.
#[derive(Clone, Debug)]
pub struct CommutatorFactor {
    dim: usize,
    work_dim: usize,
    beta: f64,
    terms: usize,
    actions: MixedActions,
}

/// `(ν + c)(μ + c)` with `c = (μ+ν)/2`: every product `PQ` of mixed operators
/// maps a state supported on levels `≤ L` to levels `≤ L + 2` with norm at most
/// this constant times `L + 2`.
fn pair_constant(p: &ModelParams) -> f64 {
    let half = (p.mu + p.nu) / 2.0;
    (p.nu + half) * (p.mu + half)
}

/// Number of series terms after which the `k`-th term of the cosine series
/// is bounded by [`SERIES_TOLERANCE`]. Term `k` is bounded by
/// `Πⱼ₌₁ᵏ β²λ(D + 2j) / ((2j−1)(2j))`, the growth of the shifts along the
/// deepest path included.
fn terms_for(beta: f64, lambda: f64, dim: usize) -> Option<usize> {
    let mut bound = 1.0;
    for k in 1..=MAX_EXTRA_LEVELS / 2 {
        let j = k as f64;
        let ratio = beta * beta * lambda * (dim as f64 + 2.0 * j) / ((2.0 * j - 1.0) * 2.0 * j);
        bound *= ratio;
        if bound < SERIES_TOLERANCE && ratio < 1.0 {
            return Some(k + 1);
        }
    }
    None
}

impl CommutatorFactor {
    pub fn new(p: &ModelParams, t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidParams(format!(
                "time must be finite, got {t}"
            )));
        }
        let beta = p.coupling * t * t / 2.0;
        let d = p.dim();
        let lambda = pair_constant(p);
        let bound = beta * beta * lambda * d as f64;
        if bound > SERIES_BOUND_LIMIT {
            return Err(Error::SeriesDivergence {
                bound,
                limit: SERIES_BOUND_LIMIT,
            });
        }
        let terms = terms_for(beta, lambda, d).ok_or(Error::SeriesDivergence {
            bound,
            limit: SERIES_BOUND_LIMIT,
        })?;
        // Each term applies two shifts and the odd branch one more; a path that
        // leaves the retained levels and returns stays below this cutoff.
        let work_dim = d + 2 * terms + 2;
        Ok(Self {
            dim: d,
            work_dim,
            beta,
            terms,
            actions: MixedActions {
                dim: work_dim,
                mu: p.mu,
                nu: p.nu,
            },
        })
    }

    pub fn block_dim(&self) -> usize {
        self.dim
    }

    /// Cutoff used internally for the series.
    pub fn work_dim(&self) -> usize {
        self.work_dim
    }

    pub fn series_terms(&self) -> usize {
        self.terms
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Applies `exp(−iβ antiblock(P, Q))` to the block pair `(u, v)`.
    fn pair(&self, p: Mixed, q: Mixed, u: &[C64], v: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let act = &self.actions;
        let (b, n) = (self.beta, self.terms);
        let mut top = act.cos_sinc(p, q, u, b, n, true);
        let pv = act.apply(p, v);
        for (o, s) in top.iter_mut().zip(act.cos_sinc(p, q, &pv, b, n, false)) {
            *o += -I * s;
        }
        let mut bottom = act.cos_sinc(q, p, v, b, n, true);
        let qu = act.apply(q, u);
        for (o, s) in bottom.iter_mut().zip(act.cos_sinc(q, p, &qu, b, n, false)) {
            *o += -I * s;
        }
        (top, bottom)
    }

    pub fn apply(&self, state: &VectorizedState) -> Result<VectorizedState> {
        check_dim(state, self.dim)?;
        if self.beta == 0.0 {
            return Ok(state.clone());
        }
        let mut w = state.embed(self.work_dim);
        // S-conjugated part first: pairs (00, 10) and (01, 11) with P = C, Q = D.
        for (u, v) in [(0, 2), (1, 3)] {
            let (x, y) = self.pair(Mixed::C, Mixed::D, w.block(u), w.block(v));
            w.block_mut(u).copy_from_slice(&x);
            w.block_mut(v).copy_from_slice(&y);
        }
        for (u, v) in [(0, 1), (2, 3)] {
            let (x, y) = self.pair(Mixed::A, Mixed::B, w.block(u), w.block(v));
            w.block_mut(u).copy_from_slice(&x);
            w.block_mut(v).copy_from_slice(&y);
        }
        Ok(w.compress(self.dim))
    }

    pub fn to_dense(&self) -> DenseComplexMatrix {
        dense_from_apply(self.dim, |s| self.apply(s).expect("dimension checked"))
    }
}

/// Materializes a linear map on vectorized states column by column.
pub(crate) fn dense_from_apply(
    dim: usize,
    f: impl Fn(&VectorizedState) -> VectorizedState,
) -> DenseComplexMatrix {
    let n = 4 * dim * dim;
    let mut out = DenseComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = VectorizedState::zeros(dim);
        e.as_mut_slice()[j] = C64::new(1.0, 0.0);
        let col = f(&e);
        for (i, z) in col.as_slice().iter().enumerate() {
            out[(i, j)] = *z;
        }
    }
    out
}

/// `e^{−i(t²/2)[X,Y]}` in closed form.
pub fn exp_commutator_closed_form(p: &ModelParams, t: f64) -> Result<CommutatorFactor> {
    CommutatorFactor::new(p, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TruncationConfig;

    fn params(d: usize) -> ModelParams {
        ModelParams::new(1.0, 0.6, 0.4, 0.1, TruncationConfig::with_dim(d).unwrap()).unwrap()
    }

    #[test]
    fn actions_match_dense_operators() {
        let p = params(4);
        let ops = dissipation_mixed_ops(&p);
        let act = MixedActions {
            dim: 4,
            mu: p.mu,
            nu: p.nu,
        };
        let x: Vec<C64> = (0..16)
            .map(|k| C64::new((k as f64).sin(), (k as f64 * 0.3).cos()))
            .collect();
        for (which, m) in [
            (Mixed::A, &ops.a),
            (Mixed::B, &ops.b),
            (Mixed::C, &ops.c),
            (Mixed::D, &ops.d),
        ] {
            let want = m.matvec(&x).unwrap();
            let got = act.apply(which, &x);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() < 1e-14, "{which:?}");
            }
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let f = CommutatorFactor::new(&params(3), 0.0).unwrap();
        assert!((&f.to_dense() - &DenseComplexMatrix::identity(36)).max_abs() < 1e-15);
    }

    #[test]
    fn nu_zero_substitution() {
        let p =
            ModelParams::new(1.0, 0.6, 0.4, 0.0, TruncationConfig::with_dim(3).unwrap()).unwrap();
        let ops = dissipation_mixed_ops(&p);
        let s = leg_shifts(&p.trunc);
        assert!((&ops.a - &s.ad_right.scale_real(0.2)).max_abs() < 1e-15);
        assert!((&ops.c - &s.a_left.scale_real(-0.2)).max_abs() < 1e-15);
    }

    #[test]
    fn flags_divergent_series() {
        let p = params(12);
        assert!(matches!(
            CommutatorFactor::new(&p, 10.0),
            Err(Error::SeriesDivergence { .. })
        ));
    }

    #[test]
    fn tiny_dissipation_commutator_vanishes() {
        let p =
            ModelParams::new(1.0, 0.6, 2e-9, 1e-9, TruncationConfig::with_dim(4).unwrap()).unwrap();
        assert!(commutator_xy(&p).max_abs() <= 0.6 * 1e-8);
    }
}
