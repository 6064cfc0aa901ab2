//! Physical model at a given truncation: Hamiltonian blocks, the su(1,1)
//! generators, and the superoperators `X` (coherent part) and `Y`
//! (dissipative part) of `∂ρ̂/∂t = (−iX + Y) ρ̂`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{annihilation, creation, identity, number, TruncationConfig};
use crate::linalg::{kron, DenseComplexMatrix};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Atomic and cavity angular frequency ω₀.
    pub omega0: f64,
    /// Atom–cavity coupling Ω.
    pub coupling: f64,
    /// Photon loss rate μ.
    pub mu: f64,
    /// Incoherent pumping rate ν.
    pub nu: f64,
    pub trunc: TruncationConfig,
}

impl ModelParams {
    pub fn new(
        omega0: f64,
        coupling: f64,
        mu: f64,
        nu: f64,
        trunc: TruncationConfig,
    ) -> Result<Self> {
        let p = Self {
            omega0,
            coupling,
            mu,
            nu,
            trunc,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega0", self.omega0),
            ("Omega", self.coupling),
            ("mu", self.mu),
            ("nu", self.nu),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if self.nu < 0.0 {
            return Err(Error::InvalidParams(format!(
                "requires nu >= 0, got nu = {}",
                self.nu
            )));
        }
        if self.mu <= self.nu {
            return Err(Error::InvalidParams(format!(
                "requires mu > nu, got mu = {} and nu = {}",
                self.mu, self.nu
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.trunc.dim()
    }

    /// Same physics at a larger cutoff.
    pub fn padded(&self, extra: usize) -> Self {
        Self {
            trunc: self.trunc.padded(extra),
            ..*self
        }
    }
}

/// `H_JC = [[A, B], [C, D]]` with `A = ω₀/2 + ω₀N`, `B = Ωa`, `C = Ωa†`, `D = −ω₀/2 + ω₀N`.
#[derive(Clone, Debug)]
pub struct HamiltonianBlocks {
    pub a: DenseComplexMatrix,
    pub b: DenseComplexMatrix,
    pub c: DenseComplexMatrix,
    pub d: DenseComplexMatrix,
}

pub fn hamiltonian_blocks(p: &ModelParams) -> HamiltonianBlocks {
    let n = number(&p.trunc);
    let half = C64::new(p.omega0 / 2.0, 0.0);
    let wn = n.scale_real(p.omega0);
    HamiltonianBlocks {
        a: wn.shift(half),
        b: annihilation(&p.trunc).scale_real(p.coupling),
        c: creation(&p.trunc).scale_real(p.coupling),
        d: wn.shift(-half),
    }
}

/// Single-leg shift superoperators acting on `vec(ρ)`.
#[derive(Clone, Debug)]
pub struct LegShifts {
    /// `a ⊗ 1`: `vec(aρ)`.
    pub a_left: DenseComplexMatrix,
    /// `a† ⊗ 1`: `vec(a†ρ)`.
    pub ad_left: DenseComplexMatrix,
    /// `1 ⊗ aᵀ`: `vec(ρa)`.
    pub a_right: DenseComplexMatrix,
    /// `1 ⊗ (a†)ᵀ`: `vec(ρa†)`.
    pub ad_right: DenseComplexMatrix,
}

pub fn leg_shifts(cfg: &TruncationConfig) -> LegShifts {
    let a = annihilation(cfg);
    let ad = creation(cfg);
    let one = identity(cfg);
    LegShifts {
        a_left: kron(&a, &one),
        ad_left: kron(&ad, &one),
        a_right: kron(&one, &a.transpose()),
        ad_right: kron(&one, &ad.transpose()),
    }
}

/// `K₊ = a†⊗aᵀ`, `K₋ = a⊗(a†)ᵀ`, `K₃ = ½(N⊗1 + 1⊗N + 1⊗1)`, `K₀ = N⊗1 − 1⊗N`.
#[derive(Clone, Debug)]
pub struct Su11Generators {
    pub k_plus: DenseComplexMatrix,
    pub k_minus: DenseComplexMatrix,
    pub k3: DenseComplexMatrix,
    pub k0: DenseComplexMatrix,
}

pub fn su11_generators(cfg: &TruncationConfig) -> Su11Generators {
    let a = annihilation(cfg);
    let ad = creation(cfg);
    let n = number(cfg);
    let one = identity(cfg);
    let n_left = kron(&n, &one);
    let n_right = kron(&one, &n);
    let d2 = cfg.dim() * cfg.dim();
    Su11Generators {
        k_plus: kron(&ad, &a.transpose()),
        k_minus: kron(&a, &ad.transpose()),
        k3: (&(&n_left + &n_right) + &DenseComplexMatrix::identity(d2)).scale_real(0.5),
        k0: &n_left - &n_right,
    }
}

/// `S X S` for the block permutation exchanging blocks 01 and 10.
pub fn swap_blocks(m: &DenseComplexMatrix, block_dim: usize) -> DenseComplexMatrix {
    const PERM: [usize; 4] = [0, 2, 1, 3];
    DenseComplexMatrix::from_blocks(4, block_dim, |i, j| {
        Some(m.sub_block(
            PERM[i] * block_dim,
            PERM[j] * block_dim,
            block_dim,
            block_dim,
        ))
    })
}

/// The three mutually commuting pieces of `X`: the diagonal ω₀ part, the
/// right-leg exchange and the (block-swapped) left-leg exchange.
pub fn x_commuting_parts(p: &ModelParams) -> [DenseComplexMatrix; 3] {
    let d2 = p.dim() * p.dim();
    let g = su11_generators(&p.trunc);
    let s = leg_shifts(&p.trunc);
    let w0 = C64::new(p.omega0, 0.0);
    let wk0 = g.k0.scale(w0);
    let diag_part = DenseComplexMatrix::from_blocks(4, d2, |i, j| match (i, j) {
        (0, 0) | (3, 3) => Some(wk0.clone()),
        (1, 1) => Some(wk0.shift(w0)),
        (2, 2) => Some(wk0.shift(-w0)),
        _ => None,
    });
    let right = DenseComplexMatrix::from_blocks(4, d2, |i, j| match (i, j) {
        (0, 1) | (2, 3) => Some(s.ad_right.clone()),
        (1, 0) | (3, 2) => Some(s.a_right.clone()),
        _ => None,
    })
    .scale_real(-p.coupling);
    let left_swapped = DenseComplexMatrix::from_blocks(4, d2, |i, j| match (i, j) {
        (0, 1) | (2, 3) => Some(s.a_left.clone()),
        (1, 0) | (3, 2) => Some(s.ad_left.clone()),
        _ => None,
    })
    .scale_real(p.coupling);
    [diag_part, right, swap_blocks(&left_swapped, d2)]
}

/// The Hermitian coherent superoperator `X` (4D² × 4D²).
pub fn build_x(p: &ModelParams) -> DenseComplexMatrix {
    let d2 = p.dim() * p.dim();
    let g = su11_generators(&p.trunc);
    let s = leg_shifts(&p.trunc);
    let w0 = C64::new(p.omega0, 0.0);
    let wk0 = g.k0.scale(w0);
    let om = p.coupling;
    DenseComplexMatrix::from_blocks(4, d2, |i, j| match (i, j) {
        (0, 0) | (3, 3) => Some(wk0.clone()),
        (1, 1) => Some(wk0.shift(w0)),
        (2, 2) => Some(wk0.shift(-w0)),
        (0, 1) | (2, 3) => Some(s.ad_right.scale_real(-om)),
        (1, 0) | (3, 2) => Some(s.a_right.scale_real(-om)),
        (0, 2) | (1, 3) => Some(s.a_left.scale_real(om)),
        (2, 0) | (3, 1) => Some(s.ad_left.scale_real(om)),
        _ => None,
    })
}

/// `L = νK₊ + μK₋ − (μ+ν)K₃ + (μ−ν)/2` (D² × D²).
pub fn build_l(p: &ModelParams) -> DenseComplexMatrix {
    let g = su11_generators(&p.trunc);
    let mut l = g.k_plus.scale_real(p.nu);
    l += &g.k_minus.scale_real(p.mu);
    l += &g.k3.scale_real(-(p.mu + p.nu));
    l.shift(C64::new((p.mu - p.nu) / 2.0, 0.0))
}

/// `Y = diag(L, L, L, L)`.
pub fn build_y(p: &ModelParams) -> DenseComplexMatrix {
    let l = build_l(p);
    DenseComplexMatrix::from_blocks(4, l.rows(), |i, j| (i == j).then(|| l.clone()))
}

/// `−iX + Y`.
pub fn full_generator(p: &ModelParams) -> DenseComplexMatrix {
    &build_x(p).scale(-I) + &build_y(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;

    fn params(d: usize, w: f64, om: f64, mu: f64, nu: f64) -> ModelParams {
        ModelParams::new(w, om, mu, nu, TruncationConfig::with_dim(d).unwrap()).unwrap()
    }

    #[test]
    fn rejects_mu_not_above_nu() {
        let t = TruncationConfig::with_dim(4).unwrap();
        let e = ModelParams::new(1.0, 0.5, 0.1, 0.3, t).unwrap_err();
        assert!(e.to_string().contains("requires mu > nu"));
        assert!(ModelParams::new(1.0, 0.5, 0.2, 0.2, t).is_err());
        assert!(ModelParams::new(1.0, 0.5, 0.2, -0.1, t).is_err());
        assert!(ModelParams::new(f64::NAN, 0.5, 0.2, 0.1, t).is_err());
    }

    #[test]
    fn hamiltonian_blocks_zero_frequencies() {
        let h = hamiltonian_blocks(&params(3, 0.0, 0.0, 0.3, 0.1));
        for m in [&h.a, &h.b, &h.c, &h.d] {
            assert_eq!(m.max_abs(), 0.0);
        }
    }

    #[test]
    fn hamiltonian_blocks_diagonals() {
        let h = hamiltonian_blocks(&params(3, 2.0, 0.0, 0.3, 0.1));
        assert_eq!(h.a, DenseComplexMatrix::from_real_diag(&[1.0, 3.0, 5.0]));
        assert_eq!(h.d, DenseComplexMatrix::from_real_diag(&[-1.0, 1.0, 3.0]));
    }

    #[test]
    fn c_block_is_dagger_of_b() {
        let h = hamiltonian_blocks(&params(5, 1.3, 0.7, 0.3, 0.1));
        assert_eq!(h.c, h.b.dagger());
        assert_eq!(h.a, h.a.dagger());
    }

    #[test]
    fn uncoupled_x_is_block_diagonal() {
        let p = params(3, 1.7, 0.0, 0.3, 0.1);
        let x = build_x(&p);
        let d2 = 9;
        let k0 = su11_generators(&p.trunc).k0.scale_real(1.7);
        for bi in 0..4 {
            for bj in 0..4 {
                let blk = x.sub_block(bi * d2, bj * d2, d2, d2);
                if bi != bj {
                    assert_eq!(blk.max_abs(), 0.0);
                }
            }
        }
        let w = C64::new(1.7, 0.0);
        assert_eq!(x.sub_block(d2, d2, d2, d2), k0.shift(w));
        assert_eq!(x.sub_block(2 * d2, 2 * d2, d2, d2), k0.shift(-w));
    }

    #[test]
    fn x_is_hermitian() {
        let p = params(4, 0.9, 1.3, 0.3, 0.1);
        let x = build_x(&p);
        assert!((&x - &x.dagger()).max_abs() < 1e-12);
    }

    #[test]
    fn x_parts_sum_to_x() {
        let p = params(4, 0.9, 1.3, 0.3, 0.1);
        let [a, b, c] = x_commuting_parts(&p);
        assert_eq!(&(&a + &b) + &c, build_x(&p));
    }

    #[test]
    fn x_parts_commute_even_at_cutoff() {
        let p = params(4, 0.9, 1.3, 0.3, 0.1);
        let parts = x_commuting_parts(&p);
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(commutator(&parts[i], &parts[j]).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn l_substitution_mu_one_nu_zero() {
        let p = params(4, 1.0, 0.5, 1.0, 0.0);
        let g = su11_generators(&p.trunc);
        let want = (&g.k_minus - &g.k3).shift(C64::new(0.5, 0.0));
        assert!((&build_l(&p) - &want).max_abs() < 1e-15);
    }

    #[test]
    fn y_is_block_diagonal_copy_of_l() {
        let p = params(3, 1.0, 0.5, 0.3, 0.1);
        let y = build_y(&p);
        let want = kron(&DenseComplexMatrix::identity(4), &build_l(&p));
        assert_eq!((&y - &want).max_abs(), 0.0);
    }

    #[test]
    fn generator_diagonals() {
        let g = su11_generators(&TruncationConfig::with_dim(4).unwrap());
        for n in 0..4 {
            for m in 0..4 {
                let k = n * 4 + m;
                assert_eq!(g.k3[(k, k)].re, 0.5 * (n + m + 1) as f64);
                assert_eq!(g.k0[(k, k)].re, n as f64 - m as f64);
            }
        }
    }

    #[test]
    fn k_plus_two_levels() {
        // vec|0⟩⟨0| is index 0, vec|1⟩⟨1| is index 3.
        let g = su11_generators(&TruncationConfig::with_dim(2).unwrap());
        let mut nonzero = vec![];
        for i in 0..4 {
            for j in 0..4 {
                if g.k_plus[(i, j)].norm() != 0.0 {
                    nonzero.push((i, j, g.k_plus[(i, j)]));
                }
            }
        }
        assert_eq!(nonzero, vec![(3, 0, C64::new(1.0, 0.0))]);
    }

    #[test]
    fn swap_is_involution() {
        let m = DenseComplexMatrix::from_fn(8, 8, |i, j| C64::new(i as f64, j as f64));
        assert_eq!(swap_blocks(&swap_blocks(&m, 2), 2), m);
    }
}
