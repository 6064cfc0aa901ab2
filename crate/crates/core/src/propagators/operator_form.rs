//! Operator-form (unvectorized) realizations of `e^{−itX}` and `e^{tL}`,
//! acting on the blocks of ρ directly by left and right multiplication.

use num_complex::Complex64 as C64;

use super::efg::efg;
use super::unitary::NumberFunctions;
use crate::error::{Error, Result};
use crate::fock::{annihilation, creation};
use crate::linalg::DenseComplexMatrix;
use crate::model::ModelParams;
use crate::state::BlockDensityMatrix;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn check_block_dim(p: &ModelParams, rho: &BlockDensityMatrix) -> Result<()> {
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            op: "operator form",
            left: (p.dim(), p.dim()),
            right: (rho.dim(), rho.dim()),
        });
    }
    Ok(())
}

fn chain(ms: &[&DenseComplexMatrix]) -> DenseComplexMatrix {
    let mut out = ms[0].clone();
    for m in &ms[1..] {
        out = &out * m;
    }
    out
}

/// `ρ̃₁(t) = e^{−itX} ρ(0)` written block by block with `U = e^{−itω₀N}`,
/// `V = e^{itω₀N}`, `c₁ = cos(α√(N+1))`, `c₀ = cos(α√N)`,
/// `s₁ = sin(α√(N+1))/√(N+1)`, `s₀ = sin(α√N)/√N`, `α = Ωt`:
///
/// ```text
/// ρ̃₀₀ = U c₁ρ₀₀c₁ V + i U c₁ρ₀₁a†s₁ V − i U s₁aρ₁₀c₁ V + U s₁aρ₁₁a†s₁ V
/// ρ̃₀₁ = e^{−itω₀} [i U c₁ρ₀₀as₀ V + U c₁ρ₀₁c₀ V + U s₁aρ₁₀as₀ V − i U s₁aρ₁₁c₀ V]
/// ρ̃₁₀ = e^{itω₀} [−i U s₀a†ρ₀₀c₁ V + U s₀a†ρ₀₁a†s₁ V + U c₀ρ₁₀c₁ V + i U c₀ρ₁₁a†s₁ V]
/// ρ̃₁₁ = U s₀a†ρ₀₀as₀ V − i U s₀a†ρ₀₁c₀ V + i U c₀ρ₁₀as₀ V + U c₀ρ₁₁c₀ V
/// ```
pub fn rho_tilde_1(
    p: &ModelParams,
    t: f64,
    rho0: &BlockDensityMatrix,
) -> Result<BlockDensityMatrix> {
    check_block_dim(p, rho0)?;
    let f = NumberFunctions::new(p, t);
    let a = annihilation(&p.trunc);
    let ad = creation(&p.trunc);
    let real = |v: &[f64]| DenseComplexMatrix::from_real_diag(v);
    let (c1, c0, s1, s0) = (
        real(&f.cos_up),
        real(&f.cos_n),
        real(&f.sinc_up),
        real(&f.sinc_n),
    );
    let u = DenseComplexMatrix::from_diag(&f.phase_left);
    let v = DenseComplexMatrix::from_diag(&f.phase_right);

    // Left factors (applied to ρ from the left) and right factors.
    let uc1 = &u * &c1;
    let uc0 = &u * &c0;
    let us1a = chain(&[&u, &s1, &a]);
    let us0ad = chain(&[&u, &s0, &ad]);
    let c1v = &c1 * &v;
    let c0v = &c0 * &v;
    let ads1v = chain(&[&ad, &s1, &v]);
    let as0v = chain(&[&a, &s0, &v]);

    let r = rho0.blocks();
    let term = |l: &DenseComplexMatrix, x: &DenseComplexMatrix, rt: &DenseComplexMatrix, c: C64| {
        chain(&[l, x, rt]).scale(c)
    };
    let one = C64::new(1.0, 0.0);
    let w = C64::from_polar(1.0, -t * p.omega0);

    let mut b00 = term(&uc1, &r[0][0], &c1v, one);
    b00 += &term(&uc1, &r[0][1], &ads1v, I);
    b00 += &term(&us1a, &r[1][0], &c1v, -I);
    b00 += &term(&us1a, &r[1][1], &ads1v, one);

    let mut b01 = term(&uc1, &r[0][0], &as0v, I);
    b01 += &term(&uc1, &r[0][1], &c0v, one);
    b01 += &term(&us1a, &r[1][0], &as0v, one);
    b01 += &term(&us1a, &r[1][1], &c0v, -I);

    let mut b10 = term(&us0ad, &r[0][0], &c1v, -I);
    b10 += &term(&us0ad, &r[0][1], &ads1v, one);
    b10 += &term(&uc0, &r[1][0], &c1v, one);
    b10 += &term(&uc0, &r[1][1], &ads1v, I);

    let mut b11 = term(&us0ad, &r[0][0], &as0v, one);
    b11 += &term(&us0ad, &r[0][1], &c0v, -I);
    b11 += &term(&uc0, &r[1][0], &as0v, I);
    b11 += &term(&uc0, &r[1][1], &c0v, one);

    BlockDensityMatrix::new(b00, b01.scale(w), b10.scale(w.conj()), b11)
}

/// `e^{tL}` on one block:
/// `(e^{(μ−ν)t/2}/F) Σₙ (Gⁿ/n!) a†ⁿ [e^{−log F·N} (Σₘ (Eᵐ/m!) aᵐ ρ a†ᵐ) e^{−log F·N}] aⁿ`.
fn dissipate_block(
    rho: &DenseComplexMatrix,
    a: &DenseComplexMatrix,
    ad: &DenseComplexMatrix,
    damp: &DenseComplexMatrix,
    e: f64,
    g: f64,
    prefactor: f64,
) -> DenseComplexMatrix {
    let d = rho.rows();
    let mut inner = rho.clone();
    let mut term = rho.clone();
    let mut coef = 1.0;
    for m in 1..d {
        term = chain(&[a, &term, ad]);
        coef *= e / m as f64;
        inner += &term.scale_real(coef);
    }
    let middle = chain(&[damp, &inner, damp]);
    let mut outer = middle.clone();
    let mut term = middle;
    let mut coef = 1.0;
    for n in 1..d {
        term = chain(&[ad, &term, a]);
        coef *= g / n as f64;
        outer += &term.scale_real(coef);
    }
    outer.scale_real(prefactor)
}

/// `e^{tL}` applied independently to each block of `ρ̃₁`, by the double series
/// in `a†ⁿ(·)aⁿ` and `aᵐ(·)a†ᵐ`. Both series stop at the cutoff, where the
/// shift powers vanish.
pub fn rho_tilde_operator_series(
    p: &ModelParams,
    t: f64,
    rho1: &BlockDensityMatrix,
) -> Result<BlockDensityMatrix> {
    check_block_dim(p, rho1)?;
    let v = efg(t, p.mu, p.nu)?;
    let a = annihilation(&p.trunc);
    let ad = creation(&p.trunc);
    let damp = DenseComplexMatrix::from_real_diag(
        &(0..p.dim())
            .map(|n| (-v.log_f * n as f64).exp())
            .collect::<Vec<_>>(),
    );
    let prefactor = ((p.mu - p.nu) * t / 2.0 - v.log_f).exp();
    let r = rho1.blocks();
    let go = |x: &DenseComplexMatrix| dissipate_block(x, &a, &ad, &damp, v.e, v.g, prefactor);
    BlockDensityMatrix::new(go(&r[0][0]), go(&r[0][1]), go(&r[1][0]), go(&r[1][1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TruncationConfig;

    fn sample(d: usize) -> BlockDensityMatrix {
        let m = |s: f64| {
            DenseComplexMatrix::from_fn(d, d, |i, j| {
                C64::new(
                    (s * (i + 2 * j) as f64).sin(),
                    (s * (3 * i + j) as f64).cos(),
                )
            })
        };
        BlockDensityMatrix::new(m(0.3), m(0.7), m(1.1), m(1.9)).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let p =
            ModelParams::new(1.0, 0.8, 0.5, 0.2, TruncationConfig::with_dim(4).unwrap()).unwrap();
        let rho = sample(4);
        assert!(rho_tilde_1(&p, 0.0, &rho).unwrap().max_abs_diff(&rho) < 1e-15);
        assert!(
            rho_tilde_operator_series(&p, 0.0, &rho)
                .unwrap()
                .max_abs_diff(&rho)
                < 1e-15
        );
    }

    #[test]
    fn rejects_mismatched_dimension() {
        let p =
            ModelParams::new(1.0, 0.8, 0.5, 0.2, TruncationConfig::with_dim(4).unwrap()).unwrap();
        assert!(rho_tilde_1(&p, 0.3, &sample(3)).is_err());
        assert!(rho_tilde_operator_series(&p, 0.3, &sample(5)).is_err());
    }
}
