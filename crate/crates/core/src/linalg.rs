//! Dense complex matrices and the handful of kernels the rest of the crate
//! needs: products, Kronecker products, block assembly and the matrix
//! exponential.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct DenseComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = *d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = C64::new(*d, 0.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn trace(&self) -> C64 {
        self.diag().into_iter().sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Adds `s` times the identity. Panics if not square.
    pub fn shift(&self, s: C64) -> Self {
        assert!(self.is_square(), "shift of a non-square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            out.data[i * self.cols + i] += s;
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![C64::new(0.0, 0.0); n * m];
        for i in 0..n {
            let out_row = &mut out[i * m..(i + 1) * m];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[p * m..(p + 1) * m];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: out,
        })
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                op: "matvec",
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (maximum column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Copies a sub-block starting at `(r0, c0)`.
    pub fn sub_block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    /// Assembles an `nb × nb` grid of `bd × bd` blocks; `None` is a zero block.
    pub fn from_blocks(
        nb: usize,
        bd: usize,
        mut block: impl FnMut(usize, usize) -> Option<Self>,
    ) -> Self {
        let mut out = Self::zeros(nb * bd, nb * bd);
        for bi in 0..nb {
            for bj in 0..nb {
                if let Some(b) = block(bi, bj) {
                    assert_eq!(
                        (b.rows, b.cols),
                        (bd, bd),
                        "block ({bi},{bj}) has wrong shape"
                    );
                    out.set_block(bi * bd, bj * bd, &b);
                }
            }
        }
        out
    }

    /// Max-entry modulus restricted to rows and columns where `keep` is true.
    pub fn masked_max_abs(&self, keep: &[bool]) -> f64 {
        assert_eq!(keep.len(), self.rows);
        assert_eq!(keep.len(), self.cols);
        let mut best = 0.0f64;
        for i in (0..self.rows).filter(|&i| keep[i]) {
            for j in (0..self.cols).filter(|&j| keep[j]) {
                best = best.max(self[(i, j)].norm());
            }
        }
        best
    }
}

impl fmt::Debug for DenseComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for DenseComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

fn zip_with(
    a: &DenseComplexMatrix,
    b: &DenseComplexMatrix,
    op: &'static str,
    f: impl Fn(C64, C64) -> C64,
) -> DenseComplexMatrix {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "shape mismatch in {op}");
    DenseComplexMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| f(*x, *y)).collect(),
    }
}

impl Add for &DenseComplexMatrix {
    type Output = DenseComplexMatrix;

    fn add(self, rhs: Self) -> DenseComplexMatrix {
        zip_with(self, rhs, "add", |x, y| x + y)
    }
}

impl Sub for &DenseComplexMatrix {
    type Output = DenseComplexMatrix;

    fn sub(self, rhs: Self) -> DenseComplexMatrix {
        zip_with(self, rhs, "sub", |x, y| x - y)
    }
}

impl AddAssign<&DenseComplexMatrix> for DenseComplexMatrix {
    fn add_assign(&mut self, rhs: &DenseComplexMatrix) {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in add_assign"
        );
        for (x, y) in self.data.iter_mut().zip(&rhs.data) {
            *x += y;
        }
    }
}

impl Neg for &DenseComplexMatrix {
    type Output = DenseComplexMatrix;

    fn neg(self) -> DenseComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Panics on shape mismatch; use [`DenseComplexMatrix::matmul`] for a checked product.
impl Mul for &DenseComplexMatrix {
    type Output = DenseComplexMatrix;

    fn mul(self, rhs: Self) -> DenseComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// Kronecker product: `(A⊗B)[(i·p+k),(j·q+l)] = A[i,j]·B[k,l]` for `B` of shape `p×q`.
pub fn kron(a: &DenseComplexMatrix, b: &DenseComplexMatrix) -> DenseComplexMatrix {
    let (p, q) = (b.rows, b.cols);
    let mut out = DenseComplexMatrix::zeros(a.rows * p, a.cols * q);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..p {
                for l in 0..q {
                    out[(i * p + k, j * q + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `AB − BA`.
pub fn commutator(a: &DenseComplexMatrix, b: &DenseComplexMatrix) -> DenseComplexMatrix {
    &(a * b) - &(b * a)
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn solve(a: &DenseComplexMatrix, b: &DenseComplexMatrix) -> Result<DenseComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch {
            op: "solve",
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let n = a.rows;
    let m = b.cols;
    let mut lu = a.data.clone();
    let mut x = b.data.clone();
    for col in 0..n {
        let (piv, piv_abs) =
            (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if piv_abs == 0.0 || !piv_abs.is_finite() {
            return Err(Error::SingularMatrix);
        }
        if piv != col {
            for j in 0..n {
                lu.swap(col * n + j, piv * n + j);
            }
            for j in 0..m {
                x.swap(col * m + j, piv * m + j);
            }
        }
        let d = lu[col * n + col];
        for r in col + 1..n {
            let f = lu[r * n + col] / d;
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for j in col..n {
                let v = lu[col * n + j];
                lu[r * n + j] -= f * v;
            }
            for j in 0..m {
                let v = x[col * m + j];
                x[r * m + j] -= f * v;
            }
        }
    }
    for col in (0..n).rev() {
        let d = lu[col * n + col];
        for j in 0..m {
            x[col * m + j] /= d;
        }
        for r in 0..col {
            let f = lu[r * n + col];
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for j in 0..m {
                let v = x[col * m + j];
                x[r * m + j] -= f * v;
            }
        }
    }
    Ok(DenseComplexMatrix {
        rows: n,
        cols: m,
        data: x,
    })
}

// [6/6] Padé coefficients of exp: c_k = (2m-k)! m! / ((2m)! k! (m-k)!).
const PADE6: [f64; 7] = [
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

/// Scaled norm threshold for the Padé kernel.
const EXPM_SCALED_NORM: f64 = 0.5;

/// Matrix exponential by scaling and squaring around a [6/6] Padé kernel.
///
/// The matrix is scaled by `2^-s` with `s` the smallest count bringing its
/// 1-norm below 0.5, where the kernel's truncation error is below 1e-16.
pub fn expm(m: &DenseComplexMatrix) -> Result<DenseComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if !m.is_finite() {
        return Err(Error::ExpmNonConvergence("input has non-finite entries"));
    }
    let n = m.rows;
    let norm = m.norm_one();
    let mut squarings = 0u32;
    if norm > EXPM_SCALED_NORM {
        squarings = (norm / EXPM_SCALED_NORM).log2().ceil() as u32;
    }
    if squarings > 1000 {
        return Err(Error::ExpmNonConvergence("norm too large to scale"));
    }
    let a = m.scale_real(0.5f64.powi(squarings as i32));
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let c = |k: usize| C64::new(PADE6[k], 0.0);

    let mut even = DenseComplexMatrix::identity(n).scale(c(0));
    even += &a2.scale(c(2));
    even += &a4.scale(c(4));
    even += &a6.scale(c(6));

    let mut odd_inner = DenseComplexMatrix::identity(n).scale(c(1));
    odd_inner += &a2.scale(c(3));
    odd_inner += &a4.scale(c(5));
    let odd = &a * &odd_inner;

    let num = &even + &odd;
    let den = &even - &odd;
    let mut r =
        solve(&den, &num).map_err(|_| Error::ExpmNonConvergence("singular Padé denominator"))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::ExpmNonConvergence("result overflowed"));
    }
    Ok(r)
}
