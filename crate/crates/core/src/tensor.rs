//! Dense third-order tensors and the slice-level operators of the T-product
//! calculus: `unfold`/`fold`, `bcirc` and its inverse, (conjugate) transpose,
//! block composition and norms.
//!
//! Storage is slice-major: entry `(i, j, k)` lives at `k*m*n + i*n + j`, so
//! frontal slice `k` is a contiguous row-major `m x n` block and `unfold` is a
//! plain copy.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{dim_mismatch, Error, Result};

/// Relative residual above which a matrix is rejected by [`Tensor3::bcirc_inv`].
pub const TOL_BLOCK_CIRCULANT: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct Tensor3 {
    m: usize,
    n: usize,
    p: usize,
    data: Vec<C64>,
}

impl fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Tensor3 {}x{}x{}", self.m, self.n, self.p)?;
        for k in 0..self.p {
            writeln!(f, "  slice {}:", k + 1)?;
            for i in 0..self.m {
                write!(f, "   ")?;
                for j in 0..self.n {
                    let z = self[(i, j, k)];
                    write!(f, " {:>10.4}{:+.4}i", z.re, z.im)?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

fn check_dims(m: usize, n: usize, p: usize) -> Result<()> {
    if m == 0 || n == 0 || p == 0 {
        return Err(dim_mismatch("Tensor3", format!("dimensions must be positive, got {m}x{n}x{p}")));
    }
    Ok(())
}

impl Tensor3 {
    /// Zero tensor. `m` or `n` may be zero (empty factors of a rank-0
    /// decomposition); `p` must be positive.
    pub fn zeros(m: usize, n: usize, p: usize) -> Self {
        assert!(p > 0, "tube length must be positive");
        Self {
            m,
            n,
            p,
            data: vec![C64::new(0.0, 0.0); m * n * p],
        }
    }

    pub fn from_vec(m: usize, n: usize, p: usize, data: Vec<C64>) -> Result<Self> {
        check_dims(m, n, p)?;
        if data.len() != m * n * p {
            return Err(dim_mismatch(
                "Tensor3::from_vec",
                format!("expected {} entries, got {}", m * n * p, data.len()),
            ));
        }
        Ok(Self { m, n, p, data })
    }

    pub fn from_real(m: usize, n: usize, p: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(m, n, p, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(m: usize, n: usize, p: usize, mut f: impl FnMut(usize, usize, usize) -> C64) -> Self {
        let mut t = Self::zeros(m, n, p);
        for k in 0..p {
            for i in 0..m {
                for j in 0..n {
                    t[(i, j, k)] = f(i, j, k);
                }
            }
        }
        t
    }

    /// Builds a tensor from its frontal slices (all of equal shape).
    pub fn from_slices(slices: &[DMatrix<C64>]) -> Result<Self> {
        let Some(first) = slices.first() else {
            return Err(dim_mismatch("Tensor3::from_slices", "no slices"));
        };
        let (m, n) = first.shape();
        check_dims(m, n, slices.len())?;
        let mut data = Vec::with_capacity(m * n * slices.len());
        for s in slices {
            if s.shape() != (m, n) {
                return Err(dim_mismatch(
                    "Tensor3::from_slices",
                    format!("slice shape {:?} differs from {:?}", s.shape(), (m, n)),
                ));
            }
            for i in 0..m {
                for j in 0..n {
                    data.push(s[(i, j)]);
                }
            }
        }
        Ok(Self { m, n, p: slices.len(), data })
    }

    /// Builds a real tensor from row-major frontal slices.
    pub fn from_real_slices(m: usize, n: usize, slices: &[&[f64]]) -> Result<Self> {
        let mut data = Vec::with_capacity(m * n * slices.len());
        for s in slices {
            if s.len() != m * n {
                return Err(dim_mismatch("Tensor3::from_real_slices", format!("slice has {} entries, want {}", s.len(), m * n)));
            }
            data.extend(s.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::from_vec(m, n, slices.len(), data)
    }

    /// The `n x n x p` identity: first frontal slice `I_n`, the rest zero.
    pub fn identity(n: usize, p: usize) -> Self {
        let mut t = Self::zeros(n, n, p);
        for i in 0..n {
            t[(i, i, 0)] = C64::new(1.0, 0.0);
        }
        t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.p)
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    /// Frontal slice `k` (0-based) as a matrix.
    pub fn slice(&self, k: usize) -> DMatrix<C64> {
        let off = k * self.m * self.n;
        DMatrix::from_row_slice(self.m, self.n, &self.data[off..off + self.m * self.n])
    }

    pub fn slices(&self) -> Vec<DMatrix<C64>> {
        (0..self.p).map(|k| self.slice(k)).collect()
    }

    /// Every entry's imaginary part satisfies `|im| <= tol * (1 + |z|)`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol * (1.0 + z.norm()))
    }

    /// Largest `|im| / (1 + |z|)` over all entries.
    pub fn imag_residual(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.im.abs() / (1.0 + z.norm()))
            .fold(0.0, f64::max)
    }

    pub fn real_part(&self) -> Self {
        self.map(|z| C64::new(z.re, 0.0))
    }

    pub fn imag_part(&self) -> Self {
        self.map(|z| C64::new(z.im, 0.0))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            m: self.m,
            n: self.n,
            p: self.p,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Plain entrywise Frobenius norm (no `sqrt(p)` factor).
    pub fn entry_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tensor Frobenius norm `||bcirc(A)||_F`, equal to `sqrt(p)` times the
    /// entrywise norm.
    pub fn fnorm(&self) -> f64 {
        (self.p as f64).sqrt() * self.entry_norm()
    }

    /// Spectral norm `||bcirc(A)||_2`: the largest face singular value.
    pub fn specnorm(&self) -> f64 {
        crate::spectral::FaceStack::from_tensor(self).max_singular_value()
    }

    /// Vertical stack of the frontal slices, an `mp x n` matrix.
    pub fn unfold(&self) -> DMatrix<C64> {
        let (m, n, p) = self.dims();
        DMatrix::from_fn(m * p, n, |r, j| self.data[(r / m) * m * n + (r % m) * n + j])
    }

    /// Inverse of [`unfold`](Self::unfold).
    pub fn fold(mat: &DMatrix<C64>, m: usize, n: usize, p: usize) -> Result<Self> {
        check_dims(m, n, p)?;
        if mat.shape() != (m * p, n) {
            return Err(dim_mismatch("fold", format!("matrix is {:?}, expected {:?}", mat.shape(), (m * p, n))));
        }
        Ok(Self::from_fn(m, n, p, |i, j, k| mat[(k * m + i, j)]))
    }

    /// Block-circulant matrix whose first block column is `unfold(self)`;
    /// block `(r, c)` is slice `(r - c) mod p`.
    pub fn bcirc(&self) -> DMatrix<C64> {
        let (m, n, p) = self.dims();
        DMatrix::from_fn(m * p, n * p, |r, c| {
            let (br, i) = (r / m, r % m);
            let (bc, j) = (c / n, c % n);
            let k = (br + p - bc) % p;
            self.data[k * m * n + i * n + j]
        })
    }

    /// Recovers the tensor from a block-circulant matrix. The result's
    /// slices are the first block column of `mat`; the whole matrix must
    /// agree with its block-circulant projection to [`TOL_BLOCK_CIRCULANT`].
    pub fn bcirc_inv(mat: &DMatrix<C64>, m: usize, n: usize, p: usize) -> Result<Self> {
        check_dims(m, n, p)?;
        if mat.shape() != (m * p, n * p) {
            return Err(dim_mismatch("bcirc_inv", format!("matrix is {:?}, expected {:?}", mat.shape(), (m * p, n * p))));
        }
        // Average each circulant diagonal of blocks.
        let mut avg = Self::zeros(m, n, p);
        for br in 0..p {
            for bc in 0..p {
                let k = (br + p - bc) % p;
                for i in 0..m {
                    for j in 0..n {
                        avg[(i, j, k)] += mat[(br * m + i, bc * n + j)];
                    }
                }
            }
        }
        let avg = avg.scale_real(1.0 / p as f64);
        let total = mat.norm();
        if total > 0.0 {
            let residual = (mat - avg.bcirc()).norm() / total;
            if residual > TOL_BLOCK_CIRCULANT {
                return Err(Error::NotBlockCirculant { residual });
            }
        }
        Ok(Self::from_fn(m, n, p, |i, j, k| mat[(k * m + i, j)]))
    }

    /// Slice 1 is `A^(1)^T`; slice `k` is `A^(p+2-k)^T` for `k = 2..p`.
    pub fn transpose(&self) -> Self {
        let (m, n, p) = self.dims();
        Self::from_fn(n, m, p, |i, j, k| self[(j, i, (p - k) % p)])
    }

    pub fn conj_transpose(&self) -> Self {
        let (m, n, p) = self.dims();
        Self::from_fn(n, m, p, |i, j, k| self[(j, i, (p - k) % p)].conj())
    }

    /// Zero-pads or crops to `rows x cols` keeping the top-left corner.
    pub fn resize(&self, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, self.p, |i, j, k| {
            if i < self.m && j < self.n {
                self[(i, j, k)]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Sub-tensor of rows `r0..r0+rows` and columns `c0..c0+cols`.
    pub fn sub_block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.m && c0 + cols <= self.n, "sub_block out of range");
        Self::from_fn(rows, cols, self.p, |i, j, k| self[(r0 + i, c0 + j, k)])
    }

    /// Lateral slice `j` (all rows, column `j`, all tubes) is identically zero.
    pub fn lateral_slice_norm(&self, j: usize) -> f64 {
        let mut s = 0.0;
        for k in 0..self.p {
            for i in 0..self.m {
                s += self[(i, j, k)].norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn horizontal_slice_norm(&self, i: usize) -> f64 {
        let mut s = 0.0;
        for k in 0..self.p {
            for j in 0..self.n {
                s += self[(i, j, k)].norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `||self - other||_F / max(||self||_F, ||other||_F)`, zero when both vanish.
    pub fn rel_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims(), other.dims(), "rel_diff: dimension mismatch");
        let d = (self - other).fnorm();
        let s = self.fnorm().max(other.fnorm());
        if s == 0.0 {
            0.0
        } else {
            d / s
        }
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = C64;
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &C64 {
        debug_assert!(i < self.m && j < self.n && k < self.p);
        &self.data[k * self.m * self.n + i * self.n + j]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut C64 {
        debug_assert!(i < self.m && j < self.n && k < self.p);
        &mut self.data[k * self.m * self.n + i * self.n + j]
    }
}

macro_rules! elementwise_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Tensor3> for &Tensor3 {
            type Output = Tensor3;
            fn $method(self, rhs: &Tensor3) -> Tensor3 {
                assert_eq!(self.dims(), rhs.dims(), "tensor dimensions differ");
                Tensor3 {
                    m: self.m,
                    n: self.n,
                    p: self.p,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }
        impl $trait<Tensor3> for Tensor3 {
            type Output = Tensor3;
            fn $method(self, rhs: Tensor3) -> Tensor3 {
                &self $op &rhs
            }
        }
        impl $trait<&Tensor3> for Tensor3 {
            type Output = Tensor3;
            fn $method(self, rhs: &Tensor3) -> Tensor3 {
                &self $op rhs
            }
        }
    };
}

elementwise_op!(Add, add, +);
elementwise_op!(Sub, sub, -);

impl Neg for &Tensor3 {
    type Output = Tensor3;
    fn neg(self) -> Tensor3 {
        self.map(|z| -z)
    }
}

impl Neg for Tensor3 {
    type Output = Tensor3;
    fn neg(self) -> Tensor3 {
        -&self
    }
}

impl Mul<C64> for &Tensor3 {
    type Output = Tensor3;
    fn mul(self, c: C64) -> Tensor3 {
        self.scale(c)
    }
}

impl Mul<f64> for &Tensor3 {
    type Output = Tensor3;
    fn mul(self, c: f64) -> Tensor3 {
        self.scale_real(c)
    }
}

/// Quadrants of a block tensor. `Quad` is `[[a, b], [c, d]]`; `Row` is
/// `[a, b]`; `Col` is `[a; c]`.
#[derive(Clone, Debug)]
pub enum BlockSpec {
    Quad { a: Tensor3, b: Tensor3, c: Tensor3, d: Tensor3 },
    Row { a: Tensor3, b: Tensor3 },
    Col { a: Tensor3, c: Tensor3 },
}

impl BlockSpec {
    pub fn quad(a: Tensor3, b: Tensor3, c: Tensor3, d: Tensor3) -> Self {
        BlockSpec::Quad { a, b, c, d }
    }
}

/// Composes frontal slices blockwise: slice `k` of the result is the block
/// matrix of the quadrants' `k`-th slices.
pub fn block(spec: &BlockSpec) -> Result<Tensor3> {
    let grid: Vec<Vec<&Tensor3>> = match spec {
        BlockSpec::Quad { a, b, c, d } => vec![vec![a, b], vec![c, d]],
        BlockSpec::Row { a, b } => vec![vec![a, b]],
        BlockSpec::Col { a, c } => vec![vec![a], vec![c]],
    };
    let p = grid[0][0].p();
    let row_heights: Vec<usize> = grid.iter().map(|row| row[0].m()).collect();
    let col_widths: Vec<usize> = grid[0].iter().map(|t| t.n()).collect();
    for (r, row) in grid.iter().enumerate() {
        for (c, t) in row.iter().enumerate() {
            if t.p() != p || t.m() != row_heights[r] || t.n() != col_widths[c] {
                return Err(dim_mismatch(
                    "block",
                    format!("quadrant ({r},{c}) is {:?}; expected {}x{}x{p}", t.dims(), row_heights[r], col_widths[c]),
                ));
            }
        }
    }
    let m: usize = row_heights.iter().sum();
    let n: usize = col_widths.iter().sum();
    let mut out = Tensor3::zeros(m, n, p);
    let mut r0 = 0;
    for (r, row) in grid.iter().enumerate() {
        let mut c0 = 0;
        for (c, t) in row.iter().enumerate() {
            for k in 0..p {
                for i in 0..t.m() {
                    for j in 0..t.n() {
                        out[(r0 + i, c0 + j, k)] = t[(i, j, k)];
                    }
                }
            }
            c0 += col_widths[c];
        }
        r0 += row_heights[r];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::TensorRng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn unfold_of_tube_example() {
        let a = Tensor3::from_real(1, 1, 4, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let u = a.unfold();
        assert_eq!(u.shape(), (4, 1));
        assert_eq!(u.column(0).iter().map(|z| z.re).collect::<Vec<_>>(), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn unfold_identity() {
        let u = Tensor3::identity(2, 3).unfold();
        assert_eq!(u.shape(), (6, 2));
        let mut want = DMatrix::zeros(6, 2);
        want[(0, 0)] = c(1.0);
        want[(1, 1)] = c(1.0);
        assert_eq!(u, want);
    }

    #[test]
    fn fold_unfold_round_trip() {
        let mut rng = TensorRng::new(1);
        let a = rng.complex(3, 2, 4);
        assert_eq!(Tensor3::fold(&a.unfold(), 3, 2, 4).unwrap(), a);
    }

    #[test]
    fn bcirc_of_tube_example() {
        let a = Tensor3::from_real(1, 1, 4, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let want = [[1.0, 4.0, 3.0, 2.0], [2.0, 1.0, 4.0, 3.0], [3.0, 2.0, 1.0, 4.0], [4.0, 3.0, 2.0, 1.0]];
        let b = a.bcirc();
        for r in 0..4 {
            for cc in 0..4 {
                assert_eq!(b[(r, cc)], c(want[r][cc]));
            }
        }
    }

    #[test]
    fn bcirc_of_identity_is_identity() {
        assert_eq!(Tensor3::identity(2, 3).bcirc(), DMatrix::identity(6, 6));
    }

    #[test]
    fn bcirc_commutes_with_transposes() {
        let mut rng = TensorRng::new(2);
        let a = rng.real(2, 3, 3);
        assert_eq!(a.transpose().bcirc(), a.bcirc().transpose());
        let z = rng.complex(2, 3, 3);
        assert_eq!(z.conj_transpose().bcirc(), z.bcirc().adjoint());
    }

    #[test]
    fn bcirc_inv_round_trip_and_identity() {
        let mut rng = TensorRng::new(3);
        let a = rng.complex(2, 2, 5);
        assert_eq!(Tensor3::bcirc_inv(&a.bcirc(), 2, 2, 5).unwrap(), a);
        let i6 = DMatrix::<C64>::identity(6, 6);
        assert_eq!(Tensor3::bcirc_inv(&i6, 2, 2, 3).unwrap(), Tensor3::identity(2, 3));
    }

    #[test]
    fn bcirc_inv_rejects_unstructured_matrix() {
        let mut m = Tensor3::identity(2, 3).bcirc();
        m[(0, 5)] = c(0.5);
        assert!(matches!(Tensor3::bcirc_inv(&m, 2, 2, 3), Err(Error::NotBlockCirculant { .. })));
    }

    #[test]
    fn bcirc_inv_of_generalized_square_matrix() {
        // bcirc of f(x)=x^2 applied generalized-wise to the 1x1x4 tube example.
        let s = 2.0f64.sqrt();
        let (a, b, cc, d) = (24.0 - 2.0 * s, 26.0 - 2.0 * s, 24.0 + 2.0 * s, 26.0 + 2.0 * s);
        let rows = [[a, b, cc, d], [d, a, b, cc], [cc, d, a, b], [b, cc, d, a]];
        let m = DMatrix::from_fn(4, 4, |r, k| c(rows[r][k]));
        let t = Tensor3::bcirc_inv(&m, 1, 1, 4).unwrap();
        let got: Vec<f64> = t.data().iter().map(|z| z.re).collect();
        assert_eq!(got, vec![a, d, cc, b]);
    }

    #[test]
    fn transpose_example() {
        let a = Tensor3::from_real_slices(
            3,
            3,
            &[
                &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0],
                &[2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0],
                &[3.0, 6.0, 9.0, 12.0, 15.0, 18.0, 21.0, 24.0, 27.0],
            ],
        )
        .unwrap();
        let want = Tensor3::from_real_slices(
            3,
            3,
            &[
                &[1.0, 4.0, 7.0, 2.0, 5.0, 8.0, 3.0, 6.0, 9.0],
                &[3.0, 12.0, 21.0, 6.0, 15.0, 24.0, 9.0, 18.0, 27.0],
                &[2.0, 8.0, 14.0, 4.0, 10.0, 16.0, 6.0, 12.0, 18.0],
            ],
        )
        .unwrap();
        assert_eq!(a.transpose(), want);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn block_diag_slices() {
        let mut rng = TensorRng::new(4);
        let a = rng.real(2, 2, 3);
        let z = Tensor3::zeros(2, 2, 3);
        let b = block(&BlockSpec::quad(a.clone(), z.clone(), z.clone(), a.clone())).unwrap();
        for k in 0..3 {
            let s = b.slice(k);
            assert_eq!(s.view((0, 2), (2, 2)).norm(), 0.0);
            assert_eq!(s.view((2, 0), (2, 2)).norm(), 0.0);
            assert_eq!(s.view((0, 0), (2, 2)), a.slice(k));
        }
    }

    #[test]
    fn block_rejects_mismatch() {
        let a = Tensor3::zeros(2, 2, 2);
        let b = Tensor3::zeros(3, 2, 2);
        assert!(block(&BlockSpec::Row { a, b }).is_err());
    }

    #[test]
    fn norms() {
        assert_eq!(Tensor3::zeros(2, 3, 4).fnorm(), 0.0);
        assert!((Tensor3::identity(3, 4).specnorm() - 1.0).abs() < 1e-14);
        let a = Tensor3::from_real(1, 1, 4, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((a.specnorm() - 10.0).abs() < 1e-12);
        assert!((a.fnorm() - a.bcirc().norm()).abs() < 1e-12);
    }

    #[test]
    fn from_vec_rejects_bad_length() {
        assert!(Tensor3::from_vec(2, 2, 2, vec![C64::new(0.0, 0.0); 7]).is_err());
        assert!(Tensor3::from_vec(0, 2, 2, vec![]).is_err());
    }
}
