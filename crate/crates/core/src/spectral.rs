//! The Fourier face domain and the decompositions built on it.
//!
//! Faces are `D_k = sum_s A^(s) exp(+2 pi i s k / p)` for `k = 0..p`, which
//! is the convention satisfying
//! `bcirc(A) = (F_p (x) I) blockdiag(D) (F_p^H (x) I)` with the unitary DFT
//! matrix `F_p[j, k] = exp(-2 pi i j k / p) / sqrt(p)`.
//!
//! For real tensors only faces `0..=p/2` are computed; the others are set to
//! the conjugates of their partners `p - k`, and the self-paired faces are
//! factored with a real SVD. Factors of real tensors are therefore real by
//! construction.

use std::cell::RefCell;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::dense::{self, CMat, FullSvd};
use crate::error::{dim_mismatch, Error, Result};
use crate::tensor::Tensor3;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(p: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|pl| {
        let mut pl = pl.borrow_mut();
        if inverse {
            pl.plan_fft_inverse(p)
        } else {
            pl.plan_fft_forward(p)
        }
    })
}

/// Tensors with imaginary parts below this (relative) are treated as real.
pub const REAL_TOL: f64 = 1e-12;

/// Face indices that determine the whole stack: all of them for complex
/// data, `0..=p/2` for real data.
pub(crate) fn independent_faces(p: usize, real: bool) -> std::ops::Range<usize> {
    if real {
        0..p / 2 + 1
    } else {
        0..p
    }
}

pub(crate) fn self_paired(k: usize, p: usize) -> bool {
    k == 0 || 2 * k == p
}

/// The `p` Fourier-domain faces of a tensor.
#[derive(Clone, Debug)]
pub struct FaceStack {
    m: usize,
    n: usize,
    p: usize,
    faces: Vec<CMat>,
    real: bool,
}

impl FaceStack {
    pub fn from_tensor(a: &Tensor3) -> Self {
        let (m, n, p) = a.dims();
        let real = a.is_real(REAL_TOL);
        let mut buf: Vec<C64> = vec![C64::new(0.0, 0.0); m * n * p];
        for k in 0..p {
            for i in 0..m {
                for j in 0..n {
                    buf[(i * n + j) * p + k] = a[(i, j, k)];
                }
            }
        }
        if p > 1 && !buf.is_empty() {
            plan(p, true).process(&mut buf);
        }
        let mut faces = Vec::with_capacity(p);
        for k in 0..p {
            let paired = real && k > p / 2;
            if paired {
                let partner: &CMat = &faces[p - k];
                faces.push(partner.map(|z: C64| z.conj()));
                continue;
            }
            let mut f = CMat::from_fn(m, n, |i, j| buf[(i * n + j) * p + k]);
            if real && self_paired(k, p) {
                f.iter_mut().for_each(|z| z.im = 0.0);
            }
            faces.push(f);
        }
        Self { m, n, p, faces, real }
    }

    /// Wraps explicit faces. `real` asserts conjugate symmetry, which is then
    /// enforced on the returned stack.
    pub fn from_faces(mut faces: Vec<CMat>, real: bool) -> Result<Self> {
        let p = faces.len();
        let Some(first) = faces.first() else {
            return Err(dim_mismatch("FaceStack::from_faces", "no faces"));
        };
        let (m, n) = first.shape();
        if faces.iter().any(|f| f.shape() != (m, n)) {
            return Err(dim_mismatch("FaceStack::from_faces", "faces differ in shape"));
        }
        if real {
            for k in 0..p {
                if k > p / 2 {
                    faces[k] = faces[p - k].map(|z| z.conj());
                } else if self_paired(k, p) {
                    faces[k].iter_mut().for_each(|z| z.im = 0.0);
                }
            }
        }
        Ok(Self { m, n, p, faces, real })
    }

    /// Builds a stack by evaluating `f` on the independent faces only.
    pub(crate) fn build(m: usize, n: usize, p: usize, real: bool, mut f: impl FnMut(usize) -> CMat) -> Self {
        let mut faces: Vec<CMat> = Vec::with_capacity(p);
        for k in 0..p {
            if real && k > p / 2 {
                faces.push(faces[p - k].map(|z| z.conj()));
            } else {
                let mut face = f(k);
                debug_assert_eq!(face.shape(), (m, n));
                if real && self_paired(k, p) {
                    face.iter_mut().for_each(|z| z.im = 0.0);
                }
                faces.push(face);
            }
        }
        Self { m, n, p, faces, real }
    }

    /// Inverse of [`from_tensor`](Self::from_tensor). Conjugate-symmetric
    /// stacks produce exactly real tensors.
    pub fn to_tensor(&self) -> Tensor3 {
        let (m, n, p) = (self.m, self.n, self.p);
        let mut buf: Vec<C64> = vec![C64::new(0.0, 0.0); m * n * p];
        for k in 0..p {
            let f = &self.faces[k];
            for i in 0..m {
                for j in 0..n {
                    buf[(i * n + j) * p + k] = f[(i, j)];
                }
            }
        }
        if p > 1 && !buf.is_empty() {
            plan(p, false).process(&mut buf);
        }
        let scale = 1.0 / p as f64;
        let mut t = Tensor3::zeros(m, n, p);
        for k in 0..p {
            for i in 0..m {
                for j in 0..n {
                    let z = buf[(i * n + j) * p + k] * scale;
                    t[(i, j, k)] = if self.real { C64::new(z.re, 0.0) } else { z };
                }
            }
        }
        t
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.p)
    }

    pub fn faces(&self) -> &[CMat] {
        &self.faces
    }

    pub fn face(&self, k: usize) -> &CMat {
        &self.faces[k]
    }

    pub fn into_faces(self) -> Vec<CMat> {
        self.faces
    }

    /// Whether the stack is conjugate symmetric (comes from a real tensor).
    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Face-wise product.
    pub fn mul(&self, other: &FaceStack) -> Result<FaceStack> {
        if self.n != other.m || self.p != other.p {
            return Err(dim_mismatch(
                "face product",
                format!("{}x{}x{} times {}x{}x{}", self.m, self.n, self.p, other.m, other.n, other.p),
            ));
        }
        let real = self.real && other.real;
        Ok(Self::build(self.m, other.n, self.p, real, |k| &self.faces[k] * &other.faces[k]))
    }

    pub fn adjoint(&self) -> FaceStack {
        Self::build(self.n, self.m, self.p, self.real, |k| self.faces[k].adjoint())
    }

    /// Applies `f` to every independent face, keeping conjugate symmetry when
    /// `keep_real` is set and the stack is real.
    pub fn map(&self, keep_real: bool, f: impl Fn(usize, &CMat) -> CMat) -> FaceStack {
        let real = self.real && keep_real;
        let first = f(0, &self.faces[0]);
        let (m, n) = first.shape();
        let mut first = Some(first);
        Self::build(m, n, self.p, real, |k| if k == 0 { first.take().unwrap() } else { f(k, &self.faces[k]) })
    }

    /// Largest singular value over all faces (the tensor spectral norm).
    pub fn max_singular_value(&self) -> f64 {
        independent_faces(self.p, self.real)
            .map(|k| dense::norm2(&self.faces[k]))
            .fold(0.0, f64::max)
    }

    /// Per-face full SVDs, respecting conjugate symmetry.
    pub fn svds(&self) -> Result<Vec<FullSvd>> {
        let p = self.p;
        let mut out: Vec<FullSvd> = Vec::with_capacity(p);
        for k in 0..p {
            if self.real && k > p / 2 {
                let partner = out[p - k].conj();
                out.push(partner);
                continue;
            }
            let face = &self.faces[k];
            let svd = if self.real && self_paired(k, p) {
                dense::svd_full_real(&dense::real_part(face))
            } else {
                dense::svd_full(face)
            };
            out.push(svd.ok_or(Error::FaceSvdFailed { face: k + 1 })?);
        }
        Ok(out)
    }
}

/// Full T-SVD `A = U * S * V^H`.
#[derive(Clone, Debug)]
pub struct TSvd {
    pub u: Tensor3,
    pub s: Tensor3,
    pub v: Tensor3,
}

pub fn tsvd(a: &Tensor3) -> Result<TSvd> {
    let (m, n, p) = a.dims();
    let fs = FaceStack::from_tensor(a);
    let svds = fs.svds()?;
    let real = fs.is_real();
    let u = FaceStack::build(m, m, p, real, |k| svds[k].u.clone()).to_tensor();
    let v = FaceStack::build(n, n, p, real, |k| svds[k].v.clone()).to_tensor();
    let s = FaceStack::build(m, n, p, real, |k| {
        let mut d = CMat::zeros(m, n);
        for (j, &x) in svds[k].s.iter().enumerate() {
            d[(j, j)] = C64::new(x, 0.0);
        }
        d
    })
    .to_tensor();
    Ok(TSvd { u, s, v })
}

/// Window factors of one face: `u` is `m x r`, `v` is `n x r`, `c` has
/// length `r` with zeros past the face rank.
#[derive(Clone, Debug)]
pub struct WindowFace {
    pub u: CMat,
    pub v: CMat,
    pub c: Vec<f64>,
    pub rank: usize,
}

/// Compact T-SVD `A = Ur * Sr * Vr^H` truncated to the tubal rank.
#[derive(Clone, Debug)]
pub struct TCsvd {
    pub ur: Tensor3,
    pub sr: Tensor3,
    pub vr: Tensor3,
    /// Tubal rank: the largest face rank.
    pub r: usize,
    pub face_ranks: Vec<usize>,
    /// `sigma[(i, j)] = c_j^(i)`, a `p x r` matrix, descending along rows.
    pub sigma: DMatrix<f64>,
    /// Threshold used to decide face ranks.
    pub tol: f64,
    m: usize,
    n: usize,
    p: usize,
    real: bool,
    faces: Vec<WindowFace>,
}

/// Default rank threshold `max(m, n) * p * eps * sigma_max`.
pub fn default_rank_tol(m: usize, n: usize, p: usize, sigma_max: f64) -> f64 {
    m.max(n) as f64 * p as f64 * f64::EPSILON * sigma_max
}

pub fn tcsvd(a: &Tensor3, tol_rank: Option<f64>) -> Result<TCsvd> {
    let (m, n, p) = a.dims();
    let fs = FaceStack::from_tensor(a);
    let svds = fs.svds()?;
    let real = fs.is_real();
    let smax = svds.iter().filter_map(|s| s.s.first().copied()).fold(0.0, f64::max);
    let tol = tol_rank.unwrap_or_else(|| default_rank_tol(m, n, p, smax));
    let face_ranks: Vec<usize> = svds.iter().map(|s| s.s.iter().filter(|&&x| x > tol).count()).collect();
    let r = face_ranks.iter().copied().max().unwrap_or(0);
    let faces: Vec<WindowFace> = svds
        .iter()
        .zip(&face_ranks)
        .map(|(s, &rank)| WindowFace {
            u: s.u.columns(0, r).into_owned(),
            v: s.v.columns(0, r).into_owned(),
            c: (0..r).map(|j| if j < rank { s.s[j] } else { 0.0 }).collect(),
            rank,
        })
        .collect();
    let sigma = DMatrix::from_fn(p, r, |i, j| faces[i].c[j]);
    let ur = FaceStack::build(m, r, p, real, |k| faces[k].u.clone()).to_tensor();
    let vr = FaceStack::build(n, r, p, real, |k| faces[k].v.clone()).to_tensor();
    let sr = FaceStack::build(r, r, p, real, |k| {
        CMat::from_diagonal(&nalgebra::DVector::from_iterator(r, faces[k].c.iter().map(|&x| C64::new(x, 0.0))))
    })
    .to_tensor();
    Ok(TCsvd { ur, sr, vr, r, face_ranks, sigma, tol, m, n, p, real, faces })
}

impl TCsvd {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.p)
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn faces(&self) -> &[WindowFace] {
        &self.faces
    }

    /// All window values `c_j^(i)`, including zeros past a face's rank.
    pub fn window_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.faces.iter().flat_map(|f| f.c.iter().copied())
    }

    /// Values strictly inside each face's rank.
    pub fn support_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.faces.iter().flat_map(|f| f.c[..f.rank].iter().copied())
    }

    pub fn max_value(&self) -> f64 {
        self.window_values().fold(0.0, f64::max)
    }

    pub fn has_window_zero(&self) -> bool {
        self.faces.iter().any(|f| f.rank < self.r)
    }

    /// `sum_{i,j} g(c_j^(i)) E_j^(i)` over the window, an `m x n x p` tensor
    /// whose faces are `U_i diag(g(c)) V_i^H`. The result is forced real only
    /// when the tensor is real and `g` is real on the window values.
    pub fn assemble(&self, g: impl Fn(f64) -> C64) -> Tensor3 {
        self.assemble_with(false, |_, _, c| g(c))
    }

    /// `sum g(c) v u^H`, the `n x m x p` counterpart used by inverses and
    /// resolvents.
    pub fn assemble_adjoint(&self, g: impl Fn(f64) -> C64) -> Tensor3 {
        self.assemble_with(true, |_, _, c| g(c))
    }

    /// General assembly with access to `(face, index, value)`.
    pub fn assemble_with(&self, adjoint: bool, g: impl Fn(usize, usize, f64) -> C64) -> Tensor3 {
        let (m, n, p) = (self.m, self.n, self.p);
        let coeffs: Vec<Vec<C64>> = self
            .faces
            .iter()
            .enumerate()
            .map(|(k, f)| f.c.iter().enumerate().map(|(j, &c)| g(k, j, c)).collect())
            .collect();
        let real = self.real && coeffs.iter().flatten().all(|z| z.im == 0.0);
        let (rows, cols) = if adjoint { (n, m) } else { (m, n) };
        FaceStack::build(rows, cols, p, real, |k| {
            let f = &self.faces[k];
            let mut scaled = if adjoint { f.v.clone() } else { f.u.clone() };
            for (j, w) in coeffs[k].iter().enumerate() {
                scaled.column_mut(j).iter_mut().for_each(|z| *z *= w);
            }
            if adjoint {
                scaled * f.u.adjoint()
            } else {
                scaled * f.v.adjoint()
            }
        })
        .to_tensor()
    }

    /// The partial isometry `E = Ur * Vr^H` (window columns).
    pub fn isometry(&self) -> Tensor3 {
        self.assemble(|_| C64::new(1.0, 0.0))
    }

    /// Face stack of `E`, reused by the contour oracles.
    pub fn isometry_faces(&self) -> FaceStack {
        FaceStack::from_faces(self.faces.iter().map(|f| &f.u * f.v.adjoint()).collect(), self.real)
            .expect("window faces share a shape")
    }
}

/// `{ |c_j^(i)|^2 }` over the nonzero values, descending.
pub fn t_eigenvalues(a: &Tensor3) -> Result<Vec<f64>> {
    let c = tcsvd(a, None)?;
    let mut out: Vec<f64> = c.support_values().map(|x| x * x).collect();
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}

/// Orthogonal projectors onto the range (`A * A^+`) and co-range
/// (`A^+ * A`), built from each face's rank support.
pub fn projectors(c: &TCsvd) -> (Tensor3, Tensor3) {
    let (m, n, p) = c.dims();
    let left = FaceStack::build(m, m, p, c.real, |k| {
        let f = &c.faces[k];
        let u = f.u.columns(0, f.rank);
        u * u.adjoint()
    })
    .to_tensor();
    let right = FaceStack::build(n, n, p, c.real, |k| {
        let f = &c.faces[k];
        let v = f.v.columns(0, f.rank);
        v * v.adjoint()
    })
    .to_tensor();
    (left, right)
}

#[derive(Clone, Debug)]
pub struct PartialIsometry {
    /// 0-based face index `i`.
    pub face: usize,
    /// 0-based column index `j`.
    pub index: usize,
    pub value: f64,
    /// `E_j^(i)`: the tensor whose only nonzero face is `u_j v_j^H` at face `i`.
    pub tensor: Tensor3,
}

/// The isometry `E` together with its rank-one-face components.
#[derive(Clone, Debug)]
pub struct PartialIsometrySet {
    pub e: Tensor3,
    pub components: Vec<PartialIsometry>,
}

pub fn partial_isometries(c: &TCsvd) -> PartialIsometrySet {
    let (m, n, p) = c.dims();
    let mut components = Vec::with_capacity(p * c.r);
    for (i, f) in c.faces.iter().enumerate() {
        for j in 0..c.r {
            let uv = f.u.column(j) * f.v.column(j).adjoint();
            let faces: Vec<CMat> = (0..p).map(|k| if k == i { uv.clone() } else { CMat::zeros(m, n) }).collect();
            let tensor = FaceStack::from_faces(faces, false).expect("uniform faces").to_tensor();
            components.push(PartialIsometry { face: i, index: j, value: f.c[j], tensor });
        }
    }
    PartialIsometrySet { e: c.isometry(), components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{identity, tprod};
    use crate::random::TensorRng;
    use proptest::prelude::*;

    fn tube() -> Tensor3 {
        Tensor3::from_real(1, 1, 4, &[1.0, 2.0, 3.0, 4.0]).unwrap()
    }

    fn close(a: C64, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12
    }

    #[test]
    fn tube_faces() {
        let fs = FaceStack::from_tensor(&tube());
        let f: Vec<C64> = fs.faces().iter().map(|d| d[(0, 0)]).collect();
        assert!(close(f[0], 10.0, 0.0));
        assert!(close(f[1], -2.0, -2.0));
        assert!(close(f[2], -2.0, 0.0));
        assert!(close(f[3], -2.0, 2.0));
    }

    #[test]
    fn constant_tube_has_constant_faces() {
        let a = Tensor3::from_vec(1, 1, 5, vec![C64::new(3.0, -1.0), C64::default(), C64::default(), C64::default(), C64::default()]).unwrap();
        for d in FaceStack::from_tensor(&a).faces() {
            assert!(close(d[(0, 0)], 3.0, -1.0));
        }
    }

    fn unitary_dft(p: usize) -> CMat {
        let s = 1.0 / (p as f64).sqrt();
        CMat::from_fn(p, p, |j, k| C64::from_polar(s, -2.0 * std::f64::consts::PI * (j * k) as f64 / p as f64))
    }

    fn kron_identity(f: &CMat, m: usize) -> CMat {
        let p = f.nrows();
        CMat::from_fn(p * m, p * m, |r, c| if r % m == c % m { f[(r / m, c / m)] } else { C64::default() })
    }

    fn sandwich_residual(a: &Tensor3) -> f64 {
        let (m, n, p) = a.dims();
        let fs = FaceStack::from_tensor(a);
        let mut bd = CMat::zeros(m * p, n * p);
        for k in 0..p {
            bd.view_mut((k * m, k * n), (m, n)).copy_from(fs.face(k));
        }
        let f = unitary_dft(p);
        let rebuilt = kron_identity(&f, m) * bd * kron_identity(&f.adjoint(), n);
        (rebuilt - a.bcirc()).norm() / a.entry_norm()
    }

    #[test]
    fn sandwich_convention_holds() {
        let mut rng = TensorRng::new(20);
        for &(m, n, p) in &[(2, 3, 4), (3, 2, 5), (1, 1, 1), (2, 2, 6)] {
            assert!(sandwich_residual(&rng.complex(m, n, p)) < 1e-12);
            assert!(sandwich_residual(&rng.real(m, n, p)) < 1e-12);
        }
    }

    #[test]
    fn real_input_faces_are_conjugate_symmetric() {
        let a = TensorRng::new(21).real(2, 3, 6);
        let fs = FaceStack::from_tensor(&a);
        for k in 1..6 {
            assert_eq!(*fs.face(6 - k), fs.face(k).map(|z| z.conj()));
        }
    }

    #[test]
    fn example_faces_from_three_slice_tensor() {
        let a = crate::examples::csvd_example();
        let fs = FaceStack::from_tensor(&a);
        let diag = |k: usize| -> Vec<f64> { (0..3).map(|i| fs.face(k)[(i, i)].re).collect() };
        assert_eq!(diag(0).iter().map(|x| x.round()).collect::<Vec<_>>(), vec![1.0, 0.0, 0.0]);
        let mut others = [diag(1), diag(2)];
        others.iter_mut().for_each(|d| d.iter_mut().for_each(|x| *x = x.round()));
        assert!(others.contains(&vec![1.0, 2.0, 0.0]));
        assert!(others.contains(&vec![0.0, 3.0, 2.0]));
        for k in 0..3 {
            let off: f64 = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| fs.face(k)[(i, j)].norm()).sum();
            assert!(off < 1e-12);
        }
    }

    #[test]
    fn tsvd_of_identity() {
        let i = identity(3, 4);
        let s = tsvd(&i).unwrap();
        assert!(s.u.rel_diff(&i) < 1e-14 && s.v.rel_diff(&i) < 1e-14 && s.s.rel_diff(&i) < 1e-14);
    }

    #[test]
    fn tsvd_reconstructs_and_factors_are_unitary() {
        let mut rng = TensorRng::new(22);
        for a in [rng.real(5, 3, 7), rng.complex(3, 5, 4), rng.real(2, 2, 1)] {
            let s = tsvd(&a).unwrap();
            let back = tprod(&tprod(&s.u, &s.s).unwrap(), &s.v.conj_transpose()).unwrap();
            assert!(back.rel_diff(&a) < 1e-12);
            assert!(crate::algebra::is_unitary(&s.u, 1e-10));
            assert!(crate::algebra::is_unitary(&s.v, 1e-10));
            if a.is_real(0.0) {
                assert!(s.u.is_real(0.0) && s.s.is_real(0.0) && s.v.is_real(0.0));
            }
        }
    }

    #[test]
    fn tube_singular_values() {
        let c = tcsvd(&tube(), None).unwrap();
        let mut got: Vec<f64> = c.window_values().collect();
        got.sort_by(|a, b| b.total_cmp(a));
        let want = [10.0, 8f64.sqrt(), 8f64.sqrt(), 2.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn csvd_example_ranks() {
        let c = tcsvd(&crate::examples::csvd_example(), None).unwrap();
        assert_eq!(c.r, 2);
        assert_eq!(c.face_ranks[0], 1);
        assert_eq!(c.face_ranks, vec![1, 2, 2]);
        let back = tprod(&tprod(&c.ur, &c.sr).unwrap(), &c.vr.conj_transpose()).unwrap();
        assert!(back.rel_diff(&crate::examples::csvd_example()) < 1e-12);
    }

    #[test]
    fn csvd_of_zero_tensor() {
        let c = tcsvd(&Tensor3::zeros(2, 3, 2), None).unwrap();
        assert_eq!(c.r, 0);
        assert_eq!(c.ur.dims(), (2, 0, 2));
        let (l, r) = projectors(&c);
        assert_eq!(l.fnorm() + r.fnorm(), 0.0);
        assert_eq!(c.isometry(), Tensor3::zeros(2, 3, 2));
    }

    #[test]
    fn t_eigenvalues_examples() {
        assert_eq!(t_eigenvalues(&identity(2, 2)).unwrap().len(), 4);
        assert!(t_eigenvalues(&identity(2, 2)).unwrap().iter().all(|x| (x - 1.0).abs() < 1e-14));
        let ev = t_eigenvalues(&tube()).unwrap();
        for (g, w) in ev.iter().zip([100.0, 8.0, 8.0, 4.0]) {
            assert!((g - w).abs() < 1e-10);
        }
    }

    #[test]
    fn t_eigenvalues_match_dense_eigensolver() {
        let a = TensorRng::new(23).complex(3, 2, 3);
        let aah = tprod(&a, &a.conj_transpose()).unwrap();
        let h = aah.bcirc();
        let dense = nalgebra::SymmetricEigen::new(h).eigenvalues;
        let mut want: Vec<f64> = dense.iter().copied().filter(|&x| x > 1e-9).collect();
        want.sort_by(|x, y| y.total_cmp(x));
        let got = t_eigenvalues(&a).unwrap();
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9 * want[0]);
        }
    }

    #[test]
    fn projectors_of_full_rank_square_are_identity() {
        let a = TensorRng::new(24).real(3, 3, 4);
        let (l, r) = projectors(&tcsvd(&a, None).unwrap());
        assert!(l.rel_diff(&identity(3, 4)) < 1e-12);
        assert!(r.rel_diff(&identity(3, 4)) < 1e-12);
    }

    #[test]
    fn partial_isometries_of_identity() {
        let set = partial_isometries(&tcsvd(&identity(2, 3), None).unwrap());
        assert_eq!(set.components.len(), 6);
        assert!(set.e.rel_diff(&identity(2, 3)) < 1e-14);
    }

    #[test]
    fn partial_isometry_set_invariants() {
        let a = TensorRng::new(25).real(3, 2, 3);
        let c = tcsvd(&a, None).unwrap();
        let set = partial_isometries(&c);
        let mut sum = Tensor3::zeros(3, 2, 3);
        let mut weighted = Tensor3::zeros(3, 2, 3);
        for comp in &set.components {
            sum = sum + &comp.tensor;
            weighted = weighted + comp.tensor.scale_real(comp.value);
        }
        assert!(sum.rel_diff(&set.e) < 1e-12);
        assert!(weighted.rel_diff(&a) < 1e-12);
        assert!(set.e.is_real(1e-8));
        for (x, cx) in set.components.iter().enumerate() {
            for (y, cy) in set.components.iter().enumerate() {
                if x == y {
                    continue;
                }
                let l = tprod(&cx.tensor, &cy.tensor.conj_transpose()).unwrap();
                let r = tprod(&cx.tensor.conj_transpose(), &cy.tensor).unwrap();
                assert!(l.fnorm() < 1e-10 && r.fnorm() < 1e-10);
            }
            let pinv = crate::solve::pinv(&cx.tensor).unwrap();
            assert!(pinv.rel_diff(&cx.tensor.conj_transpose()) < 1e-10);
        }
        let e = &set.e;
        let eee = tprod(&tprod(e, &e.conj_transpose()).unwrap(), e).unwrap();
        assert!(eee.rel_diff(e) < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn dft_round_trip(seed in any::<u64>(), m in 1usize..4, n in 1usize..4, p in 1usize..9, complex in any::<bool>()) {
            let a = TensorRng::new(seed).gaussian(m, n, p, complex);
            let back = FaceStack::from_tensor(&a).to_tensor();
            prop_assert!(back.rel_diff(&a) < 1e-13);
        }

        #[test]
        fn tcsvd_invariants(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, p in 1usize..6, r in 0usize..4, complex in any::<bool>()) {
            let mut rng = TensorRng::new(seed);
            let a = rng.low_rank(m, n, p, r, complex);
            let c = tcsvd(&a, None).unwrap();
            prop_assert!(c.r <= r.min(m).min(n));
            prop_assert_eq!(c.r, c.face_ranks.iter().copied().max().unwrap());
            let back = tprod(&tprod(&c.ur, &c.sr).unwrap(), &c.vr.conj_transpose()).unwrap();
            prop_assert!(back.rel_diff(&a) < 1e-10);
            if c.r > 0 {
                let i = identity(c.r, p);
                prop_assert!(tprod(&c.ur.conj_transpose(), &c.ur).unwrap().rel_diff(&i) < 1e-10);
                prop_assert!(tprod(&c.vr.conj_transpose(), &c.vr).unwrap().rel_diff(&i) < 1e-10);
            }
            if !complex {
                prop_assert!(c.ur.is_real(1e-8) && c.vr.is_real(1e-8));
            }
            let spec = a.specnorm();
            prop_assert!((spec - c.max_value()).abs() <= 1e-12 * (1.0 + spec));
            let fro: f64 = c.window_values().map(|x| x * x).sum::<f64>();
            prop_assert!((fro - a.fnorm().powi(2)).abs() <= 1e-10 * (1.0 + fro));
        }

        #[test]
        fn projectors_match_pseudo_inverse(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, p in 1usize..5, r in 0usize..4) {
            let a = TensorRng::new(seed).low_rank(m, n, p, r, true);
            let c = tcsvd(&a, None).unwrap();
            let (l, rr) = projectors(&c);
            let x = crate::solve::pinv(&a).unwrap();
            let ax = tprod(&a, &x).unwrap();
            let xa = tprod(&x, &a).unwrap();
            prop_assert!((&l - &ax).fnorm() <= 1e-9 * (1.0 + l.fnorm()));
            prop_assert!((&rr - &xa).fnorm() <= 1e-9 * (1.0 + rr.fnorm()));
            prop_assert!((tprod(&l, &l).unwrap() - &l).fnorm() <= 1e-10 * (1.0 + l.fnorm()));
            prop_assert!((l.conj_transpose() - &l).fnorm() <= 1e-12 * (1.0 + l.fnorm()));
        }
    }
}
