//! The T-product ring: products, identity, inverses, unitarity and
//! bilinear/sesquilinear forms.

use crate::dense::CMat;
use crate::error::{dim_mismatch, Error, Result};
use crate::spectral::{default_rank_tol, independent_faces, FaceStack};
use crate::tensor::Tensor3;

fn check_conformable(op: &'static str, a: &Tensor3, b: &Tensor3) -> Result<()> {
    if a.n() != b.m() || a.p() != b.p() {
        return Err(dim_mismatch(op, format!("{:?} times {:?}", a.dims(), b.dims())));
    }
    Ok(())
}

/// T-product `A * B` through the Fourier faces.
pub fn tprod(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    check_conformable("tprod", a, b)?;
    if a.p() == 1 {
        let prod = a.slice(0) * b.slice(0);
        return Ok(Tensor3::from_fn(a.m(), b.n(), 1, |i, j, _| prod[(i, j)]));
    }
    let fa = FaceStack::from_tensor(a);
    let fb = FaceStack::from_tensor(b);
    Ok(fa.mul(&fb)?.to_tensor())
}

/// T-product by its definition `fold(bcirc(A) unfold(B))`. Quadratic in
/// `p`; kept as the reference the fast path is checked against.
pub fn tprod_dense(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    check_conformable("tprod_dense", a, b)?;
    Tensor3::fold(&(a.bcirc() * b.unfold()), a.m(), b.n(), a.p())
}

/// Left-to-right product of a chain of tensors.
pub fn tprod_chain(factors: &[&Tensor3]) -> Result<Tensor3> {
    let (first, rest) = factors.split_first().ok_or_else(|| dim_mismatch("tprod_chain", "empty chain"))?;
    rest.iter().try_fold((*first).clone(), |acc, t| tprod(&acc, t))
}

pub fn identity(n: usize, p: usize) -> Tensor3 {
    Tensor3::identity(n, p)
}

/// Inverse under the T-product, face by face.
pub fn inverse(a: &Tensor3) -> Result<Tensor3> {
    let (m, n, p) = a.dims();
    if m != n {
        return Err(dim_mismatch("inverse", format!("tensor is {m}x{n}x{p}, not F-square")));
    }
    let fs = FaceStack::from_tensor(a);
    let smins: Vec<(f64, f64)> = fs
        .faces()
        .iter()
        .map(|f| {
            let sv = f.singular_values();
            (sv.max(), sv.min())
        })
        .collect();
    let smax = smins.iter().map(|s| s.0).fold(0.0, f64::max);
    let tol = default_rank_tol(n, n, p, smax);
    let (worst, min_sv) = smins
        .iter()
        .enumerate()
        .map(|(k, s)| (k, s.1))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("p >= 1");
    if min_sv <= tol || smax == 0.0 {
        return Err(Error::Singular { face: worst + 1, min_sv });
    }
    let mut faces = Vec::with_capacity(p);
    for (k, &(_, min_sv)) in smins.iter().enumerate() {
        if !independent_faces(p, fs.is_real()).contains(&k) {
            faces.push(CMat::zeros(n, n));
            continue;
        }
        let inv = fs.face(k).clone().lu().try_inverse().ok_or(Error::Singular { face: k + 1, min_sv })?;
        faces.push(inv);
    }
    Ok(FaceStack::from_faces(faces, fs.is_real())?.to_tensor())
}

/// `||Q^H * Q - I|| <= tol` and `||Q * Q^H - I|| <= tol` in the tensor
/// Frobenius norm.
pub fn is_unitary(q: &Tensor3, tol: f64) -> bool {
    unitary_residual(q).is_some_and(|r| r <= tol)
}

/// Larger of the two defects checked by [`is_unitary`]; `None` when `q` is
/// not F-square.
pub fn unitary_residual(q: &Tensor3) -> Option<f64> {
    if !q.is_square() {
        return None;
    }
    let i = identity(q.n(), q.p());
    let qh = q.conj_transpose();
    let l = (tprod(&qh, q).ok()? - &i).fnorm();
    let r = (tprod(q, &qh).ok()? - &i).fnorm();
    Some(l.max(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormType {
    Bilinear,
    Sesquilinear,
}

/// A bilinear (`x^T * T * y`) or sesquilinear (`x^H * T * y`) form defined
/// by an invertible F-square tensor `T`.
#[derive(Clone, Debug)]
pub struct FormKind {
    pub kind: FormType,
    pub form_tensor: Tensor3,
}

impl FormKind {
    pub fn bilinear(t: Tensor3) -> Self {
        Self { kind: FormType::Bilinear, form_tensor: t }
    }

    pub fn sesquilinear(t: Tensor3) -> Self {
        Self { kind: FormType::Sesquilinear, form_tensor: t }
    }

    /// `A^T` or `A^H` depending on the form type.
    pub fn star(&self, a: &Tensor3) -> Tensor3 {
        match self.kind {
            FormType::Bilinear => a.transpose(),
            FormType::Sesquilinear => a.conj_transpose(),
        }
    }
}

pub fn form_eval(form: &FormKind, x: &Tensor3, y: &Tensor3) -> Result<Tensor3> {
    let t = &form.form_tensor;
    if x.n() != 1 || y.n() != 1 || x.m() != t.m() || y.m() != t.n() {
        return Err(dim_mismatch(
            "form_eval",
            format!("x {:?}, y {:?} against form tensor {:?}", x.dims(), y.dims(), t.dims()),
        ));
    }
    tprod(&tprod(&form.star(x), t)?, y)
}

/// The adjoint `T^{-1} * A^T * T` (bilinear) or `T^{-1} * A^H * T`
/// (sesquilinear), characterised by `<A x, y> = <x, adjoint(A) y>`.
pub fn adjoint(a: &Tensor3, form: &FormKind) -> Result<Tensor3> {
    let t = &form.form_tensor;
    if !a.is_square() || a.n() != t.n() || a.p() != t.p() {
        return Err(dim_mismatch("adjoint", format!("{:?} against form tensor {:?}", a.dims(), t.dims())));
    }
    tprod_chain(&[&inverse(t)?, &form.star(a), t])
}
