//! Dense complex matrix kernels used face by face, plus the dense oracles
//! (Moore-Penrose inverse, generalized matrix function, eigen-based matrix
//! function) that the tests compare against.

use nalgebra::{linalg::Schur, DMatrix};
use num_complex::Complex64 as C64;

pub type CMat = DMatrix<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Full SVD `a = u * diag(s) * v^H` with square unitary `u` and `v`,
/// singular values descending, and the phase of each left singular vector
/// fixed so its largest-magnitude entry is real positive.
#[derive(Clone, Debug)]
pub struct FullSvd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

impl FullSvd {
    pub fn conj(&self) -> Self {
        Self {
            u: self.u.map(|z| z.conj()),
            s: self.s.clone(),
            v: self.v.map(|z| z.conj()),
        }
    }
}

pub fn to_complex(a: &DMatrix<f64>) -> CMat {
    a.map(|x| C64::new(x, 0.0))
}

pub fn real_part(a: &CMat) -> DMatrix<f64> {
    a.map(|z| z.re)
}

pub fn svd_full(a: &CMat) -> Option<FullSvd> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Some(FullSvd { u: CMat::identity(m, m), s: vec![], v: CMat::identity(n, n) });
    }
    let svd = faer::Mat::<C64>::from_fn(m, n, |i, j| a[(i, j)]).svd().ok()?;
    let s: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
    let mut u = CMat::from_fn(m, m, |i, j| svd.U()[(i, j)]);
    let mut v = CMat::from_fn(n, n, |i, j| svd.V()[(i, j)]);
    fix_phases(&mut u, &mut v);
    Some(FullSvd { u, s, v })
}

/// SVD of a real matrix; the factors are exactly real.
pub fn svd_full_real(a: &DMatrix<f64>) -> Option<FullSvd> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Some(FullSvd { u: CMat::identity(m, m), s: vec![], v: CMat::identity(n, n) });
    }
    let svd = faer::Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)]).svd().ok()?;
    let s: Vec<f64> = svd.S().column_vector().iter().copied().collect();
    let mut u = CMat::from_fn(m, m, |i, j| C64::new(svd.U()[(i, j)], 0.0));
    let mut v = CMat::from_fn(n, n, |i, j| C64::new(svd.V()[(i, j)], 0.0));
    fix_phases(&mut u, &mut v);
    Some(FullSvd { u, s, v })
}

/// Multiplies column `j` of both `u` and `v` by the unit scalar that makes
/// the largest-magnitude entry of `u[:, j]` real positive.
fn fix_phases(u: &mut CMat, v: &mut CMat) {
    for j in 0..u.ncols() {
        let mut best = ZERO;
        for z in u.column(j).iter() {
            if z.norm() > best.norm() * (1.0 + 1e-12) {
                best = *z;
            }
        }
        if best.norm() == 0.0 {
            continue;
        }
        let phase = best.conj() / best.norm();
        u.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        if j < v.ncols() {
            v.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
    }
}

/// Extends the orthonormal columns of `q` (m x k) to an m x m unitary
/// matrix. Candidates are standard basis vectors, picked greedily by largest
/// residual and orthogonalized twice; real input gives real output.
pub fn complete_basis(q: &CMat) -> CMat {
    let (m, k) = q.shape();
    let mut cols: Vec<Vec<C64>> = (0..k).map(|j| q.column(j).iter().copied().collect()).collect();
    let mut used = vec![false; m];
    while cols.len() < m {
        let mut best: Option<(usize, Vec<C64>, f64)> = None;
        for (i, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let mut e = vec![ZERO; m];
            e[i] = C64::new(1.0, 0.0);
            orthogonalize(&mut e, &cols);
            orthogonalize(&mut e, &cols);
            let nrm = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|b| nrm > b.2) {
                best = Some((i, e, nrm));
            }
        }
        let (i, mut e, nrm) = best.expect("a candidate remains while the basis is incomplete");
        used[i] = true;
        e.iter_mut().for_each(|z| *z /= nrm);
        cols.push(e);
    }
    CMat::from_fn(m, m, |i, j| cols[j][i])
}

fn orthogonalize(e: &mut [C64], basis: &[Vec<C64>]) {
    for b in basis {
        let dot: C64 = b.iter().zip(e.iter()).map(|(x, y)| x.conj() * y).sum();
        for (x, y) in e.iter_mut().zip(b) {
            *x -= dot * y;
        }
    }
}

/// Dense Moore-Penrose inverse via SVD, truncating singular values at or
/// below `tol` (default: `max(m, n) * eps * sigma_max`).
pub fn pinv(a: &CMat, tol: Option<f64>) -> CMat {
    let (m, n) = a.shape();
    let f = svd_full(a).expect("SVD converges");
    let smax = f.s.first().copied().unwrap_or(0.0);
    let tol = tol.unwrap_or(m.max(n) as f64 * f64::EPSILON * smax);
    let mut x = CMat::zeros(n, m);
    for (j, &s) in f.s.iter().enumerate() {
        if s > tol {
            x += f.v.column(j) * f.u.column(j).adjoint() * C64::new(1.0 / s, 0.0);
        }
    }
    x
}

/// Generalized matrix function `sum_j f(s_j) u_j v_j^H` over the nonzero
/// singular values of `a`.
pub fn gen_matfun(a: &CMat, f: impl Fn(f64) -> f64, tol: Option<f64>) -> CMat {
    let (m, n) = a.shape();
    let svd = svd_full(a).expect("SVD converges");
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let tol = tol.unwrap_or(m.max(n) as f64 * f64::EPSILON * smax);
    let mut out = CMat::zeros(m, n);
    for (j, &s) in svd.s.iter().enumerate() {
        if s > tol {
            out += svd.u.column(j) * svd.v.column(j).adjoint() * C64::new(f(s), 0.0);
        }
    }
    out
}

/// Complex Schur form `a = q t q^H` with upper-triangular `t`.
pub fn schur(a: &CMat) -> Option<(CMat, CMat)> {
    let s = Schur::try_new(a.clone(), f64::EPSILON, 0)?;
    Some(s.unpack())
}

pub fn eigenvalues(a: &CMat) -> Vec<C64> {
    if a.nrows() == 0 {
        return vec![];
    }
    match schur(a) {
        Some((_, t)) => (0..t.nrows()).map(|i| t[(i, i)]).collect(),
        None => vec![],
    }
}

/// Outcome of the eigenvector path of a face matrix function.
pub enum EigPath {
    Ok(CMat),
    IllConditioned(f64),
}

/// `f(a) = X diag(f(lambda)) X^{-1}` from a complex Schur form, refusing
/// when the eigenvector condition number exceeds `max_cond`.
pub fn eig_matfun(a: &CMat, f: &dyn Fn(C64) -> C64, max_cond: f64) -> Option<EigPath> {
    let n = a.nrows();
    if n == 0 {
        return Some(EigPath::Ok(CMat::zeros(0, 0)));
    }
    let (q, t) = schur(a)?;
    let tnorm = t.norm().max(f64::MIN_POSITIVE);
    let mut strict = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            strict += t[(i, j)].norm_sqr();
        }
    }
    let lambdas: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let fl: Vec<C64> = lambdas.iter().map(|&l| f(l)).collect();
    if strict.sqrt() <= 1e-13 * tnorm {
        // Normal face: Q itself is a unitary eigenbasis.
        let mut out = q.clone();
        for (j, w) in fl.iter().enumerate() {
            out.column_mut(j).iter_mut().for_each(|z| *z *= w);
        }
        return Some(EigPath::Ok(out * q.adjoint()));
    }
    // Eigenvectors of the triangular factor by back substitution.
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);
    let mut y = CMat::zeros(n, n);
    for k in 0..n {
        y[(k, k)] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = ZERO;
            for l in i + 1..=k {
                s += t[(i, l)] * y[(l, k)];
            }
            let mut d = t[(i, i)] - t[(k, k)];
            if d.norm() < smin {
                d = C64::new(smin, 0.0);
            }
            y[(i, k)] = -s / d;
        }
        let nrm = y.column(k).norm();
        y.column_mut(k).iter_mut().for_each(|z| *z /= nrm);
    }
    let x = &q * &y;
    let sv = x.singular_values();
    let smax = sv.max();
    let smin_x = sv.min();
    let cond = if smin_x > 0.0 { smax / smin_x } else { f64::INFINITY };
    if cond > max_cond {
        return Some(EigPath::IllConditioned(cond));
    }
    let mut xf = x.clone();
    for (j, w) in fl.iter().enumerate() {
        xf.column_mut(j).iter_mut().for_each(|z| *z *= w);
    }
    // f(a) = X F X^{-1}, i.e. solve f(a) X = X F for f(a).
    let lu = x.adjoint().lu();
    let sol = lu.solve(&xf.adjoint())?;
    Some(EigPath::Ok(sol.adjoint()))
}

/// Spectral norm.
pub fn norm2(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}
