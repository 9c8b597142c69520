//! Tensor functions: the generalized function `f^<>(A)` acting on singular
//! values, the standard T-function acting on Fourier-face eigenvalues, and
//! their series forms.

use num_complex::Complex64 as C64;

use crate::algebra::{tprod, tprod_chain};
use crate::dense::{self, CMat, EigPath};
use crate::error::{dim_mismatch, Error, Result};
use crate::scalar::{NamedFn, ScalarFn, Series};
use crate::spectral::{tcsvd, FaceStack, TCsvd};
use crate::tensor::{block, BlockSpec, Tensor3};

/// Eigenvector condition number above which the eigen path is abandoned.
pub const MAX_EIGVEC_COND: f64 = 1e8;
/// Relative size at which a power series is considered converged.
pub const SERIES_TOL: f64 = 1e-12;
/// Hard cap on power-series terms.
pub const SERIES_MAX_TERMS: usize = 500;

/// `f` on every window value of a compact T-SVD, with the zero and domain
/// checks shared by every generalized path.
pub(crate) fn window_values(c: &TCsvd, f: &ScalarFn) -> Result<Vec<Vec<f64>>> {
    if c.has_window_zero() && f.value_at_zero() != 0.0 {
        return Err(Error::ZeroSingularValueRequiresFZero { f_zero: f.value_at_zero() });
    }
    c.faces()
        .iter()
        .map(|face| {
            face.c
                .iter()
                .map(|&x| {
                    let v = f.at_singular_value(x);
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::FnDomainError { at: x })
                    }
                })
                .collect()
        })
        .collect()
}

/// `f^<>(A) = Ur * f(Sr) * Vr^H` from an existing decomposition.
pub fn gfun_from_csvd(c: &TCsvd, f: &ScalarFn) -> Result<Tensor3> {
    let vals = window_values(c, f)?;
    Ok(c.assemble_with(false, |k, j, _| C64::new(vals[k][j], 0.0)))
}

/// Generalized tensor function `f^<>(A)`.
pub fn gfun(a: &Tensor3, f: &ScalarFn) -> Result<Tensor3> {
    gfun_from_csvd(&tcsvd(a, None)?, f)
}

/// `f` applied to a square matrix by power series, stopping when two
/// consecutive terms are below `SERIES_TOL` relative to the partial sum.
fn series_matfun(d: &CMat, s: &Series) -> Result<CMat> {
    let n = d.nrows();
    let mut sum = CMat::identity(n, n) * C64::new(s.coeff(0), 0.0);
    let mut pow = CMat::identity(n, n);
    let mut small = 0;
    for k in 1..SERIES_MAX_TERMS {
        pow = &pow * d;
        let a = s.coeff(k);
        let term_norm = a.abs() * pow.norm();
        if !term_norm.is_finite() || !pow.norm().is_finite() {
            return Err(Error::SeriesDivergence { terms: k });
        }
        if a != 0.0 {
            sum += &pow * C64::new(a, 0.0);
        }
        if s.degree.is_some_and(|deg| k >= deg) {
            return Ok(sum);
        }
        if term_norm <= SERIES_TOL * sum.norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesDivergence { terms: SERIES_MAX_TERMS })
}

/// `f` of one face matrix: eigen path first, series fallback.
fn face_matfun(face: &CMat, f: &ScalarFn, k: usize) -> Result<CMat> {
    if let Some(g) = f.complex_fn() {
        match dense::eig_matfun(face, &|z| g(z), MAX_EIGVEC_COND) {
            Some(EigPath::Ok(m)) => return Ok(m),
            Some(EigPath::IllConditioned(cond)) => {
                return match f.series() {
                    Some(s) => series_matfun(face, s),
                    None => Err(Error::DefectiveFace { face: k + 1, cond }),
                };
            }
            None => {}
        }
    }
    match f.series() {
        Some(s) => series_matfun(face, s),
        None if f.has_complex() => Err(Error::DefectiveFace { face: k + 1, cond: f64::INFINITY }),
        None => Err(Error::NoComplexExtension("a standard tensor function")),
    }
}

/// Standard T-function `bcirc^{-1}(f(bcirc(A)))`, computed as the matrix
/// function of each Fourier face. For real `A` the result is real provided
/// `f(conj z) = conj f(z)`.
pub fn standard_tfn(a: &Tensor3, f: &ScalarFn) -> Result<Tensor3> {
    let (m, n, p) = a.dims();
    if m != n {
        return Err(dim_mismatch("standard_tfn", format!("tensor is {m}x{n}x{p}, not F-square")));
    }
    let fs = FaceStack::from_tensor(a);
    let mut err = None;
    let out = FaceStack::build(n, n, p, fs.is_real(), |k| match face_matfun(fs.face(k), f, k) {
        Ok(x) => x,
        Err(e) => {
            err.get_or_insert(e);
            CMat::zeros(n, n)
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out.to_tensor()),
    }
}

/// Generalized power: `A^(0) = E` and `A^(k) = A^(k-1) * E^H * A`.
pub fn gpower(a: &Tensor3, k: usize) -> Result<Tensor3> {
    let e = tcsvd(a, None)?.isometry();
    let eh = e.conj_transpose();
    let mut acc = e;
    for _ in 0..k {
        acc = tprod_chain(&[&acc, &eh, a])?;
    }
    Ok(acc)
}

/// Taylor expansion `sum_k f^(k)(z0)/k! (A - z0 E)^(k)` in generalized
/// powers. Terms are added until the scalar partial sums agree with `f` on
/// every window value to `tol` (relative to `max(1, |f|)`).
pub fn gfun_taylor(a: &Tensor3, f: &ScalarFn, z0: f64, max_terms: usize, tol: f64) -> Result<Tensor3> {
    let c = tcsvd(a, None)?;
    if c.r == 0 {
        return Ok(Tensor3::zeros(a.m(), a.n(), a.p()));
    }
    if f.taylor_coeff(z0, 0).is_none() {
        return Err(Error::NoTaylorCoefficients { z0 });
    }
    let radius = f.taylor_radius(z0).unwrap_or(0.0);
    let values: Vec<f64> = c.window_values().collect();
    for &v in &values {
        if (v - z0).abs() >= radius {
            return Err(Error::RadiusViolation { z0, value: v, radius });
        }
    }
    let targets: Vec<f64> = window_values(&c, f)?.into_iter().flatten().collect();
    let scale = targets.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let e = c.isometry();
    let eh = e.conj_transpose();
    let b = a - &e.scale_real(z0);
    let mut term = e.clone();
    let mut sum = Tensor3::zeros(a.m(), a.n(), a.p());
    let mut partial = vec![0.0; values.len()];
    let mut last = f64::INFINITY;
    for k in 0..max_terms {
        let coeff = f.taylor_coeff(z0, k).expect("checked above");
        if k > 0 {
            term = tprod_chain(&[&term, &eh, &b])?;
        }
        if coeff != 0.0 {
            sum = sum + term.scale_real(coeff);
        }
        for (s, &v) in partial.iter_mut().zip(&values) {
            *s += coeff * (v - z0).powi(k as i32);
        }
        last = partial.iter().zip(&targets).map(|(s, t)| (s - t).abs()).fold(0.0, f64::max);
        if last <= tol * scale {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence { terms: max_terms, last })
}

/// Generalized function of a named scalar function. Functions with
/// `f(0) != 0` need every window value positive.
pub fn named_gfun(a: &Tensor3, name: NamedFn) -> Result<Tensor3> {
    let f = name.to_fn();
    let c = tcsvd(a, None)?;
    if name.requires_positive() && c.has_window_zero() {
        return Err(Error::ZeroSingularValueRequiresFZero { f_zero: f.value_at_zero() });
    }
    gfun_from_csvd(&c, &f)
}

/// Second path for named functions with a Maclaurin series:
/// `f^<>(A) = sum a_2k (A*A^H)^k * E + sum a_2k+1 (A*A^H)^k * A`.
pub fn named_gfun_series(a: &Tensor3, name: NamedFn) -> Result<Tensor3> {
    let f = name.to_fn();
    let series = f.series().ok_or(Error::NoTaylorCoefficients { z0: 0.0 })?;
    let c = tcsvd(a, None)?;
    if name.requires_positive() && c.has_window_zero() {
        return Err(Error::ZeroSingularValueRequiresFZero { f_zero: f.value_at_zero() });
    }
    series_sum(a, &c, series)
}

/// The even/odd series path for any function carrying a Maclaurin series.
pub fn gfun_series(a: &Tensor3, f: &ScalarFn) -> Result<Tensor3> {
    let series = f.series().ok_or(Error::NoTaylorCoefficients { z0: 0.0 })?;
    let c = tcsvd(a, None)?;
    if c.has_window_zero() && series.coeff(0) != 0.0 {
        return Err(Error::ZeroSingularValueRequiresFZero { f_zero: series.coeff(0) });
    }
    series_sum(a, &c, series)
}

fn series_sum(a: &Tensor3, c: &TCsvd, series: &Series) -> Result<Tensor3> {
    let smax = c.max_value();
    if smax >= series.radius {
        return Err(Error::RadiusViolation { z0: 0.0, value: smax, radius: series.radius });
    }
    let gram = tprod(a, &a.conj_transpose())?;
    let mut even = c.isometry();
    let mut odd = a.clone();
    let mut sum = Tensor3::zeros(a.m(), a.n(), a.p());
    let mut small = 0;
    for k in 0..SERIES_MAX_TERMS / 2 {
        if k > 0 {
            even = tprod(&gram, &even)?;
            odd = tprod(&gram, &odd)?;
        }
        let (ae, ao) = (series.coeff(2 * k), series.coeff(2 * k + 1));
        let contribution = ae.abs() * smax.powi(2 * k as i32) + ao.abs() * smax.powi(2 * k as i32 + 1);
        if ae != 0.0 {
            sum = sum + even.scale_real(ae);
        }
        if ao != 0.0 {
            sum = sum + odd.scale_real(ao);
        }
        if series.degree.is_some_and(|d| 2 * k + 1 >= d) {
            return Ok(sum);
        }
        if contribution <= SERIES_TOL * sum.fnorm().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesDivergence { terms: SERIES_MAX_TERMS })
}

/// Standard T-function by its Maclaurin series `sum a_k A^k`, valid when
/// the spectral norm is inside the radius of convergence.
pub fn standard_tfn_series(a: &Tensor3, f: &ScalarFn) -> Result<Tensor3> {
    let (m, n, p) = a.dims();
    if m != n {
        return Err(dim_mismatch("standard_tfn_series", format!("tensor is {m}x{n}x{p}, not F-square")));
    }
    let series = f.series().ok_or(Error::NoTaylorCoefficients { z0: 0.0 })?;
    let norm = a.specnorm();
    if norm >= series.radius {
        return Err(Error::RadiusViolation { z0: 0.0, value: norm, radius: series.radius });
    }
    let mut power = Tensor3::identity(n, p);
    let mut sum = power.scale_real(series.coeff(0));
    let mut small = 0;
    for k in 1..SERIES_MAX_TERMS {
        power = tprod(&power, a)?;
        let ak = series.coeff(k);
        if ak != 0.0 {
            sum = sum + power.scale_real(ak);
        }
        if series.degree.is_some_and(|d| k >= d) {
            return Ok(sum);
        }
        if ak.abs() * norm.powi(k as i32) <= SERIES_TOL * sum.fnorm().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesDivergence { terms: SERIES_MAX_TERMS })
}

/// Result of [`mixed_block_fn`].
#[derive(Clone, Debug)]
pub struct MixedBlock {
    /// `f` of the Hermitian dilation `[[0, A], [A^H, 0]]` as a standard
    /// T-function.
    pub full: Tensor3,
    /// `[[f_even(sqrt(A*A^H)), f_odd^<>(A)], [f_odd^<>(A)^H, f_even(sqrt(A^H*A))]]`.
    pub assembled: Tensor3,
    /// Relative difference of the two.
    pub residual: f64,
}

/// `f` of the Hermitian dilation of `A` computed two ways: directly as a
/// standard T-function, and from the even and odd parts of `f`.
pub fn mixed_block_fn(a: &Tensor3, f: &ScalarFn) -> Result<MixedBlock> {
    let (m, n, p) = a.dims();
    let dilation = block(&BlockSpec::quad(Tensor3::zeros(m, m, p), a.clone(), a.conj_transpose(), Tensor3::zeros(n, n, p)))?;
    let full = standard_tfn(&dilation, f)?;
    let (fe, fo) = (f.even_part(), f.odd_part());
    let fs = FaceStack::from_tensor(a);
    let svds = fs.svds()?;
    let gram_fn = |u: &CMat, s: &[f64], dim: usize| -> CMat {
        let mut scaled = u.clone();
        for j in 0..dim {
            let sigma = s.get(j).copied().unwrap_or(0.0);
            let w = fe.eval(sigma);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= w);
        }
        scaled * u.adjoint()
    };
    let left = FaceStack::build(m, m, p, fs.is_real(), |k| gram_fn(&svds[k].u, &svds[k].s, m)).to_tensor();
    let right = FaceStack::build(n, n, p, fs.is_real(), |k| gram_fn(&svds[k].v, &svds[k].s, n)).to_tensor();
    let off = gfun(a, &fo)?;
    let assembled = block(&BlockSpec::quad(left, off.clone(), off.conj_transpose(), right))?;
    let residual = full.rel_diff(&assembled);
    Ok(MixedBlock { full, assembled, residual })
}
