//! Moore-Penrose inverse, least squares, the equation `A * X * B = D`, the
//! generalized resolvent, and contour-integral evaluations of tensor
//! functions.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::algebra::tprod;
use crate::dense::{self, CMat};
use crate::error::{dim_mismatch, Error, Result};
use crate::genfun::window_values;
use crate::scalar::ScalarFn;
use crate::spectral::{tcsvd, FaceStack, TCsvd};
use crate::tensor::Tensor3;

/// Moore-Penrose inverse `Vr * Sr^+ * Ur^H`.
pub fn pinv(a: &Tensor3) -> Result<Tensor3> {
    Ok(pinv_from_csvd(&tcsvd(a, None)?))
}

pub fn pinv_from_csvd(c: &TCsvd) -> Tensor3 {
    c.assemble_adjoint(|x| C64::new(if x > 0.0 { 1.0 / x } else { 0.0 }, 0.0))
}

/// Reference inverse: dense pseudo-inverse of `bcirc(A)` pulled back.
pub fn pinv_dense(a: &Tensor3) -> Result<Tensor3> {
    let (m, n, p) = a.dims();
    let x = dense::pinv(&a.bcirc(), None);
    Tensor3::bcirc_inv(&x, n, m, p)
}

/// The four Penrose residuals `||AXA - A||/||A||`, `||XAX - X||/||X||`,
/// `||(AX)^H - AX||/||AX||`, `||(XA)^H - XA||/||XA||` (zero denominators
/// count as 1).
pub fn penrose_residuals(a: &Tensor3, x: &Tensor3) -> Result<[f64; 4]> {
    let rel = |d: f64, s: f64| if s > 0.0 { d / s } else { d };
    let ax = tprod(a, x)?;
    let xa = tprod(x, a)?;
    Ok([
        rel((tprod(&ax, a)? - a).fnorm(), a.fnorm()),
        rel((tprod(&xa, x)? - x).fnorm(), x.fnorm()),
        rel((ax.conj_transpose() - &ax).fnorm(), ax.fnorm()),
        rel((xa.conj_transpose() - &xa).fnorm(), xa.fnorm()),
    ])
}

/// Minimum-norm least-squares solution `A^+ * B`.
pub fn lstsq(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    if a.m() != b.m() || a.p() != b.p() {
        return Err(dim_mismatch("lstsq", format!("A is {:?}, B is {:?}", a.dims(), b.dims())));
    }
    tprod(&pinv(a)?, b)
}

/// Solution of `A * X * B = D` with its consistency residual.
#[derive(Clone, Debug)]
pub struct AxbSolution {
    pub x: Tensor3,
    /// `||A*X*B - D|| / ||D||`; zero exactly when the equation is solvable.
    pub residual: f64,
}

/// `X = A^+ * D * B^+`, the minimum-norm solution when one exists.
pub fn solve_axb(a: &Tensor3, b: &Tensor3, d: &Tensor3) -> Result<AxbSolution> {
    let p = a.p();
    if b.p() != p || d.p() != p || d.m() != a.m() || d.n() != b.n() {
        return Err(dim_mismatch(
            "solve_axb",
            format!("A {:?}, B {:?}, D {:?}", a.dims(), b.dims(), d.dims()),
        ));
    }
    let x = tprod(&tprod(&pinv(a)?, d)?, &pinv(b)?)?;
    let axb = tprod(&tprod(a, &x)?, b)?;
    let dn = d.fnorm();
    let defect = (&axb - d).fnorm();
    let residual = if dn > 0.0 { defect / dn } else { defect };
    Ok(AxbSolution { x, residual })
}

/// The generalized resolvent `z -> (z E - A)^+`.
#[derive(Clone, Debug)]
pub struct Resolvent {
    base: TCsvd,
    e: Tensor3,
    scale: f64,
}

/// Shifts closer than this (relative to the largest singular value) to a
/// window value are rejected.
pub const NEAR_SINGULAR_TOL: f64 = 1e-8;

impl Resolvent {
    pub fn new(a: &Tensor3) -> Result<Self> {
        let base = tcsvd(a, None)?;
        let e = base.isometry();
        let scale = base.max_value().max(f64::MIN_POSITIVE);
        Ok(Self { base, e, scale })
    }

    pub fn isometry(&self) -> &Tensor3 {
        &self.e
    }

    pub fn csvd(&self) -> &TCsvd {
        &self.base
    }

    /// `(z E - A)^+ = Vr * (z I - Sr)^{-1} * Ur^H`.
    pub fn eval(&self, z: C64) -> Result<Tensor3> {
        let distance = self.base.window_values().map(|c| (z - c).norm()).fold(f64::INFINITY, f64::min);
        if distance < NEAR_SINGULAR_TOL * self.scale {
            return Err(Error::NearSingularShift { z, distance });
        }
        Ok(self.base.assemble_adjoint(|c| (z - c).inv()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: C64,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, z: C64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

/// Disjoint circles traversed counter-clockwise, each sampled at
/// `nodes_per_circle` equispaced points.
#[derive(Clone, Debug)]
pub struct Contour {
    pub circles: Vec<Circle>,
    pub nodes_per_circle: usize,
}

pub const MIN_NODES: usize = 16;
/// Values closer than this (relative to the largest) share a circle.
pub const CLUSTER_TOL: f64 = 1e-8;

impl Contour {
    pub fn new(circles: Vec<Circle>, nodes_per_circle: usize) -> Result<Self> {
        if nodes_per_circle < MIN_NODES {
            return Err(Error::InvalidContour(format!("need at least {MIN_NODES} nodes per circle, got {nodes_per_circle}")));
        }
        for (i, c) in circles.iter().enumerate() {
            if !(c.radius > 0.0 && c.radius.is_finite()) {
                return Err(Error::InvalidContour(format!("circle {i} has radius {}", c.radius)));
            }
            for d in &circles[..i] {
                if (c.center - d.center).norm() <= c.radius + d.radius {
                    return Err(Error::InvalidContour("circles overlap".into()));
                }
            }
        }
        Ok(Self { circles, nodes_per_circle })
    }

    /// One circle enclosing all `points`, with a margin.
    pub fn enclosing(points: &[C64], nodes_per_circle: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyValues);
        }
        let (mut lo, mut hi) = (points[0], points[0]);
        for z in points {
            lo = C64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = C64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let center = (lo + hi) * 0.5;
        let spread = points.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
        Self::new(vec![Circle { center, radius: 1.25 * spread + 0.5 }], nodes_per_circle)
    }

    /// Quadrature nodes `z_k` with weights `w_k` such that
    /// `sum w_k g(z_k)` approximates `(1 / 2 pi i) * integral of g`.
    pub fn nodes(&self) -> Vec<(C64, C64)> {
        let n = self.nodes_per_circle;
        let mut out = Vec::with_capacity(n * self.circles.len());
        for c in &self.circles {
            for k in 0..n {
                let e = C64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / n as f64);
                out.push((c.center + e * c.radius, e * (c.radius / n as f64)));
            }
        }
        out
    }

    pub fn encloses(&self, z: C64) -> bool {
        self.circles.iter().any(|c| c.contains(z))
    }

    /// Distance from `z` to the nearest circle.
    pub fn distance(&self, z: C64) -> f64 {
        self.circles
            .iter()
            .map(|c| ((z - c.center).norm() - c.radius).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// One circle per cluster of `values` (clusters formed at relative spacing
/// [`CLUSTER_TOL`]), centered on the cluster with radius
/// `min(0.45 * gap to the nearest other cluster, 0.5 * value)`.
pub fn contour_for(values: &[f64], nodes: usize) -> Result<Contour> {
    if values.is_empty() {
        return Err(Error::EmptyValues);
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidContour(format!("value {v} is not a positive number")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let scale = *sorted.last().unwrap();
    let mut clusters: Vec<Vec<f64>> = vec![];
    for v in sorted {
        match clusters.last_mut() {
            Some(cl) if v - cl[cl.len() - 1] <= CLUSTER_TOL * scale => cl.push(v),
            _ => clusters.push(vec![v]),
        }
    }
    let centers: Vec<f64> = clusters.iter().map(|cl| cl.iter().sum::<f64>() / cl.len() as f64).collect();
    let circles = centers
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let gap = centers
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &d)| (d - c).abs())
                .fold(f64::INFINITY, f64::min);
            Circle { center: C64::new(c, 0.0), radius: (0.45 * gap).min(0.5 * c) }
        })
        .collect();
    Contour::new(circles, nodes)
}

/// Sum over the contour of `g(z) * (z E_k - A_k)^+` for each face, optionally
/// sandwiched between `E_k` on both sides.
fn integrate_resolvent_faces(c: &TCsvd, a: &Tensor3, contour: &Contour, g: &dyn Fn(C64) -> C64, sandwich: bool) -> Tensor3 {
    let (m, n, p) = a.dims();
    let fa = FaceStack::from_tensor(a);
    let fe = c.isometry_faces();
    let nodes = contour.nodes();
    let (rows, cols) = if sandwich { (m, n) } else { (n, m) };
    FaceStack::build(rows, cols, p, c.is_real(), |k| {
        let (ak, ek) = (fa.face(k), fe.face(k));
        let mut acc = CMat::zeros(n, m);
        for &(z, w) in &nodes {
            let shifted = ek * z - ak;
            acc += dense::pinv(&shifted, None) * (w * g(z));
        }
        if sandwich {
            ek * acc * ek
        } else {
            acc
        }
    })
    .to_tensor()
}

/// `E * (1/(2 pi i) * integral of f(z) (z E - A)^+ dz) * E` over an explicit
/// contour.
pub fn gfun_contour_with(a: &Tensor3, f: &ScalarFn, contour: &Contour) -> Result<Tensor3> {
    let g = f.complex_fn().ok_or(Error::NoComplexExtension("contour integration"))?;
    let c = tcsvd(a, None)?;
    Ok(integrate_resolvent_faces(&c, a, contour, &|z| g(z), true))
}

/// Generalized function by trapezoidal quadrature of the Cauchy integral
/// over circles around the nonzero singular values.
pub fn gfun_contour(a: &Tensor3, f: &ScalarFn, nodes: usize) -> Result<Tensor3> {
    let g = f.complex_fn().ok_or(Error::NoComplexExtension("contour integration"))?;
    let c = tcsvd(a, None)?;
    window_values(&c, f)?;
    let values: Vec<f64> = c.support_values().collect();
    if values.is_empty() {
        return Ok(Tensor3::zeros(a.m(), a.n(), a.p()));
    }
    let contour = contour_for(&values, nodes)?;
    Ok(integrate_resolvent_faces(&c, a, &contour, &|z| g(z), true))
}

/// Pseudo-inverse as `1/(2 pi i) * integral of z^{-1} (z E - A)^+ dz`.
pub fn pinv_contour(a: &Tensor3, nodes: usize) -> Result<Tensor3> {
    let c = tcsvd(a, None)?;
    if c.r == 0 || c.has_window_zero() {
        return Err(Error::ZeroSingularValue);
    }
    let values: Vec<f64> = c.window_values().collect();
    let contour = contour_for(&values, nodes)?;
    Ok(integrate_resolvent_faces(&c, a, &contour, &|z| z.inv(), false))
}

fn check_face_eigenvalues(fa: &FaceStack, contour: &Contour) -> Result<()> {
    let scale = fa.max_singular_value().max(1.0);
    for face in fa.faces() {
        for l in dense::eigenvalues(face) {
            if contour.distance(l) <= 1e-10 * scale {
                return Err(Error::EigenvalueOnContour { eigenvalue: l });
            }
            if !contour.encloses(l) {
                return Err(Error::EigenvalueNotEnclosed { eigenvalue: l });
            }
        }
    }
    Ok(())
}

/// Standard T-function `1/(2 pi i) * integral of f(z) (z I - A)^{-1} dz`,
/// evaluated face-wise.
pub fn standard_fn_contour(a: &Tensor3, f: &ScalarFn, contour: &Contour) -> Result<Tensor3> {
    let (m, n, p) = a.dims();
    if m != n {
        return Err(dim_mismatch("standard_fn_contour", format!("tensor is {m}x{n}x{p}, not F-square")));
    }
    standard_fn_contour_action(a, f, contour, &Tensor3::identity(n, p))
}

/// [`standard_fn_contour`] on one circle enclosing every face eigenvalue.
pub fn standard_tfn_contour(a: &Tensor3, f: &ScalarFn, nodes: usize) -> Result<Tensor3> {
    let (m, n, p) = a.dims();
    if m != n {
        return Err(dim_mismatch("standard_tfn_contour", format!("tensor is {m}x{n}x{p}, not F-square")));
    }
    let eigs: Vec<C64> = FaceStack::from_tensor(a).faces().iter().flat_map(dense::eigenvalues).collect();
    standard_fn_contour(a, f, &Contour::enclosing(&eigs, nodes)?)
}

/// The action `f(A) * B` by the same quadrature, solving
/// `(z I - A_k) Y = B_k` at every node instead of forming `f(A)`.
pub fn standard_fn_contour_action(a: &Tensor3, f: &ScalarFn, contour: &Contour, b: &Tensor3) -> Result<Tensor3> {
    let (m, n, p) = a.dims();
    if m != n || b.m() != n || b.p() != p {
        return Err(dim_mismatch("standard_fn_contour_action", format!("A {:?}, B {:?}", a.dims(), b.dims())));
    }
    let g = f.complex_fn().ok_or(Error::NoComplexExtension("contour integration"))?;
    let fa = FaceStack::from_tensor(a);
    let fb = FaceStack::from_tensor(b);
    check_face_eigenvalues(&fa, contour)?;
    let nodes = contour.nodes();
    let s = b.n();
    let real = fa.is_real() && fb.is_real();
    let mut failed = None;
    let out = FaceStack::build(n, s, p, real, |k| {
        let mut acc = CMat::zeros(n, s);
        for &(z, w) in &nodes {
            let shifted = CMat::identity(n, n) * z - fa.face(k);
            match shifted.lu().solve(fb.face(k)) {
                Some(y) => acc += y * (w * g(z)),
                None => {
                    failed.get_or_insert(z);
                }
            }
        }
        acc
    });
    if let Some(z) = failed {
        return Err(Error::EigenvalueOnContour { eigenvalue: z });
    }
    Ok(out.to_tensor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{identity, inverse, tprod_chain};
    use crate::examples;
    use crate::genfun::{gfun, standard_tfn};
    use crate::random::TensorRng;
    use crate::scalar::NamedFn;
    use crate::spectral::{partial_isometries, projectors};
    use proptest::prelude::*;

    #[test]
    fn pinv_basics() {
        assert!(pinv(&identity(3, 4)).unwrap().rel_diff(&identity(3, 4)) < 1e-14);
        assert_eq!(pinv(&Tensor3::zeros(2, 3, 2)).unwrap(), Tensor3::zeros(3, 2, 2));
    }

    #[test]
    fn pinv_matches_dense_oracle() {
        let a = TensorRng::new(60).complex(4, 2, 3);
        assert!(pinv(&a).unwrap().rel_diff(&pinv_dense(&a).unwrap()) < 1e-10);
        let r = TensorRng::new(61).low_rank(4, 3, 3, 1, false);
        assert!(pinv(&r).unwrap().rel_diff(&pinv_dense(&r).unwrap()) < 1e-10);
    }

    #[test]
    fn lstsq_cases() {
        let mut rng = TensorRng::new(62);
        let a = &rng.real(3, 3, 2) + &identity(3, 2).scale_real(5.0);
        let b = rng.real(3, 2, 2);
        let x = lstsq(&a, &b).unwrap();
        assert!(x.rel_diff(&tprod(&inverse(&a).unwrap(), &b).unwrap()) < 1e-9);
        let (_, right) = projectors(&tcsvd(&a, None).unwrap());
        assert!(lstsq(&a, &a).unwrap().rel_diff(&right) < 1e-10);
        assert!(lstsq(&a, &rng.real(2, 2, 2)).is_err());
    }

    #[test]
    fn lstsq_matches_dense_least_squares() {
        let mut rng = TensorRng::new(63);
        let a = rng.real(5, 2, 3);
        let b = rng.real(5, 1, 3);
        let x = lstsq(&a, &b).unwrap();
        // Dense normal equations on bcirc(A) with unfold(B).
        let m = a.bcirc();
        let rhs = m.adjoint() * b.unfold();
        let dense = (m.adjoint() * &m).lu().solve(&rhs).unwrap();
        let want = Tensor3::fold(&dense, 2, 1, 3).unwrap();
        assert!(x.rel_diff(&want) < 1e-9);
    }

    #[test]
    fn axb_identity_case() {
        let d = TensorRng::new(64).real(3, 3, 2);
        let s = solve_axb(&identity(3, 2), &identity(3, 2), &d).unwrap();
        assert!(s.x.rel_diff(&d) < 1e-14);
        assert!(s.residual < 1e-14);
    }

    #[test]
    fn axb_consistent_and_inconsistent() {
        let mut rng = TensorRng::new(65);
        let a = rng.low_rank(4, 3, 3, 2, false);
        let b = rng.low_rank(2, 5, 3, 1, false);
        let y = rng.real(3, 2, 3);
        let d = tprod_chain(&[&a, &y, &b]).unwrap();
        let s = solve_axb(&a, &b, &d).unwrap();
        assert!(s.residual < 1e-9);
        assert!(tprod_chain(&[&a, &s.x, &b]).unwrap().rel_diff(&d) < 1e-8);

        let d = rng.real(4, 5, 3);
        let s = solve_axb(&a, &b, &d).unwrap();
        let (pa, _) = projectors(&tcsvd(&a, None).unwrap());
        let (_, pb) = projectors(&tcsvd(&b, None).unwrap());
        let defect = (tprod_chain(&[&pa, &d, &pb]).unwrap() - &d).fnorm() / d.fnorm();
        assert!((s.residual - defect).abs() < 1e-9);
        assert!(s.residual > 0.1);
    }

    #[test]
    fn resolvent_of_identity() {
        let r = Resolvent::new(&identity(2, 3)).unwrap();
        assert!(r.eval(C64::new(2.0, 0.0)).unwrap().rel_diff(&identity(2, 3)) < 1e-14);
        assert!(matches!(r.eval(C64::new(1.0, 0.0)), Err(Error::NearSingularShift { .. })));
    }

    #[test]
    fn resolvent_at_infinity() {
        let a = TensorRng::new(66).complex(3, 2, 3);
        let r = Resolvent::new(&a).unwrap();
        let z = C64::new(1e6 * a.specnorm(), 0.0);
        let lhs = r.eval(z).unwrap().scale(z);
        let pe = pinv(r.isometry()).unwrap();
        assert!((&lhs - &pe).fnorm() <= 1e-4);
    }

    #[test]
    fn resolvent_identity_with_isometry() {
        let mut rng = TensorRng::new(67);
        let a = rng.real(3, 4, 3);
        let r = Resolvent::new(&a).unwrap();
        for _ in 0..5 {
            let l = C64::new(rng.normal(), rng.normal());
            let mu = C64::new(rng.normal(), rng.normal());
            let (rl, rm) = (r.eval(l).unwrap(), r.eval(mu).unwrap());
            let rhs = tprod_chain(&[&rl, r.isometry(), &rm]).unwrap().scale(mu - l);
            assert!((&rl - &rm - rhs).fnorm() <= 1e-9 * rl.fnorm().max(rm.fnorm()));
        }
    }

    #[test]
    fn contour_rules() {
        let c = contour_for(&[1.0], 32).unwrap();
        assert_eq!(c.circles, vec![Circle { center: C64::new(1.0, 0.0), radius: 0.5 }]);
        let c = contour_for(&[1.0, 2.0], 32).unwrap();
        assert!(c.circles.iter().all(|c| (c.radius - 0.45).abs() < 1e-15));
        let s = 8f64.sqrt();
        let c = contour_for(&[10.0, s, s, 2.0], 32).unwrap();
        assert_eq!(c.circles.len(), 3);
        assert!(matches!(contour_for(&[], 32), Err(Error::EmptyValues)));
        assert!(contour_for(&[1.0], 8).is_err());
        assert!(contour_for(&[1.0, 1.0 + 1e-12], 32).unwrap().circles.len() == 1);
    }

    #[test]
    fn contour_identity_function() {
        let a = TensorRng::new(68).real(2, 2, 3);
        let got = gfun_contour(&a, &NamedFn::Power(1.0).to_fn(), 256).unwrap();
        assert!(got.rel_diff(&a) < 1e-6);
    }

    #[test]
    fn contour_square_on_tube() {
        let got = gfun_contour(&examples::tube(), &NamedFn::Power(2.0).to_fn(), 256).unwrap();
        let s = 2f64.sqrt();
        let want = [24.0 - 2.0 * s, 26.0 + 2.0 * s, 24.0 + 2.0 * s, 26.0 - 2.0 * s];
        for (g, w) in got.transpose().data().iter().zip(want) {
            assert!((g.re - w).abs() < 1e-6);
        }
    }

    #[test]
    fn contour_spectral_projector() {
        let a = examples::tube();
        let c = tcsvd(&a, None).unwrap();
        let s8 = 8f64.sqrt();
        let circle = Contour::new(vec![Circle { center: C64::new(s8, 0.0), radius: 0.3 }], 128).unwrap();
        let got = gfun_contour_with(&a, &ScalarFn::new("one", |_| 1.0).with_complex(|_| C64::new(1.0, 0.0)), &circle).unwrap();
        let mut want = Tensor3::zeros(1, 1, 4);
        for comp in partial_isometries(&c).components {
            if (comp.value - s8).abs() < 1e-9 {
                want = want + &comp.tensor;
            }
        }
        assert!((&got - &want).fnorm() < 1e-6);
    }

    #[test]
    fn pinv_contour_cases() {
        let i = identity(3, 2);
        assert!(pinv_contour(&i, 64).unwrap().rel_diff(&i) < 1e-8);
        let a = TensorRng::new(69).real(3, 3, 2);
        assert!(pinv_contour(&a, 256).unwrap().rel_diff(&pinv(&a).unwrap()) < 1e-6);
        let t = examples::tube();
        assert!(pinv_contour(&t, 256).unwrap().rel_diff(&pinv(&t).unwrap()) < 1e-6);
        assert!(matches!(pinv_contour(&examples::csvd_example(), 64), Err(Error::ZeroSingularValue)));
    }

    #[test]
    fn standard_contour_exp_on_hermitian() {
        let b = TensorRng::new(70).complex(3, 3, 3);
        let h = (&b + &b.conj_transpose()).scale_real(0.5);
        let f = NamedFn::Exp.to_fn();
        let pts: Vec<C64> = FaceStack::from_tensor(&h).faces().iter().flat_map(dense::eigenvalues).collect();
        let contour = Contour::enclosing(&pts, 256).unwrap();
        let got = standard_fn_contour(&h, &f, &contour).unwrap();
        assert!(got.rel_diff(&standard_tfn(&h, &f).unwrap()) < 1e-6);
        let id = standard_fn_contour(&h, &NamedFn::Power(1.0).to_fn(), &contour).unwrap();
        assert!(id.rel_diff(&h) < 1e-6);
        let x = TensorRng::new(71).complex(3, 2, 3);
        let action = standard_fn_contour_action(&h, &f, &contour, &x).unwrap();
        assert!(action.rel_diff(&tprod(&got, &x).unwrap()) < 1e-9);
    }

    #[test]
    fn standard_contour_rejects_bad_contours() {
        let a = identity(2, 2).scale_real(3.0);
        let f = NamedFn::Exp.to_fn();
        let far = Contour::new(vec![Circle { center: C64::new(0.0, 0.0), radius: 1.0 }], 32).unwrap();
        assert!(matches!(standard_fn_contour(&a, &f, &far), Err(Error::EigenvalueNotEnclosed { .. })));
        let on = Contour::new(vec![Circle { center: C64::new(0.0, 0.0), radius: 3.0 }], 32).unwrap();
        assert!(matches!(standard_fn_contour(&a, &f, &on), Err(Error::EigenvalueOnContour { .. })));
    }

    #[test]
    fn gfun_contour_agrees_with_spectral_path() {
        let a = TensorRng::new(72).complex(3, 2, 3);
        let f = NamedFn::Sin.to_fn();
        let got = gfun_contour(&a, &f, 256).unwrap();
        assert!(got.rel_diff(&gfun(&a, &f).unwrap()) < 1e-6);
    }

    #[test]
    fn automatic_standard_contour() {
        let a = TensorRng::new(91).real(3, 3, 4);
        let exp = NamedFn::Exp.to_fn();
        assert!(standard_tfn_contour(&a, &exp, 128).unwrap().rel_diff(&standard_tfn(&a, &exp).unwrap()) < 1e-9);
        assert!(standard_tfn_contour(&TensorRng::new(92).real(2, 3, 2), &exp, 64).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn penrose_conditions(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, pi in 0usize..5, r in 0usize..4, complex in any::<bool>()) {
            let p = [1, 2, 3, 4, 8][pi];
            let a = TensorRng::new(seed).low_rank(m, n, p, r, complex);
            let x = pinv(&a).unwrap();
            for res in penrose_residuals(&a, &x).unwrap() {
                prop_assert!(res <= 1e-9, "{res}");
            }
        }

        #[test]
        fn axb_solution_property(seed in any::<u64>(), m in 1usize..4, n in 1usize..4, k in 1usize..4, l in 1usize..4, p in 1usize..4) {
            let mut rng = TensorRng::new(seed);
            let (a, b) = (rng.real(m, n, p), rng.real(k, l, p));
            let d = tprod_chain(&[&a, &rng.real(n, k, p), &b]).unwrap();
            let s = solve_axb(&a, &b, &d).unwrap();
            prop_assert!(s.residual <= 1e-9);
            prop_assert!(tprod_chain(&[&a, &s.x, &b]).unwrap().rel_diff(&d) <= 1e-8);
        }
    }
}
