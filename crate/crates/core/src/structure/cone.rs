use nalgebra::DVector;
use num_complex::Complex64 as C64;

use super::classes::Membership;
use crate::algebra::{is_unitary, tprod_chain};
use crate::dense::CMat;
use crate::error::{dim_mismatch, Error, Result};
use crate::genfun::gfun;
use crate::random::TensorRng;
use crate::scalar::ScalarFn;
use crate::spectral::FaceStack;
use crate::tensor::Tensor3;

/// The cone `S_{U,V}` of tensors `U * S * V^H` whose Fourier faces are
/// `diag(c_1 >= ... >= c_r >= 0, 0, ...)`.
#[derive(Clone, Debug)]
pub struct ConeSpec {
    pub u: Tensor3,
    pub v: Tensor3,
    pub r: usize,
}

/// Outcome of [`cone_invariance_check`].
#[derive(Clone, Debug)]
pub struct ConeReport {
    pub function: String,
    pub trials: usize,
    pub max_input_residual: f64,
    pub max_residual: f64,
    pub passed: bool,
}

impl ConeSpec {
    pub fn new(u: Tensor3, v: Tensor3, r: usize) -> Result<Self> {
        if !u.is_square() || !v.is_square() || u.p() != v.p() || r > u.m().min(v.m()) {
            return Err(dim_mismatch("ConeSpec", format!("U {:?}, V {:?}, r = {r}", u.dims(), v.dims())));
        }
        if !is_unitary(&u, 1e-10) || !is_unitary(&v, 1e-10) {
            return Err(dim_mismatch("ConeSpec", "U and V must be unitary"));
        }
        Ok(Self { u, v, r })
    }

    /// Random unitary `U` (m x m) and `V` (n x n).
    pub fn random(m: usize, n: usize, p: usize, r: usize, complex: bool, seed: u64) -> Result<Self> {
        let mut rng = TensorRng::new(seed);
        let u = rng.unitary(m, p, complex);
        let v = rng.unitary(n, p, complex);
        Self::new(u, v, r)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.u.m(), self.v.m(), self.u.p())
    }

    /// `U * S * V^H` for F-diagonal `S` with the given per-face values
    /// (each face's list must be nonincreasing and nonnegative).
    pub fn compose(&self, values: &[Vec<f64>]) -> Result<Tensor3> {
        let (m, n, p) = self.dims();
        if values.len() != p || values.iter().any(|v| v.len() > self.r) {
            return Err(dim_mismatch("ConeSpec::compose", format!("need {p} faces of at most {} values", self.r)));
        }
        let real = self.u.is_real(0.0) && self.v.is_real(0.0) && (0..p).all(|k| values[k] == values[(p - k) % p]);
        let s = FaceStack::build(m, n, p, real, |k| {
            let mut d = CMat::zeros(m, n);
            for (j, &c) in values[k].iter().enumerate() {
                d[(j, j)] = C64::new(c, 0.0);
            }
            d
        })
        .to_tensor();
        tprod_chain(&[&self.u, &s, &self.v.conj_transpose()])
    }

    /// A member with tubal rank exactly `r`: values drawn in `(0.5, 3.5)`,
    /// sorted, and mirrored across conjugate faces.
    pub fn random_member(&self, seed: u64) -> Result<Tensor3> {
        let p = self.u.p();
        let mut rng = TensorRng::new(seed);
        let mut values: Vec<Vec<f64>> = vec![vec![]; p];
        for k in 0..=p / 2 {
            let mut v: Vec<f64> = (0..self.r).map(|_| 0.5 + 3.0 * rng.uniform()).collect();
            v.sort_by(|a, b| b.total_cmp(a));
            values[(p - k) % p] = v.clone();
            values[k] = v;
        }
        self.compose(&values)
    }
}

/// Euclidean projection onto `{x_1 >= ... >= x_r >= 0, x_j = 0 for j > r}`:
/// pool-adjacent-violators for the ordering, then clipping at zero.
pub fn project_ordered_nonneg(x: &[f64], r: usize) -> Vec<f64> {
    let r = r.min(x.len());
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(r);
    for &v in &x[..r] {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a >= b {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            blocks.push(((a * na as f64 + b * nb as f64) / (na + nb) as f64, na + nb));
        }
    }
    let mut out: Vec<f64> = blocks.iter().flat_map(|&(v, n)| std::iter::repeat_n(v.max(0.0), n)).collect();
    out.resize(x.len(), 0.0);
    out
}

/// Distance from `A` to the cone, measured as the defect of `U^H * A * V`
/// from its ordered-nonnegative F-diagonal projection, relative to `||A||`.
pub fn cone_membership(spec: &ConeSpec, a: &Tensor3, tol: f64) -> Result<Membership> {
    let (m, n, p) = spec.dims();
    if a.dims() != (m, n, p) {
        return Err(dim_mismatch("cone_membership", format!("A is {:?}, cone is {m}x{n}x{p}", a.dims())));
    }
    let core = tprod_chain(&[&spec.u.conj_transpose(), a, &spec.v])?;
    let faces = FaceStack::from_tensor(&core);
    let mut defect = 0.0;
    for face in faces.faces() {
        let diag: Vec<f64> = (0..m.min(n)).map(|j| face[(j, j)].re).collect();
        let proj = project_ordered_nonneg(&diag, spec.r);
        let mut target = CMat::zeros(m, n);
        target.set_partial_diagonal(proj.iter().map(|&c| C64::new(c, 0.0)));
        defect += (face - target).norm_squared();
    }
    let norm = a.fnorm();
    let residual = if norm > 0.0 { defect.sqrt() / norm } else { defect.sqrt() };
    Ok(Membership { member: residual <= tol, residual })
}

const SAMPLES: usize = 200;

/// Samples `f` on `(0, 10]` and requires it to be nonnegative and
/// nondecreasing there.
fn check_cone_hypothesis(f: &ScalarFn) -> Result<()> {
    let xs = DVector::from_fn(SAMPLES, |i, _| 10.0 * (i + 1) as f64 / SAMPLES as f64);
    let mut prev = f64::NEG_INFINITY;
    for &x in xs.iter() {
        let y = f.eval(x);
        if y.is_nan() || y < 0.0 {
            return Err(Error::HypothesisViolation(format!("{} is negative at {x}", f.name())));
        }
        if y < prev - 1e-12 * prev.abs().max(1.0) {
            return Err(Error::HypothesisViolation(format!(
                "{} decreases near {x}; the cone needs a nonnegative nondecreasing function",
                f.name()
            )));
        }
        prev = y;
    }
    Ok(())
}

/// Draws members of the cone, applies `f^<>`, and records the membership
/// residuals.
pub fn cone_invariance_check(spec: &ConeSpec, f: &ScalarFn, trials: usize, seed: u64) -> Result<ConeReport> {
    check_cone_hypothesis(f)?;
    let mut max_input_residual: f64 = 0.0;
    let mut max_residual: f64 = 0.0;
    for t in 0..trials {
        let a = spec.random_member(seed.wrapping_add(t as u64))?;
        max_input_residual = max_input_residual.max(cone_membership(spec, &a, 0.0)?.residual);
        max_residual = max_residual.max(cone_membership(spec, &gfun(&a, f)?, 0.0)?.residual);
    }
    Ok(ConeReport {
        function: f.name().to_string(),
        trials,
        max_input_residual,
        max_residual,
        passed: max_residual <= super::PRESERVATION_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::NamedFn;
    use crate::spectral::tcsvd;

    #[test]
    fn projection_cases() {
        assert_eq!(project_ordered_nonneg(&[3.0, 2.0, 1.0], 3), vec![3.0, 2.0, 1.0]);
        assert_eq!(project_ordered_nonneg(&[1.0, 3.0], 2), vec![2.0, 2.0]);
        assert_eq!(project_ordered_nonneg(&[2.0, -1.0, 5.0], 2), vec![2.0, 0.0, 0.0]);
        assert_eq!(project_ordered_nonneg(&[-1.0, -2.0], 2), vec![0.0, 0.0]);
    }

    #[test]
    fn constructed_members_and_non_members() {
        let spec = ConeSpec::random(4, 3, 4, 2, false, 1).unwrap();
        let a = spec.random_member(2).unwrap();
        assert!(a.is_real(1e-12));
        assert!(cone_membership(&spec, &a, 1e-12).unwrap().member);
        assert_eq!(tcsvd(&a, None).unwrap().r, 2);
        let b = TensorRng::new(3).real(4, 3, 4);
        assert!(cone_membership(&spec, &b, 1e-8).unwrap().residual > 0.1);
        // Reversed ordering leaves the cone.
        let bad = spec.compose(&vec![vec![1.0, 2.0]; 4]).unwrap();
        assert!(!cone_membership(&spec, &bad, 1e-8).unwrap().member);
    }

    #[test]
    fn invariance_under_nondecreasing_functions() {
        let spec = ConeSpec::random(3, 3, 3, 2, true, 4).unwrap();
        for f in [NamedFn::Sqrt.to_fn(), NamedFn::Power(3.0).to_fn(), NamedFn::Sinh.to_fn()] {
            let r = cone_invariance_check(&spec, &f, 3, 5).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn decreasing_functions_break_the_ordering() {
        let spec = ConeSpec::random(3, 3, 2, 3, false, 6).unwrap();
        let f = ScalarFn::new("exp_neg", |x| (-x).exp());
        assert!(matches!(cone_invariance_check(&spec, &f, 1, 7), Err(Error::HypothesisViolation(_))));
        let a = spec.compose(&[vec![3.0, 2.0, 1.0], vec![3.0, 2.0, 1.0]]).unwrap();
        let fa = gfun(&a, &f).unwrap();
        assert!(cone_membership(&spec, &fa, 1e-8).unwrap().residual > 0.1);
    }

    #[test]
    fn rejects_non_unitary_factors() {
        let u = TensorRng::new(8).real(2, 2, 2);
        assert!(ConeSpec::new(u.clone(), u, 1).is_err());
    }
}
