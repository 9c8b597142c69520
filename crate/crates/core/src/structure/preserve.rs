use super::classes::{Algebra, StructClass};
use crate::error::{Error, Result};
use crate::genfun::gfun;
use crate::scalar::{NamedFn, ScalarFn};
use crate::tensor::Tensor3;

/// Largest membership residual of `f^<>(A)` accepted by the harness.
pub const PRESERVATION_TOL: f64 = 1e-8;

const SAMPLES: [f64; 9] = [0.05, 0.1, 0.3, 0.5, 0.9, 1.0, 1.7, 3.0, 10.0];
const SERIES_TERMS: usize = 64;

#[derive(Clone, Debug)]
pub struct PreservationReport {
    pub class: StructClass,
    pub function: String,
    pub trials: usize,
    /// Largest residual of the generated inputs.
    pub max_input_residual: f64,
    /// Largest residual of `f^<>(A)` over the trials.
    pub max_residual: f64,
    pub passed: bool,
}

/// A function meeting the class's preservation hypothesis.
pub fn default_fn(c: StructClass) -> ScalarFn {
    match c {
        StructClass::DoublyFStochastic => NamedFn::Power(3.0).to_fn(),
        StructClass::Nonnegative => NamedFn::Sinh.to_fn(),
        _ if c.algebra() == Algebra::Group => NamedFn::Power(3.0).to_fn(),
        _ => NamedFn::Sin.to_fn(),
    }
}

fn violation(c: StructClass, f: &ScalarFn, what: &str) -> Error {
    Error::HypothesisViolation(format!("{} does not satisfy the {c} hypothesis: {what}", f.name()))
}

/// Odd power series with nonnegative coefficients.
fn check_odd_nonneg_series(c: StructClass, f: &ScalarFn) -> Result<()> {
    let s = f.series().ok_or_else(|| violation(c, f, "needs a power series"))?;
    for k in 0..SERIES_TERMS {
        let a = s.coeff(k);
        if k % 2 == 0 && a != 0.0 {
            return Err(violation(c, f, &format!("even coefficient c_{k} = {a} is nonzero")));
        }
        if a < 0.0 {
            return Err(violation(c, f, &format!("coefficient c_{k} = {a} is negative")));
        }
    }
    Ok(())
}

/// Checks, by sampling where needed, that `f` meets the hypothesis under
/// which the class is preserved.
pub fn check_hypothesis(c: StructClass, f: &ScalarFn) -> Result<()> {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-10 * (1.0 + y.abs());
    match c {
        StructClass::Nonnegative => check_odd_nonneg_series(c, f),
        StructClass::DoublyFStochastic => {
            check_odd_nonneg_series(c, f)?;
            if !close(f.eval(1.0), 1.0) {
                return Err(violation(c, f, &format!("f(1) = {}", f.eval(1.0))));
            }
            Ok(())
        }
        _ => match c.algebra() {
            Algebra::Jordan | Algebra::Lie => {
                if f.value_at_zero() != 0.0 {
                    return Err(violation(c, f, "needs f(0) = 0 so that the odd completion applies"));
                }
                Ok(())
            }
            Algebra::Group => {
                if f.value_at_zero() != 0.0 {
                    return Err(violation(c, f, "needs f(0) = 0"));
                }
                for x in SAMPLES {
                    let prod = f.eval(x) * f.eval(1.0 / x);
                    if !close(prod, 1.0) {
                        return Err(violation(c, f, &format!("f({x}) f(1/{x}) = {prod}")));
                    }
                }
                Ok(())
            }
            Algebra::Other => Ok(()),
        },
    }
}

/// Generates `trials` members of `c`, applies `f^<>` and records the
/// membership residuals.
pub fn preservation_check(
    c: StructClass,
    f: &ScalarFn,
    trials: usize,
    dims: (usize, usize, usize),
    seed: u64,
) -> Result<PreservationReport> {
    check_hypothesis(c, f)?;
    let (m, n, p) = dims;
    let mut max_input_residual: f64 = 0.0;
    let mut max_residual: f64 = 0.0;
    for t in 0..trials {
        let a = c.random_member(m, n, p, seed.wrapping_add(t as u64))?;
        if let Some(s) = f.series() {
            if matches!(c, StructClass::Nonnegative | StructClass::DoublyFStochastic) && a.specnorm() >= s.radius {
                return Err(violation(c, f, "series radius does not exceed the spectral norm"));
            }
        }
        max_input_residual = max_input_residual.max(c.residual(&a)?);
        max_residual = max_residual.max(c.residual(&gfun(&a, f)?)?);
    }
    Ok(PreservationReport {
        class: c,
        function: f.name().to_string(),
        trials,
        max_input_residual,
        max_residual,
        passed: max_residual <= PRESERVATION_TOL,
    })
}

/// Largest norm of a slice of `f^<>(A)` sitting where `A` has an all-zero
/// lateral or horizontal slice, relative to `max(1, ||f^<>(A)||)`.
pub fn zero_slice_residual(a: &Tensor3, f: &ScalarFn) -> Result<f64> {
    let fa = gfun(a, f)?;
    let scale = fa.fnorm().max(1.0);
    let lateral = (0..a.n()).filter(|&j| a.lateral_slice_norm(j) == 0.0).map(|j| fa.lateral_slice_norm(j));
    let horizontal = (0..a.m()).filter(|&i| a.horizontal_slice_norm(i) == 0.0).map(|i| fa.horizontal_slice_norm(i));
    Ok(lateral.chain(horizontal).fold(0.0, f64::max) / scale)
}

/// Whether every zero lateral and horizontal slice of `A` stays zero in
/// `f^<>(A)` (to `1e-10` relative).
pub fn zero_slice_check(a: &Tensor3, f: &ScalarFn) -> Result<bool> {
    Ok(zero_slice_residual(a, f)? <= 1e-10)
}

/// Relative mass of `A` outside the diagonal blocks given by the row and
/// column block sizes.
pub fn block_diagonal_residual(a: &Tensor3, rows: &[usize], cols: &[usize]) -> f64 {
    let owner = |sizes: &[usize], mut i: usize| {
        for (b, &s) in sizes.iter().enumerate() {
            if i < s {
                return b;
            }
            i -= s;
        }
        usize::MAX
    };
    let mut off = 0.0;
    for k in 0..a.p() {
        for i in 0..a.m() {
            for j in 0..a.n() {
                if owner(rows, i) != owner(cols, j) {
                    off += a[(i, j, k)].norm_sqr();
                }
            }
        }
    }
    let total = a.entry_norm();
    if total > 0.0 {
        off.sqrt() / total
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tprod_chain;
    use crate::random::TensorRng;
    use crate::structure::make_permutation;
    use num_complex::Complex64 as C64;

    #[test]
    fn symmetric_with_sin() {
        let r = preservation_check(StructClass::Symmetric { complex: false }, &NamedFn::Sin.to_fn(), 3, (4, 4, 3), 1).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn orthogonal_with_identity_function() {
        let c = StructClass::Orthogonal { complex: false };
        let f = NamedFn::Power(1.0).to_fn();
        let r = preservation_check(c, &f, 3, (3, 3, 2), 2).unwrap();
        assert!(r.passed);
        let q = c.random_member(3, 3, 2, 7).unwrap();
        assert!(gfun(&q, &f).unwrap().rel_diff(&q) < 1e-12);
        // f(1) Q for any f on a unitary tensor.
        let g = gfun(&q, &NamedFn::Sinh.to_fn()).unwrap();
        assert!(g.rel_diff(&q.scale_real(1f64.sinh())) < 1e-12);
    }

    #[test]
    fn doubly_stochastic_with_cube() {
        let r = preservation_check(StructClass::DoublyFStochastic, &NamedFn::Power(3.0).to_fn(), 3, (3, 3, 4), 3).unwrap();
        assert!(r.passed && r.max_input_residual < 1e-12, "{r:?}");
    }

    #[test]
    fn hypothesis_violations() {
        let cos = NamedFn::Cos.to_fn();
        assert!(matches!(check_hypothesis(StructClass::Hermitian, &cos), Err(Error::HypothesisViolation(_))));
        let sin = NamedFn::Sin.to_fn();
        assert!(check_hypothesis(StructClass::Unitary, &sin).is_err());
        assert!(check_hypothesis(StructClass::Unitary, &NamedFn::Power(3.0).to_fn()).is_ok());
        assert!(check_hypothesis(StructClass::Nonnegative, &sin).is_err());
        assert!(check_hypothesis(StructClass::Nonnegative, &NamedFn::Sinh.to_fn()).is_ok());
        assert!(check_hypothesis(StructClass::DoublyFStochastic, &NamedFn::Sinh.to_fn()).is_err());
        assert!(check_hypothesis(StructClass::Normal, &cos).is_ok());
    }

    #[test]
    fn nonnegative_with_sinh() {
        let r = preservation_check(StructClass::Nonnegative, &NamedFn::Sinh.to_fn(), 3, (3, 4, 3), 4).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn zero_slices_survive() {
        let mut a = TensorRng::new(11).real(4, 4, 3);
        for k in 0..3 {
            for i in 0..4 {
                a[(i, 3, k)] = C64::default();
                a[(1, i, k)] = C64::default();
            }
        }
        let f = NamedFn::Sin.to_fn();
        assert!(zero_slice_check(&a, &f).unwrap());
        assert!(zero_slice_residual(&a, &f).unwrap() <= 1e-12);
        assert!(zero_slice_check(&Tensor3::zeros(2, 2, 2), &f).unwrap());
    }

    #[test]
    fn block_diagonal_under_permutations() {
        let mut rng = TensorRng::new(12);
        let b1 = rng.real(2, 2, 3);
        let b2 = rng.real(3, 3, 3);
        let d = Tensor3::from_fn(5, 5, 3, |i, j, k| match (i < 2, j < 2) {
            (true, true) => b1[(i, j, k)],
            (false, false) => b2[(i - 2, j - 2, k)],
            _ => C64::default(),
        });
        let pt = make_permutation(&[3, 0, 4, 1, 2], 5, 3).unwrap();
        let qt = make_permutation(&[1, 4, 0, 2, 3], 5, 3).unwrap();
        // A = P^T D Q^T so that P A Q = D is block diagonal.
        let a = tprod_chain(&[&pt.transpose(), &d, &qt.transpose()]).unwrap();
        assert!(block_diagonal_residual(&a, &[2, 3], &[2, 3]) > 0.1);
        let fa = gfun(&a, &NamedFn::Sin.to_fn()).unwrap();
        let back = tprod_chain(&[&pt, &fa, &qt]).unwrap();
        assert!(block_diagonal_residual(&back, &[2, 3], &[2, 3]) < 1e-12);
    }
}
