use crate::dense;
use crate::error::{dim_mismatch, Error, Result};
use crate::genfun::{gfun, standard_tfn, MAX_EIGVEC_COND};
use crate::scalar::ScalarFn;
use crate::tensor::{block, BlockSpec, Tensor3};

/// `Phi(B + iC) = [[B, -C], [C, B]]`, a real `2m x 2n x p` tensor.
pub fn phi(a: &Tensor3) -> Tensor3 {
    let (b, c) = (a.real_part(), a.imag_part());
    block(&BlockSpec::quad(b.clone(), -&c, c, b)).expect("quadrants share a shape")
}

/// `||f^<>(Phi(A)) - Phi(f^<>(A))|| / ||Phi(f^<>(A))||`.
pub fn phi_commutation_check(a: &Tensor3, f: &ScalarFn) -> Result<f64> {
    let lhs = gfun(&phi(a), f)?;
    Ok(lhs.rel_diff(&phi(&gfun(a, f)?)))
}

/// Relative residual between the dense generalized matrix function of
/// `bcirc(A)` and `bcirc(f^<>(A))`.
pub fn bcirc_commutation_check(a: &Tensor3, f: &ScalarFn) -> Result<f64> {
    let dense = dense::gen_matfun(&a.bcirc(), |x| f.eval(x), None);
    let via_tensor = gfun(a, f)?.bcirc();
    let scale = dense.norm().max(via_tensor.norm());
    let diff = (dense - via_tensor).norm();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// Relative residual between the dense matrix function `f(bcirc(A))`
/// (eigen path) and `bcirc(f(A))` for the standard T-function.
pub fn standard_commutation_check(a: &Tensor3, f: &ScalarFn) -> Result<f64> {
    let (m, n, p) = a.dims();
    if m != n {
        return Err(dim_mismatch("standard_commutation_check", format!("tensor is {m}x{n}x{p}, not F-square")));
    }
    let g = f.complex_fn().ok_or(Error::NoComplexExtension("dense eigen path"))?;
    let dense = match dense::eig_matfun(&a.bcirc(), &|z| g(z), MAX_EIGVEC_COND) {
        Some(dense::EigPath::Ok(x)) => x,
        Some(dense::EigPath::IllConditioned(cond)) => return Err(Error::DefectiveFace { face: 0, cond }),
        None => return Err(Error::DefectiveFace { face: 0, cond: f64::INFINITY }),
    };
    let via_tensor = standard_tfn(a, f)?.bcirc();
    let scale = dense.norm().max(via_tensor.norm());
    let diff = (dense - via_tensor).norm();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{identity, tprod};
    use crate::random::TensorRng;
    use crate::scalar::NamedFn;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    #[test]
    fn phi_of_identity_and_i() {
        assert_eq!(phi(&identity(2, 3)), identity(4, 3));
        let ii = identity(2, 3).scale(C64::new(0.0, 1.0));
        let want = block(&BlockSpec::quad(Tensor3::zeros(2, 2, 3), -&identity(2, 3), identity(2, 3), Tensor3::zeros(2, 2, 3))).unwrap();
        assert_eq!(phi(&ii), want);
    }

    #[test]
    fn phi_commutes_with_sin() {
        let a = TensorRng::new(80).complex(3, 3, 4);
        assert!(phi_commutation_check(&a, &NamedFn::Sin.to_fn()).unwrap() < 1e-9);
    }

    #[test]
    fn bcirc_commutation_cases() {
        let a = TensorRng::new(81).real(3, 2, 4);
        assert!(bcirc_commutation_check(&a, &NamedFn::Power(3.0).to_fn()).unwrap() < 1e-9);
        assert!(bcirc_commutation_check(&a, &NamedFn::Power(1.0).to_fn()).unwrap() < 1e-13);
        assert!(bcirc_commutation_check(&a, &NamedFn::Cos.to_fn()).unwrap() < 1e-9);
        let low = crate::examples::csvd_example();
        assert!(bcirc_commutation_check(&low, &NamedFn::Cos.to_fn()).is_err());
    }

    #[test]
    fn standard_commutation_against_dense_exponential() {
        let b = TensorRng::new(82).complex(3, 3, 3);
        let h = (&b + &b.conj_transpose()).scale_real(0.5);
        assert!(standard_commutation_check(&h, &NamedFn::Exp.to_fn()).unwrap() < 1e-9);
        let dense_exp = h.bcirc().exp();
        let got = standard_tfn(&h, &NamedFn::Exp.to_fn()).unwrap().bcirc();
        assert!((dense_exp - &got).norm() / got.norm() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn phi_is_a_homomorphism(seed in any::<u64>(), n in 1usize..4, p in 1usize..5) {
            let mut rng = TensorRng::new(seed);
            let (a, b) = (rng.complex(n, n, p), rng.complex(n, n, p));
            let prod = phi(&tprod(&a, &b).unwrap());
            prop_assert!(prod.rel_diff(&tprod(&phi(&a), &phi(&b)).unwrap()) < 1e-12);
            prop_assert!(phi(&(&a + &b)).rel_diff(&(phi(&a) + phi(&b))) < 1e-15);
            prop_assert!(phi(&a).is_real(0.0));
        }
    }
}
