use ttensor::algebra::{tprod, tprod_chain};
use ttensor::genfun::{gfun, gfun_from_csvd, gpower, standard_tfn};
use ttensor::random::TensorRng;
use ttensor::scalar::{NamedFn, ScalarFn};
use ttensor::solve::{gfun_contour, lstsq, pinv, pinv_from_csvd};
use ttensor::spectral::tcsvd;
use ttensor::structure::{is_member, StructClass};

#[test]
fn one_decomposition_feeds_every_path() {
    let a = TensorRng::new(1).complex(4, 3, 5);
    let c = tcsvd(&a, None).unwrap();
    let sin = NamedFn::Sin.to_fn();
    let g = gfun_from_csvd(&c, &sin).unwrap();
    assert!(g.rel_diff(&gfun(&a, &sin).unwrap()) < 1e-14);
    assert!(g.rel_diff(&gfun_contour(&a, &sin, 128).unwrap()) < 1e-9);
    assert!(pinv_from_csvd(&c).rel_diff(&pinv(&a).unwrap()) < 1e-14);
}

#[test]
fn generalized_cube_is_a_triple_product() {
    let a = TensorRng::new(2).real(3, 4, 3);
    let cube = tprod_chain(&[&a, &a.conj_transpose(), &a]).unwrap();
    assert!(gpower(&a, 3).unwrap().rel_diff(&cube) < 1e-12);
    assert!(gfun(&a, &ScalarFn::polynomial(&[0.0, 0.0, 0.0, 1.0])).unwrap().rel_diff(&cube) < 1e-12);
}

#[test]
fn least_squares_normal_equations() {
    let mut rng = TensorRng::new(3);
    let (a, b) = (rng.real(5, 3, 4), rng.real(5, 2, 4));
    let x = lstsq(&a, &b).unwrap();
    let r = tprod(&a, &x).unwrap() - &b;
    let normal = tprod(&a.conj_transpose(), &r).unwrap();
    assert!(normal.fnorm() < 1e-10 * b.fnorm());
}

#[test]
fn hermitian_input_gives_matching_functions() {
    let b = TensorRng::new(4).complex(3, 3, 4);
    let h = tprod(&b, &b.conj_transpose()).unwrap();
    let sq = NamedFn::Power(2.0).to_fn();
    // On positive semidefinite tensors singular values are eigenvalues.
    assert!(gfun(&h, &sq).unwrap().rel_diff(&standard_tfn(&h, &sq).unwrap()) < 1e-10);
    let herm = StructClass::Hermitian;
    assert!(is_member(&gfun(&h, &NamedFn::Sin.to_fn()).unwrap(), herm, 1e-10).unwrap().member);
}
