//! Small worked-example tensors with known closed-form results. They back
//! the golden tests, the text fixtures and the CLI smoke tests.

use num_complex::Complex64 as C64;

use crate::tensor::Tensor3;

/// 1x1x4 tube with slices 1, 2, 3, 4.
pub fn tube() -> Tensor3 {
    Tensor3::from_real(1, 1, 4, &[1.0, 2.0, 3.0, 4.0]).unwrap()
}

/// 3x3x3 tensor with slices `A`, `2A`, `3A` for `A = [[1,2,3],[4,5,6],[7,8,9]]`.
pub fn transpose_input() -> Tensor3 {
    let a: Vec<f64> = (1..=9).map(f64::from).collect();
    let s = |c: f64| a.iter().map(|x| c * x).collect::<Vec<_>>();
    Tensor3::from_real_slices(3, 3, &[&s(1.0), &s(2.0), &s(3.0)]).unwrap()
}

/// Expected transpose of [`transpose_input`].
pub fn transpose_expected() -> Tensor3 {
    Tensor3::from_real_slices(
        3,
        3,
        &[
            &[1.0, 4.0, 7.0, 2.0, 5.0, 8.0, 3.0, 6.0, 9.0],
            &[3.0, 12.0, 21.0, 6.0, 15.0, 24.0, 9.0, 18.0, 27.0],
            &[2.0, 8.0, 14.0, 4.0, 10.0, 16.0, 6.0, 12.0, 18.0],
        ],
    )
    .unwrap()
}

/// Invertible 2x2x3 tensor.
pub fn inverse_input() -> Tensor3 {
    let t = 1.0 / 3.0;
    Tensor3::from_real_slices(2, 2, &[&[1.0, -t, t, 1.0], &[0.0, -t, t, 0.0], &[0.0, -t, t, 0.0]]).unwrap()
}

/// The inverse of [`inverse_input`].
pub fn inverse_expected() -> Tensor3 {
    let s = 1.0 / 6.0;
    Tensor3::from_real_slices(2, 2, &[&[5.0 * s, s, -s, 5.0 * s], &[-s, s, -s, -s], &[-s, s, -s, -s]]).unwrap()
}

/// Complex 3x3x3 F-diagonal tensor with face ranks 1, 2, 2.
pub fn csvd_example() -> Tensor3 {
    let r3 = 3f64.sqrt();
    let diag = |d: [C64; 3]| -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); 9];
        for i in 0..3 {
            v[i * 3 + i] = d[i];
        }
        v
    };
    let mut data = diag([C64::new(2.0 / 3.0, 0.0), C64::new(5.0 / 3.0, 0.0), C64::new(2.0 / 3.0, 0.0)]);
    data.extend(diag([C64::new(1.0 / 6.0, r3 / 6.0), C64::new(-5.0 / 6.0, -r3 / 6.0), C64::new(-1.0 / 3.0, -r3 / 3.0)]));
    data.extend(diag([C64::new(1.0 / 6.0, -r3 / 6.0), C64::new(-5.0 / 6.0, r3 / 6.0), C64::new(-1.0 / 3.0, r3 / 3.0)]));
    Tensor3::from_vec(3, 3, 3, data).unwrap()
}

/// Pair of 3x1x2 vectors whose identity-form product is the tube (7, 5).
pub fn form_vectors() -> (Tensor3, Tensor3) {
    let x = Tensor3::from_real_slices(3, 1, &[&[1.5, 1.5, 2.5], &[0.5, -0.5, -0.5]]).unwrap();
    let y = Tensor3::from_real_slices(3, 1, &[&[1.5, 2.5, 0.5], &[1.5, 1.5, 0.5]]).unwrap();
    (x, y)
}
