//! Seeded random tensors for tests, generators and benchmarks.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::tprod;
use crate::spectral::tsvd;
use crate::tensor::Tensor3;

/// Deterministic generator of random tensors (ChaCha8 stream).
pub struct TensorRng {
    rng: ChaCha8Rng,
}

impl TensorRng {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    /// Real tensor with standard normal entries.
    pub fn real(&mut self, m: usize, n: usize, p: usize) -> Tensor3 {
        Tensor3::from_fn(m, n, p, |_, _, _| C64::new(self.normal(), 0.0))
    }

    /// Complex tensor with independent standard normal real and imaginary parts.
    pub fn complex(&mut self, m: usize, n: usize, p: usize) -> Tensor3 {
        Tensor3::from_fn(m, n, p, |_, _, _| C64::new(self.normal(), self.normal()))
    }

    pub fn gaussian(&mut self, m: usize, n: usize, p: usize, complex: bool) -> Tensor3 {
        if complex {
            self.complex(m, n, p)
        } else {
            self.real(m, n, p)
        }
    }

    /// Real tensor with entries uniform on `[0, 1)`.
    pub fn nonnegative(&mut self, m: usize, n: usize, p: usize) -> Tensor3 {
        Tensor3::from_fn(m, n, p, |_, _, _| C64::new(self.uniform(), 0.0))
    }

    /// Random unitary (orthogonal when `complex` is false) `n x n x p` tensor.
    pub fn unitary(&mut self, n: usize, p: usize, complex: bool) -> Tensor3 {
        let g = self.gaussian(n, n, p, complex);
        tsvd(&g).expect("SVD of a Gaussian tensor").u
    }

    /// Product of random `m x r x p` and `r x n x p` factors, so the tubal
    /// rank is at most `r`.
    pub fn low_rank(&mut self, m: usize, n: usize, p: usize, r: usize, complex: bool) -> Tensor3 {
        if r == 0 {
            return Tensor3::zeros(m, n, p);
        }
        let a = self.gaussian(m, r, p, complex);
        let b = self.gaussian(r, n, p, complex);
        tprod(&a, &b).expect("conformable factors")
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
