//! Wall-time comparison of the Fourier face path against the dense
//! block-circulant path.

use std::time::Instant;

use crate::algebra::{tprod, tprod_dense};
use crate::dense;
use crate::error::Result;
use crate::genfun::gfun;
use crate::random::TensorRng;
use crate::scalar::NamedFn;
use crate::tensor::Tensor3;

/// Largest `bcirc` side for which the dense `gfun` path is timed; a dense
/// SVD beyond this takes minutes.
pub const DENSE_GFUN_MAX_DIM: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub op: String,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub reps: usize,
    /// Median seconds on the face path.
    pub fft_median: f64,
    /// Median seconds on the dense path, `None` when skipped.
    pub dense_median: Option<f64>,
}

impl BenchRow {
    /// `dense / fft`, when both were timed.
    pub fn speedup(&self) -> Option<f64> {
        self.dense_median.map(|d| d / self.fft_median.max(f64::MIN_POSITIVE))
    }
}

pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => samples[n / 2],
        _ => 0.5 * (samples[n / 2 - 1] + samples[n / 2]),
    }
}

/// Median wall time of `reps` calls, after one untimed warm-up call.
pub fn time_median<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    std::hint::black_box(f());
    let mut samples: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed().as_secs_f64()
        })
        .collect();
    median(&mut samples)
}

pub fn bench_tprod(m: usize, n: usize, p: usize, reps: usize, seed: u64) -> Result<BenchRow> {
    let mut rng = TensorRng::new(seed);
    let (a, b) = (rng.real(m, n, p), rng.real(n, n, p));
    tprod(&a, &b)?;
    let fft_median = time_median(reps, || tprod(&a, &b));
    let dense_median = Some(time_median(reps, || tprod_dense(&a, &b)));
    Ok(BenchRow { op: "tprod".into(), m, n, p, reps, fft_median, dense_median })
}

/// Generalized `sin` on a random real tensor.
pub fn bench_gfun(m: usize, n: usize, p: usize, reps: usize, seed: u64) -> Result<BenchRow> {
    let a = TensorRng::new(seed).real(m, n, p);
    let f = NamedFn::Sin.to_fn();
    gfun(&a, &f)?;
    let fft_median = time_median(reps, || gfun(&a, &f));
    let dense_median = (m.max(n) * p <= DENSE_GFUN_MAX_DIM).then(|| {
        time_median(reps, || {
            let d = dense::gen_matfun(&a.bcirc(), |x| f.eval(x), None);
            Tensor3::bcirc_inv(&d, m, n, p)
        })
    });
    Ok(BenchRow { op: "gfun".into(), m, n, p, reps, fft_median, dense_median })
}

pub fn run(m: usize, n: usize, p: usize, reps: usize, seed: u64) -> Result<Vec<BenchRow>> {
    Ok(vec![bench_tprod(m, n, p, reps, seed)?, bench_gfun(m, n, p, reps, seed)?])
}
