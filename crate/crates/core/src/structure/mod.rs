//! Structured tensors: the form tensors `R_n`, `J` and `Sigma_{a,b}`,
//! permutation tensors, class predicates and generators, the preservation
//! harness, the complex-to-real and block-circulant isomorphisms, and
//! invariant cones.

mod classes;
mod cone;
mod iso;
mod preserve;

pub use classes::{is_member, random_member, Algebra, Membership, StructClass};
pub use cone::{cone_invariance_check, cone_membership, project_ordered_nonneg, ConeSpec};
pub use iso::{bcirc_commutation_check, phi, phi_commutation_check, standard_commutation_check};
pub use preserve::{
    block_diagonal_residual, check_hypothesis, default_fn, preservation_check, zero_slice_check, zero_slice_residual,
    PreservationReport, PRESERVATION_TOL,
};

use num_complex::Complex64 as C64;

use crate::error::{dim_mismatch, Error, Result};
use crate::tensor::Tensor3;

const ONE: C64 = C64::new(1.0, 0.0);

/// The reverse tensor: first slice is the anti-diagonal identity.
pub fn make_reverse(n: usize, p: usize) -> Tensor3 {
    Tensor3::from_fn(n, n, p, |i, j, k| if k == 0 && i + j + 1 == n { ONE } else { C64::default() })
}

/// `J = [[0, I], [-I, 0]]`, a `2n x 2n x p` tensor.
pub fn make_skew_hamiltonian(n: usize, p: usize) -> Tensor3 {
    Tensor3::from_fn(2 * n, 2 * n, p, |i, j, k| {
        if k != 0 {
            C64::default()
        } else if j == i + n {
            ONE
        } else if i == j + n {
            -ONE
        } else {
            C64::default()
        }
    })
}

/// `Sigma_{a,b} = diag(I_a, -I_b)` as an `(a+b) x (a+b) x p` tensor.
pub fn make_pseudo(a: usize, b: usize, p: usize) -> Result<Tensor3> {
    let n = a + b;
    if n == 0 {
        return Err(dim_mismatch("make_pseudo", "a + b must be positive"));
    }
    Ok(Tensor3::from_fn(n, n, p, |i, j, k| match (k, i == j) {
        (0, true) if i < a => ONE,
        (0, true) => -ONE,
        _ => C64::default(),
    }))
}

/// Permutation tensor whose first slice has a one at `(i, perm[i])`, so
/// row `i` of `P * A` is row `perm[i]` of `A`.
pub fn make_permutation(perm: &[usize], n: usize, p: usize) -> Result<Tensor3> {
    if perm.len() != n {
        return Err(Error::BadPermutation(format!("expected {n} entries, got {}", perm.len())));
    }
    let mut seen = vec![false; n];
    for &j in perm {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::BadPermutation(format!("{perm:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(Tensor3::from_fn(n, n, p, |i, j, k| if k == 0 && perm[i] == j { ONE } else { C64::default() }))
}
