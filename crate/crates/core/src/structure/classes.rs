use std::fmt;

use num_complex::Complex64 as C64;

use super::{make_pseudo, make_reverse, make_skew_hamiltonian};
use crate::algebra::{adjoint, identity, tprod, tprod_chain, FormKind, FormType};
use crate::error::{dim_mismatch, Error, Result};
use crate::genfun::standard_tfn;
use crate::random::TensorRng;
use crate::scalar::NamedFn;
use crate::tensor::Tensor3;

/// Which of `{S : S* = S}`, `{L : L* = -L}`, `{G : G* = G^{-1}}` a
/// form-defined class belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algebra {
    Jordan,
    Lie,
    Group,
    Other,
}

/// Structured tensor classes. Classes defined by a scalar product carry
/// the field (`complex`) where the tables list a real and a complex row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructClass {
    Symmetric { complex: bool },
    SkewSymmetric { complex: bool },
    PseudoSymmetric { a: usize, b: usize, complex: bool },
    PseudoSkewSymmetric { a: usize, b: usize, complex: bool },
    Persymmetric,
    PerskewSymmetric,
    SkewHamiltonian,
    Hamiltonian,
    JSkewSymmetric,
    JSymmetric,
    Hermitian,
    SkewHermitian,
    PseudoHermitian { a: usize, b: usize },
    PseudoSkewHermitian { a: usize, b: usize },
    Perhermitian,
    SkewPerhermitian,
    JSkewHermitian,
    JHermitian,
    Orthogonal { complex: bool },
    PseudoOrthogonal { a: usize, b: usize, complex: bool },
    Perplectic,
    Symplectic { complex: bool },
    Unitary,
    PseudoUnitary { a: usize, b: usize },
    ComplexPerplectic,
    ConjugateSymplectic,
    Centrohermitian,
    SkewCentrohermitian,
    Normal,
    FCirculant,
    FBlockCirculant { block: usize },
    DoublyFStochastic,
    Nonnegative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FormTensor {
    Identity,
    Pseudo(usize, usize),
    Reverse,
    J,
}

#[derive(Clone, Copy, Debug)]
struct FormSpec {
    tensor: FormTensor,
    kind: FormType,
    algebra: Algebra,
    real: bool,
}

/// Result of a class predicate: the normalized defect of the defining
/// equation and whether it is within tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub residual: f64,
}

const NAMES: &[&str] = &[
    "symmetric",
    "complex_symmetric",
    "skew_symmetric",
    "complex_skew_symmetric",
    "pseudo_symmetric",
    "complex_pseudo_symmetric",
    "pseudo_skew_symmetric",
    "complex_pseudo_skew_symmetric",
    "persymmetric",
    "perskew_symmetric",
    "skew_hamiltonian",
    "hamiltonian",
    "j_skew_symmetric",
    "j_symmetric",
    "hermitian",
    "skew_hermitian",
    "pseudo_hermitian",
    "pseudo_skew_hermitian",
    "perhermitian",
    "skew_perhermitian",
    "j_skew_hermitian",
    "j_hermitian",
    "orthogonal",
    "complex_orthogonal",
    "pseudo_orthogonal",
    "complex_pseudo_orthogonal",
    "perplectic",
    "symplectic",
    "complex_symplectic",
    "unitary",
    "pseudo_unitary",
    "complex_perplectic",
    "conjugate_symplectic",
    "centrohermitian",
    "skew_centrohermitian",
    "normal",
    "f_circulant",
    "f_block_circulant",
    "doubly_f_stochastic",
    "nonnegative",
];

impl StructClass {
    /// Every class name accepted by [`StructClass::parse`].
    pub fn names() -> &'static [&'static str] {
        NAMES
    }

    /// Parses a class name. Pseudo classes take an optional `(a,b)` suffix
    /// (default `a = n - n/2`, `b = n/2`); `f_block_circulant` takes an
    /// optional `(block)` (default 2).
    pub fn parse(s: &str, n: usize) -> Result<StructClass> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            Some(_) => return Err(Error::UnsupportedClass(s.clone())),
            None => (s.as_str(), None),
        };
        let nums: Vec<usize> = match args {
            Some(a) => a
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::UnsupportedClass(s.clone())))
                .collect::<Result<_>>()?,
            None => vec![],
        };
        let (a, b) = match nums.as_slice() {
            [a, b] => (*a, *b),
            [] => (n - n / 2, n / 2),
            _ if name == "f_block_circulant" => (0, 0),
            _ => return Err(Error::UnsupportedClass(s.clone())),
        };
        use StructClass::*;
        let c = match name {
            "symmetric" => Symmetric { complex: false },
            "complex_symmetric" => Symmetric { complex: true },
            "skew_symmetric" => SkewSymmetric { complex: false },
            "complex_skew_symmetric" => SkewSymmetric { complex: true },
            "pseudo_symmetric" => PseudoSymmetric { a, b, complex: false },
            "complex_pseudo_symmetric" => PseudoSymmetric { a, b, complex: true },
            "pseudo_skew_symmetric" => PseudoSkewSymmetric { a, b, complex: false },
            "complex_pseudo_skew_symmetric" => PseudoSkewSymmetric { a, b, complex: true },
            "persymmetric" => Persymmetric,
            "perskew_symmetric" => PerskewSymmetric,
            "skew_hamiltonian" => SkewHamiltonian,
            "hamiltonian" => Hamiltonian,
            "j_skew_symmetric" => JSkewSymmetric,
            "j_symmetric" => JSymmetric,
            "hermitian" => Hermitian,
            "skew_hermitian" => SkewHermitian,
            "pseudo_hermitian" => PseudoHermitian { a, b },
            "pseudo_skew_hermitian" => PseudoSkewHermitian { a, b },
            "perhermitian" => Perhermitian,
            "skew_perhermitian" => SkewPerhermitian,
            "j_skew_hermitian" => JSkewHermitian,
            "j_hermitian" => JHermitian,
            "orthogonal" => Orthogonal { complex: false },
            "complex_orthogonal" => Orthogonal { complex: true },
            "pseudo_orthogonal" => PseudoOrthogonal { a, b, complex: false },
            "complex_pseudo_orthogonal" => PseudoOrthogonal { a, b, complex: true },
            "perplectic" => Perplectic,
            "symplectic" => Symplectic { complex: false },
            "complex_symplectic" => Symplectic { complex: true },
            "unitary" => Unitary,
            "pseudo_unitary" => PseudoUnitary { a, b },
            "complex_perplectic" => ComplexPerplectic,
            "conjugate_symplectic" => ConjugateSymplectic,
            "centrohermitian" => Centrohermitian,
            "skew_centrohermitian" => SkewCentrohermitian,
            "normal" => Normal,
            "f_circulant" => FCirculant,
            "f_block_circulant" => FBlockCirculant { block: nums.first().copied().unwrap_or(2) },
            "doubly_f_stochastic" => DoublyFStochastic,
            "nonnegative" => Nonnegative,
            _ => return Err(Error::UnsupportedClass(s.clone())),
        };
        if args.is_some() && !c.takes_args() {
            return Err(Error::UnsupportedClass(s.clone()));
        }
        Ok(c)
    }

    fn takes_args(&self) -> bool {
        use StructClass::*;
        matches!(
            self,
            PseudoSymmetric { .. }
                | PseudoSkewSymmetric { .. }
                | PseudoHermitian { .. }
                | PseudoSkewHermitian { .. }
                | PseudoOrthogonal { .. }
                | PseudoUnitary { .. }
                | FBlockCirculant { .. }
        )
    }

    /// The Jordan- and Lie-algebra rows of the bilinear/sesquilinear table,
    /// for `n x n` tensors (`n` even so the `J` rows apply).
    pub fn table_algebras(n: usize) -> Vec<StructClass> {
        use StructClass::*;
        let (a, b) = (n - n / 2, n / 2);
        vec![
            Symmetric { complex: false },
            SkewSymmetric { complex: false },
            Symmetric { complex: true },
            SkewSymmetric { complex: true },
            PseudoSymmetric { a, b, complex: false },
            PseudoSkewSymmetric { a, b, complex: false },
            PseudoSymmetric { a, b, complex: true },
            PseudoSkewSymmetric { a, b, complex: true },
            Persymmetric,
            PerskewSymmetric,
            SkewHamiltonian,
            Hamiltonian,
            JSkewSymmetric,
            JSymmetric,
            Hermitian,
            SkewHermitian,
            PseudoHermitian { a, b },
            PseudoSkewHermitian { a, b },
            Perhermitian,
            SkewPerhermitian,
            JSkewHermitian,
            JHermitian,
        ]
    }

    /// The automorphism-group rows.
    pub fn table_groups(n: usize) -> Vec<StructClass> {
        use StructClass::*;
        let (a, b) = (n - n / 2, n / 2);
        vec![
            Orthogonal { complex: false },
            Orthogonal { complex: true },
            PseudoOrthogonal { a, b, complex: false },
            PseudoOrthogonal { a, b, complex: true },
            Perplectic,
            Symplectic { complex: false },
            Symplectic { complex: true },
            Unitary,
            PseudoUnitary { a, b },
            ComplexPerplectic,
            ConjugateSymplectic,
        ]
    }

    /// Classes preserved outside the two tables.
    pub fn extra_classes() -> Vec<StructClass> {
        use StructClass::*;
        vec![
            Centrohermitian,
            SkewCentrohermitian,
            Normal,
            FCirculant,
            FBlockCirculant { block: 2 },
            DoublyFStochastic,
            Nonnegative,
        ]
    }

    fn spec(&self) -> Option<FormSpec> {
        use Algebra::*;
        use FormTensor::*;
        use FormType::*;
        use StructClass as S;
        let f = |tensor, kind, algebra, real| Some(FormSpec { tensor, kind, algebra, real });
        match *self {
            S::Symmetric { complex } => f(Identity, Bilinear, Jordan, !complex),
            S::SkewSymmetric { complex } => f(Identity, Bilinear, Lie, !complex),
            S::PseudoSymmetric { a, b, complex } => f(Pseudo(a, b), Bilinear, Jordan, !complex),
            S::PseudoSkewSymmetric { a, b, complex } => f(Pseudo(a, b), Bilinear, Lie, !complex),
            S::Persymmetric => f(Reverse, Bilinear, Jordan, true),
            S::PerskewSymmetric => f(Reverse, Bilinear, Lie, true),
            S::SkewHamiltonian => f(J, Bilinear, Jordan, true),
            S::Hamiltonian => f(J, Bilinear, Lie, true),
            S::JSkewSymmetric => f(J, Bilinear, Jordan, false),
            S::JSymmetric => f(J, Bilinear, Lie, false),
            S::Hermitian => f(Identity, Sesquilinear, Jordan, false),
            S::SkewHermitian => f(Identity, Sesquilinear, Lie, false),
            S::PseudoHermitian { a, b } => f(Pseudo(a, b), Sesquilinear, Jordan, false),
            S::PseudoSkewHermitian { a, b } => f(Pseudo(a, b), Sesquilinear, Lie, false),
            S::Perhermitian => f(Reverse, Sesquilinear, Jordan, false),
            S::SkewPerhermitian => f(Reverse, Sesquilinear, Lie, false),
            S::JSkewHermitian => f(J, Sesquilinear, Jordan, false),
            S::JHermitian => f(J, Sesquilinear, Lie, false),
            S::Orthogonal { complex } => f(Identity, Bilinear, Group, !complex),
            S::PseudoOrthogonal { a, b, complex } => f(Pseudo(a, b), Bilinear, Group, !complex),
            S::Perplectic => f(Reverse, Bilinear, Group, true),
            S::Symplectic { complex } => f(J, Bilinear, Group, !complex),
            S::Unitary => f(Identity, Sesquilinear, Group, false),
            S::PseudoUnitary { a, b } => f(Pseudo(a, b), Sesquilinear, Group, false),
            S::ComplexPerplectic => f(Reverse, Sesquilinear, Group, false),
            S::ConjugateSymplectic => f(J, Sesquilinear, Group, false),
            _ => None,
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.spec().map_or(Algebra::Other, |s| s.algebra)
    }

    /// Whether members must have real entries.
    pub fn is_real_field(&self) -> bool {
        match self.spec() {
            Some(s) => s.real,
            None => matches!(self, StructClass::DoublyFStochastic | StructClass::Nonnegative),
        }
    }

    /// The scalar product defining the class, for `n x n x p` tensors.
    pub fn form(&self, n: usize, p: usize) -> Result<Option<FormKind>> {
        let Some(spec) = self.spec() else { return Ok(None) };
        self.check_dims(n, n)?;
        let t = match spec.tensor {
            FormTensor::Identity => identity(n, p),
            FormTensor::Pseudo(a, b) => make_pseudo(a, b, p)?,
            FormTensor::Reverse => make_reverse(n, p),
            FormTensor::J => make_skew_hamiltonian(n / 2, p),
        };
        Ok(Some(FormKind { kind: spec.kind, form_tensor: t }))
    }

    /// Checks that an `m x n` frontal shape suits the class.
    pub fn check_dims(&self, m: usize, n: usize) -> Result<()> {
        use StructClass::*;
        let err = |d: String| Err(dim_mismatch("structure", format!("{self}: {d}")));
        let square = !matches!(self, Centrohermitian | SkewCentrohermitian | Nonnegative);
        if square && m != n {
            return err(format!("needs F-square tensors, got {m}x{n}"));
        }
        if let Some(spec) = self.spec() {
            match spec.tensor {
                FormTensor::J if !n.is_multiple_of(2) => return err(format!("needs an even dimension, got {n}")),
                FormTensor::Pseudo(a, b) if a + b != n => return err(format!("a + b = {} but n = {n}", a + b)),
                _ => {}
            }
        }
        if let FBlockCirculant { block } = *self {
            if block == 0 || !n.is_multiple_of(block) {
                return err(format!("block size {block} does not divide {n}"));
            }
        }
        Ok(())
    }

    /// Normalized defect of the defining equation.
    pub fn residual(&self, a: &Tensor3) -> Result<f64> {
        let (m, n, p) = a.dims();
        self.check_dims(m, n)?;
        let norm = a.fnorm();
        let rel = |d: f64| if norm > 0.0 { d / norm } else { d };
        let realness = if self.is_real_field() { rel(a.imag_part().fnorm()) } else { 0.0 };
        use StructClass::*;
        let core = match *self {
            Centrohermitian | SkewCentrohermitian => {
                let rar = tprod_chain(&[&make_reverse(m, p), a, &make_reverse(n, p)])?;
                let sign = if *self == Centrohermitian { -1.0 } else { 1.0 };
                rel((rar + a.conj().scale_real(sign)).fnorm())
            }
            Normal => {
                let ah = a.conj_transpose();
                let d = (tprod(a, &ah)? - tprod(&ah, a)?).fnorm();
                if norm > 0.0 {
                    d / (norm * norm)
                } else {
                    d
                }
            }
            FCirculant => rel(pattern_defect(a, 1)),
            FBlockCirculant { block } => rel(pattern_defect(a, block)),
            DoublyFStochastic => {
                let e = Tensor3::from_fn(n, 1, p, |_, _, _| C64::new(1.0, 0.0));
                let row = (tprod(a, &e)? - &e).fnorm();
                let col = (tprod(&a.transpose(), &e)? - &e).fnorm();
                (row + col) / e.fnorm()
            }
            Nonnegative => {
                let scale = a.max_abs();
                let neg = a.data().iter().map(|z| -z.re).fold(0.0, f64::max);
                if scale > 0.0 {
                    neg / scale
                } else {
                    0.0
                }
            }
            _ => {
                let spec = self.spec().expect("form class");
                let form = self.form(n, p)?.expect("form class");
                let star = adjoint(a, &form)?;
                match spec.algebra {
                    Algebra::Jordan => rel((star - a).fnorm()),
                    Algebra::Lie => rel((star + a).fnorm()),
                    Algebra::Group => {
                        let i = identity(n, p);
                        (tprod(&star, a)? - &i).fnorm() / i.fnorm()
                    }
                    Algebra::Other => unreachable!(),
                }
            }
        };
        Ok(core + realness)
    }

    /// A random member of an `m x n x p` class.
    pub fn random_member(&self, m: usize, n: usize, p: usize, seed: u64) -> Result<Tensor3> {
        self.check_dims(m, n)?;
        let mut rng = TensorRng::new(seed);
        use StructClass::*;
        match *self {
            Centrohermitian | SkewCentrohermitian => {
                let b = rng.complex(m, n, p);
                let flip = tprod_chain(&[&make_reverse(m, p), &b.conj(), &make_reverse(n, p)])?;
                let sign = if *self == Centrohermitian { 1.0 } else { -1.0 };
                Ok((b + flip.scale_real(sign)).scale_real(0.5))
            }
            Normal => {
                let u = rng.unitary(n, p, true);
                let d = Tensor3::from_fn(n, n, p, |i, j, _| {
                    if i == j {
                        C64::new(rng.normal(), rng.normal())
                    } else {
                        C64::default()
                    }
                });
                tprod_chain(&[&u, &d, &u.conj_transpose()])
            }
            FCirculant => Ok(pattern_member(&mut rng, n, p, 1)),
            FBlockCirculant { block } => Ok(pattern_member(&mut rng, n, p, block)),
            DoublyFStochastic => Ok(sinkhorn(&rng.nonnegative(n, n, p).map(|z| z + 0.05))),
            Nonnegative => Ok(rng.nonnegative(m, n, p)),
            _ => {
                let spec = self.spec().expect("form class");
                let form = self.form(n, p)?.expect("form class");
                let b = rng.gaussian(n, n, p, !spec.real);
                let star = adjoint(&b, &form)?;
                match spec.algebra {
                    Algebra::Jordan => Ok((b + star).scale_real(0.5)),
                    Algebra::Lie => Ok((b - star).scale_real(0.5)),
                    Algebra::Group => {
                        // exp of a Lie-algebra element lies in the group.
                        let l = (b - star).scale_real(0.5);
                        let s = l.specnorm();
                        let l = if s > 0.0 { l.scale_real(0.8 / s) } else { l };
                        let g = standard_tfn(&l, &NamedFn::Exp.to_fn())?;
                        Ok(if spec.real { g.real_part() } else { g })
                    }
                    Algebra::Other => unreachable!(),
                }
            }
        }
    }

    /// Class name in the form accepted by [`StructClass::parse`].
    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for StructClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use StructClass::*;
        let pre = |complex: bool| if complex { "complex_" } else { "" };
        match *self {
            Symmetric { complex } => write!(f, "{}symmetric", pre(complex)),
            SkewSymmetric { complex } => write!(f, "{}skew_symmetric", pre(complex)),
            PseudoSymmetric { a, b, complex } => write!(f, "{}pseudo_symmetric({a},{b})", pre(complex)),
            PseudoSkewSymmetric { a, b, complex } => write!(f, "{}pseudo_skew_symmetric({a},{b})", pre(complex)),
            Persymmetric => write!(f, "persymmetric"),
            PerskewSymmetric => write!(f, "perskew_symmetric"),
            SkewHamiltonian => write!(f, "skew_hamiltonian"),
            Hamiltonian => write!(f, "hamiltonian"),
            JSkewSymmetric => write!(f, "j_skew_symmetric"),
            JSymmetric => write!(f, "j_symmetric"),
            Hermitian => write!(f, "hermitian"),
            SkewHermitian => write!(f, "skew_hermitian"),
            PseudoHermitian { a, b } => write!(f, "pseudo_hermitian({a},{b})"),
            PseudoSkewHermitian { a, b } => write!(f, "pseudo_skew_hermitian({a},{b})"),
            Perhermitian => write!(f, "perhermitian"),
            SkewPerhermitian => write!(f, "skew_perhermitian"),
            JSkewHermitian => write!(f, "j_skew_hermitian"),
            JHermitian => write!(f, "j_hermitian"),
            Orthogonal { complex } => write!(f, "{}orthogonal", pre(complex)),
            PseudoOrthogonal { a, b, complex } => write!(f, "{}pseudo_orthogonal({a},{b})", pre(complex)),
            Perplectic => write!(f, "perplectic"),
            Symplectic { complex } => write!(f, "{}symplectic", pre(complex)),
            Unitary => write!(f, "unitary"),
            PseudoUnitary { a, b } => write!(f, "pseudo_unitary({a},{b})"),
            ComplexPerplectic => write!(f, "complex_perplectic"),
            ConjugateSymplectic => write!(f, "conjugate_symplectic"),
            Centrohermitian => write!(f, "centrohermitian"),
            SkewCentrohermitian => write!(f, "skew_centrohermitian"),
            Normal => write!(f, "normal"),
            FCirculant => write!(f, "f_circulant"),
            FBlockCirculant { block } => write!(f, "f_block_circulant({block})"),
            DoublyFStochastic => write!(f, "doubly_f_stochastic"),
            Nonnegative => write!(f, "nonnegative"),
        }
    }
}

pub fn is_member(a: &Tensor3, c: StructClass, tol: f64) -> Result<Membership> {
    let residual = c.residual(a)?;
    Ok(Membership { member: residual <= tol, residual })
}

pub fn random_member(c: StructClass, dims: (usize, usize, usize), seed: u64) -> Result<Tensor3> {
    c.random_member(dims.0, dims.1, dims.2, seed)
}

/// Orbit index of `(i, j)` under simultaneous cyclic shifts of the blocks
/// and of the positions within blocks (`block = 1` gives plain circulant).
fn pattern_class(i: usize, j: usize, n: usize, block: usize) -> (usize, usize) {
    let q = n / block;
    let (bi, ii) = (i / block, i % block);
    let (bj, jj) = (j / block, j % block);
    ((bj + q - bi) % q, (jj + block - ii) % block)
}

/// Distance from every slice to its block-circulant-with-circulant-blocks
/// projection (the average over each orbit).
fn pattern_defect(a: &Tensor3, block: usize) -> f64 {
    let (n, p) = (a.n(), a.p());
    let q = n / block;
    let mut total = 0.0;
    for k in 0..p {
        let mut sums = vec![C64::default(); q * block];
        let mut counts = vec![0usize; q * block];
        for i in 0..n {
            for j in 0..n {
                let (u, v) = pattern_class(i, j, n, block);
                sums[u * block + v] += a[(i, j, k)];
                counts[u * block + v] += 1;
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (u, v) = pattern_class(i, j, n, block);
                let mean = sums[u * block + v] / counts[u * block + v] as f64;
                total += (a[(i, j, k)] - mean).norm_sqr();
            }
        }
    }
    (p as f64).sqrt() * total.sqrt()
}

fn pattern_member(rng: &mut TensorRng, n: usize, p: usize, block: usize) -> Tensor3 {
    let q = n / block;
    let gen: Vec<f64> = (0..p * q * block).map(|_| rng.normal()).collect();
    Tensor3::from_fn(n, n, p, |i, j, k| {
        let (u, v) = pattern_class(i, j, n, block);
        C64::new(gen[(k * q + u) * block + v], 0.0)
    })
}

/// Sinkhorn balancing of the total row and column sums. Scaling row `i` (or
/// column `j`) of every frontal slice is a block-diagonal scaling of
/// `bcirc(A)` with identical blocks, so block-circulant structure is kept
/// exactly and no projection step is needed.
fn sinkhorn(a: &Tensor3) -> Tensor3 {
    let (n, _, p) = a.dims();
    let mut x = a.real_part();
    for _ in 0..10_000 {
        let mut worst: f64 = 0.0;
        let rows: Vec<f64> = (0..n).map(|i| (0..p).flat_map(|k| (0..n).map(move |j| (j, k))).map(|(j, k)| x[(i, j, k)].re).sum()).collect();
        for (i, &r) in rows.iter().enumerate() {
            worst = worst.max((r - 1.0).abs());
            for k in 0..p {
                for j in 0..n {
                    x[(i, j, k)] /= r;
                }
            }
        }
        let cols: Vec<f64> = (0..n).map(|j| (0..p).flat_map(|k| (0..n).map(move |i| (i, k))).map(|(i, k)| x[(i, j, k)].re).sum()).collect();
        for (j, &c) in cols.iter().enumerate() {
            worst = worst.max((c - 1.0).abs());
            for k in 0..p {
                for i in 0..n {
                    x[(i, j, k)] /= c;
                }
            }
        }
        if worst <= 1e-14 {
            break;
        }
    }
    x
}
