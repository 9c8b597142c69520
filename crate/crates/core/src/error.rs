use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    DimMismatch { op: &'static str, detail: String },

    #[error("matrix is not block-circulant (relative residual {residual:.3e})")]
    NotBlockCirculant { residual: f64 },

    #[error("tensor is singular: face {face} has minimum singular value {min_sv:.3e}")]
    Singular { face: usize, min_sv: f64 },

    #[error("SVD of face {face} did not converge")]
    FaceSvdFailed { face: usize },

    #[error("zero singular value inside the rank window requires f(0) = 0 (got f(0) = {f_zero})")]
    ZeroSingularValueRequiresFZero { f_zero: f64 },

    #[error("scalar function is undefined at {at}")]
    FnDomainError { at: f64 },

    #[error("face {face} is not safely diagonalizable (eigenvector condition {cond:.3e})")]
    DefectiveFace { face: usize, cond: f64 },

    #[error("power series did not converge within {terms} terms")]
    SeriesDivergence { terms: usize },

    #[error("expansion point {z0} is too far from singular value {value} (radius {radius})")]
    RadiusViolation { z0: f64, value: f64, radius: f64 },

    #[error("Taylor series did not converge after {terms} terms (last error {last:.3e})")]
    NoConvergence { terms: usize, last: f64 },

    #[error("shift {z} is within {distance:.3e} of a singular value")]
    NearSingularShift { z: num_complex::Complex64, distance: f64 },

    #[error("no values supplied")]
    EmptyValues,

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("tensor has a zero singular value in its rank window")]
    ZeroSingularValue,

    #[error("eigenvalue {eigenvalue} lies on the contour")]
    EigenvalueOnContour { eigenvalue: num_complex::Complex64 },

    #[error("eigenvalue {eigenvalue} is not enclosed by the contour")]
    EigenvalueNotEnclosed { eigenvalue: num_complex::Complex64 },

    #[error("scalar function has no complex extension; required for {0}")]
    NoComplexExtension(&'static str),

    #[error("scalar function has no Taylor coefficients at {z0}")]
    NoTaylorCoefficients { z0: f64 },

    #[error("invalid permutation: {0}")]
    BadPermutation(String),

    #[error("unsupported structure class: {0}")]
    UnsupportedClass(String),

    #[error("scalar function violates the hypothesis: {0}")]
    HypothesisViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn dim_mismatch(op: &'static str, detail: impl Into<String>) -> Error {
    Error::DimMismatch {
        op,
        detail: detail.into(),
    }
}
