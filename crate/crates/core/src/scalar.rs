//! Scalar functions driving the tensor function paths.
//!
//! A [`ScalarFn`] always has a real evaluator (used on singular values) and
//! may carry a complex extension (needed for standard tensor functions and
//! contour quadrature), power-series coefficients about zero, and Taylor
//! coefficients about arbitrary expansion points.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ComplexFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;
type CoeffFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;
type TaylorFn = Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>;
type RadiusFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Maclaurin series `sum a_k x^k` with radius of convergence.
#[derive(Clone)]
pub struct Series {
    coeff: CoeffFn,
    pub radius: f64,
    /// Last nonzero coefficient for polynomials.
    pub degree: Option<usize>,
}

impl Series {
    pub fn new(coeff: impl Fn(usize) -> f64 + Send + Sync + 'static, radius: f64) -> Self {
        Self { coeff: Arc::new(coeff), radius, degree: None }
    }

    pub fn coeff(&self, k: usize) -> f64 {
        match self.degree {
            Some(d) if k > d => 0.0,
            _ => (self.coeff)(k),
        }
    }

    pub fn coeffs(&self, n: usize) -> Vec<f64> {
        (0..n).map(|k| self.coeff(k)).collect()
    }

    /// Partial sum with `n` terms.
    pub fn partial_sum(&self, x: f64, n: usize) -> f64 {
        let mut s = 0.0;
        let mut xk = 1.0;
        for k in 0..n {
            s += self.coeff(k) * xk;
            xk *= x;
        }
        s
    }
}

#[derive(Clone)]
struct Taylor {
    coeff: TaylorFn,
    radius: RadiusFn,
}

#[derive(Clone)]
pub struct ScalarFn {
    name: String,
    real: RealFn,
    complex: Option<ComplexFn>,
    value_at_zero: f64,
    series: Option<Series>,
    taylor: Option<Taylor>,
    odd_completed: bool,
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFn")
            .field("name", &self.name)
            .field("value_at_zero", &self.value_at_zero)
            .field("complex", &self.complex.is_some())
            .field("series", &self.series.as_ref().map(|s| s.radius))
            .field("odd_completed", &self.odd_completed)
            .finish()
    }
}

fn inv_factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc / j as f64)
}

/// Generalized binomial coefficient `alpha choose k`.
fn binom(alpha: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (alpha - j as f64) / (j as f64 + 1.0))
}

impl ScalarFn {
    /// Wraps a real function; `value_at_zero` defaults to `f(0)` (or NaN when
    /// that is not finite).
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let f0 = f(0.0);
        Self {
            name: name.into(),
            real: Arc::new(f),
            complex: None,
            value_at_zero: if f0.is_finite() { f0 } else { f64::NAN },
            series: None,
            taylor: None,
            odd_completed: false,
        }
    }

    pub fn with_complex(mut self, g: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        self.complex = Some(Arc::new(g));
        self
    }

    pub fn with_value_at_zero(mut self, v: f64) -> Self {
        self.value_at_zero = v;
        self
    }

    /// Attaches Maclaurin coefficients. Also serves Taylor expansions at
    /// `z0 = 0` unless explicit Taylor coefficients are given.
    pub fn with_series(mut self, series: Series) -> Self {
        self.series = Some(series);
        self
    }

    /// Attaches `f^(k)(z0) / k!` and the radius of convergence about `z0`.
    pub fn with_taylor(
        mut self,
        coeff: impl Fn(f64, usize) -> f64 + Send + Sync + 'static,
        radius: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.taylor = Some(Taylor { coeff: Arc::new(coeff), radius: Arc::new(radius) });
        self
    }

    /// Marks the function as odd-completed: `f(-x) = -f(x)`, `f(0) = 0`.
    pub fn odd_completed(mut self) -> Self {
        self.odd_completed = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.real)(x)
    }

    pub fn has_complex(&self) -> bool {
        self.complex.is_some()
    }

    pub fn eval_complex(&self, z: C64) -> Option<C64> {
        self.complex.as_ref().map(|g| g(z))
    }

    pub fn complex_fn(&self) -> Option<&(dyn Fn(C64) -> C64 + Send + Sync)> {
        self.complex.as_deref()
    }

    pub fn value_at_zero(&self) -> f64 {
        self.value_at_zero
    }

    pub fn series(&self) -> Option<&Series> {
        self.series.as_ref()
    }

    pub fn is_odd_completed(&self) -> bool {
        self.odd_completed
    }

    /// Value on a singular value: the declared `f(0)` at zero, else `f(c)`.
    pub fn at_singular_value(&self, c: f64) -> f64 {
        if c == 0.0 {
            self.value_at_zero
        } else {
            self.eval(c)
        }
    }

    /// `f^(k)(z0) / k!`, if known.
    pub fn taylor_coeff(&self, z0: f64, k: usize) -> Option<f64> {
        if let Some(t) = &self.taylor {
            return Some((t.coeff)(z0, k));
        }
        match &self.series {
            Some(s) if z0 == 0.0 => Some(s.coeff(k)),
            _ => None,
        }
    }

    /// Radius of convergence of the Taylor series about `z0`.
    pub fn taylor_radius(&self, z0: f64) -> Option<f64> {
        if let Some(t) = &self.taylor {
            return Some((t.radius)(z0));
        }
        match &self.series {
            Some(s) if z0 == 0.0 => Some(s.radius),
            _ => None,
        }
    }

    /// Even part `(f(x) + f(-x)) / 2`.
    pub fn even_part(&self) -> ScalarFn {
        let f = self.real.clone();
        let mut out = ScalarFn::new(format!("even({})", self.name), move |x| 0.5 * (f(x) + f(-x)));
        if let Some(g) = self.complex.clone() {
            out = out.with_complex(move |z| (g(z) + g(-z)) * 0.5);
        }
        out
    }

    /// Odd part `(f(x) - f(-x)) / 2`.
    pub fn odd_part(&self) -> ScalarFn {
        let f = self.real.clone();
        let mut out = ScalarFn::new(format!("odd({})", self.name), move |x| 0.5 * (f(x) - f(-x))).with_value_at_zero(0.0);
        if let Some(g) = self.complex.clone() {
            out = out.with_complex(move |z| (g(z) - g(-z)) * 0.5);
        }
        out.odd_completed()
    }

    /// Pointwise product `x -> self(x) * other(x)`.
    pub fn product(&self, other: &ScalarFn) -> ScalarFn {
        let (f, g) = (self.real.clone(), other.real.clone());
        ScalarFn::new(format!("({})*({})", self.name, other.name), move |x| f(x) * g(x))
            .with_value_at_zero(self.value_at_zero * other.value_at_zero)
    }

    /// Composition `x -> self(inner(x))`.
    pub fn compose(&self, inner: &ScalarFn) -> ScalarFn {
        let (f, g) = (self.real.clone(), inner.real.clone());
        let v0 = self.eval(inner.value_at_zero);
        ScalarFn::new(format!("{}({})", self.name, inner.name), move |x| f(g(x))).with_value_at_zero(v0)
    }

    /// Polynomial `c0 + c1 x + ...`.
    pub fn polynomial(coeffs: &[f64]) -> ScalarFn {
        let c: Vec<f64> = coeffs.to_vec();
        let (c1, c2, c3, c4) = (c.clone(), c.clone(), c.clone(), c.clone());
        let degree = c.iter().rposition(|&x| x != 0.0).unwrap_or(0);
        let name = format!("poly[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        let mut series = Series::new(move |k| c2.get(k).copied().unwrap_or(0.0), f64::INFINITY);
        series.degree = Some(degree);
        ScalarFn::new(name, move |x| c1.iter().rev().fold(0.0, |acc, &a| acc * x + a))
            .with_complex(move |z| c3.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a))
            .with_series(series)
            .with_taylor(
                move |z0, k| {
                    // k-th coefficient of p(z0 + h): sum_j c_j binom(j, k) z0^(j-k).
                    c4.iter().enumerate().skip(k).map(|(j, &a)| a * binom(j as f64, k) * z0.powi((j - k) as i32)).sum()
                },
                |_| f64::INFINITY,
            )
    }

    /// Sampled checks of the declared metadata: odd completion and series
    /// convergence inside the radius.
    pub fn validate(&self) -> Result<()> {
        let samples = [0.1, 0.37, 0.8, 1.3, 2.9];
        if self.odd_completed {
            if self.value_at_zero != 0.0 {
                return Err(Error::HypothesisViolation(format!("{} is odd-completed but f(0) = {}", self.name, self.value_at_zero)));
            }
            for &x in &samples {
                let (a, b) = (self.eval(x), self.eval(-x));
                if (a + b).abs() > 1e-10 * (1.0 + a.abs()) {
                    return Err(Error::HypothesisViolation(format!("{} is not odd at x = {x}", self.name)));
                }
            }
        }
        if let Some(s) = &self.series {
            let rmax = if s.radius.is_finite() { 0.5 * s.radius } else { 1.0 };
            for &x in &samples {
                let x = x / 2.9 * rmax;
                let want = self.eval(x);
                let got = s.partial_sum(x, 200);
                if (got - want).abs() > 1e-9 * (1.0 + want.abs()) {
                    return Err(Error::HypothesisViolation(format!("{}: series disagrees with f at x = {x}", self.name)));
                }
            }
        }
        Ok(())
    }
}

/// The named scalar functions with built-in series data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedFn {
    Exp,
    Ln1p,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
    Sign,
    Power(f64),
    /// `x -> 1 / (x + s)`.
    InverseShift(f64),
}

impl NamedFn {
    /// Functions whose even/odd expansion is only valid with every window
    /// value positive (those with `f(0) != 0`).
    pub fn requires_positive(&self) -> bool {
        matches!(self, NamedFn::Exp | NamedFn::Ln1p | NamedFn::Cos | NamedFn::Cosh | NamedFn::InverseShift(_))
    }

    /// Parses `exp`, `sin`, `power:2.5`, `inverse_shift:1`, and the aliases
    /// `id`, `square`, `cube`.
    pub fn parse(s: &str) -> Result<NamedFn> {
        let s = s.trim().to_ascii_lowercase();
        let (head, arg) = match s.split_once([':', '=']) {
            Some((h, a)) => (h.to_string(), Some(a.to_string())),
            None => match s.split_once('(') {
                Some((h, a)) => (h.to_string(), Some(a.trim_end_matches(')').to_string())),
                None => (s.clone(), None),
            },
        };
        let num = |a: &Option<String>| -> Result<f64> {
            a.as_deref()
                .ok_or_else(|| Error::Parse(format!("{head} needs a parameter")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad parameter for {head}: {e}")))
        };
        Ok(match head.as_str() {
            "exp" => NamedFn::Exp,
            "ln1p" | "log1p" => NamedFn::Ln1p,
            "sin" => NamedFn::Sin,
            "cos" => NamedFn::Cos,
            "sinh" => NamedFn::Sinh,
            "cosh" => NamedFn::Cosh,
            "sqrt" => NamedFn::Sqrt,
            "sign" => NamedFn::Sign,
            "id" | "identity" => NamedFn::Power(1.0),
            "square" => NamedFn::Power(2.0),
            "cube" => NamedFn::Power(3.0),
            "power" | "pow" => NamedFn::Power(num(&arg)?),
            "inverse_shift" | "invshift" => {
                let s = num(&arg)?;
                if s <= 0.0 {
                    return Err(Error::Parse("inverse_shift needs a positive shift".into()));
                }
                NamedFn::InverseShift(s)
            }
            other => return Err(Error::Parse(format!("unknown function '{other}'"))),
        })
    }

    pub fn to_fn(&self) -> ScalarFn {
        match *self {
            NamedFn::Exp => ScalarFn::new("exp", f64::exp)
                .with_complex(|z| z.exp())
                .with_series(Series::new(inv_factorial, f64::INFINITY))
                .with_taylor(|z0, k| z0.exp() * inv_factorial(k), |_| f64::INFINITY),
            NamedFn::Ln1p => ScalarFn::new("ln1p", f64::ln_1p)
                .with_complex(|z| (z + 1.0).ln())
                .with_series(Series::new(|k| if k == 0 { 0.0 } else { (-1f64).powi(k as i32 + 1) / k as f64 }, 1.0))
                .with_taylor(
                    |z0, k| if k == 0 { z0.ln_1p() } else { (-1f64).powi(k as i32 + 1) / (k as f64 * (1.0 + z0).powi(k as i32)) },
                    |z0| 1.0 + z0,
                ),
            NamedFn::Sin => ScalarFn::new("sin", f64::sin)
                .with_complex(|z| z.sin())
                .with_series(Series::new(|k| if k % 2 == 1 { (-1f64).powi((k / 2) as i32) * inv_factorial(k) } else { 0.0 }, f64::INFINITY))
                .with_taylor(|z0, k| trig_derivative(z0, k, 0) * inv_factorial(k), |_| f64::INFINITY)
                .odd_completed(),
            NamedFn::Cos => ScalarFn::new("cos", f64::cos)
                .with_complex(|z| z.cos())
                .with_series(Series::new(|k| if k % 2 == 0 { (-1f64).powi((k / 2) as i32) * inv_factorial(k) } else { 0.0 }, f64::INFINITY))
                .with_taylor(|z0, k| trig_derivative(z0, k, 1) * inv_factorial(k), |_| f64::INFINITY),
            NamedFn::Sinh => ScalarFn::new("sinh", f64::sinh)
                .with_complex(|z| z.sinh())
                .with_series(Series::new(|k| if k % 2 == 1 { inv_factorial(k) } else { 0.0 }, f64::INFINITY))
                .with_taylor(|z0, k| if k % 2 == 0 { z0.sinh() } else { z0.cosh() } * inv_factorial(k), |_| f64::INFINITY)
                .odd_completed(),
            NamedFn::Cosh => ScalarFn::new("cosh", f64::cosh)
                .with_complex(|z| z.cosh())
                .with_series(Series::new(|k| if k % 2 == 0 { inv_factorial(k) } else { 0.0 }, f64::INFINITY))
                .with_taylor(|z0, k| if k % 2 == 0 { z0.cosh() } else { z0.sinh() } * inv_factorial(k), |_| f64::INFINITY),
            NamedFn::Sqrt => ScalarFn::new("sqrt", f64::sqrt)
                .with_complex(|z| z.sqrt())
                .with_taylor(|z0, k| z0.sqrt() * binom(0.5, k) * z0.powi(-(k as i32)), |z0| z0),
            NamedFn::Sign => ScalarFn::new("sign", |x: f64| if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 })
                .with_complex(|z| C64::new(if z.re > 0.0 { 1.0 } else if z.re < 0.0 { -1.0 } else { 0.0 }, 0.0))
                .with_taylor(|_, k| if k == 0 { 1.0 } else { 0.0 }, |z0| z0)
                .odd_completed(),
            NamedFn::Power(alpha) => power_fn(alpha),
            NamedFn::InverseShift(s) => ScalarFn::new(format!("inverse_shift({s})"), move |x| 1.0 / (x + s))
                .with_complex(move |z| (z + s).inv())
                .with_series(Series::new(move |k| (-1f64).powi(k as i32) / s.powi(k as i32 + 1), s))
                .with_taylor(move |z0, k| (-1f64).powi(k as i32) / (z0 + s).powi(k as i32 + 1), move |z0| z0 + s),
        }
    }
}

/// `d^k/dx^k sin(x)` (`shift = 0`) or `cos(x)` (`shift = 1`).
fn trig_derivative(x: f64, k: usize, shift: usize) -> f64 {
    match (k + shift) % 4 {
        0 => x.sin(),
        1 => x.cos(),
        2 => -x.sin(),
        _ => -x.cos(),
    }
}

fn power_fn(alpha: f64) -> ScalarFn {
    let name = format!("power({alpha})");
    if alpha >= 0.0 && alpha.fract() == 0.0 {
        let d = alpha as usize;
        let mut coeffs = vec![0.0; d + 1];
        coeffs[d] = 1.0;
        let mut f = ScalarFn::polynomial(&coeffs);
        f.name = name;
        if d % 2 == 1 {
            f = f.odd_completed();
        }
        return f;
    }
    ScalarFn::new(name, move |x: f64| if x == 0.0 && alpha > 0.0 { 0.0 } else { x.powf(alpha) })
        .with_complex(move |z| z.powf(alpha))
        .with_taylor(move |z0, k| z0.powf(alpha) * binom(alpha, k) * z0.powi(-(k as i32)), |z0| z0)
}
