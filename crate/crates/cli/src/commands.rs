use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ttensor::algebra::tprod_chain;
use ttensor::bench::{self, BenchRow};
use ttensor::genfun::{gfun, gfun_series, named_gfun, named_gfun_series, standard_tfn, standard_tfn_series};
use ttensor::random::TensorRng;
use ttensor::scalar::{NamedFn, ScalarFn};
use ttensor::solve::{gfun_contour, lstsq, pinv, solve_axb, standard_tfn_contour};
use ttensor::spectral::{tcsvd, tsvd};
use ttensor::structure::{check_hypothesis, default_fn, is_member, preservation_check, StructClass};
use ttensor::{io, Error, Tensor3};

use crate::{ApplyArgs, CheckArgs, Command, Method};

pub const CHECK_FAILED: u8 = 1;
pub const USAGE: u8 = 2;
pub const NUMERICAL: u8 = 3;
pub const IO: u8 = 4;

/// Largest relative disagreement tolerated between a non-spectral method
/// and the spectral path.
pub const CROSS_CHECK_TOL: f64 = 1e-6;
/// Largest relative reconstruction error accepted by `decompose`.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: USAGE, message: message.into() }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self { code: NUMERICAL, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Parse(_) => IO,
            Error::DimMismatch { .. }
            | Error::UnsupportedClass(_)
            | Error::BadPermutation(_)
            | Error::HypothesisViolation(_)
            | Error::NoComplexExtension(_)
            | Error::NoTaylorCoefficients { .. }
            | Error::InvalidContour(_)
            | Error::EmptyValues => USAGE,
            _ => NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: IO, message: e.to_string() }
    }
}

type CmdResult = Result<ExitCode, Failure>;

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Info { path } => info(&path),
        Command::Decompose { path, compact, out_prefix, text } => decompose(&path, compact, &out_prefix, text),
        Command::Apply(args) => apply(&args),
        Command::Pinv { path, out } => {
            let x = pinv(&load(&path)?)?;
            emit(&x, out.as_deref())
        }
        Command::Solve { a, b, d, out } => {
            let s = solve_axb(&load(&a)?, &load(&b)?, &load(&d)?)?;
            emit(&s.x, out.as_deref())?;
            eprintln!("residual: {:e}", s.residual);
            Ok(ExitCode::SUCCESS)
        }
        Command::Lstsq { a, b, out } => emit(&lstsq(&load(&a)?, &load(&b)?)?, out.as_deref()),
        Command::Check(args) => check(&args),
        Command::Generate { dims, class, complex, seed, out } => generate(&dims, class.as_deref(), complex, seed, &out),
        Command::Bench { m, n, p, reps, seed, csv } => bench_cmd(m, n, p, reps, seed, csv),
    }
}

fn load(path: &Path) -> Result<Tensor3, Failure> {
    io::load(path).map_err(|e| Failure { code: IO, message: format!("{}: {e}", path.display()) })
}

/// Writes to `out`, or prints the text format on stdout.
fn emit(t: &Tensor3, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => io::save(path, t).map_err(|e| Failure { code: IO, message: format!("{}: {e}", path.display()) })?,
        None => std::io::stdout().write_all(io::format_text(t).as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn info(path: &Path) -> CmdResult {
    let a = load(path)?;
    let (m, n, p) = a.dims();
    let c = tcsvd(&a, None)?;
    let ranks: Vec<String> = c.face_ranks.iter().map(|r| r.to_string()).collect();
    println!("dims: {m} x {n} x {p}");
    println!("dtype: {}", if a.is_real(0.0) { "real" } else { "complex" });
    println!("fnorm: {}", a.fnorm());
    println!("specnorm: {}", a.specnorm());
    println!("tubal rank: {}, face ranks: {}", c.r, ranks.join(" "));
    Ok(ExitCode::SUCCESS)
}

fn decompose(path: &Path, compact: bool, prefix: &str, text: bool) -> CmdResult {
    let a = load(path)?;
    let (u, s, v, rank) = if compact {
        let c = tcsvd(&a, None)?;
        (c.ur, c.sr, c.vr, Some(c.r))
    } else {
        let f = tsvd(&a)?;
        (f.u, f.s, f.v, None)
    };
    let rec = tprod_chain(&[&u, &s, &v.conj_transpose()])?;
    let residual = rec.rel_diff(&a);
    let ext = if text { "txt" } else { "tt3" };
    for (name, t) in [("U", &u), ("S", &s), ("V", &v)] {
        let path = PathBuf::from(format!("{prefix}_{name}.{ext}"));
        io::save(&path, t).map_err(|e| Failure { code: IO, message: format!("{}: {e}", path.display()) })?;
    }
    if let Some(r) = rank {
        println!("tubal rank: {r}");
    }
    println!("U: {:?}, S: {:?}, V: {:?}", u.dims(), s.dims(), v.dims());
    println!("reconstruction residual: {residual:e}");
    if residual > RECONSTRUCTION_TOL {
        return Err(Failure::numerical(format!("reconstruction residual {residual:e} exceeds {RECONSTRUCTION_TOL:e}")));
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_poly(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|_| Failure::usage(format!("bad polynomial coefficient {c:?}"))))
        .collect()
}

fn apply(args: &ApplyArgs) -> CmdResult {
    let a = load(&args.path)?;
    let (named, f) = match (&args.func, &args.poly) {
        (Some(name), _) => {
            let n = NamedFn::parse(name).map_err(|e| Failure::usage(e.to_string()))?;
            (Some(n), n.to_fn())
        }
        (None, Some(p)) => (None, ScalarFn::polynomial(&parse_poly(p)?)),
        (None, None) => return Err(Failure::usage("one of --fn or --poly is required")),
    };
    let spectral = |a: &Tensor3| -> Result<Tensor3, Error> {
        match (args.standard, named) {
            (true, _) => standard_tfn(a, &f),
            (false, Some(n)) => named_gfun(a, n),
            (false, None) => gfun(a, &f),
        }
    };
    let result = match (args.method, args.standard) {
        (Method::Spectral, _) => spectral(&a)?,
        (Method::Series, true) => standard_tfn_series(&a, &f)?,
        (Method::Series, false) => match named {
            Some(n) => named_gfun_series(&a, n)?,
            None => gfun_series(&a, &f)?,
        },
        (Method::Contour, true) => standard_tfn_contour(&a, &f, args.nodes)?,
        (Method::Contour, false) => gfun_contour(&a, &f, args.nodes)?,
    };
    if args.method != Method::Spectral {
        let diff = result.rel_diff(&spectral(&a)?);
        eprintln!("cross-check against spectral path: relative difference {diff:e} (tolerance {CROSS_CHECK_TOL:e})");
        if diff > CROSS_CHECK_TOL {
            return Err(Failure::numerical("method disagrees with the spectral path"));
        }
    }
    emit(&result, args.out.as_deref())
}

fn parse_dims(s: &str) -> Result<(usize, usize, usize), Failure> {
    let v: Vec<usize> = s
        .split([',', 'x'])
        .map(|d| d.trim().parse::<usize>().map_err(|_| Failure::usage(format!("bad dimensions {s:?}"))))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [m, n, p] if m > 0 && n > 0 && p > 0 => Ok((m, n, p)),
        _ => Err(Failure::usage(format!("dimensions must be three positive integers, got {s:?}"))),
    }
}

fn check(args: &CheckArgs) -> CmdResult {
    let f = args.func.as_deref().map(|s| NamedFn::parse(s).map(|n| n.to_fn())).transpose().map_err(|e| Failure::usage(e.to_string()))?;
    let Some(path) = &args.path else {
        let dims = parse_dims(&args.dims)?;
        let class = StructClass::parse(&args.class, dims.1)?;
        let f = f.unwrap_or_else(|| default_fn(class));
        let rep = preservation_check(class, &f, args.trials, dims, args.seed)?;
        println!("class: {class}");
        println!("function: {}", rep.function);
        println!("trials: {}", rep.trials);
        println!("max input residual: {:e}", rep.max_input_residual);
        println!("max residual after f: {:e}", rep.max_residual);
        let ok = rep.max_residual <= args.tol;
        println!("result: {}", if ok { "pass" } else { "FAIL" });
        return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(CHECK_FAILED) });
    };
    let a = load(path)?;
    let class = StructClass::parse(&args.class, a.n())?;
    let m = is_member(&a, class, args.tol)?;
    println!("class: {class}");
    println!("residual: {:e}", m.residual);
    println!("member: {}", if m.member { "yes" } else { "no" });
    let mut ok = m.member;
    if let Some(f) = f {
        check_hypothesis(class, &f)?;
        let after = is_member(&gfun(&a, &f)?, class, args.tol)?;
        println!("residual after {}: {:e}", f.name(), after.residual);
        ok &= after.member;
    }
    println!("result: {}", if ok { "pass" } else { "FAIL" });
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(CHECK_FAILED) })
}

fn generate(dims: &str, class: Option<&str>, complex: bool, seed: u64, out: &Path) -> CmdResult {
    let (m, n, p) = parse_dims(dims)?;
    let t = match class {
        Some(name) => StructClass::parse(name, n)?.random_member(m, n, p, seed)?,
        None => TensorRng::new(seed).gaussian(m, n, p, complex),
    };
    emit(&t, Some(out))
}

fn bench_cmd(m: usize, n: usize, p: usize, reps: usize, seed: u64, csv_out: bool) -> CmdResult {
    if m == 0 || n == 0 || p == 0 || reps == 0 {
        return Err(Failure::usage("dimensions and reps must be positive"));
    }
    let rows = bench::run(m, n, p, reps, seed)?;
    if csv_out {
        write_csv(&rows, std::io::stdout()).map_err(|e| Failure { code: IO, message: e.to_string() })?;
    } else {
        print_table(&rows);
    }
    Ok(ExitCode::SUCCESS)
}

pub fn write_csv(rows: &[BenchRow], w: impl Write) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["op", "m", "n", "p", "reps", "fft_median_s", "dense_median_s", "speedup"])?;
    for r in rows {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        out.write_record([
            r.op.clone(),
            r.m.to_string(),
            r.n.to_string(),
            r.p.to_string(),
            r.reps.to_string(),
            format!("{:e}", r.fft_median),
            opt(r.dense_median),
            opt(r.speedup()),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn print_table(rows: &[BenchRow]) {
    println!("{:<6} {:>4} {:>4} {:>5} {:>5} {:>12} {:>12} {:>9}", "op", "m", "n", "p", "reps", "fft ms", "dense ms", "speedup");
    for r in rows {
        let dense = r.dense_median.map(|d| format!("{:.3}", 1e3 * d)).unwrap_or_else(|| "skipped".into());
        let speedup = r.speedup().map(|s| format!("{s:.1}x")).unwrap_or_else(|| "-".into());
        println!(
            "{:<6} {:>4} {:>4} {:>5} {:>5} {:>12.3} {:>12} {:>9}",
            r.op,
            r.m,
            r.n,
            r.p,
            r.reps,
            1e3 * r.fft_median,
            dense,
            speedup
        );
    }
}
