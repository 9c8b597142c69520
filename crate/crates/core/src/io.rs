//! Tensor files. The binary `TT3A` format is a 36-byte little-endian header
//! (magic, version `u32` = 1, `m`, `n`, `p` as `u64`, dtype `u32`: 1 real,
//! 2 complex) followed by slice-major entries. The text format starts with
//! a line `m n p dtype`, then `p` blocks of `m` lines of `n` values;
//! complex values are written `a+bi`. Blank lines and `#` comments are
//! ignored.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tensor::Tensor3;

pub const MAGIC: &[u8; 4] = b"TT3A";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 36;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dtype {
    Real64 = 1,
    Complex128 = 2,
}

impl Dtype {
    /// `Real64` exactly when every imaginary part is zero.
    pub fn of(t: &Tensor3) -> Dtype {
        if t.is_real(0.0) {
            Dtype::Real64
        } else {
            Dtype::Complex128
        }
    }

    fn width(self) -> usize {
        match self {
            Dtype::Real64 => 8,
            Dtype::Complex128 => 16,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Dtype::Real64 => "real",
            Dtype::Complex128 => "complex",
        }
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn to_bytes(t: &Tensor3) -> Vec<u8> {
    let dtype = Dtype::of(t);
    let (m, n, p) = t.dims();
    let mut out = Vec::with_capacity(HEADER_LEN + m * n * p * dtype.width());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for d in [m, n, p] {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    out.extend_from_slice(&(dtype as u32).to_le_bytes());
    for z in t.data() {
        out.extend_from_slice(&z.re.to_le_bytes());
        if dtype == Dtype::Complex128 {
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<Tensor3> {
    if bytes.len() < HEADER_LEN {
        return Err(parse_err(format!("file is {} bytes, shorter than the {HEADER_LEN}-byte header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(parse_err("missing TT3A magic"));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(parse_err(format!("unsupported version {version}")));
    }
    let dims: Vec<usize> = (0..3)
        .map(|i| usize::try_from(u64_at(8 + 8 * i)).map_err(|_| parse_err("dimension overflows usize")))
        .collect::<Result<_>>()?;
    let (m, n, p) = (dims[0], dims[1], dims[2]);
    let dtype = match u32_at(32) {
        1 => Dtype::Real64,
        2 => Dtype::Complex128,
        d => return Err(parse_err(format!("unknown dtype tag {d}"))),
    };
    let count = m
        .checked_mul(n)
        .and_then(|x| x.checked_mul(p))
        .ok_or_else(|| parse_err("dimensions overflow"))?;
    let expected = count.checked_mul(dtype.width()).ok_or_else(|| parse_err("dimensions overflow"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(parse_err(format!("payload is {} bytes, expected {expected}", payload.len())));
    }
    let f = |i: usize| f64::from_le_bytes(payload[8 * i..8 * i + 8].try_into().unwrap());
    let data = (0..count)
        .map(|i| match dtype {
            Dtype::Real64 => C64::new(f(i), 0.0),
            Dtype::Complex128 => C64::new(f(2 * i), f(2 * i + 1)),
        })
        .collect();
    Tensor3::from_vec(m, n, p, data)
}

pub fn write_binary(t: &Tensor3, w: &mut impl Write) -> Result<()> {
    w.write_all(&to_bytes(t))?;
    Ok(())
}

pub fn read_binary(r: &mut impl Read) -> Result<Tensor3> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    from_bytes(&buf)
}

/// Shortest round-trip decimal.
fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn format_complex(z: C64) -> String {
    let im = fmt_f64(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", fmt_f64(z.re))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (exponents allowed in both parts).
pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || parse_err(format!("cannot parse value {s:?}"));
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Ok(C64::new(num(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let im = &body[i..];
            let im = if im == "+" || im == "-" { format!("{im}1") } else { im.to_string() };
            Ok(C64::new(num(&body[..i])?, num(&im)?))
        }
        None => {
            let im = match body {
                "" | "+" => "1",
                "-" => "-1",
                b => b,
            };
            Ok(C64::new(0.0, num(im)?))
        }
    }
}

pub fn format_text(t: &Tensor3) -> String {
    let dtype = Dtype::of(t);
    let (m, n, p) = t.dims();
    let mut out = format!("{m} {n} {p} {}\n", dtype.name());
    for k in 0..p {
        if k > 0 {
            out.push('\n');
        }
        for i in 0..m {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let z = t[(i, j, k)];
                    match dtype {
                        Dtype::Real64 => fmt_f64(z.re),
                        Dtype::Complex128 => format_complex(z),
                    }
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn parse_text(s: &str) -> Result<Tensor3> {
    let mut lines = s
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| parse_err("empty file"))?.split_whitespace().collect();
    if header.len() != 4 {
        return Err(parse_err(format!("header must be `m n p dtype`, got {header:?}")));
    }
    let dim = |t: &str| t.parse::<usize>().map_err(|_| parse_err(format!("bad dimension {t:?}")));
    let (m, n, p) = (dim(header[0])?, dim(header[1])?, dim(header[2])?);
    let dtype = match header[3].to_ascii_lowercase().as_str() {
        "real" | "real64" | "1" => Dtype::Real64,
        "complex" | "complex128" | "2" => Dtype::Complex128,
        d => return Err(parse_err(format!("unknown dtype {d:?}"))),
    };
    let mut data = Vec::with_capacity(m * n * p);
    for row in 0..m * p {
        let line = lines.next().ok_or_else(|| parse_err(format!("expected {} rows, found {row}", m * p)))?;
        let vals: Vec<&str> = line.split_whitespace().collect();
        if vals.len() != n {
            return Err(parse_err(format!("row {} has {} values, expected {n}", row + 1, vals.len())));
        }
        for v in vals {
            let z = parse_complex(v)?;
            if dtype == Dtype::Real64 && z.im != 0.0 {
                return Err(parse_err(format!("complex value {v:?} in a real file")));
            }
            data.push(z);
        }
    }
    if let Some(extra) = lines.next() {
        return Err(parse_err(format!("unexpected trailing line {extra:?}")));
    }
    Tensor3::from_vec(m, n, p, data)
}

/// Reads a binary file when it starts with the magic, text otherwise.
pub fn load(path: impl AsRef<Path>) -> Result<Tensor3> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(MAGIC) {
        from_bytes(&bytes)
    } else {
        let text = String::from_utf8(bytes).map_err(|_| parse_err("file is neither TT3A nor UTF-8 text"))?;
        parse_text(&text)
    }
}

/// Writes text for a `.txt` extension and binary otherwise.
pub fn save(path: impl AsRef<Path>, t: &Tensor3) -> Result<()> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "txt") {
        fs::write(path, format_text(t))?;
    } else {
        fs::write(path, to_bytes(t))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::random::TensorRng;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let b = to_bytes(&examples::tube());
        assert_eq!(b.len(), HEADER_LEN + 4 * 8);
        assert_eq!(&b[..4], b"TT3A");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(b[24..32].try_into().unwrap()), 4);
        assert_eq!(u32::from_le_bytes(b[32..36].try_into().unwrap()), 1);
        let c = to_bytes(&examples::csvd_example());
        assert_eq!(u32::from_le_bytes(c[32..36].try_into().unwrap()), 2);
    }

    #[test]
    fn truncated_and_corrupt_files() {
        let b = to_bytes(&TensorRng::new(1).complex(2, 2, 2));
        assert!(matches!(from_bytes(&b[..b.len() - 1]), Err(Error::Parse(_))));
        assert!(from_bytes(&b[..20]).is_err());
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(from_bytes(&bad).is_err());
        let mut bad = b.clone();
        bad[32] = 7;
        assert!(from_bytes(&bad).is_err());
        let mut bad = b;
        bad[4] = 2;
        assert!(from_bytes(&bad).is_err());
    }

    #[test]
    fn complex_values() {
        for (s, z) in [
            ("1+2i", C64::new(1.0, 2.0)),
            ("-1.5-2e-3i", C64::new(-1.5, -2e-3)),
            ("1e+5-1E-5i", C64::new(1e5, -1e-5)),
            ("3", C64::new(3.0, 0.0)),
            ("-2i", C64::new(0.0, -2.0)),
            ("i", C64::new(0.0, 1.0)),
            ("2-i", C64::new(2.0, -1.0)),
        ] {
            assert_eq!(parse_complex(s).unwrap(), z, "{s}");
        }
        assert!(parse_complex("1+2").is_err());
        assert!(parse_complex("abc").is_err());
        assert_eq!(format_complex(C64::new(1.0, -0.5)), "1.0-0.5i");
    }

    #[test]
    fn text_format() {
        let t = parse_text("# tube\n1 1 4 real\n1\n2\n\n3\n4\n").unwrap();
        assert_eq!(t, examples::tube());
        assert!(parse_text("1 1 4 real\n1\n2\n3\n").is_err());
        assert!(parse_text("1 2 1 real\n1\n").is_err());
        assert!(parse_text("1 1 1 real\n1+1i\n").is_err());
        assert!(parse_text("1 1 1 quaternion\n1\n").is_err());
        assert!(parse_text("1 1 1 real\n1\n2\n").is_err());
    }

    #[test]
    fn files_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let t = TensorRng::new(2).complex(2, 3, 2);
        for name in ["a.tt3", "a.txt"] {
            let path = dir.path().join(name);
            save(&path, &t).unwrap();
            assert_eq!(load(&path).unwrap(), t);
        }
        assert!(matches!(load(dir.path().join("missing")), Err(Error::Io(_))));
    }

    proptest! {
        #[test]
        fn binary_round_trip_is_bitwise(seed in any::<u64>(), m in 1usize..4, n in 1usize..4, p in 1usize..4, complex in any::<bool>()) {
            let t = TensorRng::new(seed).gaussian(m, n, p, complex);
            let bytes = to_bytes(&t);
            let back = from_bytes(&bytes).unwrap();
            prop_assert_eq!(to_bytes(&back), bytes);
            prop_assert_eq!(back, t);
        }

        #[test]
        fn text_round_trip_is_exact(seed in any::<u64>(), m in 1usize..4, n in 1usize..4, p in 1usize..4, complex in any::<bool>(), scale in -300i32..300) {
            let t = TensorRng::new(seed).gaussian(m, n, p, complex).scale_real(10f64.powi(scale));
            prop_assert_eq!(parse_text(&format_text(&t)).unwrap(), t);
        }
    }
}
