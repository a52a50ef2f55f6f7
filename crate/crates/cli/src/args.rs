//! Parsers for command-line values.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

/// A complex literal such as `0.3`, `-2i`, `0.3+0.1i` or `1e-3-4.5e2i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_complex(s)
            .map(ComplexArg)
            .ok_or_else(|| format!("invalid complex number '{s}' (expected a+bi)"))
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{}{sign}{}i", Real(z.re), Real(z.im.abs()))
    }
}

/// Shortest round-trip form, in scientific notation for very small or large magnitudes.
pub struct Real(pub f64);

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.0.abs();
        if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
            write!(f, "{:e}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not a leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re: f64 = body[..i].parse().ok()?;
            Some(Complex64::new(re, parse_imag(&body[i..])?))
        }
        None => Some(Complex64::new(0.0, parse_imag(body)?)),
    }
}

/// An inclusive range of orders, written `3` or `2..7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderRange {
    pub lo: u32,
    pub hi: u32,
}

impl OrderRange {
    pub fn iter(&self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

impl FromStr for OrderRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map_err(|e| format!("invalid order '{x}': {e}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo < 2 || hi < lo {
            return Err(format!("invalid order range '{s}': need 2 <= lo <= hi"));
        }
        Ok(Self { lo, hi })
    }
}

impl fmt::Display for OrderRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}
