//! Shared numeric plumbing: tolerance record, double-double complex helpers
//! and a compensated complex accumulator.
//!
//! Rational paths (Pochhammer products, finite series, parameter maps) run on
//! [`Cdd`], a complex double-double. Transcendental kernels (log,
//! fractional powers) stay in `f64` but take their arguments from the
//! double-double paths so that cancellation in `1 - ω^j z` is resolved before
//! rounding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use crate::dd::{Cdd, Dd};

/// Tolerances used across the crate.
///
/// Every threshold that decides "on a cut", "degenerate" or "identity holds"
/// lives here, so a caller running with a tighter arithmetic can tighten them
/// in one place.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericConfig {
    /// Absolute distance below which an argument counts as lying on a branch cut.
    pub cut_tolerance: f64,
    /// Absolute size below which a denominator factor counts as zero.
    pub pole_tolerance: f64,
    /// Relative residual accepted for defining relations (curve equations,
    /// cyclicity, `Δ^N = 1 - z^N`).
    pub relation_tolerance: f64,
    /// Relative residual accepted when matching a closed form against a
    /// direct sum up to a root-of-unity phase.
    pub phase_match_tolerance: f64,
    /// Relative residual accepted when snapping a ratio onto a power of ω.
    pub root_snap_tolerance: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            cut_tolerance: 1e-12,
            pole_tolerance: 1e-12,
            relation_tolerance: 1e-10,
            phase_match_tolerance: 1e-8,
            root_snap_tolerance: 1e-8,
        }
    }
}

#[inline]
pub fn dd(z: Complex64) -> Cdd {
    Cdd::from_c64(z)
}

#[inline]
pub fn dd_real(x: f64) -> Cdd {
    Cdd::from_real(x)
}

/// Rounds a double-double complex to the nearest `Complex64`.
#[inline]
pub fn round(z: Cdd) -> Complex64 {
    z.to_c64()
}

#[inline]
pub fn dd_one() -> Cdd {
    Cdd::ONE
}

#[inline]
pub fn dd_zero() -> Cdd {
    Cdd::ZERO
}

#[inline]
pub fn dd_abs(z: Cdd) -> f64 {
    round(z).norm()
}

/// Integer power by repeated squaring; `n` may be negative.
pub fn dd_powi(z: Cdd, n: i64) -> Cdd {
    let mut base = if n < 0 { dd_one() / z } else { z };
    let mut e = n.unsigned_abs();
    let mut acc = dd_one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

/// Refines `seed`, an `f64` approximation of some `n`-th root of `target`,
/// to double-double accuracy by Newton's method. The root selected is the one
/// nearest the seed, so the branch of the seed is preserved.
pub fn refine_root(seed: Complex64, target: Cdd, n: u32) -> Cdd {
    let mut y = dd(seed);
    if seed == Complex64::new(0.0, 0.0) {
        return y;
    }
    for _ in 0..2 {
        let y_nm1 = dd_powi(y, i64::from(n) - 1);
        let f = y_nm1 * y - target;
        y = y - f / y_nm1.scale(f64::from(n));
    }
    y
}

/// Principal `n`-th root `exp(ln(w)/n)` refined to double-double.
pub fn principal_root_dd(w: Cdd, n: u32) -> Cdd {
    let seed = (round(w).ln() / f64::from(n)).exp();
    refine_root(seed, w, n)
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    sum: Complex64,
    comp: Complex64,
}

#[inline]
fn neumaier(sum: f64, comp: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    (t, comp + c)
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        let (re, cre) = neumaier(self.sum.re, self.comp.re, x.re);
        let (im, cim) = neumaier(self.sum.im, self.comp.im, x.im);
        self.sum = Complex64::new(re, im);
        self.comp = Complex64::new(cre, cim);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = ComplexSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `|a - b| / |b|`, falling back to the absolute difference when `b` is zero.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

/// Relative error computed in double-double before rounding.
pub fn rel_err_dd(a: Cdd, b: Cdd) -> f64 {
    let d = dd_abs(a - b);
    let s = dd_abs(b);
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

/// Argument normalized to `[0, 2π)`.
pub fn arg_positive(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        // -0.0 and tiny negatives map near 2π; callers floor, so clamp there.
        let b = a + std::f64::consts::TAU;
        if b >= std::f64::consts::TAU {
            0.0
        } else {
            b
        }
    } else {
        a
    }
}
