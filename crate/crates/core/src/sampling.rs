//! Seeded random parameters.
//!
//! Every sample `i` of a sweep with seed `s` draws from its own ChaCha8
//! stream keyed by `(s, i)`, so samples can be generated in any order or in
//! parallel and still come out identical.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::branched::{BranchedValue, UnityContext};
use crate::error::{Error, Result};
use crate::fermat::{affine_to_fermat, FermatPoint};
use crate::numeric::NumericConfig;
use crate::potts::{solve_rapidity, BranchRequest, LambdaChoice, Moduli, RapidityPoint};
use crate::summation::SummationInput;
use crate::transform::{Phi1Params, Phi2Params};

/// Attempts per sample before giving up on rejection sampling.
pub const MAX_ATTEMPTS: u32 = 1000;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The generator for sample `index` of a sweep seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

/// Closed interval of magnitudes, sampled uniformly in `ln |·|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeRange {
    pub min: f64,
    pub max: f64,
}

impl MagnitudeRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min > 0.0 && max >= min && max.is_finite()) {
            return Err(Error::Domain(format!(
                "invalid magnitude range [{min}, {max}]"
            )));
        }
        Ok(Self { min, max })
    }
}

impl Default for MagnitudeRange {
    fn default() -> Self {
        Self {
            min: 0.1,
            max: 10.0,
        }
    }
}

/// Magnitude log-uniform in `range`, angle uniform in `[0, 2π)`.
pub fn complex_in<R: Rng>(rng: &mut R, range: MagnitudeRange) -> Complex64 {
    complex_in_sector(rng, range, 0.0, TAU)
}

/// Magnitude log-uniform in `range`, angle uniform in `(lo, hi)`.
pub fn complex_in_sector<R: Rng>(
    rng: &mut R,
    range: MagnitudeRange,
    lo: f64,
    hi: f64,
) -> Complex64 {
    let r = if range.min == range.max {
        range.min
    } else {
        rng.gen_range(range.min.ln()..range.max.ln()).exp()
    };
    Complex64::from_polar(r, rng.gen_range(lo..hi))
}

/// A successfully drawn sample and the number of rejected draws before it.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled<T> {
    pub value: T,
    pub rejected: u32,
}

/// Redraws until `draw` succeeds, up to [`MAX_ATTEMPTS`] times.
pub fn resample<R: Rng, T>(
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> Result<T>,
) -> Result<Sampled<T>> {
    let mut last = None;
    for rejected in 0..MAX_ATTEMPTS {
        match draw(rng) {
            Ok(value) => return Ok(Sampled { value, rejected }),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `(α, β, k)` with `α`, `β` in `range` and `k` uniform.
pub fn summation_input<R: Rng>(
    rng: &mut R,
    range: MagnitudeRange,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Sampled<SummationInput>> {
    resample(rng, |rng| {
        let a = complex_in(rng, range);
        let b = complex_in(rng, range);
        let k = rng.gen_range(0..ctx.order());
        SummationInput::new(a, b, k, ctx, cfg)
    })
}

/// A cyclic triple with `γ = ω^k Δ(β)/Δ(α)`, `k` uniform.
pub fn phi1<R: Rng>(
    rng: &mut R,
    range: MagnitudeRange,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Sampled<Phi1Params>> {
    resample(rng, |rng| {
        let a = complex_in(rng, range);
        let b = complex_in(rng, range);
        let k = rng.gen_range(0..ctx.order());
        Phi1Params::with_branch(a, b, k, ctx, cfg)
    })
}

pub fn phi2<R: Rng>(
    rng: &mut R,
    range: MagnitudeRange,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Sampled<Phi2Params>> {
    let a = phi1(rng, range, ctx, cfg)?;
    let b = phi1(rng, range, ctx, cfg)?;
    Ok(Sampled {
        value: Phi2Params::new(a.value, b.value),
        rejected: a.rejected + b.rejected,
    })
}

/// `z` with `0 < arg z < 2π/N`.
pub fn principal_sector<R: Rng>(
    rng: &mut R,
    range: MagnitudeRange,
    ctx: &UnityContext,
) -> Complex64 {
    complex_in_sector(rng, range, 0.0, TAU / ctx.order_f64())
}

/// A rapidity with `t` in `range` and uniformly drawn `λ`-side and root powers.
pub fn rapidity<R: Rng>(
    rng: &mut R,
    moduli: Moduli,
    range: MagnitudeRange,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Sampled<RapidityPoint>> {
    resample(rng, |rng| {
        let t = complex_in(rng, range);
        let req = BranchRequest {
            lambda: if rng.gen_bool(0.5) {
                LambdaChoice::Inside
            } else {
                LambdaChoice::Outside
            },
            x_index: rng.gen_range(0..ctx.order()),
            mu_index: rng.gen_range(0..ctx.order()),
        };
        solve_rapidity(moduli, t, req, ctx, cfg)
    })
}

/// The canonical Fermat point of a random `α`.
pub fn fermat_point<R: Rng>(
    rng: &mut R,
    range: MagnitudeRange,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Sampled<FermatPoint>> {
    resample(rng, |rng| {
        let a = complex_in(rng, range);
        let b = BranchedValue::principal(a, ctx, cfg)?;
        affine_to_fermat(&b, ctx, cfg)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = sample_rng(42, 7).gen();
        let b: u64 = sample_rng(42, 7).gen();
        let c: u64 = sample_rng(42, 8).gen();
        let d: u64 = sample_rng(43, 7).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn magnitudes_in_range() {
        let range = MagnitudeRange::new(0.5, 2.0).unwrap();
        let mut rng = sample_rng(1, 0);
        for _ in 0..1000 {
            let z = complex_in(&mut rng, range);
            assert!((0.5..=2.0).contains(&z.norm()));
        }
        assert!(MagnitudeRange::new(0.0, 1.0).is_err());
        assert!(MagnitudeRange::new(2.0, 1.0).is_err());
    }

    #[test]
    fn principal_sector_samples() {
        let u = UnityContext::new(5).unwrap();
        let mut rng = sample_rng(3, 0);
        for _ in 0..100 {
            let z = principal_sector(&mut rng, MagnitudeRange::default(), &u);
            assert!(z.arg() > 0.0 && z.arg() < TAU / 5.0);
        }
    }

    #[test]
    fn resample_counts_rejections() {
        let mut rng = sample_rng(0, 0);
        let mut calls = 0;
        let s = resample(&mut rng, |_| {
            calls += 1;
            if calls < 4 {
                Err(Error::ZeroArgument)
            } else {
                Ok(calls)
            }
        })
        .unwrap();
        assert_eq!(s.value, 4);
        assert_eq!(s.rejected, 3);
        let e = resample(&mut rng, |_| -> Result<()> { Err(Error::ZeroArgument) });
        assert_eq!(e.unwrap_err(), Error::ZeroArgument);
    }
}
