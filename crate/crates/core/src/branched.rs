//! Scalar kernels at a root of unity: ω-Pochhammer symbols and the root
//! functions `Δ(z)`, `p(z)`, `p₀(z)` on their principal branches.
//!
//! Branch conventions:
//! - arguments are measured in `[0, 2π)`;
//! - every fractional power is `exp(r · ln w)` with the principal logarithm;
//! - `p(z)` is the sum of per-factor principal logs, which puts its cuts on the
//!   rays `arg z = 2πm/N`, `|z| ≥ 1`, `m = 1..N-1` and leaves the positive real
//!   axis regular;
//! - inputs closer than [`NumericConfig::cut_tolerance`] to a cut are rejected
//!   with [`Error::OnCut`] instead of being assigned a side.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{
    arg_positive, dd, dd_one, dd_powi, principal_root_dd, refine_root, round, Cdd, NumericConfig,
};

/// The order `N` together with ω = e^{2πi/N} and its powers.
#[derive(Clone, Debug)]
pub struct UnityContext {
    n: u32,
    powers: Vec<Cdd>,
    powers_f64: Vec<Complex64>,
}

impl UnityContext {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        let one = dd_one();
        let powers: Vec<Cdd> = (0..n)
            .map(|j| {
                if j == 0 {
                    one
                } else {
                    let seed = Complex64::from_polar(1.0, TAU * f64::from(j) / f64::from(n));
                    refine_root(seed, one, n)
                }
            })
            .collect();
        let powers_f64 = powers.iter().map(|&w| round(w)).collect();
        Ok(Self {
            n,
            powers,
            powers_f64,
        })
    }

    /// `N`.
    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn order_f64(&self) -> f64 {
        f64::from(self.n)
    }

    pub fn omega(&self) -> Complex64 {
        self.powers_f64[1]
    }

    pub fn omega_dd(&self) -> Cdd {
        self.powers[1]
    }

    fn reduce(&self, k: i64) -> usize {
        k.rem_euclid(i64::from(self.n)) as usize
    }

    /// ω^k for any integer `k`.
    pub fn omega_pow(&self, k: i64) -> Complex64 {
        self.powers_f64[self.reduce(k)]
    }

    pub fn omega_pow_dd(&self, k: i64) -> Cdd {
        self.powers[self.reduce(k)]
    }

    /// ω^{h/2} = exp(iπh/N), for exponents that may be half-integers.
    pub fn omega_half_pow(&self, h: i64) -> Complex64 {
        if h.rem_euclid(2) == 0 {
            return self.omega_pow(h / 2);
        }
        let r = h.rem_euclid(2 * i64::from(self.n));
        Complex64::from_polar(1.0, PI * r as f64 / self.order_f64())
    }

    /// Exponent `s ∈ {0..N-1}` with `ω^s` nearest to the unit-modulus number `u`.
    pub fn nearest_power(&self, u: Complex64) -> (u32, f64) {
        let s = (arg_positive(u) / TAU * self.order_f64()).round() as i64;
        let s = self.reduce(s);
        (s as u32, (u - self.powers_f64[s]).norm())
    }
}

/// Distance from `u` to the closed negative real axis `(-∞, 0]`, the cut of
/// the principal logarithm.
pub(crate) fn log_cut_distance(u: Complex64) -> f64 {
    if u.re <= 0.0 {
        u.im.abs()
    } else {
        u.norm()
    }
}

/// `(x; ω)_l = ∏_{j=1}^{l} (1 - x ω^{j-1})`.
pub fn pochhammer(x: Complex64, l: usize, ctx: &UnityContext) -> Complex64 {
    round(pochhammer_dd(dd(x), l, ctx))
}

pub fn pochhammer_dd(x: Cdd, l: usize, ctx: &UnityContext) -> Cdd {
    let one = dd_one();
    (0..l).fold(one, |acc, j| acc * (one - x * ctx.omega_pow_dd(j as i64)))
}

/// `Δ(z) = (1 - z^N)^{1/N}`, principal branch.
pub fn delta(z: Complex64, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Complex64> {
    delta_dd(dd(z), ctx, cfg).map(round)
}

pub fn delta_dd(z: Cdd, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Cdd> {
    let w = dd_one() - dd_powi(z, i64::from(ctx.order()));
    let dist = log_cut_distance(round(w));
    if dist < cfg.cut_tolerance {
        return Err(Error::OnCut {
            what: "Delta",
            distance: dist,
        });
    }
    Ok(principal_root_dd(w, ctx.order()))
}

/// `ln p(z) = Σ_{j=1}^{N-1} (j/N) ln(1 - ω^j z)`. Each factor is formed in
/// double-double and rounded before its logarithm is taken.
pub fn log_p_dd(z: Cdd, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Complex64> {
    let one = dd_one();
    let n = ctx.order_f64();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 1..ctx.order() {
        let u = round(one - ctx.omega_pow_dd(i64::from(j)) * z);
        let dist = log_cut_distance(u);
        if dist < cfg.cut_tolerance {
            return Err(Error::OnCut {
                what: "p",
                distance: dist,
            });
        }
        acc += u.ln() * (f64::from(j) / n);
    }
    Ok(acc)
}

/// `p(z) = ∏_{j=1}^{N-1} (1 - ω^j z)^{j/N}`.
pub fn p_func(z: Complex64, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Complex64> {
    p_func_dd(dd(z), ctx, cfg)
}

pub fn p_func_dd(z: Cdd, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Complex64> {
    log_p_dd(z, ctx, cfg).map(Complex64::exp)
}

/// `Δ^{(N-1)/2}` as `exp(((N-1)/2) ln Δ)`.
pub(crate) fn delta_half_power(delta: Complex64, ctx: &UnityContext) -> Complex64 {
    (delta.ln() * ((ctx.order_f64() - 1.0) / 2.0)).exp()
}

/// `p₀(z) = p(z) / Δ(z)^{(N-1)/2}`.
pub fn p0(z: Complex64, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Complex64> {
    p0_dd(dd(z), ctx, cfg)
}

pub fn p0_dd(z: Cdd, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Complex64> {
    let d = round(delta_dd(z, ctx, cfg)?);
    let p = p_func_dd(z, ctx, cfg)?;
    Ok(p / delta_half_power(d, ctx))
}

/// `((z; ω))_n = (z; ω)_{n mod N} / Δ(z)^{n mod N}`, periodic in `n` with period `N`.
pub fn cyclic_pochhammer(
    z: Complex64,
    n: i64,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    let zd = dd(z);
    let r = n.rem_euclid(i64::from(ctx.order()));
    let d = delta_dd(zd, ctx, cfg)?;
    Ok(round(pochhammer_dd(zd, r as usize, ctx) / dd_powi(d, r)))
}

/// `⌊N arg(z) / 2π⌋` with `arg ∈ [0, 2π)`.
pub fn sector_index(z: Complex64, ctx: &UnityContext) -> Result<u32> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let s = (arg_positive(z) / TAU * ctx.order_f64()).floor() as u32;
    Ok(s.min(ctx.order() - 1))
}

/// A complex number together with a chosen root `Δ` of `1 - value^N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchedValue {
    value: Complex64,
    delta: Complex64,
    sector: u32,
}

impl BranchedValue {
    /// Pairs `value` with the principal `Δ(value)`.
    pub fn principal(value: Complex64, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Self> {
        let delta = delta(value, ctx, cfg)?;
        let sector = sector_index(value, ctx)?;
        Ok(Self {
            value,
            delta,
            sector,
        })
    }

    /// Pairs `value` with an explicitly supplied root `delta`, which must
    /// satisfy `delta^N = 1 - value^N`.
    pub fn new(
        value: Complex64,
        delta: Complex64,
        ctx: &UnityContext,
        cfg: &NumericConfig,
    ) -> Result<Self> {
        let principal = Self::principal(value, ctx, cfg)?;
        let n = i64::from(ctx.order());
        let lhs = dd_powi(dd(delta), n);
        let rhs = dd_one() - dd_powi(dd(value), n);
        let res = crate::numeric::rel_err_dd(lhs, rhs);
        if res > cfg.relation_tolerance {
            return Err(Error::InvalidBranch(res));
        }
        Ok(Self { delta, ..principal })
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    /// `⌊N arg(value) / 2π⌋`.
    pub fn sector(&self) -> u32 {
        self.sector
    }

    /// `s` with `delta = ω^s Δ_principal(value)`.
    pub fn branch(&self, ctx: &UnityContext, cfg: &NumericConfig) -> Result<u32> {
        let principal = delta(self.value, ctx, cfg)?;
        Ok(ctx.nearest_power(self.delta / principal).0)
    }

    pub fn is_principal(&self, ctx: &UnityContext, cfg: &NumericConfig) -> Result<bool> {
        Ok(self.branch(ctx, cfg)? == 0)
    }

    pub fn value_dd(&self) -> Cdd {
        dd(self.value)
    }

    /// The stored root refined to double-double on the same branch.
    pub fn delta_dd(&self, ctx: &UnityContext) -> Cdd {
        let target = dd_one() - dd_powi(self.value_dd(), i64::from(ctx.order()));
        refine_root(self.delta, target, ctx.order())
    }
}

/// `√N · ω^{(N-1)(N-2)/24}`, the value `p(1)` takes on the positive real axis.
pub fn p_at_one_expected(ctx: &UnityContext) -> Complex64 {
    let n = ctx.order_f64();
    Complex64::from_polar(n.sqrt(), TAU * (n - 1.0) * (n - 2.0) / (24.0 * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_err;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx(n: u32) -> UnityContext {
        UnityContext::new(n).unwrap()
    }

    #[test]
    fn rejects_degenerate_order() {
        assert_eq!(UnityContext::new(1).unwrap_err(), Error::InvalidOrder(1));
        assert!(UnityContext::new(0).is_err());
    }

    #[test]
    fn omega_is_primitive_root() {
        for n in 2..=16 {
            let u = ctx(n);
            let w = u.omega();
            assert!((w - Complex64::from_polar(1.0, TAU / f64::from(n))).norm() < 1e-15);
            let wn = dd_powi(u.omega_dd(), i64::from(n));
            assert!(crate::numeric::dd_abs(wn - dd_one()) < 1e-28);
            assert_eq!(u.omega_pow(i64::from(n)), c(1.0, 0.0));
            assert_eq!(u.omega_pow(-1), u.omega_pow(i64::from(n) - 1));
        }
    }

    #[test]
    fn pochhammer_empty_product() {
        let u = ctx(5);
        assert_eq!(pochhammer(c(0.7, -3.0), 0, &u), c(1.0, 0.0));
    }

    #[test]
    fn pochhammer_of_omega_vanishes_from_order_n() {
        for n in 2..=7u32 {
            let u = ctx(n);
            for l in n as usize..(3 * n as usize) {
                let exact = crate::numeric::dd_abs(pochhammer_dd(u.omega_dd(), l, &u));
                assert!(exact < 1e-28, "n={n} l={l}");
                assert!(pochhammer(u.omega(), l, &u).norm() < 1e-12, "n={n} l={l}");
            }
            assert!(pochhammer(u.omega(), n as usize - 1, &u).norm() > 0.1);
        }
    }

    #[test]
    fn pochhammer_shift_by_n() {
        let u = ctx(3);
        let x = c(0.3, 0.4);
        let lhs = pochhammer(x, 5, &u);
        let rhs = (c(1.0, 0.0) - x.powi(3)) * pochhammer(x, 2, &u);
        assert!(rel_err(lhs, rhs) < 1e-14);
        // direct product oracle
        let w = u.omega();
        let direct: Complex64 = (0..5).map(|j| c(1.0, 0.0) - x * w.powi(j)).product();
        assert!(rel_err(lhs, direct) < 1e-14);
    }

    #[test]
    fn delta_examples() {
        let cfg = NumericConfig::default();
        let u = ctx(4);
        assert_eq!(delta(c(0.0, 0.0), &u, &cfg).unwrap(), c(1.0, 0.0));
        for n in 2..=9u32 {
            let u = ctx(n);
            let z = Complex64::from_polar(1.0, PI / f64::from(n));
            let d = delta(z, &u, &cfg).unwrap();
            assert!(rel_err(d, c(2f64.powf(1.0 / f64::from(n)), 0.0)) < 1e-14);
        }
        let u = ctx(2);
        assert!(matches!(
            delta(c(1.5, 0.0), &u, &cfg),
            Err(Error::OnCut { .. })
        ));
    }

    #[test]
    fn p_at_origin_and_one() {
        let cfg = NumericConfig::default();
        for n in 2..=12 {
            let u = ctx(n);
            assert_eq!(p_func(c(0.0, 0.0), &u, &cfg).unwrap(), c(1.0, 0.0));
            let p1 = p_func(c(1.0, 0.0), &u, &cfg).unwrap();
            assert!(rel_err(p1, p_at_one_expected(&u)) < 1e-13, "n={n}");
        }
        let u = ctx(2);
        assert!((p_func(c(1.0, 0.0), &u, &cfg).unwrap() - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        let u = ctx(5);
        let expected = Complex64::from_polar(5f64.sqrt(), PI / 5.0);
        assert!(rel_err(p_func(c(1.0, 0.0), &u, &cfg).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn p_regular_across_positive_real_axis() {
        let cfg = NumericConfig::default();
        let u = ctx(5);
        for &r in &[0.5, 1.0, 2.0, 7.0] {
            let above = p_func(c(r, 1e-9), &u, &cfg).unwrap();
            let below = p_func(c(r, -1e-9), &u, &cfg).unwrap();
            assert!((above - below).norm() < 1e-7 * above.norm(), "r={r}");
        }
    }

    #[test]
    fn p_rejects_forbidden_rays() {
        let cfg = NumericConfig::default();
        let u = ctx(3);
        let on_ray = Complex64::from_polar(2.0, TAU / 3.0);
        assert!(matches!(p_func(on_ray, &u, &cfg), Err(Error::OnCut { .. })));
        // inside the unit disk the ray is not a cut
        let inside = Complex64::from_polar(0.5, TAU / 3.0);
        assert!(p_func(inside, &u, &cfg).is_ok());
    }

    #[test]
    fn p_jumps_across_forbidden_ray() {
        let cfg = NumericConfig::default();
        let u = ctx(3);
        let th = TAU / 3.0;
        let a = p_func(Complex64::from_polar(2.0, th + 1e-9), &u, &cfg).unwrap();
        let b = p_func(Complex64::from_polar(2.0, th - 1e-9), &u, &cfg).unwrap();
        assert!((a - b).norm() > 1e-3);
    }

    #[test]
    fn p0_at_origin() {
        let cfg = NumericConfig::default();
        let u = ctx(6);
        assert_eq!(p0(c(0.0, 0.0), &u, &cfg).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn p0_reflection_pair_principal_sector() {
        let cfg = NumericConfig::default();
        for n in 2..=8u32 {
            let u = ctx(n);
            let expected =
                Complex64::from_polar(1.0, TAU * (f64::from(n * n) - 1.0) / (12.0 * f64::from(n)));
            for i in 1..20 {
                let z = Complex64::from_polar(
                    0.2 + 0.15 * f64::from(i),
                    TAU / f64::from(n) * f64::from(i) / 20.0,
                );
                let lhs = p0(z, &u, &cfg).unwrap() * p0(u.omega() / z, &u, &cfg).unwrap();
                assert!(rel_err(lhs, expected) < 1e-12, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn p0_frozen_value() {
        // mpmath, 40 digits: direct product over j of (1 - ω^j z)^{j/3} / (1 - z^3)^{1/3}
        let cfg = NumericConfig::default();
        let u = ctx(3);
        let z = Complex64::from_polar(0.5, PI / 3.0);
        let v = p0(z, &u, &cfg).unwrap();
        let expected = c(P0_FROZEN_RE, P0_FROZEN_IM);
        assert!(rel_err(v, expected) < 1e-14, "{v}");
    }

    const P0_FROZEN_RE: f64 = 0.939_692_620_785_908_4;
    const P0_FROZEN_IM: f64 = 0.342_020_143_325_668_7;

    #[test]
    fn delta_ratio_on_principal_sector() {
        // Δ(ω/z)/Δ(z) = ω^{1/2}/z for 0 < arg z < 2π/N
        let cfg = NumericConfig::default();
        for n in 2..=8u32 {
            let u = ctx(n);
            for i in 1..10 {
                let z = Complex64::from_polar(
                    0.3 * f64::from(i),
                    TAU / f64::from(n) * f64::from(i) / 10.0,
                );
                let lhs = delta(u.omega() / z, &u, &cfg).unwrap() / delta(z, &u, &cfg).unwrap();
                let rhs = u.omega_half_pow(1) / z;
                assert!(rel_err(lhs, rhs) < 1e-12, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn cyclic_pochhammer_examples() {
        let cfg = NumericConfig::default();
        let u = ctx(4);
        let z = c(0.4, 0.2);
        assert_eq!(cyclic_pochhammer(z, 0, &u, &cfg).unwrap(), c(1.0, 0.0));
        for n in -4..8 {
            let a = cyclic_pochhammer(z, n, &u, &cfg).unwrap();
            let b = cyclic_pochhammer(z, n + 4, &u, &cfg).unwrap();
            assert!(rel_err(a, b) < 1e-14);
        }
        let lhs = cyclic_pochhammer(z, 2, &u, &cfg).unwrap();
        let rhs = p_func(u.omega_pow(2) * z, &u, &cfg).unwrap() / p_func(z, &u, &cfg).unwrap();
        assert!(rel_err(lhs, rhs) < 1e-13);
    }

    #[test]
    fn sector_index_examples() {
        let u = ctx(4);
        assert_eq!(
            sector_index(Complex64::from_polar(1.0, PI / 2.0), &u).unwrap(),
            1
        );
        assert_eq!(sector_index(c(1.0, 0.0), &u).unwrap(), 0);
        for n in 2..=9u32 {
            let u = ctx(n);
            let z = Complex64::from_polar(1.0, -PI / f64::from(n));
            assert_eq!(sector_index(z, &u).unwrap(), n - 1);
        }
        assert_eq!(sector_index(c(0.0, 0.0), &u), Err(Error::ZeroArgument));
    }

    #[test]
    fn branched_value_branch_index() {
        let cfg = NumericConfig::default();
        let u = ctx(5);
        let v = c(0.3, -0.8);
        let p = BranchedValue::principal(v, &u, &cfg).unwrap();
        assert!(p.is_principal(&u, &cfg).unwrap());
        let other = BranchedValue::new(v, p.delta() * u.omega_pow(3), &u, &cfg).unwrap();
        assert_eq!(other.branch(&u, &cfg).unwrap(), 3);
        let refined = round(other.delta_dd(&u));
        assert!(rel_err(refined, other.delta()) < 1e-15);
        assert!(matches!(
            BranchedValue::new(v, p.delta() * 1.01, &u, &cfg),
            Err(Error::InvalidBranch(_))
        ));
    }
}
