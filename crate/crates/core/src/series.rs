//! The terminating series `_{p+1}Φ_p[ω, α₁..α_p; β₁..β_p; z]` at q = ω.
//!
//! Setting the extra upper parameter to `q^{1-N}` and then `q → ω` leaves
//! exactly `N` terms:
//!
//! ```text
//! Σ_{l=0}^{N-1} ∏_j (α_j; ω)_l / ∏_j (β_j; ω)_l · z^l
//! ```
//!
//! Only integer powers appear, so the value is independent of branch choices.
//! Terms are built incrementally and accumulated in double-double.

use num_complex::Complex64;
use serde::Serialize;

use crate::branched::UnityContext;
use crate::error::{Error, Result};
use crate::numeric::{dd, dd_abs, dd_one, dd_powi, dd_zero, round, Cdd, NumericConfig};

/// Parameters of a `_{p+1}Φ_p` with the leading upper parameter ω implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct HypSpec {
    alphas: Vec<Cdd>,
    betas: Vec<Cdd>,
    z: Cdd,
}

impl HypSpec {
    pub fn new(alphas: &[Complex64], betas: &[Complex64], z: Complex64) -> Result<Self> {
        Self::from_dd(
            alphas.iter().copied().map(dd).collect(),
            betas.iter().copied().map(dd).collect(),
            dd(z),
        )
    }

    pub fn from_dd(alphas: Vec<Cdd>, betas: Vec<Cdd>, z: Cdd) -> Result<Self> {
        if alphas.is_empty() || alphas.len() != betas.len() {
            return Err(Error::ShapeMismatch {
                alphas: alphas.len(),
                betas: betas.len(),
            });
        }
        Ok(Self { alphas, betas, z })
    }

    /// `p`, the number of free upper (and lower) parameters.
    pub fn p(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> Vec<Complex64> {
        self.alphas.iter().copied().map(round).collect()
    }

    pub fn betas(&self) -> Vec<Complex64> {
        self.betas.iter().copied().map(round).collect()
    }

    pub fn z(&self) -> Complex64 {
        round(self.z)
    }

    pub fn alphas_dd(&self) -> &[Cdd] {
        &self.alphas
    }

    pub fn betas_dd(&self) -> &[Cdd] {
        &self.betas
    }

    pub fn z_dd(&self) -> Cdd {
        self.z
    }

    pub fn with_z(&self, z: Cdd) -> Self {
        Self { z, ..self.clone() }
    }
}

/// Direct evaluation of the `N`-term sum.
pub fn phi_eval(spec: &HypSpec, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Complex64> {
    phi_eval_dd(spec, ctx, cfg).map(round)
}

pub fn phi_eval_dd(spec: &HypSpec, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Cdd> {
    let n = ctx.order() as usize;
    let one = dd_one();
    let mut term = one;
    let mut sum = dd_zero();
    for l in 0..n {
        sum = sum + term;
        if l + 1 == n {
            break;
        }
        let w = ctx.omega_pow_dd(l as i64);
        let mut ratio = spec.z;
        for (j, (&a, &b)) in spec.alphas.iter().zip(&spec.betas).enumerate() {
            let den = one - b * w;
            if dd_abs(den) < cfg.pole_tolerance {
                return Err(Error::PoleInDenominator {
                    index: j,
                    order: l + 1,
                });
            }
            ratio = ratio * (one - a * w) / den;
        }
        term = term * ratio;
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CyclicityCheck {
    pub holds: bool,
    /// `|z^N ∏(1-α_j^N) / ∏(1-β_j^N) - 1|`.
    pub residual: f64,
}

/// Whether `z^N = ∏ (1-β_j^N)/(1-α_j^N)`, the condition for a summand periodic mod `N`.
pub fn is_cyclic(
    spec: &HypSpec,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<CyclicityCheck> {
    let n = i64::from(ctx.order());
    let one = dd_one();
    let mut num = dd_powi(spec.z, n);
    let mut den = one;
    for (j, (&a, &b)) in spec.alphas.iter().zip(&spec.betas).enumerate() {
        let ua = one - dd_powi(a, n);
        if dd_abs(ua) < cfg.pole_tolerance {
            return Err(Error::DegenerateAlpha { index: j });
        }
        num = num * ua;
        den = den * (one - dd_powi(b, n));
    }
    let residual = if dd_abs(den) == 0.0 {
        f64::INFINITY
    } else {
        dd_abs(num / den - one)
    };
    Ok(CyclicityCheck {
        holds: residual < cfg.relation_tolerance,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SaalschutzCheck {
    pub holds: bool,
    /// `|ω² ∏α_j - ∏β_j|`.
    pub balance_residual: f64,
    /// `|z - ω|`.
    pub argument_residual: f64,
}

/// Whether `ω² α₁⋯α_p = β₁⋯β_p` and `z = ω`.
pub fn is_saalschutz(spec: &HypSpec, ctx: &UnityContext, cfg: &NumericConfig) -> SaalschutzCheck {
    let pa = spec.alphas.iter().fold(dd_one(), |acc, &a| acc * a);
    let pb = spec.betas.iter().fold(dd_one(), |acc, &b| acc * b);
    let balance_residual = dd_abs(ctx.omega_pow_dd(2) * pa - pb);
    let argument_residual = dd_abs(spec.z - ctx.omega_dd());
    SaalschutzCheck {
        holds: balance_residual < cfg.relation_tolerance
            && argument_residual < cfg.relation_tolerance,
        balance_residual,
        argument_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branched::{delta, pochhammer};
    use crate::numeric::rel_err;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Oracle: every term rebuilt from scratch with explicit Pochhammer products.
    fn phi_from_scratch(
        a: &[Complex64],
        b: &[Complex64],
        z: Complex64,
        ctx: &UnityContext,
    ) -> Complex64 {
        (0..ctx.order() as usize)
            .map(|l| {
                let num: Complex64 = a.iter().map(|&x| pochhammer(x, l, ctx)).product();
                let den: Complex64 = b.iter().map(|&x| pochhammer(x, l, ctx)).product();
                num / den * z.powi(l as i32)
            })
            .sum()
    }

    #[test]
    fn geometric_sum_at_omega_vanishes() {
        let cfg = NumericConfig::default();
        for n in 2..=9 {
            let ctx = UnityContext::new(n).unwrap();
            let a = c(0.37, -1.2);
            let s = HypSpec::new(&[a], &[a], ctx.omega()).unwrap();
            assert!(phi_eval(&s, &ctx, &cfg).unwrap().norm() < 1e-15);
            let s = HypSpec::new(&[a], &[a], c(1.0, 0.0)).unwrap();
            assert!(rel_err(phi_eval(&s, &ctx, &cfg).unwrap(), c(f64::from(n), 0.0)) < 1e-15);
        }
    }

    #[test]
    fn matches_from_scratch_oracle() {
        let cfg = NumericConfig::default();
        let ctx = UnityContext::new(3).unwrap();
        let cfgd = NumericConfig::default();
        let a = c(0.3, 0.1);
        let b = c(0.2, -0.5);
        let g = delta(b, &ctx, &cfgd).unwrap() / delta(a, &ctx, &cfgd).unwrap();
        let s = HypSpec::new(&[a], &[b], g).unwrap();
        let v = phi_eval(&s, &ctx, &cfg).unwrap();
        assert!(rel_err(v, phi_from_scratch(&[a], &[b], g, &ctx)) < 1e-13);
        assert!(rel_err(v, c(PHI_N3_RE, PHI_N3_IM)) < 1e-14, "{v}");

        let ctx = UnityContext::new(6).unwrap();
        let a = [c(0.3, 0.1), c(-1.1, 0.4), c(0.2, 0.9)];
        let b = [c(0.2, -0.5), c(0.7, 0.7), c(-0.4, -1.3)];
        let s = HypSpec::new(&a, &b, c(0.8, -0.3)).unwrap();
        let v = phi_eval(&s, &ctx, &cfg).unwrap();
        assert!(rel_err(v, phi_from_scratch(&a, &b, c(0.8, -0.3), &ctx)) < 1e-12);
    }

    // mpmath, 40 digits, N = 3, α = 0.3+0.1i, β = 0.2-0.5i, z = Δ(β)/Δ(α)
    const PHI_N3_RE: f64 = 2.846_639_699_885_22;
    const PHI_N3_IM: f64 = -0.933_002_600_484_051_9;

    #[test]
    fn pole_reported() {
        let cfg = NumericConfig::default();
        let ctx = UnityContext::new(4).unwrap();
        // β = ω^{-2} makes the factor 1 - β ω^2 vanish at l = 2 → term 3
        let s = HypSpec::new(&[c(0.5, 0.0)], &[ctx.omega_pow(-2)], c(0.3, 0.0)).unwrap();
        assert_eq!(
            phi_eval(&s, &ctx, &cfg),
            Err(Error::PoleInDenominator { index: 0, order: 3 })
        );
        // β = 1 has its zero already at l = 0
        let s = HypSpec::new(&[c(0.5, 0.0)], &[c(1.0, 0.0)], c(0.3, 0.0)).unwrap();
        assert_eq!(
            phi_eval(&s, &ctx, &cfg),
            Err(Error::PoleInDenominator { index: 0, order: 1 })
        );
        // β = ω lands only on the vanishing l = N-1 factor, which is never needed
        let s = HypSpec::new(&[c(0.5, 0.0)], &[ctx.omega()], c(0.3, 0.0)).unwrap();
        assert!(phi_eval(&s, &ctx, &cfg).is_ok());
    }

    #[test]
    fn shape_checked() {
        assert!(matches!(
            HypSpec::new(&[], &[], c(1.0, 0.0)),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            HypSpec::new(&[c(0.1, 0.0)], &[], c(1.0, 0.0)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn cyclicity_examples() {
        let cfg = NumericConfig::default();
        let ctx = UnityContext::new(5).unwrap();
        let zero = c(0.0, 0.0);
        let s = HypSpec::new(&[zero], &[zero], c(1.0, 0.0)).unwrap();
        assert!(is_cyclic(&s, &ctx, &cfg).unwrap().holds);
        for k in 0..5 {
            let s = HypSpec::new(&[zero], &[zero], ctx.omega_pow(k)).unwrap();
            assert!(is_cyclic(&s, &ctx, &cfg).unwrap().holds);
        }
        let s = HypSpec::new(&[zero], &[zero], c(1.1, 0.0)).unwrap();
        assert!(!is_cyclic(&s, &ctx, &cfg).unwrap().holds);

        let a = [c(0.3, 0.2), c(-0.6, 1.1)];
        let b = [c(1.4, -0.2), c(0.1, 0.5)];
        let z: Complex64 = a
            .iter()
            .zip(&b)
            .map(|(&x, &y)| delta(y, &ctx, &cfg).unwrap() / delta(x, &ctx, &cfg).unwrap())
            .product();
        let s = HypSpec::new(&a, &b, z * ctx.omega_pow(2)).unwrap();
        let chk = is_cyclic(&s, &ctx, &cfg).unwrap();
        assert!(chk.holds && chk.residual < 1e-14, "{chk:?}");

        let s = HypSpec::new(&[c(1.0, 0.0)], &[zero], c(1.0, 0.0)).unwrap();
        assert_eq!(
            is_cyclic(&s, &ctx, &cfg),
            Err(Error::DegenerateAlpha { index: 0 })
        );
    }

    #[test]
    fn saalschutz_examples() {
        let cfg = NumericConfig::default();
        let ctx = UnityContext::new(4).unwrap();
        let a = [c(0.3, 0.2), c(-0.6, 1.1)];
        let b = [a[0] * ctx.omega(), a[1] * ctx.omega()];
        let s = HypSpec::new(&a, &b, ctx.omega()).unwrap();
        assert!(is_saalschutz(&s, &ctx, &cfg).holds);
        let s = HypSpec::new(&a, &b, c(1.0, 0.0)).unwrap();
        let chk = is_saalschutz(&s, &ctx, &cfg);
        assert!(!chk.holds && chk.balance_residual < 1e-15);
    }
}
