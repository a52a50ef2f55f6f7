//! Symmetries of cyclic hypergeometric parameters.
//!
//! The map `μ: (α, β, γ) ↦ (γ, ωαγ/β, ω/β)` has order four and satisfies
//! `Φ(X)·Φ(μX) = N`. On pairs of triples, `μ⁻¹ ⊗ μ` and the swap
//! `ι: α₁ ↔ α₂` generate the transformations of the `₃Φ₂`. None of the
//! identities here depend on a choice of branch.

use num_complex::Complex64;
use serde::Serialize;

use crate::branched::{delta_dd, pochhammer_dd, UnityContext};
use crate::error::{Error, Result};
use crate::numeric::{dd, dd_abs, dd_one, dd_powi, dd_real, rel_err_dd, round, Cdd, NumericConfig};
use crate::potts::{WeightKind, WeightTable};
use crate::series::{phi_eval_dd, HypSpec};

/// A cyclic triple `(α, β, γ)` with `γ^N (1 - α^N) = 1 - β^N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Phi1Params {
    alpha: Cdd,
    beta: Cdd,
    gamma: Cdd,
}

fn cyclicity_residual_of(alpha: Cdd, beta: Cdd, gamma: Cdd, n: u32) -> f64 {
    let n = i64::from(n);
    let lhs = dd_powi(gamma, n) * (dd_one() - dd_powi(alpha, n));
    let rhs = dd_one() - dd_powi(beta, n);
    let scale = dd_abs(lhs).max(dd_abs(rhs));
    if scale == 0.0 {
        0.0
    } else {
        dd_abs(lhs - rhs) / scale
    }
}

impl Phi1Params {
    pub fn new(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        ctx: &UnityContext,
        cfg: &NumericConfig,
    ) -> Result<Self> {
        Self::from_dd(dd(alpha), dd(beta), dd(gamma), ctx, cfg)
    }

    pub fn from_dd(
        alpha: Cdd,
        beta: Cdd,
        gamma: Cdd,
        ctx: &UnityContext,
        cfg: &NumericConfig,
    ) -> Result<Self> {
        let res = cyclicity_residual_of(alpha, beta, gamma, ctx.order());
        if res > cfg.relation_tolerance {
            return Err(Error::Domain(format!(
                "triple is not cyclic (residual {res:e})"
            )));
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// `γ = ω^k Δ(β)/Δ(α)` with principal roots.
    pub fn with_branch(
        alpha: Complex64,
        beta: Complex64,
        k: u32,
        ctx: &UnityContext,
        cfg: &NumericConfig,
    ) -> Result<Self> {
        let a = dd(alpha);
        let b = dd(beta);
        let da = delta_dd(a, ctx, cfg)?;
        if dd_abs(da) < cfg.pole_tolerance {
            return Err(Error::Domain("alpha^N = 1".into()));
        }
        let gamma = ctx.omega_pow_dd(i64::from(k)) * delta_dd(b, ctx, cfg)? / da;
        Ok(Self {
            alpha: a,
            beta: b,
            gamma,
        })
    }

    pub(crate) fn raw(alpha: Cdd, beta: Cdd, gamma: Cdd) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn alpha(&self) -> Complex64 {
        round(self.alpha)
    }

    pub fn beta(&self) -> Complex64 {
        round(self.beta)
    }

    pub fn gamma(&self) -> Complex64 {
        round(self.gamma)
    }

    pub fn alpha_dd(&self) -> Cdd {
        self.alpha
    }

    pub fn beta_dd(&self) -> Cdd {
        self.beta
    }

    pub fn gamma_dd(&self) -> Cdd {
        self.gamma
    }

    pub fn cyclicity_residual(&self, ctx: &UnityContext) -> f64 {
        cyclicity_residual_of(self.alpha, self.beta, self.gamma, ctx.order())
    }

    pub fn spec(&self) -> HypSpec {
        HypSpec::from_dd(vec![self.alpha], vec![self.beta], self.gamma).expect("one parameter each")
    }

    /// `₂Φ₁[ω, α; β; γ]`.
    pub fn eval(&self, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Cdd> {
        phi_eval_dd(&self.spec(), ctx, cfg)
    }

    /// Largest componentwise relative distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        [
            rel_err_dd(self.alpha, other.alpha),
            rel_err_dd(self.beta, other.beta),
            rel_err_dd(self.gamma, other.gamma),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn nonzero(z: Cdd, what: &'static str, cfg: &NumericConfig) -> Result<()> {
    if dd_abs(z) < cfg.pole_tolerance {
        return Err(Error::ZeroParameter(what));
    }
    Ok(())
}

fn check_nonzero(p: &Phi1Params, cfg: &NumericConfig) -> Result<()> {
    nonzero(p.alpha, "alpha", cfg)?;
    nonzero(p.beta, "beta", cfg)?;
    nonzero(p.gamma, "gamma", cfg)
}

/// `(α, β, γ) ↦ (γ, ωαγ/β, ω/β)`.
pub fn mu_transform(p: &Phi1Params, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Phi1Params> {
    check_nonzero(p, cfg)?;
    let w = ctx.omega_dd();
    Ok(Phi1Params::raw(
        p.gamma,
        w * p.alpha * p.gamma / p.beta,
        w / p.beta,
    ))
}

/// `(α, β, γ) ↦ (β/(αγ), ω/γ, α)`.
pub fn mu_inverse(p: &Phi1Params, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Phi1Params> {
    check_nonzero(p, cfg)?;
    let w = ctx.omega_dd();
    Ok(Phi1Params::raw(
        p.beta / (p.alpha * p.gamma),
        w / p.gamma,
        p.alpha,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Z4Report {
    /// `Φ(μ^j X)` for `j = 0..3`.
    pub values: [Complex64; 4],
    /// Relative residuals of `Φ₀Φ₁ = N`, `Φ₀ = Φ₂`, `Φ₁ = Φ₃`, `Φ₂Φ₃ = N`.
    pub residuals: [f64; 4],
    /// Distance of `μ⁴X` from `X`.
    pub order_four_residual: f64,
}

impl Z4Report {
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .copied()
            .fold(self.order_four_residual, f64::max)
    }
}

pub fn verify_z4(p: &Phi1Params, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Z4Report> {
    let mut orbit = [*p; 5];
    for j in 1..5 {
        orbit[j] = mu_transform(&orbit[j - 1], ctx, cfg)?;
    }
    let mut phi = [Cdd::ZERO; 4];
    for j in 0..4 {
        phi[j] = orbit[j].eval(ctx, cfg)?;
    }
    let n = dd_real(ctx.order_f64());
    Ok(Z4Report {
        values: phi.map(round),
        residuals: [
            rel_err_dd(phi[0] * phi[1], n),
            rel_err_dd(phi[2], phi[0]),
            rel_err_dd(phi[3], phi[1]),
            rel_err_dd(phi[2] * phi[3], n),
        ],
        order_four_residual: orbit[4].distance(p),
    })
}

/// `Ŵ(k) = Σ_n ω^{nk} W(n)`.
pub fn fourier_dual(w: &WeightTable, ctx: &UnityContext) -> WeightTable {
    let vals = w.values_dd();
    let len = vals.len();
    let out = (0..len)
        .map(|k| {
            vals.iter().enumerate().fold(Cdd::ZERO, |acc, (n, &v)| {
                acc + ctx.omega_pow_dd((n * k) as i64) * v
            })
        })
        .collect();
    WeightTable::from_dd(out, WeightKind::Dual)
}

/// `W(n) = γ^n (α;ω)_n / (β;ω)_n` for `n = 0..N-1`.
pub fn product_table(
    p: &Phi1Params,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<WeightTable> {
    let spec = p.spec();
    let mut vals = Vec::with_capacity(ctx.order() as usize);
    let mut term = dd_one();
    vals.push(term);
    for l in 0..ctx.order() as usize - 1 {
        let den = dd_one() - p.beta * ctx.omega_pow_dd(l as i64);
        if dd_abs(den) < cfg.pole_tolerance {
            return Err(Error::PoleInDenominator {
                index: 0,
                order: l + 1,
            });
        }
        term = term * (dd_one() - p.alpha * ctx.omega_pow_dd(l as i64)) / den * spec.z_dd();
        vals.push(term);
    }
    Ok(WeightTable::from_dd(vals, WeightKind::W))
}

/// Distance between the normalized Fourier dual of the product table of `p`
/// and the product table of `μp`.
pub fn dual_structure_residual(
    p: &Phi1Params,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<f64> {
    let dual = fourier_dual(&product_table(p, ctx, cfg)?, ctx)
        .normalized(cfg)?
        .0;
    let expected = product_table(&mu_transform(p, ctx, cfg)?, ctx, cfg)?;
    Ok(dual
        .values_dd()
        .iter()
        .zip(expected.values_dd())
        .map(|(&a, &b)| rel_err_dd(a, b))
        .fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

impl IdentityCheck {
    fn from_dd(lhs: Cdd, rhs: Cdd) -> Self {
        Self {
            lhs: round(lhs),
            rhs: round(rhs),
            residual: rel_err_dd(rhs, lhs),
        }
    }
}

/// `Φ(ω^n γ)/Φ(γ) = γ̂^n (α̂;ω)_n / (β̂;ω)_n` with `(α̂, β̂, γ̂) = μ(α, β, γ)`.
pub fn recurrence_check(
    p: &Phi1Params,
    n: usize,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<IdentityCheck> {
    let base = p.eval(ctx, cfg)?;
    let shifted =
        Phi1Params::raw(p.alpha, p.beta, ctx.omega_pow_dd(n as i64) * p.gamma).eval(ctx, cfg)?;
    let hat = mu_transform(p, ctx, cfg)?;
    let den = pochhammer_dd(hat.beta, n, ctx);
    if dd_abs(den) < cfg.pole_tolerance {
        return Err(Error::PoleInDenominator { index: 0, order: n });
    }
    let rhs = dd_powi(hat.gamma, n as i64) * pochhammer_dd(hat.alpha, n, ctx) / den;
    Ok(IdentityCheck::from_dd(shifted / base, rhs))
}

/// Two cyclic triples defining `₃Φ₂[ω, α₁, α₂; β₁, β₂; γ₁γ₂]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Phi2Params {
    first: Phi1Params,
    second: Phi1Params,
}

impl Phi2Params {
    pub fn new(first: Phi1Params, second: Phi1Params) -> Self {
        Self { first, second }
    }

    pub fn first(&self) -> &Phi1Params {
        &self.first
    }

    pub fn second(&self) -> &Phi1Params {
        &self.second
    }

    pub fn z_dd(&self) -> Cdd {
        self.first.gamma * self.second.gamma
    }

    pub fn z(&self) -> Complex64 {
        round(self.z_dd())
    }

    pub fn spec(&self) -> HypSpec {
        HypSpec::from_dd(
            vec![self.first.alpha, self.second.alpha],
            vec![self.first.beta, self.second.beta],
            self.z_dd(),
        )
        .expect("two parameters each")
    }

    pub fn eval(&self, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Cdd> {
        phi_eval_dd(&self.spec(), ctx, cfg)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.first
            .distance(&other.first)
            .max(self.second.distance(&other.second))
    }
}

/// `₃Φ₂(γ₁γ₂) = N⁻¹ Σ_k ₂Φ₁(ω^{-k}γ₁) ₂Φ₁(ω^k γ₂)`.
pub fn convolution_3phi2(
    p: &Phi2Params,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<IdentityCheck> {
    let lhs = p.eval(ctx, cfg)?;
    let mut rhs = Cdd::ZERO;
    for k in 0..i64::from(ctx.order()) {
        let a = Phi1Params::raw(
            p.first.alpha,
            p.first.beta,
            ctx.omega_pow_dd(-k) * p.first.gamma,
        );
        let b = Phi1Params::raw(
            p.second.alpha,
            p.second.beta,
            ctx.omega_pow_dd(k) * p.second.gamma,
        );
        rhs = rhs + a.eval(ctx, cfg)? * b.eval(ctx, cfg)?;
    }
    let rhs = rhs.scale(1.0 / ctx.order_f64());
    Ok(IdentityCheck::from_dd(lhs, rhs))
}

/// A `₃Φ₂` transformation `lhs = scale · rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transformed {
    pub params: Phi2Params,
    pub scale: Complex64,
    pub check: IdentityCheck,
}

/// `₃Φ₂(X₁, X₂) = A · ₃Φ₂(μ⁻¹X₁, μX₂)` with `A = Φ(X₁)Φ(X₂)/N`.
///
/// The new argument is `ωα₁/β₂`. `check.lhs` is the input `₃Φ₂`.
pub fn transform_3phi2(
    p: &Phi2Params,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Transformed> {
    let params = Phi2Params::new(
        mu_inverse(&p.first, ctx, cfg)?,
        mu_transform(&p.second, ctx, cfg)?,
    );
    let scale = (p.first.eval(ctx, cfg)? * p.second.eval(ctx, cfg)?).scale(1.0 / ctx.order_f64());
    let lhs = p.eval(ctx, cfg)?;
    let rhs = scale * params.eval(ctx, cfg)?;
    Ok(Transformed {
        params,
        scale: round(scale),
        check: IdentityCheck::from_dd(lhs, rhs),
    })
}

/// Inverse of [`transform_3phi2`]: `(X̃₁, X̃₂) ↦ (μX̃₁, μ⁻¹X̃₂)` with
/// `₃Φ₂(μX̃₁, μ⁻¹X̃₂) = N/(Φ(X̃₁)Φ(X̃₂)) · ₃Φ₂(X̃₁, X̃₂)`.
///
/// `check.lhs` is the output `₃Φ₂`.
pub fn m_transform(p: &Phi2Params, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Transformed> {
    let params = Phi2Params::new(
        mu_transform(&p.first, ctx, cfg)?,
        mu_inverse(&p.second, ctx, cfg)?,
    );
    let den = p.first.eval(ctx, cfg)? * p.second.eval(ctx, cfg)?;
    if dd_abs(den) < cfg.pole_tolerance {
        return Err(Error::ZeroDenominator);
    }
    let scale = dd_real(ctx.order_f64()) / den;
    let lhs = params.eval(ctx, cfg)?;
    let rhs = scale * p.eval(ctx, cfg)?;
    Ok(Transformed {
        params,
        scale: round(scale),
        check: IdentityCheck::from_dd(lhs, rhs),
    })
}

/// `ι: α₁ ↔ α₂`, with `γ₃ = ω^{k₁}Δ(β₁)/Δ(α₂)` and `γ₄ = ω^{k₂}Δ(β₂)/Δ(α₁)`
/// where `γ_i = ω^{k_i}Δ(β_i)/Δ(α_i)`, so that `γ₃γ₄ = γ₁γ₂`.
pub fn iota_swap(p: &Phi2Params, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Phi2Params> {
    let d = |z: Cdd| delta_dd(z, ctx, cfg);
    let (da1, db1, da2, db2) = (
        d(p.first.alpha)?,
        d(p.first.beta)?,
        d(p.second.alpha)?,
        d(p.second.beta)?,
    );
    for z in [da1, da2] {
        if dd_abs(z) < cfg.pole_tolerance {
            return Err(Error::ZeroParameter("Delta(alpha)"));
        }
    }
    let branch = |gamma: Cdd, da: Cdd, db: Cdd| -> Result<Cdd> {
        let u = round(gamma * da / db);
        let (k, res) = ctx.nearest_power(u / u.norm());
        if res > cfg.root_snap_tolerance {
            return Err(Error::GammaNotOnBranch(res));
        }
        Ok(ctx.omega_pow_dd(i64::from(k)))
    };
    let w1 = branch(p.first.gamma, da1, db1)?;
    let w2 = branch(p.second.gamma, da2, db2)?;
    Ok(Phi2Params::new(
        Phi1Params::raw(p.second.alpha, p.first.beta, w1 * db1 / da2),
        Phi1Params::raw(p.first.alpha, p.second.beta, w2 * db2 / da1),
    ))
}

/// Distinct parameter sets reachable from `p` under `ι`, `M` and `M⁻¹`.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub members: Vec<Phi2Params>,
    /// Whether exploration stopped at the size cap before closing.
    pub truncated: bool,
}

/// Breadth-first exploration; generator applications that fail are skipped.
pub fn explore_orbit(
    p: &Phi2Params,
    max_size: usize,
    tolerance: f64,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Orbit {
    let mut members = vec![*p];
    let mut next = 0;
    while next < members.len() {
        let cur = members[next];
        next += 1;
        let images = [
            iota_swap(&cur, ctx, cfg).ok(),
            m_transform(&cur, ctx, cfg).ok().map(|t| t.params),
            transform_3phi2(&cur, ctx, cfg).ok().map(|t| t.params),
        ];
        for img in images.into_iter().flatten() {
            if members.iter().all(|m| m.distance(&img) > tolerance) {
                if members.len() == max_size {
                    return Orbit {
                        members,
                        truncated: true,
                    };
                }
                members.push(img);
            }
        }
    }
    Orbit {
        members,
        truncated: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_err;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(n: u32) -> (UnityContext, NumericConfig) {
        (UnityContext::new(n).unwrap(), NumericConfig::default())
    }

    fn triple(n: u32, a: Complex64, b: Complex64, k: u32) -> Phi1Params {
        let (u, cfg) = setup(n);
        Phi1Params::with_branch(a, b, k, &u, &cfg).unwrap()
    }

    #[test]
    fn mu_first_image_and_order_four() {
        let (u, cfg) = setup(5);
        let p = triple(5, c(0.3, 0.4), c(-0.7, 1.1), 2);
        let m = mu_transform(&p, &u, &cfg).unwrap();
        let w = u.omega();
        assert!(rel_err(m.alpha(), p.gamma()) < 1e-15);
        assert!(rel_err(m.beta(), w * p.alpha() * p.gamma() / p.beta()) < 1e-14);
        assert!(rel_err(m.gamma(), w / p.beta()) < 1e-15);
        assert!(m.cyclicity_residual(&u) < 1e-12);
        let mut q = p;
        for _ in 0..4 {
            q = mu_transform(&q, &u, &cfg).unwrap();
        }
        assert!(q.distance(&p) < 1e-28);
        let back = mu_inverse(&m, &u, &cfg).unwrap();
        assert!(back.distance(&p) < 1e-28);
    }

    #[test]
    fn zero_parameter_rejected() {
        let (u, cfg) = setup(3);
        let p = Phi1Params::raw(dd(c(0.0, 0.0)), dd(c(0.5, 0.0)), dd(c(1.0, 0.0)));
        assert!(matches!(
            mu_transform(&p, &u, &cfg),
            Err(Error::ZeroParameter("alpha"))
        ));
    }

    #[test]
    fn z4_orbit() {
        for n in 2..=7 {
            let (u, cfg) = setup(n);
            let p = triple(n, c(0.35, -0.2), c(0.6, 0.9), 1);
            let rep = verify_z4(&p, &u, &cfg).unwrap();
            assert!(rep.max_residual() < 1e-12, "{n}: {rep:?}");
        }
    }

    #[test]
    fn z4_geometric_case() {
        let (u, cfg) = setup(4);
        let p = triple(4, c(0.2, 0.7), c(0.2, 0.7), 0);
        let rep = verify_z4(&p, &u, &cfg).unwrap();
        assert!(rel_err(rep.values[0], c(4.0, 0.0)) < 1e-15);
        assert!(rep.residuals[0] < 1e-14);
    }

    #[test]
    fn z4_pole() {
        let (u, cfg) = setup(3);
        // β = ω^{-1}: (β;ω)_2 vanishes
        let b = u.omega_pow(-1) * 1.000_000_000_000_01;
        let p = Phi1Params::raw(dd(c(0.4, 0.1)), dd(b), dd(c(1e-3, 0.0)));
        assert!(matches!(
            verify_z4(&p, &u, &cfg),
            Err(Error::PoleInDenominator { .. })
        ));
    }

    #[test]
    fn fourier_of_constant_and_double_transform() {
        let (u, cfg) = setup(5);
        let ones = WeightTable::new(&[c(1.0, 0.0); 5], WeightKind::W);
        let hat = fourier_dual(&ones, &u);
        assert!(rel_err(hat.values()[0], c(5.0, 0.0)) < 1e-15);
        for v in &hat.values()[1..] {
            assert!(v.norm() < 1e-15);
        }
        let p = triple(5, c(0.4, 0.3), c(1.3, -0.2), 3);
        let w = product_table(&p, &u, &cfg).unwrap();
        let twice = fourier_dual(&fourier_dual(&w, &u), &u);
        for n in 0..5 {
            let back = w.values()[(5 - n) % 5] * 5.0;
            assert!(rel_err(twice.values()[n], back) < 1e-14);
        }
        assert_eq!(twice.kind(), WeightKind::Dual);
    }

    #[test]
    fn dual_has_product_form() {
        for n in 2..=7 {
            let (u, cfg) = setup(n);
            let p = triple(n, c(-0.3, 0.5), c(0.8, 0.6), n - 1);
            assert!(dual_structure_residual(&p, &u, &cfg).unwrap() < 1e-12);
        }
    }

    #[test]
    fn recurrence() {
        let (u, cfg) = setup(4);
        let p = triple(4, c(0.5, 0.5), c(-0.2, 1.4), 1);
        for n in 0..=4 {
            let r = recurrence_check(&p, n, &u, &cfg).unwrap();
            assert!(r.residual < 1e-12, "{n}: {r:?}");
        }
        assert!(rel_err(recurrence_check(&p, 0, &u, &cfg).unwrap().lhs, c(1.0, 0.0)) < 1e-15);
    }

    fn pair(n: u32) -> Phi2Params {
        Phi2Params::new(
            triple(n, c(0.3, 0.45), c(-0.6, 0.2), 1),
            triple(n, c(1.2, -0.4), c(0.15, 0.55), 0),
        )
    }

    #[test]
    fn convolution() {
        for n in 2..=7 {
            let (u, cfg) = setup(n);
            let r = convolution_3phi2(&pair(n), &u, &cfg).unwrap();
            assert!(r.residual < 1e-12, "{n}: {r:?}");
        }
        let (u, cfg) = setup(3);
        let degenerate = Phi2Params::new(triple(3, c(0.3, 0.2), c(0.3, 0.2), 2), *pair(3).second());
        assert!(convolution_3phi2(&degenerate, &u, &cfg).unwrap().residual < 1e-12);
    }

    #[test]
    fn transform_and_inverse() {
        for n in 2..=5 {
            let (u, cfg) = setup(n);
            let p = pair(n);
            let t = transform_3phi2(&p, &u, &cfg).unwrap();
            assert!(t.check.residual < 1e-12, "{n}: {:?}", t.check);
            let w = u.omega_dd();
            let z = w * p.first().alpha_dd() / p.second().beta_dd();
            assert!(rel_err_dd(t.params.z_dd(), z) < 1e-28);
            assert!(t.params.first().cyclicity_residual(&u) < 1e-12);
            assert!(t.params.second().cyclicity_residual(&u) < 1e-12);

            let m = m_transform(&p, &u, &cfg).unwrap();
            assert!(m.check.residual < 1e-12);
            let back = transform_3phi2(&m.params, &u, &cfg).unwrap();
            assert!(back.params.distance(&p) < 1e-25);
            let back = m_transform(&t.params, &u, &cfg).unwrap();
            assert!(back.params.distance(&p) < 1e-25);
        }
    }

    #[test]
    fn transform_degenerate_second() {
        let (u, cfg) = setup(3);
        let p = Phi2Params::new(*pair(3).first(), triple(3, c(0.7, -0.1), c(0.7, -0.1), 0));
        assert!(transform_3phi2(&p, &u, &cfg).unwrap().check.residual < 1e-12);
    }

    #[test]
    fn iota() {
        for n in 2..=6 {
            let (u, cfg) = setup(n);
            let p = pair(n);
            let q = iota_swap(&p, &u, &cfg).unwrap();
            assert!(rel_err_dd(q.z_dd(), p.z_dd()) < 1e-28);
            assert!(q.first().cyclicity_residual(&u) < 1e-12);
            let a = round(p.eval(&u, &cfg).unwrap());
            let b = round(q.eval(&u, &cfg).unwrap());
            assert!(rel_err(b, a) < 1e-12);
            assert!(iota_swap(&q, &u, &cfg).unwrap().distance(&p) < 1e-28);
        }
        let (u, cfg) = setup(3);
        let x = triple(3, c(0.2, 0.3), c(0.5, -0.5), 2);
        let y = triple(3, c(0.2, 0.3), c(-0.4, 0.1), 1);
        let p = Phi2Params::new(x, y);
        assert!(iota_swap(&p, &u, &cfg).unwrap().distance(&p) < 1e-28);
    }

    #[test]
    fn orbit_is_finite() {
        let (u, cfg) = setup(3);
        let orbit = explore_orbit(&pair(3), 500, 1e-9, &u, &cfg);
        assert!(!orbit.truncated);
        assert!(orbit.members.len() > 1);
        for m in &orbit.members {
            let r =
                (round(m.eval(&u, &cfg).unwrap()) / round(pair(3).eval(&u, &cfg).unwrap())).norm();
            assert!(r.is_finite());
        }
    }
}
