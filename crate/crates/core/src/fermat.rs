//! Dictionary between affine parameters and points of the Fermat curve
//! `x^N + y^N = z^N`.
//!
//! A point `(x, y, z)` in the sector `Γ_{l;m}`, defined by
//! `0 < arg(x/z) < 2π/N` and `|arg(y/z) - 2πl/N| < π/N`, corresponds to
//! `α = ω^{m+1} x/z` with `Δ(α) = ω^{-l} y/z`. The sector conditions force
//! this `Δ(α)` to be the principal root.
//!
//! Two weight conventions live here and nowhere else:
//!
//! * `w(x, y, z | l) = ∏_{s=1}^{l} y/(z - xω^s) = (y/z)^l / (ωx/z; ω)_l`;
//! * `w(p | σ) = 1/p₀(ω^σ α)`, normalized so that its product over a period is 1.
//!
//! The bilateral sum is taken as
//! `Ψ(n) = N^{-1/2} Σ_l ω^{nl} ∏_j w(p_j | l)/w(p′_j | l)`
//! with upper points `p_j` and lower points `p′_j`. With `β_j`, `α_j` the
//! affine images of `p_j`, `p′_j` it equals
//! `C · Φ[ω, α; β; ω^n ∏Δ(β)/∏Δ(α)]`, `C = N^{-1/2} ∏p₀(α)/∏p₀(β)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::branched::{log_p_dd, p0_dd, pochhammer_dd, sector_index, BranchedValue, UnityContext};
use crate::error::{Error, Result};
use crate::numeric::{dd, dd_abs, dd_powi, rel_err, round, Cdd, ComplexSum, NumericConfig};
use crate::series::{phi_eval_dd, HypSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FermatPoint {
    x: Complex64,
    y: Complex64,
    z: Complex64,
    l: u32,
    m: u32,
}

/// `arg(w)` reduced to `(-π, π]` after removing `ω^{shift}`.
fn offset_arg(w: Complex64, shift: f64) -> f64 {
    let a = w.arg() - shift;
    (a + PI).rem_euclid(TAU) - PI
}

impl FermatPoint {
    pub fn new(
        x: Complex64,
        y: Complex64,
        z: Complex64,
        l: u32,
        m: u32,
        ctx: &UnityContext,
        cfg: &NumericConfig,
    ) -> Result<Self> {
        if z.norm() < cfg.pole_tolerance {
            return Err(Error::ZeroParameter("z"));
        }
        let n = i64::from(ctx.order());
        let (xd, yd, zd) = (dd(x), dd(y), dd(z));
        let lhs = dd_powi(xd, n) + dd_powi(yd, n);
        let rhs = dd_powi(zd, n);
        let res = dd_abs(lhs - rhs) / dd_abs(rhs);
        if res > cfg.relation_tolerance {
            return Err(Error::OffCurve(res));
        }
        let width = TAU / ctx.order_f64();
        let ax = offset_arg(x / z, width / 2.0);
        if x.norm() == 0.0 || ax.abs() >= width / 2.0 {
            return Err(Error::SectorViolation("arg(x/z) must lie in (0, 2pi/N)"));
        }
        let ay = offset_arg(y / z, width * f64::from(l % ctx.order()));
        if y.norm() == 0.0 || ay.abs() >= width / 2.0 {
            return Err(Error::SectorViolation(
                "arg(y/z) must lie within pi/N of 2pi*l/N",
            ));
        }
        let order = ctx.order();
        Ok(Self {
            x,
            y,
            z,
            l: l % order,
            m: m % order,
        })
    }

    pub fn x(&self) -> Complex64 {
        self.x
    }

    pub fn y(&self) -> Complex64 {
        self.y
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// `α = ω^{m+1} x/z`, `Δ(α) = ω^{-l} y/z`.
pub fn fermat_to_affine(
    p: &FermatPoint,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<BranchedValue> {
    let value = ctx.omega_pow(i64::from(p.m) + 1) * p.x / p.z;
    let delta = ctx.omega_pow(-i64::from(p.l)) * p.y / p.z;
    BranchedValue::new(value, delta, ctx, cfg)
}

/// The representative with `z = 1`, `l = 0` and `m = sector(α) - 1`.
/// Only the principal `Δ` is reachable.
pub fn affine_to_fermat(
    b: &BranchedValue,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<FermatPoint> {
    if !b.is_principal(ctx, cfg)? {
        return Err(Error::SectorViolation(
            "only the principal Delta has a Fermat image",
        ));
    }
    let n = ctx.order();
    let width = TAU / ctx.order_f64();
    let sector = sector_index(b.value(), ctx)?;
    let m = (sector + n - 1) % n;
    let x = ctx.omega_pow(-(i64::from(m) + 1)) * b.value();
    let ax = offset_arg(x, width / 2.0);
    if width / 2.0 - ax.abs() < cfg.cut_tolerance {
        return Err(Error::SectorBoundary("arg(x/z)"));
    }
    let ay = b.delta().arg();
    if width / 2.0 - ay.abs() < cfg.cut_tolerance {
        return Err(Error::SectorBoundary("arg(y/z)"));
    }
    FermatPoint::new(x, b.delta(), Complex64::new(1.0, 0.0), 0, m, ctx, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KmsWeight {
    /// `∏_{s=1}^{l} y/(z - xω^s)`.
    pub product: Complex64,
    /// `(y/z)^l / (ωx/z; ω)_l`.
    pub pochhammer_form: Complex64,
    pub residual: f64,
}

pub fn w_kms(
    p: &FermatPoint,
    l: usize,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<KmsWeight> {
    let (x, y, z) = (dd(p.x), dd(p.y), dd(p.z));
    let mut product = Cdd::ONE;
    for s in 1..=l {
        let den = z - x * ctx.omega_pow_dd(s as i64);
        if dd_abs(den) < cfg.pole_tolerance * p.z.norm() {
            return Err(Error::PoleInDenominator { index: 0, order: s });
        }
        product = product * y / den;
    }
    let poch = pochhammer_dd(ctx.omega_dd() * x / z, l, ctx);
    if dd_abs(poch) < cfg.pole_tolerance {
        return Err(Error::PoleInDenominator { index: 0, order: l });
    }
    let form = dd_powi(y / z, l as i64) / poch;
    let (product, pochhammer_form) = (round(product), round(form));
    Ok(KmsWeight {
        product,
        pochhammer_form,
        residual: rel_err(pochhammer_form, product),
    })
}

/// `ln p₀(z) = ln p(z) - ((N-1)/2) ln Δ(z)`.
fn log_p0(z: Cdd, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Complex64> {
    let d = round(crate::branched::delta_dd(z, ctx, cfg)?);
    Ok(log_p_dd(z, ctx, cfg)? - d.ln() * ((ctx.order_f64() - 1.0) / 2.0))
}

/// `1/p₀(ω^σ α)` with `α` the affine image of `p`.
pub fn w_sms(
    p: &FermatPoint,
    shift: i64,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    let a = fermat_to_affine(p, ctx, cfg)?;
    Ok(1.0 / p0_dd(ctx.omega_pow_dd(shift) * a.value_dd(), ctx, cfg)?)
}

/// `∏_{σ=0}^{N-1} w(p | σ)`, which the normalization makes 1.
pub fn w_sms_period_product(
    p: &FermatPoint,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    let a = fermat_to_affine(p, ctx, cfg)?.value_dd();
    let mut log = Complex64::new(0.0, 0.0);
    for s in 0..i64::from(ctx.order()) {
        log -= log_p0(ctx.omega_pow_dd(s) * a, ctx, cfg)?;
    }
    Ok(log.exp())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsiTranslation {
    pub spec: HypSpec,
    pub prefactor: Complex64,
}

fn images(
    points: &[FermatPoint],
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Vec<BranchedValue>> {
    points
        .iter()
        .map(|p| fermat_to_affine(p, ctx, cfg))
        .collect()
}

fn check_shape(upper: &[FermatPoint], lower: &[FermatPoint]) -> Result<()> {
    if upper.is_empty() || upper.len() != lower.len() {
        return Err(Error::ShapeMismatch {
            alphas: lower.len(),
            betas: upper.len(),
        });
    }
    Ok(())
}

/// `Ψ(upper; lower | n) = C · Φ[ω, α; β; z]`.
pub fn translate_psi(
    upper: &[FermatPoint],
    lower: &[FermatPoint],
    n: i64,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<PsiTranslation> {
    check_shape(upper, lower)?;
    let betas = images(upper, ctx, cfg)?;
    let alphas = images(lower, ctx, cfg)?;
    let mut z = ctx.omega_pow_dd(n);
    let mut log_c = Complex64::new(-0.5 * ctx.order_f64().ln(), 0.0);
    for (a, b) in alphas.iter().zip(&betas) {
        z = z * b.delta_dd(ctx) / a.delta_dd(ctx);
        log_c += log_p0(a.value_dd(), ctx, cfg)? - log_p0(b.value_dd(), ctx, cfg)?;
    }
    let spec = HypSpec::from_dd(
        alphas.iter().map(BranchedValue::value_dd).collect(),
        betas.iter().map(BranchedValue::value_dd).collect(),
        z,
    )?;
    Ok(PsiTranslation {
        spec,
        prefactor: log_c.exp(),
    })
}

/// `Ψ(n)` summed directly from the `w(p | σ)` factors.
pub fn psi_direct(
    upper: &[FermatPoint],
    lower: &[FermatPoint],
    n: i64,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    check_shape(upper, lower)?;
    let betas = images(upper, ctx, cfg)?;
    let alphas = images(lower, ctx, cfg)?;
    let mut sum = ComplexSum::new();
    for l in 0..i64::from(ctx.order()) {
        let w = ctx.omega_pow_dd(l);
        let mut log = Complex64::new(0.0, 0.0);
        for (a, b) in alphas.iter().zip(&betas) {
            log += log_p0(w * a.value_dd(), ctx, cfg)? - log_p0(w * b.value_dd(), ctx, cfg)?;
        }
        sum.add(ctx.omega_pow(n * l) * log.exp());
    }
    Ok(sum.value() / ctx.order_f64().sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PsiCheck {
    pub direct: Complex64,
    pub translated: Complex64,
    pub residual: f64,
}

/// `Ψ` summed directly against `C · Φ`.
pub fn psi_consistency(
    upper: &[FermatPoint],
    lower: &[FermatPoint],
    n: i64,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<PsiCheck> {
    let t = translate_psi(upper, lower, n, ctx, cfg)?;
    let translated = t.prefactor * round(phi_eval_dd(&t.spec, ctx, cfg)?);
    let direct = psi_direct(upper, lower, n, ctx, cfg)?;
    Ok(PsiCheck {
        direct,
        translated,
        residual: rel_err(translated, direct),
    })
}
