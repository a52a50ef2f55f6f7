//! Product formula for the cyclic `₂Φ₁`.
//!
//! For `γ = ω^k Δ(β)/Δ(α)`, `δ = β/α`, `ε = β/(αγ)`, `m = ⌊N arg α / 2π⌋`,
//! `n = ⌊N arg β / 2π⌋`:
//!
//! ```text
//! ₂Φ₁[ω, α; β; γ] = F★ ω^{-k(k+1)/2 - mk} N γ^{-(N-1)/2}
//!                   · p(β) p(γ) p(ε) / (p(α) p(1) p(δ))
//! ```
//!
//! `γ^{(N-1)/2}` is taken as `ω^{k(N-1)/2} Δ(β)^{(N-1)/2} / Δ(α)^{(N-1)/2}`.
//!
//! The phase `F★` depends on which side of the cuts of `p(δ)`, `p(γ)`, `p(ε)`
//! and `Δ(β)` the point sits. Seen in the `β^N`-plane with `a = α^N` fixed,
//! those cuts are the ray `a·[1, ∞)`, the ray `1 - [1, ∞)(1 - a)`, the arc
//! from `a` to `1` on the circle through `0, a, 1`, and `[1, ∞)`. They cut
//! the plane into three faces: the outer face containing the origin
//! (region I), the wedge between the two rays (II / II′), and the face
//! bounded by the first ray, the arc and `[1, ∞)` (III / III′).

use num_complex::Complex64;
use serde::Serialize;

use crate::branched::{
    delta_half_power, log_cut_distance, log_p_dd, sector_index, BranchedValue, UnityContext,
};
use crate::error::{Error, Result};
use crate::numeric::{dd, dd_one, dd_powi, rel_err_dd, round, Cdd, NumericConfig};
use crate::series::{phi_eval_dd, HypSpec};

/// Parameters of one `₂Φ₁` on the product-formula branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummationInput {
    alpha: BranchedValue,
    beta: BranchedValue,
    k: u32,
}

impl SummationInput {
    /// Uses the principal roots `Δ(α)`, `Δ(β)`; `k` selects `γ = ω^k Δ(β)/Δ(α)`.
    pub fn new(
        alpha: Complex64,
        beta: Complex64,
        k: u32,
        ctx: &UnityContext,
        cfg: &NumericConfig,
    ) -> Result<Self> {
        if k >= ctx.order() {
            return Err(Error::Domain(format!(
                "k = {k} must lie in 0..{}",
                ctx.order()
            )));
        }
        let alpha = BranchedValue::principal(alpha, ctx, cfg)?;
        let beta = BranchedValue::principal(beta, ctx, cfg)?;
        for (name, v) in [("alpha", &alpha), ("beta", &beta)] {
            if v.delta().norm() < cfg.pole_tolerance {
                return Err(Error::Domain(format!("{name}^N = 1")));
            }
        }
        Ok(Self { alpha, beta, k })
    }

    /// Infers `k` from a given `γ`, failing unless `γ Δ(α)/Δ(β)` is a power
    /// of ω to within [`NumericConfig::root_snap_tolerance`].
    pub fn from_gamma(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        ctx: &UnityContext,
        cfg: &NumericConfig,
    ) -> Result<Self> {
        let k = infer_k(alpha, beta, gamma, ctx, cfg)?;
        Self::new(alpha, beta, k, ctx, cfg)
    }

    pub fn alpha(&self) -> BranchedValue {
        self.alpha
    }

    pub fn beta(&self) -> BranchedValue {
        self.beta
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// `k` with `γ = ω^k Δ(β)/Δ(α)`.
pub fn infer_k(
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<u32> {
    let da = crate::branched::delta(alpha, ctx, cfg)?;
    let db = crate::branched::delta(beta, ctx, cfg)?;
    let ratio = gamma * da / db;
    let (k, res) = ctx.nearest_power(ratio / ratio.norm());
    let res = res.max((ratio.norm() - 1.0).abs());
    if res > cfg.root_snap_tolerance {
        return Err(Error::GammaNotOnBranch(res));
    }
    Ok(k)
}

/// `m`, `n`, `γ`, `δ`, `ε` of the product formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedQuantities {
    pub m: u32,
    pub n: u32,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub epsilon: Complex64,
}

#[derive(Clone, Copy, Debug)]
struct DerivedDd {
    m: u32,
    n: u32,
    gamma: Cdd,
    delta: Cdd,
    epsilon: Cdd,
}

fn derived_dd(input: &SummationInput, ctx: &UnityContext) -> Result<DerivedDd> {
    let a = input.alpha.value_dd();
    let b = input.beta.value_dd();
    let m = sector_index(input.alpha.value(), ctx)?;
    let n = sector_index(input.beta.value(), ctx)?;
    let gamma =
        ctx.omega_pow_dd(i64::from(input.k)) * input.beta.delta_dd(ctx) / input.alpha.delta_dd(ctx);
    let delta = b / a;
    let epsilon = delta / gamma;
    Ok(DerivedDd {
        m,
        n,
        gamma,
        delta,
        epsilon,
    })
}

pub fn derived_quantities(input: &SummationInput, ctx: &UnityContext) -> Result<DerivedQuantities> {
    let d = derived_dd(input, ctx)?;
    Ok(DerivedQuantities {
        m: d.m,
        n: d.n,
        gamma: round(d.gamma),
        delta: round(d.delta),
        epsilon: round(d.epsilon),
    })
}

/// `γ` in double-double.
pub fn gamma_dd(input: &SummationInput, ctx: &UnityContext) -> Result<Cdd> {
    derived_dd(input, ctx).map(|d| d.gamma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    I,
    II,
    III,
    IIPrime,
    IIIPrime,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IIPrime => "II'",
            Region::IIIPrime => "III'",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ImSign {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RegionTag {
    region: Region,
    im_alpha_sign: ImSign,
}

impl RegionTag {
    pub fn new(region: Region, im_alpha_sign: ImSign) -> Result<Self> {
        let ok = match region {
            Region::I => true,
            Region::II | Region::III => im_alpha_sign == ImSign::Positive,
            Region::IIPrime | Region::IIIPrime => im_alpha_sign == ImSign::Negative,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "region {} is incompatible with Im alpha^N {:?}",
                region.label(),
                im_alpha_sign
            )));
        }
        Ok(Self {
            region,
            im_alpha_sign,
        })
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn im_alpha_sign(&self) -> ImSign {
        self.im_alpha_sign
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Face {
    Outer,
    Wedge,
    Inner,
}

/// Face of the `β^N`-plane cut graph containing `w`, for `Im a > 0`.
fn face(a: Complex64, w: Complex64) -> Face {
    let one = Complex64::new(1.0, 0.0);
    let u = (w - a) / (w - one);
    let below = u.im < 0.0;
    if below {
        // circle through 0, 1, a has its centre on Re = 1/2
        let yc = (a.norm_sqr() - a.re) / (2.0 * a.im);
        let centre = Complex64::new(0.5, yc);
        if (u - centre).norm() < centre.norm() {
            return Face::Wedge;
        }
        let right_of_first = (u * a.conj()).im < 0.0;
        let right_of_last = ((u - one) * (one - a).conj()).im < 0.0;
        if right_of_first && right_of_last {
            return Face::Inner;
        }
    }
    Face::Outer
}

/// Smallest distance from any principal-log argument used by the closed form
/// to its cut.
fn cut_clearance(input: &SummationInput, d: &DerivedDd, ctx: &UnityContext) -> f64 {
    let one = dd_one();
    let nn = i64::from(ctx.order());
    let mut clearance = log_cut_distance(round(one - dd_powi(input.beta.value_dd(), nn)));
    for arg in [input.beta.value_dd(), d.gamma, d.delta, d.epsilon] {
        for j in 1..ctx.order() {
            let u = round(one - ctx.omega_pow_dd(i64::from(j)) * arg);
            clearance = clearance.min(log_cut_distance(u));
        }
    }
    clearance
}

/// Assigns the cut region of `β` relative to `α`.
pub fn classify_region(
    input: &SummationInput,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<RegionTag> {
    let d = derived_dd(input, ctx)?;
    classify_with(input, &d, ctx, cfg)
}

fn classify_with(
    input: &SummationInput,
    d: &DerivedDd,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<RegionTag> {
    let nn = i64::from(ctx.order());
    let a = round(dd_powi(input.alpha.value_dd(), nn));
    let w = round(dd_powi(input.beta.value_dd(), nn));
    if a.im.abs() < cfg.cut_tolerance {
        return Err(Error::OnBoundary("Im alpha^N = 0"));
    }
    if cut_clearance(input, d, ctx) < cfg.cut_tolerance {
        return Err(Error::OnBoundary("beta lies on a cut of the closed form"));
    }
    let (sign, a, w) = if a.im > 0.0 {
        (ImSign::Positive, a, w)
    } else {
        (ImSign::Negative, a.conj(), w.conj())
    };
    let region = match (face(a, w), sign) {
        (Face::Outer, _) => Region::I,
        (Face::Wedge, ImSign::Positive) => Region::II,
        (Face::Inner, ImSign::Positive) => Region::III,
        (Face::Wedge, ImSign::Negative) => Region::IIPrime,
        (Face::Inner, ImSign::Negative) => Region::IIIPrime,
    };
    RegionTag::new(region, sign)
}

/// Exponent `e ∈ {0..N-1}` with `F★ = ω^e`.
pub fn phase_exponent(region: Region, m: u32, n: u32, k: u32, ctx: &UnityContext) -> u32 {
    let (m, n, k) = (i64::from(m), i64::from(n), i64::from(k));
    let e = match region {
        Region::I => 0,
        Region::II => k,
        Region::III => m - n + k,
        Region::IIPrime => -k,
        Region::IIIPrime => n - m - k,
    };
    e.rem_euclid(i64::from(ctx.order())) as u32
}

/// `F★` for a region: `1`, `ω^k`, `ω^{m-n+k}`, `ω^{-k}`, `ω^{n-m-k}`.
pub fn phase_factor(tag: RegionTag, m: u32, n: u32, k: u32, ctx: &UnityContext) -> Complex64 {
    ctx.omega_pow(i64::from(phase_exponent(tag.region, m, n, k, ctx)))
}

/// Closed form with `F★ = 1`.
fn unphased(
    input: &SummationInput,
    d: &DerivedDd,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    let nn = i64::from(ctx.order());
    let k = i64::from(input.k);
    let (m, _) = (i64::from(d.m), d.n);
    // ω^{-k(k+1)/2 - mk} · ω^{-k(N-1)/2}
    let twice = -k * (k + 1) - 2 * m * k - k * (nn - 1);
    let phase = ctx.omega_half_pow(twice);
    let ratio =
        delta_half_power(input.alpha.delta(), ctx) / delta_half_power(input.beta.delta(), ctx);
    let log_p = log_p_dd(input.beta.value_dd(), ctx, cfg)?
        + log_p_dd(d.gamma, ctx, cfg)?
        + log_p_dd(d.epsilon, ctx, cfg)?
        - log_p_dd(input.alpha.value_dd(), ctx, cfg)?
        - log_p_dd(dd_one(), ctx, cfg)?
        - log_p_dd(d.delta, ctx, cfg)?;
    Ok(phase * ratio * log_p.exp() * ctx.order_f64())
}

/// Result of the product formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedForm {
    pub value: Complex64,
    /// `None` when the point sits on a region boundary but every candidate
    /// phase coincides, so the value is still determined.
    pub region: Option<RegionTag>,
    pub phase_exponent: u32,
}

pub fn closed_form(
    input: &SummationInput,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<ClosedForm> {
    let d = derived_dd(input, ctx)?;
    let base = unphased(input, &d, ctx, cfg)?;
    let (region, e) = match classify_with(input, &d, ctx, cfg) {
        Ok(tag) => (
            Some(tag),
            phase_exponent(tag.region, d.m, d.n, input.k, ctx),
        ),
        Err(err @ Error::OnBoundary(_)) => {
            let all = [
                Region::I,
                Region::II,
                Region::III,
                Region::IIPrime,
                Region::IIIPrime,
            ]
            .map(|r| phase_exponent(r, d.m, d.n, input.k, ctx));
            if all.iter().any(|&e| e != all[0]) {
                return Err(err);
            }
            (None, all[0])
        }
        Err(err) => return Err(err),
    };
    Ok(ClosedForm {
        value: base * ctx.omega_pow(i64::from(e)),
        region,
        phase_exponent: e,
    })
}

/// The `₂Φ₁` summed term by term at `z = γ`.
pub fn direct_sum(input: &SummationInput, ctx: &UnityContext, cfg: &NumericConfig) -> Result<Cdd> {
    let d = derived_dd(input, ctx)?;
    let spec = HypSpec::from_dd(
        vec![input.alpha.value_dd()],
        vec![input.beta.value_dd()],
        d.gamma,
    )?;
    phi_eval_dd(&spec, ctx, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OraclePhase {
    pub exponent: u32,
    pub residual: f64,
}

/// The power of ω reconciling the direct sum with the unphased closed form.
pub fn oracle_phase(
    input: &SummationInput,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<OraclePhase> {
    let d = derived_dd(input, ctx)?;
    let base = unphased(input, &d, ctx, cfg)?;
    let direct = direct_sum(input, ctx, cfg)?;
    let best = (0..ctx.order())
        .map(|s| {
            let cand = dd(base) * ctx.omega_pow_dd(i64::from(s));
            (s, rel_err_dd(cand, direct))
        })
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("order >= 2");
    if best.1 > cfg.phase_match_tolerance {
        return Err(Error::NoConsistentPhase { residual: best.1 });
    }
    Ok(OraclePhase {
        exponent: best.0,
        residual: best.1,
    })
}

/// Closed form against direct sum for one input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SummationCheck {
    pub derived: DerivedQuantities,
    pub direct: Complex64,
    pub closed: Complex64,
    pub residual: f64,
    pub region: Option<RegionTag>,
    pub classifier_exponent: u32,
    pub oracle_exponent: u32,
    /// Whether the oracle exponent is one of the table values for the sign of `Im α^N`.
    pub oracle_in_table: bool,
}

impl SummationCheck {
    pub fn classifier_agrees(&self) -> bool {
        self.classifier_exponent == self.oracle_exponent
    }
}

pub fn check_summation(
    input: &SummationInput,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<SummationCheck> {
    let derived = derived_quantities(input, ctx)?;
    let cf = closed_form(input, ctx, cfg)?;
    let direct = direct_sum(input, ctx, cfg)?;
    let oracle = oracle_phase(input, ctx, cfg)?;
    let residual = rel_err_dd(dd(cf.value), direct);
    let nn = i64::from(ctx.order());
    let a = round(dd_powi(input.alpha.value_dd(), nn));
    let table: Vec<u32> = if a.im > 0.0 {
        vec![Region::I, Region::II, Region::III]
    } else {
        vec![Region::I, Region::IIPrime, Region::IIIPrime]
    }
    .into_iter()
    .map(|r| phase_exponent(r, derived.m, derived.n, input.k, ctx))
    .collect();
    Ok(SummationCheck {
        derived,
        direct: round(direct),
        closed: cf.value,
        residual,
        region: cf.region,
        classifier_exponent: cf.phase_exponent,
        oracle_exponent: oracle.exponent,
        oracle_in_table: table.contains(&oracle.exponent),
    })
}
