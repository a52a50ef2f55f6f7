//! Integrable chiral Potts model: rapidity curve, Boltzmann weights,
//! star–triangle relation and order parameters.

use num_complex::Complex64;
use serde::Serialize;

use crate::branched::UnityContext;
use crate::error::{Error, Result};
use crate::numeric::{
    dd, dd_abs, dd_one, dd_powi, dd_real, principal_root_dd, rel_err_dd, round, Cdd, NumericConfig,
};
use crate::transform::Phi1Params;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moduli {
    k: Complex64,
    kprime: Complex64,
    #[serde(skip)]
    k_dd: Cdd,
    #[serde(skip)]
    kprime_dd: Cdd,
}

impl Moduli {
    pub fn new(k: Complex64, kprime: Complex64, cfg: &NumericConfig) -> Result<Self> {
        Self::from_dd(dd(k), dd(kprime), cfg)
    }

    fn from_dd(k: Cdd, kprime: Cdd, cfg: &NumericConfig) -> Result<Self> {
        let res = dd_abs(k * k + kprime * kprime - dd_one());
        if res > cfg.relation_tolerance {
            return Err(Error::InvalidModuli(res));
        }
        if dd_abs(k) < cfg.pole_tolerance || dd_abs(kprime) < cfg.pole_tolerance {
            return Err(Error::InvalidModuli(0.0));
        }
        Ok(Self {
            k: round(k),
            kprime: round(kprime),
            k_dd: k,
            kprime_dd: kprime,
        })
    }

    /// Real `k′`, with `k = √(1 - k′²)`.
    pub fn from_kprime(kprime: f64, cfg: &NumericConfig) -> Result<Self> {
        let kp = dd_real(kprime);
        Self::from_dd(principal_root_dd(dd_one() - kp * kp, 2), kp, cfg)
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn kprime(&self) -> Complex64 {
        self.kprime
    }

    /// Whether `0 < k′ < 1` on the real axis.
    pub fn is_physical(&self) -> bool {
        self.kprime.im == 0.0 && self.k.im == 0.0 && self.kprime.re > 0.0 && self.kprime.re < 1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LambdaChoice {
    /// `|λ| < 1`
    Inside,
    /// `|λ| > 1`
    Outside,
}

/// Requested sheet of a rapidity point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BranchRequest {
    pub lambda: LambdaChoice,
    pub x_index: u32,
    pub mu_index: u32,
}

impl BranchRequest {
    pub fn new(lambda: LambdaChoice) -> Self {
        Self {
            lambda,
            x_index: 0,
            mu_index: 0,
        }
    }
}

/// Resolved sheet: `x`, `y`, `μ` are principal roots times these powers of ω.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RapidityBranch {
    pub lambda: LambdaChoice,
    pub x_index: u32,
    pub y_index: u32,
    pub mu_index: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Coords {
    x: Cdd,
    y: Cdd,
    mu: Cdd,
    lambda: Cdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RapidityPoint {
    x: Complex64,
    y: Complex64,
    mu: Complex64,
    lambda: Complex64,
    t: Complex64,
    moduli: Moduli,
    branch: RapidityBranch,
    #[serde(skip)]
    exact: Coords,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveResiduals {
    pub y: f64,
    pub x: f64,
    pub mu: f64,
    pub lambda: f64,
    pub t: f64,
}

impl CurveResiduals {
    pub fn max(&self) -> f64 {
        [self.y, self.x, self.mu, self.lambda, self.t]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `|a - b|` relative to `max(|b|, 1)`.
fn residual(a: Cdd, b: Cdd) -> f64 {
    dd_abs(a - b) / dd_abs(b).max(1.0)
}

impl RapidityPoint {
    pub fn x(&self) -> Complex64 {
        self.x
    }

    pub fn y(&self) -> Complex64 {
        self.y
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn moduli(&self) -> Moduli {
        self.moduli
    }

    pub fn branch(&self) -> RapidityBranch {
        self.branch
    }

    /// Residuals of `y^N = (1 - k′λ)/k`, `x^N = (1 - k′/λ)/k`, `μ^N = λ`,
    /// `λ + 1/λ = (1 + k′² - k²t^N)/k′` and `xy = t`.
    pub fn residuals(&self, ctx: &UnityContext) -> CurveResiduals {
        let n = i64::from(ctx.order());
        let (k, kp) = (self.moduli.k_dd, self.moduli.kprime_dd);
        let Coords {
            x,
            y,
            mu,
            lambda: l,
        } = self.exact;
        let one = dd_one();
        let t = dd(self.t);
        CurveResiduals {
            y: residual(dd_powi(y, n), (one - kp * l) / k),
            x: residual(dd_powi(x, n), (one - kp / l) / k),
            mu: residual(dd_powi(mu, n), l),
            lambda: residual(l + one / l, (one + kp * kp - k * k * dd_powi(t, n)) / kp),
            t: residual(x * y, t),
        }
    }
}

/// Solves the curve for given `t`, choosing `λ` by modulus and `x`, `μ` by
/// the requested powers of ω; the power of `y` is fixed by `xy = t`.
pub fn solve_rapidity(
    moduli: Moduli,
    t: Complex64,
    req: BranchRequest,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<RapidityPoint> {
    let n = ctx.order();
    let one = dd_one();
    let (k, kp) = (moduli.k_dd, moduli.kprime_dd);
    let ktn = k * k * dd_powi(dd(t), i64::from(n));
    let s = (one + kp * kp - ktn) / kp;
    let disc = principal_root_dd(s * s - dd_real(4.0), 2);
    let (r1, r2) = ((s + disc).scale(0.5), (s - disc).scale(0.5));
    let big = if dd_abs(r1) >= dd_abs(r2) { r1 } else { r2 };
    if (dd_abs(big) - 1.0).abs() < cfg.cut_tolerance.sqrt() {
        return Err(Error::BranchPoint("|lambda| = 1"));
    }
    let lambda = match req.lambda {
        LambdaChoice::Outside => big,
        LambdaChoice::Inside => one / big,
    };
    // (1 - k′/λ)(1 - k′λ) = k² t^N; the smaller factor comes from the larger
    let (a, b) = (one - kp / lambda, one - kp * lambda);
    let (a, b) = if dd_abs(a) < dd_abs(b) {
        (ktn / b, b)
    } else {
        (a, ktn / a)
    };
    let x = principal_root_dd(a / k, n) * ctx.omega_pow_dd(i64::from(req.x_index));
    let y0 = principal_root_dd(b / k, n);
    let mu = principal_root_dd(lambda, n) * ctx.omega_pow_dd(i64::from(req.mu_index));
    let td = dd(t);
    let (y_index, best) = (0..n)
        .map(|j| (j, residual(x * y0 * ctx.omega_pow_dd(i64::from(j)), td)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("n >= 2");
    if best > cfg.relation_tolerance {
        return Err(Error::InconsistentRoots(best));
    }
    let y = y0 * ctx.omega_pow_dd(i64::from(y_index));
    let point = RapidityPoint {
        x: round(x),
        y: round(y),
        mu: round(mu),
        lambda: round(lambda),
        t,
        moduli,
        branch: RapidityBranch {
            lambda: req.lambda,
            x_index: req.x_index % n,
            y_index,
            mu_index: req.mu_index % n,
        },
        exact: Coords { x, y, mu, lambda },
    };
    let res = point.residuals(ctx).max();
    if res > cfg.relation_tolerance {
        return Err(Error::InconsistentRoots(res));
    }
    Ok(point)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WeightKind {
    W,
    Wbar,
    Dual,
}

/// `N` weights `W(0..N-1)`, extended periodically.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable {
    values: Vec<Cdd>,
    kind: WeightKind,
}

impl WeightTable {
    pub fn new(values: &[Complex64], kind: WeightKind) -> Self {
        Self {
            values: values.iter().copied().map(dd).collect(),
            kind,
        }
    }

    pub fn from_dd(values: Vec<Cdd>, kind: WeightKind) -> Self {
        Self { values, kind }
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.values.iter().copied().map(round).collect()
    }

    pub fn values_dd(&self) -> &[Cdd] {
        &self.values
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `W(n mod N)`.
    pub fn get(&self, n: i64) -> Complex64 {
        round(self.get_dd(n))
    }

    pub fn get_dd(&self, n: i64) -> Cdd {
        self.values[n.rem_euclid(self.values.len() as i64) as usize]
    }

    /// The table divided by `W(0)`, and `W(0)`.
    pub fn normalized(&self, cfg: &NumericConfig) -> Result<(WeightTable, Complex64)> {
        let w0 = self.values[0];
        if dd_abs(w0) < cfg.pole_tolerance {
            return Err(Error::ZeroDenominator);
        }
        let values = self.values.iter().map(|&v| v / w0).collect();
        Ok((Self::from_dd(values, self.kind), round(w0)))
    }
}

fn pole(den: Cdd, j: usize, cfg: &NumericConfig) -> Result<()> {
    if dd_abs(den) < cfg.pole_tolerance {
        return Err(Error::PoleInDenominator { index: 0, order: j });
    }
    Ok(())
}

fn weight_w_dd(
    p: &RapidityPoint,
    q: &RapidityPoint,
    n: usize,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Cdd> {
    let (p, q) = (&p.exact, &q.exact);
    let ratio = p.mu / q.mu;
    let mut acc = dd_one();
    for j in 1..=n {
        let w = ctx.omega_pow_dd(j as i64);
        let den = p.y - q.x * w;
        pole(den, j, cfg)?;
        acc = acc * ratio * (q.y - p.x * w) / den;
    }
    Ok(acc)
}

fn weight_wbar_dd(
    p: &RapidityPoint,
    q: &RapidityPoint,
    n: usize,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Cdd> {
    let (p, q) = (&p.exact, &q.exact);
    let prod = p.mu * q.mu;
    let wx = ctx.omega_dd() * p.x;
    let mut acc = dd_one();
    for j in 1..=n {
        let w = ctx.omega_pow_dd(j as i64);
        let den = q.y - p.y * w;
        pole(den, j, cfg)?;
        acc = acc * prod * (wx - q.x * w) / den;
    }
    Ok(acc)
}

/// `W_pq(n)/W_pq(0) = (μ_p/μ_q)^n ∏_{j=1}^n (y_q - x_p ω^j)/(y_p - x_q ω^j)`.
#[allow(non_snake_case)]
pub fn weight_W(
    p: &RapidityPoint,
    q: &RapidityPoint,
    n: usize,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    weight_w_dd(p, q, n, ctx, cfg).map(round)
}

/// `W̄_pq(n)/W̄_pq(0) = (μ_p μ_q)^n ∏_{j=1}^n (ω x_p - x_q ω^j)/(y_q - y_p ω^j)`.
#[allow(non_snake_case)]
pub fn weight_Wbar(
    p: &RapidityPoint,
    q: &RapidityPoint,
    n: usize,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    weight_wbar_dd(p, q, n, ctx, cfg).map(round)
}

fn weight_dd(
    kind: WeightKind,
    p: &RapidityPoint,
    q: &RapidityPoint,
    n: usize,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Cdd> {
    match kind {
        WeightKind::W => weight_w_dd(p, q, n, ctx, cfg),
        WeightKind::Wbar => weight_wbar_dd(p, q, n, ctx, cfg),
        WeightKind::Dual => Err(Error::Domain(
            "dual weights are not defined on rapidities".into(),
        )),
    }
}

pub fn weight(
    kind: WeightKind,
    p: &RapidityPoint,
    q: &RapidityPoint,
    n: usize,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    weight_dd(kind, p, q, n, ctx, cfg).map(round)
}

pub fn weight_table(
    kind: WeightKind,
    p: &RapidityPoint,
    q: &RapidityPoint,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<WeightTable> {
    let values = (0..ctx.order() as usize)
        .map(|n| weight_dd(kind, p, q, n, ctx, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightTable::from_dd(values, kind))
}

/// `|W(N) - W(0)|` for the normalized weight.
pub fn periodicity_residual(
    kind: WeightKind,
    p: &RapidityPoint,
    q: &RapidityPoint,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<f64> {
    let wn = weight_dd(kind, p, q, ctx.order() as usize, ctx, cfg)?;
    Ok(dd_abs(wn - dd_one()))
}

/// `(α, β, γ)` with `W(n)/W(0) = γ^n (α;ω)_n/(β;ω)_n`:
///
/// * `W`: `α = ωx_p/y_q`, `β = ωx_q/y_p`, `γ = μ_p y_q/(μ_q y_p)`;
/// * `W̄`: `α = x_q/x_p`, `β = ωy_p/y_q`, `γ = ωμ_pμ_q x_p/y_q`.
pub fn weights_to_hyp(
    kind: WeightKind,
    p: &RapidityPoint,
    q: &RapidityPoint,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<Phi1Params> {
    let w = ctx.omega_dd();
    let Coords {
        x: xp,
        y: yp,
        mu: mp,
        ..
    } = p.exact;
    let Coords {
        x: xq,
        y: yq,
        mu: mq,
        ..
    } = q.exact;
    let nz = |z: Complex64, what| {
        if z.norm() < cfg.pole_tolerance {
            Err(Error::ZeroParameter(what))
        } else {
            Ok(())
        }
    };
    let params = match kind {
        WeightKind::W => {
            nz(p.y, "y_p")?;
            nz(q.y, "y_q")?;
            Phi1Params::raw(w * xp / yq, w * xq / yp, mp * yq / (mq * yp))
        }
        WeightKind::Wbar => {
            nz(p.x, "x_p")?;
            nz(q.y, "y_q")?;
            Phi1Params::raw(xq / xp, w * yp / yq, w * mp * mq * xp / yq)
        }
        WeightKind::Dual => {
            return Err(Error::Domain(
                "dual weights are not defined on rapidities".into(),
            ))
        }
    };
    let table = weight_table(kind, p, q, ctx, cfg)?;
    let product = crate::transform::product_table(&params, ctx, cfg)?;
    let mismatch = table
        .values_dd()
        .iter()
        .zip(product.values_dd())
        .map(|(&a, &b)| rel_err_dd(b, a))
        .fold(params.cyclicity_residual(ctx), f64::max);
    if mismatch > cfg.relation_tolerance {
        return Err(Error::DerivationMismatch(mismatch));
    }
    Ok(params)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StarTriangle {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub ratio: Complex64,
}

struct Tables {
    w_pq: WeightTable,
    w_pr: WeightTable,
    w_qr: WeightTable,
    wb_pq: WeightTable,
    wb_pr: WeightTable,
    wb_qr: WeightTable,
}

impl Tables {
    fn new(
        p: &RapidityPoint,
        q: &RapidityPoint,
        r: &RapidityPoint,
        ctx: &UnityContext,
        cfg: &NumericConfig,
    ) -> Result<Self> {
        Ok(Self {
            w_pq: weight_table(WeightKind::W, p, q, ctx, cfg)?,
            w_pr: weight_table(WeightKind::W, p, r, ctx, cfg)?,
            w_qr: weight_table(WeightKind::W, q, r, ctx, cfg)?,
            wb_pq: weight_table(WeightKind::Wbar, p, q, ctx, cfg)?,
            wb_pr: weight_table(WeightKind::Wbar, p, r, ctx, cfg)?,
            wb_qr: weight_table(WeightKind::Wbar, q, r, ctx, cfg)?,
        })
    }

    fn eval_dd(&self, (a, b, c): (i64, i64, i64), n: i64) -> Result<(Cdd, Cdd)> {
        let lhs = (0..n).fold(Cdd::ZERO, |acc, d| {
            acc + self.wb_qr.get_dd(b - d) * self.w_pr.get_dd(a - d) * self.wb_pq.get_dd(d - c)
        });
        let rhs = self.w_pq.get_dd(a - b) * self.wb_pr.get_dd(b - c) * self.w_qr.get_dd(a - c);
        if dd_abs(rhs) == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        Ok((lhs, rhs))
    }

    fn eval(&self, spins: (i64, i64, i64), n: i64) -> Result<StarTriangle> {
        let (lhs, rhs) = self.eval_dd(spins, n)?;
        Ok(StarTriangle {
            lhs: round(lhs),
            rhs: round(rhs),
            ratio: round(lhs / rhs),
        })
    }
}

/// `L = Σ_d W̄_qr(b-d) W_pr(a-d) W̄_pq(d-c)` against
/// `R = W_pq(a-b) W̄_pr(b-c) W_qr(a-c)`.
pub fn star_triangle_check(
    p: &RapidityPoint,
    q: &RapidityPoint,
    r: &RapidityPoint,
    spins: (i64, i64, i64),
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<StarTriangle> {
    Tables::new(p, q, r, ctx, cfg)?.eval(spins, i64::from(ctx.order()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StarTriangleSpread {
    /// `L/R` at spins `(0, 0, 0)`.
    pub ratio: Complex64,
    /// Largest `|r_i - r_j| / |r_0|` over all `N³` spin assignments.
    pub spread: f64,
}

pub fn star_triangle_spread(
    p: &RapidityPoint,
    q: &RapidityPoint,
    r: &RapidityPoint,
    ctx: &UnityContext,
    cfg: &NumericConfig,
) -> Result<StarTriangleSpread> {
    let n = i64::from(ctx.order());
    let tables = Tables::new(p, q, r, ctx, cfg)?;
    let mut ratios = Vec::with_capacity((n * n * n) as usize);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (l, r) = tables.eval_dd((a, b, c), n)?;
                ratios.push(l / r);
            }
        }
    }
    let r0 = ratios[0];
    let mut spread: f64 = 0.0;
    for (i, &x) in ratios.iter().enumerate() {
        for &y in &ratios[i + 1..] {
            spread = spread.max(dd_abs(x - y));
        }
    }
    Ok(StarTriangleSpread {
        ratio: round(r0),
        spread: spread / dd_abs(r0),
    })
}

/// `⟨σ₀ⁿ⟩ = (1 - k′²)^{n(N-n)/(2N²)}`.
pub fn order_parameter(n: u32, order: u32, kprime: f64) -> Result<f64> {
    if order < 2 {
        return Err(Error::InvalidOrder(order));
    }
    if !(1..=order).contains(&n) {
        return Err(Error::Domain(format!("n = {n} must lie in 1..={order}")));
    }
    if !(kprime > 0.0 && kprime < 1.0) {
        return Err(Error::Domain(format!("k' = {kprime} must lie in (0, 1)")));
    }
    let (n, nn) = (f64::from(n), f64::from(order));
    Ok((1.0 - kprime * kprime).powf(n * (nn - n) / (2.0 * nn * nn)))
}
