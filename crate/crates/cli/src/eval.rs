use std::io::Write;

use anyhow::{bail, Result};
use clap::{Args, Subcommand, ValueEnum};
use cyclichyp::branched::{delta, p0, p_func};
use cyclichyp::numeric::round;
use cyclichyp::potts::{
    order_parameter, solve_rapidity, weight_table, BranchRequest, LambdaChoice, Moduli, WeightKind,
};
use cyclichyp::series::{is_cyclic, phi_eval_dd};
use cyclichyp::summation::{closed_form, direct_sum, SummationInput};
use cyclichyp::transform::Phi1Params;
use cyclichyp::{HypSpec, NumericConfig, UnityContext};

use crate::args::ComplexArg;
use crate::output::Record;
use crate::Status;

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Sum the truncated series Φ[ω, α…; β…; z] over one period.
    Series(SeriesArgs),
    /// The product formula for Φ[ω, α; β; γ] with γ = ω^k Δ(β)/Δ(α), next to the direct sum.
    ClosedForm(ClosedFormArgs),
    /// Boltzmann weights W(n) or W̄(n) for n = 0..N-1 between two rapidities.
    Weight(WeightArgs),
    /// p(z), p₀(z) and Δ(z).
    P(PArgs),
    /// Spontaneous order parameter ⟨σ₀ⁿ⟩.
    OrderParam(OrderParamArgs),
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long = "N", value_name = "N")]
    pub order: u32,
    /// Numerator parameter; repeat for each one.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub alpha: Vec<ComplexArg>,
    /// Denominator parameter; repeat for each one.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub beta: Vec<ComplexArg>,
    /// Argument of the series.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "k")]
    pub z: Option<ComplexArg>,
    /// Use z = ω^k Δ(β)/Δ(α) (one α and one β only).
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ClosedFormArgs {
    #[arg(long = "N", value_name = "N")]
    pub order: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: ComplexArg,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: ComplexArg,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    W,
    Wbar,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    #[arg(long = "N", value_name = "N")]
    pub order: u32,
    /// Real modulus k′ in (0, 1).
    #[arg(long)]
    pub kprime: f64,
    /// t = xy of the first rapidity.
    #[arg(long, allow_hyphen_values = true)]
    pub tp: ComplexArg,
    /// t = xy of the second rapidity.
    #[arg(long, allow_hyphen_values = true)]
    pub tq: ComplexArg,
    #[arg(long, value_enum, default_value = "w")]
    pub kind: Kind,
    /// Take |λ| < 1 for the first rapidity.
    #[arg(long)]
    pub p_inside: bool,
    /// Take |λ| < 1 for the second rapidity.
    #[arg(long)]
    pub q_inside: bool,
}

#[derive(Debug, Args)]
pub struct PArgs {
    #[arg(long = "N", value_name = "N")]
    pub order: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub z: ComplexArg,
}

#[derive(Debug, Args)]
pub struct OrderParamArgs {
    #[arg(long = "N", value_name = "N")]
    pub order: u32,
    /// Power of the spin, 1..=N.
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub kprime: f64,
}

pub fn run(cmd: EvalCommand, json: bool, out: &mut dyn Write) -> Result<Status> {
    let cfg = NumericConfig::default();
    let record = match cmd {
        EvalCommand::Series(a) => series(a, &cfg)?,
        EvalCommand::ClosedForm(a) => closed(a, &cfg)?,
        EvalCommand::Weight(a) => weights(a, &cfg)?,
        EvalCommand::P(a) => p_values(a, &cfg)?,
        EvalCommand::OrderParam(a) => {
            let v = order_parameter(a.n, a.order, a.kprime)?;
            let mut r = Record::new();
            r.push("N", a.order)
                .push("n", a.n)
                .push("kprime", a.kprime)
                .push("value", v);
            r
        }
    };
    record.write(out, json)?;
    Ok(Status::Pass)
}

fn unwrap(v: &[ComplexArg]) -> Vec<num_complex::Complex64> {
    v.iter().map(|c| c.0).collect()
}

fn series(a: SeriesArgs, cfg: &NumericConfig) -> Result<Record> {
    let ctx = UnityContext::new(a.order)?;
    let spec = match (a.z, a.k) {
        (Some(z), None) => HypSpec::new(&unwrap(&a.alpha), &unwrap(&a.beta), z.0)?,
        (None, Some(k)) => {
            if a.alpha.len() != 1 || a.beta.len() != 1 {
                bail!("--k needs exactly one --alpha and one --beta");
            }
            if k >= a.order {
                bail!("--k must be below N");
            }
            Phi1Params::with_branch(a.alpha[0].0, a.beta[0].0, k, &ctx, cfg)?.spec()
        }
        _ => bail!("give exactly one of --z or --k"),
    };
    let value = round(phi_eval_dd(&spec, &ctx, cfg)?);
    let cyc = is_cyclic(&spec, &ctx, cfg)?;
    let mut r = Record::new();
    r.push("N", a.order)
        .push("alpha", spec.alphas())
        .push("beta", spec.betas())
        .push("z", spec.z())
        .push("value", value)
        .push("cyclic", cyc.holds)
        .push("cyclicity_residual", cyc.residual);
    Ok(r)
}

fn closed(a: ClosedFormArgs, cfg: &NumericConfig) -> Result<Record> {
    let ctx = UnityContext::new(a.order)?;
    let input = SummationInput::new(a.alpha.0, a.beta.0, a.k, &ctx, cfg)?;
    let cf = closed_form(&input, &ctx, cfg)?;
    let direct = round(direct_sum(&input, &ctx, cfg)?);
    let mut r = Record::new();
    r.push("N", a.order)
        .push("alpha", a.alpha.0)
        .push("beta", a.beta.0)
        .push("k", a.k)
        .push("value", cf.value)
        .push("direct", direct)
        .push("residual", cyclichyp::numeric::rel_err(cf.value, direct))
        .push("region", cf.region.map(|t| t.region().label()))
        .push("phase_exponent", cf.phase_exponent);
    Ok(r)
}

fn weights(a: WeightArgs, cfg: &NumericConfig) -> Result<Record> {
    let ctx = UnityContext::new(a.order)?;
    let m = Moduli::from_kprime(a.kprime, cfg)?;
    let side = |inside| {
        if inside {
            LambdaChoice::Inside
        } else {
            LambdaChoice::Outside
        }
    };
    let p = solve_rapidity(m, a.tp.0, BranchRequest::new(side(a.p_inside)), &ctx, cfg)?;
    let q = solve_rapidity(m, a.tq.0, BranchRequest::new(side(a.q_inside)), &ctx, cfg)?;
    let (kind, label) = match a.kind {
        Kind::W => (WeightKind::W, "W"),
        Kind::Wbar => (WeightKind::Wbar, "Wbar"),
    };
    let table = weight_table(kind, &p, &q, &ctx, cfg)?;
    let mut r = Record::new();
    r.push("N", a.order)
        .push("kind", label)
        .push("kprime", a.kprime)
        .push("p", p)
        .push("q", q)
        .push("weights", table.values());
    Ok(r)
}

fn p_values(a: PArgs, cfg: &NumericConfig) -> Result<Record> {
    let ctx = UnityContext::new(a.order)?;
    let z = a.z.0;
    let mut r = Record::new();
    r.push("N", a.order)
        .push("z", z)
        .push("p", p_func(z, &ctx, cfg)?)
        .push("p0", p0(z, &ctx, cfg).ok())
        .push("delta", delta(z, &ctx, cfg).ok());
    Ok(r)
}
