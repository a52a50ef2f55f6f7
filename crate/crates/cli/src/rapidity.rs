use std::io::Write;

use anyhow::Result;
use clap::Args;
use cyclichyp::potts::{solve_rapidity, BranchRequest, LambdaChoice, Moduli};
use cyclichyp::{NumericConfig, UnityContext};

use crate::args::ComplexArg;
use crate::output::Record;
use crate::Status;

#[derive(Debug, Args)]
pub struct RapidityArgs {
    #[arg(long = "N", value_name = "N")]
    pub order: u32,
    /// Real modulus k′ in (0, 1).
    #[arg(long)]
    pub kprime: f64,
    /// The product t = xy.
    #[arg(long, allow_hyphen_values = true)]
    pub t: ComplexArg,
    /// Take the root with |λ| > 1 (default |λ| < 1).
    #[arg(long)]
    pub outside: bool,
    /// Power of ω multiplying the principal x.
    #[arg(long, default_value_t = 0)]
    pub x_index: u32,
    /// Power of ω multiplying the principal μ.
    #[arg(long, default_value_t = 0)]
    pub mu_index: u32,
}

pub fn run(a: RapidityArgs, json: bool, out: &mut dyn Write) -> Result<Status> {
    let cfg = NumericConfig::default();
    let ctx = UnityContext::new(a.order)?;
    let m = Moduli::from_kprime(a.kprime, &cfg)?;
    let req = BranchRequest {
        lambda: if a.outside {
            LambdaChoice::Outside
        } else {
            LambdaChoice::Inside
        },
        x_index: a.x_index % a.order,
        mu_index: a.mu_index % a.order,
    };
    let p = solve_rapidity(m, a.t.0, req, &ctx, &cfg)?;
    let mut r = Record::new();
    r.push("N", a.order)
        .push("k", p.moduli().k())
        .push("kprime", p.moduli().kprime())
        .push("t", p.t())
        .push("x", p.x())
        .push("y", p.y())
        .push("mu", p.mu())
        .push("lambda", p.lambda())
        .push("branch", p.branch())
        .push("residuals", p.residuals(&ctx));
    r.write(out, json)?;
    Ok(Status::Pass)
}
