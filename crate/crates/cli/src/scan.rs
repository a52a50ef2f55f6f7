use std::io::Write;

use anyhow::{bail, Result};
use clap::Args;
use cyclichyp::summation::{closed_form, oracle_phase, SummationInput};
use cyclichyp::{NumericConfig, UnityContext};
use num_complex::Complex64;
use serde::Serialize;

use crate::args::ComplexArg;
use crate::output::{json_line, SCHEMA_VERSION};
use crate::Status;

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long = "N", value_name = "N")]
    pub order: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: ComplexArg,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Points per side of the square grid.
    #[arg(long, default_value_t = 41)]
    pub grid: u32,
    /// Half-width of the grid, centred at the origin.
    #[arg(long, default_value_t = 2.0)]
    pub extent: f64,
}

#[derive(Debug, Serialize)]
struct Row {
    beta_re: f64,
    beta_im: f64,
    region: Option<&'static str>,
    classifier_exponent: Option<u32>,
    oracle_exponent: Option<u32>,
    agrees: Option<bool>,
    skipped: Option<String>,
}

#[derive(Debug, Serialize)]
struct Document<'a> {
    schema_version: u32,
    #[serde(rename = "N")]
    order: u32,
    alpha: Complex64,
    k: u32,
    grid: u32,
    extent: f64,
    disagreements: usize,
    points: &'a [Row],
}

fn scan_point(beta: Complex64, a: &ScanArgs, ctx: &UnityContext, cfg: &NumericConfig) -> Row {
    let mut row = Row {
        beta_re: beta.re,
        beta_im: beta.im,
        region: None,
        classifier_exponent: None,
        oracle_exponent: None,
        agrees: None,
        skipped: None,
    };
    let res = SummationInput::new(a.alpha.0, beta, a.k, ctx, cfg).and_then(|input| {
        let cf = closed_form(&input, ctx, cfg)?;
        let oracle = oracle_phase(&input, ctx, cfg)?;
        Ok((cf, oracle))
    });
    match res {
        Ok((cf, oracle)) => {
            row.region = Some(cf.region.map_or("boundary", |t| t.region().label()));
            row.classifier_exponent = Some(cf.phase_exponent);
            row.oracle_exponent = Some(oracle.exponent);
            row.agrees = Some(cf.phase_exponent == oracle.exponent);
        }
        Err(e) => row.skipped = Some(e.to_string()),
    }
    row
}

pub fn run(a: ScanArgs, json: bool, out: &mut dyn Write) -> Result<Status> {
    let cfg = NumericConfig::default();
    let ctx = UnityContext::new(a.order)?;
    if a.grid < 2 {
        bail!("--grid must be at least 2");
    }
    if !(a.extent > 0.0 && a.extent.is_finite()) {
        bail!("--extent must be positive");
    }
    let step = 2.0 * a.extent / f64::from(a.grid - 1);
    let coord = |i: u32| -a.extent + step * f64::from(i);
    let rows: Vec<Row> = (0..a.grid)
        .flat_map(|j| (0..a.grid).map(move |i| (i, j)))
        .map(|(i, j)| scan_point(Complex64::new(coord(i), coord(j)), &a, &ctx, &cfg))
        .collect();
    let disagreements = rows.iter().filter(|r| r.agrees == Some(false)).count();
    if json {
        let doc = Document {
            schema_version: SCHEMA_VERSION,
            order: a.order,
            alpha: a.alpha.0,
            k: a.k,
            grid: a.grid,
            extent: a.extent,
            disagreements,
            points: &rows,
        };
        json_line(out, &doc)?;
    } else {
        let mut w = csv::Writer::from_writer(&mut *out);
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    Ok(if disagreements == 0 {
        Status::Pass
    } else {
        Status::Fail
    })
}
