use densecap::entanglement::{concurrence_oracle, convex_roof, RoofOptions};
use densecap::formats::RoofRecord;
use serde::Serialize;

use crate::error::CliError;
use crate::output::{emit, json, sig12, Csv};
use crate::states::load_joint;
use crate::{EntanglementArgs, Format};

/// Accepted distance between the roof value and twice the two-qubit
/// entanglement of formation.
const ORACLE_TOL: f64 = 5e-3;

#[derive(Serialize)]
struct Oracle {
    concurrence: f64,
    formation: f64,
    /// `2 E_F`, the exact value of the functional.
    target: f64,
    difference: f64,
    tol: f64,
    pass: bool,
}

#[derive(Serialize)]
struct Report<'a> {
    state: &'a str,
    dims: (usize, usize),
    #[serde(flatten)]
    roof: RoofRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Oracle>,
    pass: bool,
}

pub fn run(args: &EntanglementArgs) -> Result<bool, CliError> {
    if args.restarts < 1 {
        return Err(CliError::Parse("--restarts must be at least 1".into()));
    }
    if args.decomposition && args.output.format == Format::Csv {
        return Err(CliError::Parse(
            "--decomposition needs --format json".into(),
        ));
    }
    let s = load_joint(&args.state)?;
    let options = RoofOptions {
        terms: args.terms,
        restarts: args.restarts,
        tol: args.tol,
        seed: args.seed,
        ..RoofOptions::default()
    };
    let report = convex_roof(&s, &options)?;
    let oracle = if s.dims() == (2, 2) {
        let c = concurrence_oracle(&s)?;
        let target = 2.0 * c.formation;
        let difference = report.value - target;
        Some(Oracle {
            concurrence: c.concurrence,
            formation: c.formation,
            target,
            difference,
            tol: ORACLE_TOL,
            pass: difference.abs() < ORACLE_TOL,
        })
    } else {
        None
    };
    let pass = oracle.as_ref().is_none_or(|o| o.pass);

    let text = match args.output.format {
        Format::Json => json(&Report {
            state: &args.state,
            dims: s.dims(),
            roof: RoofRecord::new(&report, args.decomposition),
            oracle,
            pass,
        }),
        Format::Csv => {
            let mut csv = Csv::new(vec![
                "value",
                "restarts_used",
                "converged",
                "oracle_target",
                "difference",
            ]);
            let (target, difference) = match &oracle {
                Some(o) => (sig12(o.target), sig12(o.difference)),
                None => (String::new(), String::new()),
            };
            csv.push(vec![
                sig12(report.value),
                report.restarts_used.to_string(),
                report.converged.to_string(),
                target,
                difference,
            ]);
            csv.render()
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(pass)
}
