use densecap::capacity::{dense_capacity, mutual_information, normal_capacity, Direction};
use densecap::qstate::BipartiteState;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::output::{emit, json, sig12, Csv};
use crate::states::{load, Family, Loaded};
use crate::{CapacityArgs, DirectionArg, Format};

#[derive(Debug, Clone, Serialize)]
struct Row {
    #[serde(skip_serializing_if = "Option::is_none")]
    param: Option<f64>,
    /// Normal capacity of the sender's reduced state.
    c_normal: f64,
    c_dense_ab: f64,
    c_dense_ba: f64,
    mutual_info: f64,
    /// Largest `|C_dense - C_normal - MI|` over both directions.
    residual: f64,
}

impl Row {
    fn new(s: &BipartiteState, direction: Direction, param: Option<f64>) -> Self {
        let mutual_info = mutual_information(s);
        let c_dense_ab = dense_capacity(s, Direction::AtoB);
        let c_dense_ba = dense_capacity(s, Direction::BtoA);
        let residual = [(Direction::AtoB, c_dense_ab), (Direction::BtoA, c_dense_ba)]
            .iter()
            .map(|&(dir, dense)| {
                (dense - normal_capacity(s.reduced(dir.sender())) - mutual_info).abs()
            })
            .fold(0.0, f64::max);
        Self {
            param,
            c_normal: normal_capacity(s.reduced(direction.sender())),
            c_dense_ab,
            c_dense_ba,
            mutual_info,
            residual,
        }
    }
}

#[derive(Serialize)]
struct JointReport<'a> {
    state: &'a str,
    dims: (usize, usize),
    direction: &'static str,
    #[serde(flatten)]
    row: Row,
    tol: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SingleReport<'a> {
    state: &'a str,
    dim: usize,
    c_normal: f64,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    family: &'a str,
    direction: &'static str,
    tol: f64,
    max_residual: f64,
    pass: bool,
    rows: Vec<Row>,
}

fn direction(arg: DirectionArg) -> (Direction, &'static str) {
    match arg {
        DirectionArg::A2b => (Direction::AtoB, "a2b"),
        DirectionArg::B2a => (Direction::BtoA, "b2a"),
    }
}

pub fn run(args: &CapacityArgs) -> Result<bool, CliError> {
    let (dir, dir_name) = direction(args.direction);
    let (text, pass) = match args.sweep {
        Some(sweep) => {
            let family = Family::parse(&args.state)?;
            // collect() keeps parameter order whatever the execution order
            let rows = sweep
                .points()
                .par_iter()
                .map(|&p| family.at(p).map(|s| Row::new(&s, dir, Some(p))))
                .collect::<Result<Vec<_>, _>>()?;
            let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
            let pass = max_residual < args.tol;
            let text = match args.output.format {
                Format::Json => json(&SweepReport {
                    family: &args.state,
                    direction: dir_name,
                    tol: args.tol,
                    max_residual,
                    pass,
                    rows,
                }),
                Format::Csv => {
                    let mut csv = Csv::new(vec![
                        "param",
                        "c_normal",
                        "c_dense_ab",
                        "c_dense_ba",
                        "mutual_info",
                    ]);
                    for r in &rows {
                        let param = r.param.expect("sweep rows carry their parameter");
                        csv.push(
                            [param, r.c_normal, r.c_dense_ab, r.c_dense_ba, r.mutual_info]
                                .map(sig12)
                                .to_vec(),
                        );
                    }
                    csv.render()
                }
            };
            (text, pass)
        }
        None => match load(&args.state)? {
            Loaded::Single(rho) => {
                let c_normal = normal_capacity(&rho);
                let text = match args.output.format {
                    Format::Json => json(&SingleReport {
                        state: &args.state,
                        dim: rho.dim(),
                        c_normal,
                    }),
                    Format::Csv => {
                        let mut csv = Csv::new(vec!["c_normal"]);
                        csv.push(vec![sig12(c_normal)]);
                        csv.render()
                    }
                };
                (text, true)
            }
            Loaded::Joint(s) => {
                let row = Row::new(&s, dir, None);
                let pass = row.residual < args.tol;
                let text = match args.output.format {
                    Format::Json => json(&JointReport {
                        state: &args.state,
                        dims: s.dims(),
                        direction: dir_name,
                        row,
                        tol: args.tol,
                        pass,
                    }),
                    Format::Csv => {
                        let mut csv = Csv::new(vec![
                            "c_normal",
                            "c_dense_ab",
                            "c_dense_ba",
                            "mutual_info",
                            "residual",
                        ]);
                        csv.push(
                            [
                                row.c_normal,
                                row.c_dense_ab,
                                row.c_dense_ba,
                                row.mutual_info,
                                row.residual,
                            ]
                            .map(sig12)
                            .to_vec(),
                        );
                        csv.render()
                    }
                };
                (text, pass)
            }
        },
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(pass)
}
