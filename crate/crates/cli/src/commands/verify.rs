use densecap::capacity::{dense_capacity, mutual_information, normal_capacity, Direction};
use densecap::encodings::verify_orthogonality;
use densecap::linalg;
use densecap::qstate::von_neumann_entropy;
use densecap::sampling::{random_bipartite_any_rank, random_density_matrix, rng_for};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::output::{emit, json, sig12, Csv};
use crate::states::load_ensemble;
use crate::{Format, VerifyArgs};

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    tol: f64,
    pass: bool,
}

#[derive(Serialize)]
struct Report {
    d: usize,
    samples: u64,
    seed: u64,
    ensemble: String,
    size: usize,
    checks: Vec<Check>,
    pass: bool,
}

fn max_over<F: Fn(u64) -> f64 + Send + Sync>(samples: u64, f: F) -> f64 {
    (0..samples).into_par_iter().map(f).reduce(|| 0.0, f64::max)
}

pub fn run(args: &VerifyArgs) -> Result<bool, CliError> {
    let d = args.d;
    if !(2..=6).contains(&d) {
        return Err(CliError::Parse(format!("--d {d} outside 2..=6")));
    }
    if args.samples < 1 {
        return Err(CliError::Parse("--samples must be at least 1".into()));
    }
    let (name, e) = load_ensemble(&args.ensemble, d)?;
    let target = linalg::identity(d).scale(1.0 / d as f64);

    // Sample i of the twirl check uses stream i; of the identity checks, stream samples + i.
    let twirl = max_over(args.samples, |i| {
        let mut rng = rng_for(args.seed, i);
        let rank = rng.random_range(1..=d);
        let rho = random_density_matrix(&mut rng, d, rank);
        let avg = e.twirl(rho.matrix()).expect("ensemble dimension checked");
        linalg::frobenius(&(avg - &target))
    });
    // |Tr U_a† U_b - d δ_ab|
    let gram = verify_orthogonality(&e).max_deviation * d as f64;
    let identities: Vec<(f64, f64)> = (0..args.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(args.seed, args.samples + i);
            let s = random_bipartite_any_rank(&mut rng, (d, d));
            let mi = mutual_information(&s);
            let diff = [Direction::AtoB, Direction::BtoA]
                .iter()
                .map(|&dir| {
                    (dense_capacity(&s, dir) - normal_capacity(s.reduced(dir.sender())) - mi).abs()
                })
                .fold(0.0, f64::max);
            let asym = dense_capacity(&s, Direction::AtoB) - dense_capacity(&s, Direction::BtoA);
            let expected = von_neumann_entropy(s.reduced_b()) - von_neumann_entropy(s.reduced_a());
            (diff, (asym - expected).abs())
        })
        .collect();
    let difference = identities.iter().map(|r| r.0).fold(0.0, f64::max);
    let asymmetry = identities.iter().map(|r| r.1).fold(0.0, f64::max);

    let checks: Vec<Check> = [
        ("twirl_residual", twirl),
        ("gram_deviation", gram),
        ("difference_identity", difference),
        ("asymmetry", asymmetry),
    ]
    .into_iter()
    .map(|(name, value)| Check {
        name,
        value,
        tol: args.tol,
        pass: value < args.tol,
    })
    .collect();
    let pass = checks.iter().all(|c| c.pass);

    let text = match args.output.format {
        Format::Json => json(&Report {
            d,
            samples: args.samples,
            seed: args.seed,
            ensemble: name,
            size: e.len(),
            checks,
            pass,
        }),
        Format::Csv => {
            let mut csv = Csv::new(vec!["check", "value", "tol", "pass"]);
            for c in &checks {
                csv.push(vec![
                    c.name.into(),
                    sig12(c.value),
                    sig12(c.tol),
                    c.pass.to_string(),
                ]);
            }
            csv.render()
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(pass)
}
