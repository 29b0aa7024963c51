use densecap::protosim::{
    run_classical_dense, run_quantum_dense, Decoder, MeasurementBasis, PauliAxis, ProtocolTrace,
};

use crate::error::CliError;
use crate::output::{emit, json, Csv};
use crate::states::{load_classical, load_ensemble, load_joint};
use crate::{DecoderArg, Format, Mode, SimulateArgs};

fn trace(args: &SimulateArgs) -> Result<ProtocolTrace, CliError> {
    match args.mode {
        Mode::Quantum => {
            if args.no_key {
                return Err(CliError::Parse(
                    "--no-key applies to the classical protocol".into(),
                ));
            }
            let s = load_joint(args.state.as_deref().unwrap_or("bell"))?;
            let d = s.dims().0;
            let (_, e) = load_ensemble(&args.ensemble, d)?;
            let decoder = match args.decoder {
                DecoderArg::Bell => Decoder::Bell,
                DecoderArg::X => Decoder::SingleParticle(MeasurementBasis::pauli(PauliAxis::X)),
                DecoderArg::Y => Decoder::SingleParticle(MeasurementBasis::pauli(PauliAxis::Y)),
                DecoderArg::Z => Decoder::SingleParticle(MeasurementBasis::computational(d)),
            };
            Ok(run_quantum_dense(&s, &e, &decoder, args.trials, args.seed)?)
        }
        Mode::Classical => {
            let s = load_classical(args.state.as_deref().unwrap_or("correlated"))?;
            Ok(run_classical_dense(
                &s,
                !args.no_key,
                args.trials,
                args.seed,
            )?)
        }
    }
}

pub fn run(args: &SimulateArgs) -> Result<bool, CliError> {
    if args.trials < 1 {
        return Err(CliError::Parse("--trials must be at least 1".into()));
    }
    let trace = trace(args)?;
    let text = match args.output.format {
        Format::Json => json(&trace),
        Format::Csv => {
            let mut csv = Csv::new(vec!["message", "outcome", "count"]);
            for (a, row) in trace.counts.counts.iter().enumerate() {
                for (b, k) in row.iter().enumerate() {
                    csv.push(vec![a.to_string(), b.to_string(), k.to_string()]);
                }
            }
            csv.render()
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(true)
}
