use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use qmaps::channels::{fresh_environment_dilation, gates};
use qmaps::linalg::ComplexMatrix;
use qmaps::maps::MapEnvelope;
use qmaps::tomography::{
    ncp_demo, operation_basis, reconstruct_process_tensor, PreparationProtocol,
};
use qmaps::{
    build_process_tensor, build_superchannel, channel_from_dilation, check_cp, check_hp, check_tp,
    kraus_rank, non_markovianity, random, standard_channel, stinespring_dilate, surprise,
    ControlOperation, Dilation, Distance, ProcessTensor, QuantumMap, RepresentationKind,
    StandardChannel, C64,
};

use crate::error::{CliError, CliResult};
use crate::io::{self, ProcessInput, Table};
use crate::{
    ChannelArgs, ChannelKind, Cli, Command, DilateArgs, DistanceArg, Preset, ProtocolArg, Repr,
};

struct Outcome {
    json: Value,
    table: Option<Table>,
}

impl Outcome {
    fn json(value: impl Serialize) -> CliResult<Self> {
        Ok(Outcome {
            json: serde_json::to_value(value)?,
            table: None,
        })
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    cli.check_tol()?;
    let outcome = match &cli.command {
        Command::Convert { input, to } => convert(&io::load_map(input)?, *to)?,
        Command::Check { input } => check(&io::load_map(input)?, cli.tol)?,
        Command::Dilate(args) => dilate(args, cli.seed)?,
        Command::Channel(args) => channel(args, cli.seed)?,
        Command::Superchannel {
            dilation,
            operation,
        } => {
            let op = operation.as_deref().map(io::load_operation).transpose()?;
            superchannel(&io::load_dilation(dilation)?, op, cli.tol)?
        }
        Command::ProcessTensor { dilation, k } => {
            let dilation = truncate_dilation(io::load_dilation(dilation)?, *k)?;
            Outcome::json(build_process_tensor(&dilation)?)?
        }
        Command::Tomography { dilation, k } => {
            let dilation = truncate_dilation(io::load_dilation(dilation)?, *k)?;
            let basis = operation_basis(dilation.d_s())?;
            Outcome::json(reconstruct_process_tensor(&dilation, &basis)?)?
        }
        Command::Nonmarkov { input, distance, k } => {
            nonmarkov(io::load_process(input)?, *distance, *k, cli.tol)?
        }
        Command::NcpDemo { mu, nu, protocol } => ncp(mu, nu, *protocol, cli.tol)?,
    };
    if let Some(path) = &cli.emit_table {
        let table = outcome
            .table
            .as_ref()
            .ok_or_else(|| CliError::Validation("this subcommand has no table output".into()))?;
        io::write_atomic(path, table.to_csv().as_bytes())?;
    }
    let mut text = serde_json::to_string_pretty(&outcome.json)?;
    text.push('\n');
    match &cli.output {
        Some(path) => io::write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn repr_kind(r: Repr) -> RepresentationKind {
    match r {
        Repr::Tomographic => RepresentationKind::Tomographic,
        Repr::Kraus => RepresentationKind::Kraus,
        Repr::Aform => RepresentationKind::AForm,
        Repr::Bform => RepresentationKind::BForm,
    }
}

fn encode_converted(source: &QuantumMap, target: Repr) -> CliResult<Value> {
    let converted = source.convert(repr_kind(target), None)?;
    let residual = converted
        .to_bform()
        .matrix()
        .max_abs_diff(source.to_bform().matrix());
    let mut env = MapEnvelope::from(&converted);
    env.meta = Some(json!({ "converted_from": source.kind().as_str(), "residual": residual }));
    Ok(serde_json::to_value(env)?)
}

fn convert(map: &QuantumMap, to: Repr) -> CliResult<Outcome> {
    Ok(Outcome {
        json: encode_converted(map, to)?,
        table: None,
    })
}

fn check(map: &QuantumMap, tol: f64) -> CliResult<Outcome> {
    let tp = check_tp(map);
    let hp = check_hp(map);
    let cp = check_cp(map);
    // The Kraus rank is defined only for completely positive maps.
    let rank = kraus_rank(map).ok();
    let (tp_ok, hp_ok, cp_ok) = (
        tp.residual <= tol,
        hp.residual <= tol,
        cp.min_eigenvalue >= -tol,
    );
    let mut table = Table::new(vec![
        "d_in",
        "d_out",
        "repr",
        "tp",
        "hp",
        "cp",
        "kraus_rank",
        "min_eig",
    ]);
    table.push(vec![
        map.d_in().to_string(),
        map.d_out().to_string(),
        map.kind().to_string(),
        tp_ok.to_string(),
        hp_ok.to_string(),
        cp_ok.to_string(),
        rank.map(|r| r.to_string()).unwrap_or_default(),
        cp.min_eigenvalue.to_string(),
    ]);
    let json = json!({
        "d_in": map.d_in(),
        "d_out": map.d_out(),
        "repr": map.kind().as_str(),
        "tp": tp_ok,
        "hp": hp_ok,
        "cp": cp_ok,
        "kraus_rank": rank,
        "min_eig": cp.min_eigenvalue,
        "residuals": { "tp": tp.residual, "hp": hp.residual },
        "tolerance": tol,
    });
    Ok(Outcome {
        json,
        table: Some(table),
    })
}

fn ground(d: usize) -> ComplexMatrix {
    ComplexMatrix::projector(&ComplexMatrix::ket(d, 0))
}

fn dilate(args: &DilateArgs, seed: u64) -> CliResult<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if args.k == 0 || args.d_s == 0 || args.d_e == 0 {
        return Err(CliError::Validation(
            "-k, --d-s and --d-e must be at least 1".into(),
        ));
    }
    let dilation = match (&args.input, args.preset) {
        (Some(path), _) => stinespring_dilate(&io::load_map(path)?)?,
        (None, Some(Preset::Swap)) => {
            let d = args.d_s;
            Dilation::product(&ground(d), &ground(d), vec![gates::swap(d); args.k])?
        }
        (None, Some(Preset::Fresh)) => {
            let steps: Vec<ComplexMatrix> = (0..args.k)
                .map(|_| random::unitary(args.d_s * args.d_e, &mut rng))
                .collect();
            fresh_environment_dilation(&ground(args.d_s), &ground(args.d_e), &steps)?
        }
        (None, Some(Preset::Random)) => {
            random::dilation(args.d_s, args.d_e, args.k, !args.correlated, &mut rng)
        }
        (None, None) => {
            return Err(CliError::Validation(
                "dilate needs --input or --preset".into(),
            ))
        }
    };
    Outcome::json(dilation)
}

fn channel(args: &ChannelArgs, seed: u64) -> CliResult<Outcome> {
    let map = match (&args.dilation, args.kind) {
        (Some(path), _) => {
            let dilation = io::load_dilation(path)?;
            if dilation.k() != 1 || !dilation.is_product(qmaps::tol::VERDICT) {
                return Err(CliError::Validation(
                    "--dilation must be a one-step product dilation".into(),
                ));
            }
            channel_from_dilation(
                &dilation.initial_environment_state(),
                &dilation.unitaries()[0],
            )?
        }
        (None, Some(kind)) => {
            let family = match kind {
                ChannelKind::Identity => {
                    return Ok(Outcome {
                        json: encode_converted(&QuantumMap::identity(args.d), args.to)?,
                        table: None,
                    })
                }
                ChannelKind::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let map = random::cptp(args.d, args.d, &mut rng);
                    return Ok(Outcome {
                        json: encode_converted(&map, args.to)?,
                        table: None,
                    });
                }
                ChannelKind::Depolarizing => StandardChannel::Depolarizing {
                    d: args.d,
                    p: args.p,
                },
                ChannelKind::AmplitudeDamping => {
                    StandardChannel::AmplitudeDamping { gamma: args.gamma }
                }
                ChannelKind::BitFlip => StandardChannel::BitFlip { p: args.p },
                ChannelKind::PhaseFlip => StandardChannel::PhaseFlip { p: args.p },
                ChannelKind::Hadamard => StandardChannel::Unitary(gates::hadamard()),
            };
            standard_channel(&family)?
        }
        (None, None) => {
            return Err(CliError::Validation(
                "channel needs --kind or --dilation".into(),
            ))
        }
    };
    Ok(Outcome {
        json: encode_converted(&map, args.to)?,
        table: None,
    })
}

fn superchannel(dilation: &Dilation, op: Option<ControlOperation>, tol: f64) -> CliResult<Outcome> {
    let sc = build_superchannel(dilation)?;
    let min = sc.min_eigenvalue();
    let mut json = json!({
        "process_tensor": sc.process_tensor(),
        "min_eig": min,
        "cp": min >= -tol,
    });
    if let Some(op) = op {
        let raw = qmaps::apply_superchannel(&sc, &op)?;
        let p = raw.trace().re;
        let output = if p > qmaps::tol::SUPPORT {
            raw.scale_real(1.0 / p)
        } else {
            raw
        };
        json["output"] = serde_json::to_value(output)?;
        json["success_probability"] = json!(p);
    }
    json["tolerance"] = json!(tol);
    Ok(Outcome { json, table: None })
}

fn truncate_dilation(dilation: Dilation, k: Option<usize>) -> CliResult<Dilation> {
    match k {
        None => Ok(dilation),
        Some(k) if k == 0 || k > dilation.k() => Err(CliError::Validation(format!(
            "-k must lie in 1..={}, got {k}",
            dilation.k()
        ))),
        Some(k) => Ok(dilation.truncated(k)?),
    }
}

/// Process tensors for steps `1..=k`, shortest first.
fn process_ladder(input: ProcessInput, k: Option<usize>) -> CliResult<Vec<ProcessTensor>> {
    let full = match input {
        ProcessInput::Dilation(d) => build_process_tensor(&truncate_dilation(d, k)?)?,
        ProcessInput::Tensor(pt) => {
            let mut pt = pt;
            match k {
                Some(k) if k == 0 || k > pt.k() => {
                    return Err(CliError::Validation(format!(
                        "-k must lie in 1..={}, got {k}",
                        pt.k()
                    )))
                }
                Some(k) => {
                    while pt.k() > k {
                        pt = pt.truncated()?;
                    }
                }
                None => {}
            }
            pt
        }
    };
    let mut ladder = vec![full];
    while ladder.last().expect("non-empty").k() > 1 {
        let next = ladder.last().expect("non-empty").truncated()?;
        ladder.push(next);
    }
    ladder.reverse();
    Ok(ladder)
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn nonmarkov(
    input: ProcessInput,
    distance: DistanceArg,
    k: Option<usize>,
    tol: f64,
) -> CliResult<Outcome> {
    let distance = match distance {
        DistanceArg::Trace => Distance::Trace,
        DistanceArg::RelativeEntropy => Distance::RelativeEntropy,
    };
    let ladder = process_ladder(input, k)?;
    let mut table = Table::new(vec!["k", "distance", "N", "surprise_n10"]);
    let mut sweep = Vec::with_capacity(ladder.len());
    for pt in &ladder {
        let n = non_markovianity(pt, distance)?;
        let s10 = surprise(10, n)?;
        table.push(vec![
            pt.k().to_string(),
            distance.as_str().to_string(),
            n.to_string(),
            s10.to_string(),
        ]);
        sweep.push(json!({ "k": pt.k(), "non_markovianity": finite(n), "surprise_n10": s10 }));
    }
    let pt = ladder.last().expect("non-empty");
    let n = non_markovianity(pt, distance)?;
    let trace_n = non_markovianity(pt, Distance::Trace)?;
    let json = json!({
        "k": pt.k(),
        "d_s": pt.d_s(),
        "distance": distance.as_str(),
        "normalization": "unit_trace",
        "non_markovianity": finite(n),
        "support_failure": n.is_infinite(),
        "is_markov": trace_n <= tol,
        "surprise": {
            "n1": surprise(1, n)?,
            "n10": surprise(10, n)?,
            "n100": surprise(100, n)?,
        },
        "sweep": sweep,
        "tolerance": tol,
    });
    Ok(Outcome {
        json,
        table: Some(table),
    })
}

fn parse_amplitude(name: &str, text: &str) -> CliResult<C64> {
    text.trim().parse::<C64>().map_err(|_| {
        CliError::Validation(format!(
            "--{name} must be a complex number such as 1 or 0.5+0.5i, got {text:?}"
        ))
    })
}

fn ncp(mu: &str, nu: &str, protocol: ProtocolArg, tol: f64) -> CliResult<Outcome> {
    let protocol = match protocol {
        ProtocolArg::Projection => PreparationProtocol::Projection,
        ProtocolArg::ProjectRotate => PreparationProtocol::ProjectRotate,
    };
    let report = ncp_demo(
        parse_amplitude("mu", mu)?,
        parse_amplitude("nu", nu)?,
        protocol,
    )?;
    let mut json = serde_json::to_value(&report)?;
    let v = &report.verdicts;
    json["verdicts"]["cp"] = json!(v.choi_min_eig >= -tol);
    json["verdicts"]["prediction_positive"] = json!(v.min_eig >= -tol);
    json["verdicts"]["superchannel_cp"] = json!(report.superchannel.choi_min_eigenvalue >= -tol);
    json["verdicts"]["tolerance"] = json!(tol);
    let mut table = Table::new(vec![
        "prepared",
        "success_probability",
        "out_00",
        "out_01_re",
        "out_01_im",
        "out_11",
    ]);
    for rec in &report.records {
        let out = rec.normalized_output()?;
        table.push(vec![
            rec.prepared.clone(),
            rec.success_probability.to_string(),
            out[(0, 0)].re.to_string(),
            out[(0, 1)].re.to_string(),
            out[(0, 1)].im.to_string(),
            out[(1, 1)].re.to_string(),
        ]);
    }
    Ok(Outcome {
        json,
        table: Some(table),
    })
}
