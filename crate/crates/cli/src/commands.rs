use crate::input;
use crate::{CliError, InputFormat, ObjectiveArg, OracleArgs, ProfileArgs, RunArgs, ValidateArgs};
use dynmatch_client::Client;
use dynmatch_core::bench::{
    default_taus, geometric_mean, parse_summaries_csv, profile_svg, profile_to_csv, summaries_to_csv,
    table_from_summaries, Algorithm, MatcherConfig, Objective, ProfileMode, RunOptions, SummaryRow,
};
use dynmatch_core::protocol::{ExperimentRequest, ProfileRequest, ProfileResponse};
use dynmatch_core::workload::{undo_suffix, validate_sequence};
use std::path::Path;

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))
}

fn config(a: &RunArgs, algo: &str) -> Result<MatcherConfig, CliError> {
    let algorithm: Algorithm = algo.parse().map_err(|e: dynmatch_core::bench::ConfigError| CliError::Input(e.to_string()))?;
    let mut c = MatcherConfig::new(algorithm).with_seed(a.seed).with_repetitions(a.reps);
    c.epsilon = a.epsilon;
    c.settling = a.settling;
    c.safe = match (a.safe, a.unsafe_) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    };
    c.lazy = a.lazy;
    c.bgs_c = a.bgs_c;
    c.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(c)
}

pub async fn run(client: &Client, a: RunArgs) -> Result<(), CliError> {
    let configs = a.algos.iter().map(|s| config(&a, s)).collect::<Result<Vec<_>, _>>()?;
    let options = RunOptions {
        verify_every: a.verify_every,
        keep_records: false,
        ..Default::default()
    };
    let mut rows = Vec::new();
    println!("{:<24} {:<36} {:>8} {:>12} {:>10}", "instance", "algorithm", "ops", "mean ms", "quality");
    for path in &a.files {
        let name = input::instance_name(path);
        let mut seq = input::sequence(path, a.input, a.random_order.then_some(a.seed))?;
        if let Some(p) = a.undo_percent {
            seq = undo_suffix(&seq, p).map_err(|e| CliError::Input(e.to_string()))?;
        }
        for cfg in &configs {
            let req = ExperimentRequest {
                sequence: seq.clone(),
                config: cfg.clone(),
                options: options.clone(),
            };
            let resp = client.run_experiment(&req).await.map_err(|e| {
                let e = CliError::from(e);
                match e {
                    CliError::Audit(m) => CliError::Audit(format!("{name}, {}: {m}", cfg.label())),
                    other => other,
                }
            })?;
            let before = rows.len();
            rows.extend(resp.results.iter().map(|r| SummaryRow::new(&name, &r.summary)));
            let mine = &rows[before..];
            let ms = mine.iter().map(|r| r.total_ns as f64).sum::<f64>() / mine.len() as f64 / 1e6;
            let q: Option<Vec<f64>> = mine.iter().map(|r| r.quality.filter(|&q| q > 0.0)).collect();
            let quality = q
                .and_then(|q| geometric_mean(&q).ok())
                .map_or_else(|| "-".to_string(), |q| format!("{q:.4}"));
            println!("{name:<24} {:<36} {:>8} {ms:>12.3} {quality:>10}", cfg.label(), seq.len());
        }
    }
    if let Some(p) = &a.out_csv {
        write(p, &summaries_to_csv(&rows))?;
    }
    if let Some(p) = &a.out_svg {
        let profile = request_profile(client, &rows, ObjectiveArg::Quality, &default_taus(0.5, 51)).await?;
        write(p, &profile_svg("quality profile", &profile.algorithms, &profile.rows))?;
    }
    Ok(())
}

async fn request_profile(
    client: &Client,
    rows: &[SummaryRow],
    objective: ObjectiveArg,
    taus: &[f64],
) -> Result<ProfileResponse, CliError> {
    let (objective, mode) = match objective {
        ObjectiveArg::Quality => (Objective::Quality, ProfileMode::Maximize),
        ObjectiveArg::Time => (Objective::Time, ProfileMode::MinimizeTime),
    };
    let table = table_from_summaries(rows, objective).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(client
        .profile(&ProfileRequest {
            table,
            mode,
            taus: taus.to_vec(),
        })
        .await?)
}

pub async fn profile(client: &Client, a: ProfileArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for path in &a.csvs {
        let text = input::read(path)?;
        rows.extend(parse_summaries_csv(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?);
    }
    if !(a.tau_min > 0.0 && a.tau_min <= 1.0) || a.tau_steps == 0 {
        return Err(CliError::Input("--tau-min must lie in (0, 1] and --tau-steps be positive".into()));
    }
    let p = request_profile(client, &rows, a.objective, &default_taus(a.tau_min, a.tau_steps)).await?;
    let csv = profile_to_csv(&p.algorithms, &p.rows);
    match &a.out_csv {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &a.out_svg {
        let title = match a.objective {
            ObjectiveArg::Quality => "quality profile",
            ObjectiveArg::Time => "time profile",
        };
        write(path, &profile_svg(title, &p.algorithms, &p.rows))?;
    }
    Ok(())
}

pub async fn validate(client: &Client, a: ValidateArgs) -> Result<(), CliError> {
    let seq = input::sequence(&a.file, InputFormat::Seq, None)?;
    let r = client.validate(seq).await?;
    println!(
        "ops {}  duplicate inserts {}  phantom deletes {}  out of range {}  self-loops {}",
        r.ops, r.duplicate_inserts, r.phantom_deletes, r.out_of_range, r.self_loops
    );
    match r.first_violation {
        None => {
            println!("valid");
            Ok(())
        }
        Some(i) => Err(CliError::Input(format!("invalid sequence, first violation at operation {i}"))),
    }
}

pub async fn oracle(client: &Client, a: OracleArgs) -> Result<(), CliError> {
    let graph = match a.input {
        InputFormat::Metis => input::graph(&a.file)?,
        format => {
            let seq = input::sequence(&a.file, format, None)?;
            if let Some(i) = validate_sequence(&seq).first_violation {
                return Err(CliError::Input(format!("invalid sequence, first violation at operation {i}")));
            }
            (&seq.final_graph()).into()
        }
    };
    let r = client.oracle(graph).await?;
    println!("n {}  m {}  maximum matching {}", r.n, r.m, r.max_matching);
    Ok(())
}
