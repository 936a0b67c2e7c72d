use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use configeo_cli::config::SEED_ENV;
use configeo_cli::{run, ExperimentConfig, RawConfig, RunError};

/// Run a configuration-counting, energy, Fourier or dimension experiment.
///
/// Settings come from `--config`, then `--set section.key=value` and the
/// mirror flags below, which override the file.
#[derive(Parser, Debug)]
#[command(name = "configeo", version)]
struct Cli {
    /// gen, energy, count, scan, ft, curvature or dim.
    command: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// brute or pruned.
    #[arg(long)]
    algorithm: Option<String>,
    /// Include wall-clock time in count reports.
    #[arg(long)]
    record_timing: bool,
    /// Read points from a file (sets generator.kind = from_file).
    #[arg(long)]
    points: Option<PathBuf>,
    /// query.family
    #[arg(long)]
    family: Option<String>,
    /// query.k
    #[arg(long)]
    k: Option<usize>,
    /// query.t, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// query.delta
    #[arg(long)]
    delta: Option<f64>,
    /// scan.schedule, comma separated.
    #[arg(long)]
    schedule: Option<String>,
    /// ft.radii, comma separated.
    #[arg(long)]
    radii: Option<String>,
    /// Any config key, e.g. `--set generator.m=20`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    sets: Vec<String>,
}

fn build_raw(cli: &Cli) -> Result<RawConfig, RunError> {
    let mut raw = match &cli.config {
        Some(path) => RawConfig::read(path)?,
        None => RawConfig::default(),
    };
    for s in &cli.sets {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| RunError::Usage(format!("--set expects section.key=value, got `{s}`")))?;
        raw.set(k.trim(), v.trim());
    }
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            raw.set(k, &v);
        }
    };
    put("command", cli.command.clone());
    put("output_dir", cli.out.as_ref().map(|p| p.display().to_string()));
    put("seed", cli.seed.map(|v| v.to_string()));
    put("threads", cli.threads.map(|v| v.to_string()));
    put("algorithm", cli.algorithm.clone());
    put("record_timing", cli.record_timing.then(|| "true".into()));
    if let Some(p) = &cli.points {
        put("generator.kind", Some("from_file".into()));
        put("generator.path", Some(p.display().to_string()));
    }
    put("query.family", cli.family.clone());
    put("query.k", cli.k.map(|v| v.to_string()));
    put("query.t", cli.t.clone());
    put("query.delta", cli.delta.map(|v| v.to_string()));
    put("scan.schedule", cli.schedule.clone());
    put("ft.radii", cli.radii.clone());
    Ok(raw)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_seed = std::env::var(SEED_ENV).ok();
    let result = build_raw(&cli)
        .and_then(|raw| Ok(ExperimentConfig::from_raw(raw, env_seed.as_deref())?))
        .and_then(|cfg| run(&cfg));
    match result {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            ExitCode::from(outcome.status.code() as u8)
        }
        Err(e) => {
            eprintln!("configeo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
