mod config;
mod run;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use lrhsr::Boundary;
use serde_json::json;
use sha2::{Digest, Sha256};

use config::{figure_presets, preset, ExperimentConfig, Overrides};
use run::Artifact;

const MANIFEST_SCHEMA: u32 = 1;

/// Run long-range exciton transport experiments and write CSV data.
#[derive(Parser, Debug)]
#[command(name = "lrhsr", version)]
struct Cli {
    /// TOML experiment file
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named figure preset (see --list-presets)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "N", value_name = "N")]
    n: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_parser = parse_bc)]
    bc: Option<Boundary>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    #[arg(long)]
    trajectories: Option<usize>,
    /// Print the presets and exit
    #[arg(long)]
    list_presets: bool,
    /// Print the resolved configuration as TOML and exit
    #[arg(long)]
    print_config: bool,
}

fn parse_bc(s: &str) -> Result<Boundary, String> {
    s.parse().map_err(|e: lrhsr::Error| e.to_string())
}

enum Failure {
    Config(String),
    Solver(String),
}

fn load(cli: &Cli) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match (&cli.config, &cli.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::parse(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => preset(name).ok_or_else(|| {
            let names: Vec<_> = figure_presets().into_iter().map(|(n, _, _)| n).collect();
            Failure::Config(format!("unknown preset `{name}`; available: {}", names.join(", ")))
        })?,
        (None, None) => return Err(Failure::Config("one of --config or --preset is required".into())),
    };
    cfg.apply(&Overrides {
        out: cli.out.clone(),
        seed: cli.seed,
        alpha: cli.alpha,
        gamma: cli.gamma,
        n: cli.n,
        dim: cli.dim,
        bc: cli.bc,
        t_max: cli.t_max,
        trajectories: cli.trajectories,
    });
    cfg.validate().map_err(|e| Failure::Config(e.0))?;
    Ok(cfg)
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_outputs(dir: &Path, cfg: &ExperimentConfig, artifacts: &[Artifact]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for a in artifacts {
        fs::write(dir.join(&a.name), &a.bytes)?;
        entries.push(json!({
            "name": a.name,
            "schema": a.schema,
            "sha256": sha256_hex(&a.bytes),
            "bytes": a.bytes.len(),
        }));
    }
    let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let manifest = json!({
        "schema_version": MANIFEST_SCHEMA,
        "generator": concat!("lrhsr ", env!("CARGO_PKG_VERSION")),
        "created_unix": created,
        "kind": cfg.kind.to_string(),
        "config": cfg,
        "artifacts": entries,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), text + "\n")
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    if cli.list_presets {
        for (name, about, _) in figure_presets() {
            println!("{name:<6} {about}");
        }
        return Ok(());
    }
    let cfg = load(cli)?;
    if cli.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    let artifacts = run::run(&cfg).map_err(|e| Failure::Solver(e.to_string()))?;
    let dir = cfg.out_dir();
    write_outputs(&dir, &cfg, &artifacts)
        .map_err(|e| Failure::Solver(format!("writing {}: {e}", dir.display())))?;
    for a in &artifacts {
        println!("{}", dir.join(&a.name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
