use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use coco_cli::config::{self, ConfigError, ExperimentKind};
use coco_cli::{emit_svg, run_experiment, RunError};

/// Runs one denoising experiment and writes `<kind>.csv` (and optionally
/// `<kind>.svg`) to the output directory.
#[derive(Debug, Parser)]
#[command(name = "coco", version)]
struct Args {
    kind: ExperimentKind,
    /// TOML file with the experiment parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory [default: current directory].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot.
    #[arg(long)]
    svg: bool,
    /// `key=value` overrides applied on top of the config file.
    overrides: Vec<String>,
}

fn threads() -> Result<(), RunError> {
    let Ok(v) = std::env::var("COCO_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        RunError::Config(ConfigError::Field {
            field: "COCO_THREADS".into(),
            reason: format!("must be a positive integer, got `{v}`"),
        })
    })?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| RunError::Output(e.to_string()))
}

fn run(args: Args) -> Result<Vec<PathBuf>, RunError> {
    threads()?;
    let mut overrides = args.overrides;
    if let Some(seed) = args.seed {
        overrides.push(format!("seed={seed}"));
    }
    let (cfg, inv) = config::load(args.kind, args.config.as_deref(), &overrides)?;
    let out_dir = args.out.or(inv.out).unwrap_or_else(|| PathBuf::from("."));
    let output = run_experiment(&cfg)?;

    let io = |e: std::io::Error, p: &PathBuf| RunError::Output(format!("{}: {e}", p.display()));
    std::fs::create_dir_all(&out_dir).map_err(|e| io(e, &out_dir))?;
    let stem = cfg.kind().name();
    let csv_path = out_dir.join(format!("{stem}.csv"));
    std::fs::write(&csv_path, output.table.to_csv(&cfg)).map_err(|e| io(e, &csv_path))?;
    let mut written = vec![csv_path];
    if args.svg || inv.svg {
        let svg = emit_svg(&output.table, &output.plot).map_err(|e| RunError::Output(e.to_string()))?;
        let svg_path = out_dir.join(format!("{stem}.svg"));
        std::fs::write(&svg_path, svg).map_err(|e| io(e, &svg_path))?;
        written.push(svg_path);
    }
    Ok(written)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("coco: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
