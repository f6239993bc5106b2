use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ceiling_cli::config::{parse_command_config, parse_run_config};
use ceiling_cli::error::{CliError, CliResult};
use ceiling_cli::record::RunRecord;

#[derive(Parser)]
#[command(name = "ceiling", version, about = "Semiclassical propagators for a linear potential under a reflecting ceiling")]
struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON parameters; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Path classes, reflection times and critical distances over a grid.
    Classify(RunArgs),
    /// Propagator values per branch and combined over a grid.
    Propagate(RunArgs),
    /// Gaussian packets evolved in both representations.
    PacketEvolve(RunArgs),
    /// Soft-ceiling trajectory families and their envelopes.
    CausticSweep(RunArgs),
    /// Finite-difference Schroedinger residuals and image-method falsifiers.
    ResidualCheck(RunArgs),
    /// Replay a tagged config, e.g. the `config` object of a run record.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-hash the outputs listed in a directory's run record.
    Verify {
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let (name, args) = match cli.command {
        Command::Classify(a) => ("classify", a),
        Command::Propagate(a) => ("propagate", a),
        Command::PacketEvolve(a) => ("packet-evolve", a),
        Command::CausticSweep(a) => ("caustic-sweep", a),
        Command::ResidualCheck(a) => ("residual-check", a),
        Command::Run { config, out } => {
            let text = read(&config)?;
            // accept either a bare tagged config or a whole run record
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
            let cfg = match value.get("config") {
                Some(inner) => parse_run_config(&inner.to_string())?,
                None => parse_run_config(&text)?,
            };
            return report(ceiling_cli::run(&cfg, &out, cli.threads)?, &out);
        }
        Command::Verify { out } => {
            RunRecord::read(&out)?.verify(&out)?;
            println!("verified {}", out.display());
            return Ok(());
        }
    };
    let text = args.config.as_deref().map(read).transpose()?;
    let cfg = parse_command_config(name, text.as_deref())?;
    report(ceiling_cli::run(&cfg, &args.out, cli.threads)?, &args.out)
}

fn report(record: RunRecord, out: &Path) -> CliResult<()> {
    for o in &record.outputs {
        println!("{}", out.join(&o.file).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
