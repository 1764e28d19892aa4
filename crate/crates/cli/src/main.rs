use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ganav_cli::{cmd_batch, cmd_gen, cmd_render, cmd_run, load_settings, Ablation, BatchOptions, CliError, RunOptions};
use ganav_core::sim::ScenarioKind;

#[derive(Parser)]
#[command(name = "ganav", version, about = "Goal-line topological planner for crowd navigation")]
struct Cli {
    /// Planner settings file (TOML); defaults apply when omitted.
    #[arg(long, global = true)]
    settings: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file.
    Run {
        file: PathBuf,
        /// Exit with 1 unless the goal is reached.
        #[arg(long)]
        strict: bool,
        /// Write an SVG frame every N planning cycles.
        #[arg(long)]
        render_every: Option<usize>,
        #[arg(long, default_value = "ganav-out")]
        out: PathBuf,
        /// Keep wall-clock timings in the records.
        #[arg(long)]
        timing: bool,
    },
    /// Run a batch of generated scenarios and write a report.
    Batch {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Disable a mechanism: goal-lines, convexify or orientation-limit.
        #[arg(long)]
        ablate: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Print a human-readable summary table.
        #[arg(long)]
        table: bool,
        #[arg(long)]
        timing: bool,
        /// Static scenes dense with T- and X-shapes.
        #[arg(long)]
        dense: bool,
        /// Report file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-cycle records of every episode (JSON lines).
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Render the scene at one planning cycle as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        cycle: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a scenario file.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        dense: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_kind(s: &str) -> Result<ScenarioKind, CliError> {
    s.parse().map_err(CliError::Input)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let settings = load_settings(cli.settings.as_deref())?;
    match cli.command {
        Command::Run { file, strict, render_every, out, timing } => {
            let (r, code) = cmd_run(&file, &RunOptions { strict, render_every, out, timing, settings })?;
            println!(
                "{}: {:?} in {:.2} s, {} cycles, {} frozen",
                file.display(),
                r.outcome,
                r.time_to_goal,
                r.cycles.len(),
                r.freezing_count
            );
            Ok(code)
        }
        Command::Batch { kind, n, seed, ablate, jobs, table, timing, dense, out, records } => {
            let kind = parse_kind(&kind)?;
            let ablate = ablate.iter().map(|a| a.parse::<Ablation>().map_err(CliError::Input)).collect::<Result<_, _>>()?;
            let (report, _) = cmd_batch(&BatchOptions { kind, n, seed, ablate, jobs, timing, dense, records, settings })?;
            match out {
                Some(path) => std::fs::write(&path, report.to_json()).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?,
                None if !table => print!("{}", report.to_json()),
                None => {}
            }
            if table {
                print!("{}", report.table());
            }
            Ok(0)
        }
        Command::Render { file, cycle, out } => {
            let svg = cmd_render(&file, cycle, &settings)?;
            std::fs::write(&out, svg).map_err(|e| CliError::Failure(format!("{}: {e}", out.display())))?;
            Ok(0)
        }
        Command::Gen { kind, seed, dense, out } => {
            cmd_gen(parse_kind(&kind)?, seed, dense, &out)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GA_NAV_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
