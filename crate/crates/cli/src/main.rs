use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use preper_cli::commands::Command;
use preper_cli::input::read_json;
use preper_cli::output::{render, Format};
use preper_cli::CliError;
use serde::Deserialize;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(
    name = "preper",
    version,
    about = "Preperiodic points of rational maps and their families"
)]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand, Debug)]
enum Top {
    #[command(flatten)]
    Job(Command),
    /// Run an experiment config file.
    Run { config: PathBuf },
}

/// `{"command": "intersect", "args": {...}, "output": "...", "format": "csv", "threads": 2}`
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentConfig {
    command: String,
    args: Value,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    format: Option<Format>,
    #[serde(default)]
    threads: Option<usize>,
}

struct Job {
    command: Command,
    config: Value,
    output: Option<PathBuf>,
    format: Format,
    threads: Option<usize>,
}

fn plan(cli: Cli) -> Result<Job, CliError> {
    match cli.command {
        Top::Job(command) => Ok(Job {
            config: command.config(),
            command,
            output: cli.output,
            format: cli.format.unwrap_or_default(),
            threads: cli.threads,
        }),
        Top::Run { config } => {
            let cfg: ExperimentConfig = read_json(&config)?;
            let dir = config.parent().unwrap_or(Path::new("."));
            let mut command = Command::from_config(&cfg.command, cfg.args)?;
            // Provenance records the config as written, so it does not depend
            // on the working directory.
            let config = command.config();
            command.rebase(dir);
            // Command-line flags win over the config.
            Ok(Job {
                command,
                config,
                output: cli.output.or(cfg.output.map(|p| {
                    if p.is_relative() {
                        dir.join(p)
                    } else {
                        p
                    }
                })),
                format: cli.format.or(cfg.format).unwrap_or_default(),
                threads: cli.threads.or(cfg.threads),
            })
        }
    }
}

fn run(job: Job) -> Result<(), CliError> {
    if let Some(n) = job.threads {
        if n == 0 {
            return Err(CliError::Parse("threads: must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let report = job.command.execute()?;
    let text = render(job.command.name(), &job.config, &report, job.format)?;
    match job.output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Io(e.to_string()))
                }
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match plan(cli).and_then(run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
