use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use noonsim::runner::{dump_source, list_experiments, OutputFormat, RunConfig};
use noonsim::source::SourceSpec;
use noonsim::Error;

// Writes to stdout, ignoring a closed pipe (`noonsim list | head`).
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "noonsim", version, about = "Run heralded NOON-state and polarization-correlation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write its artifacts.
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long, env = "NOONSIM_OUT_DIR", default_value = "out")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// List built-in experiments.
    List,
    /// Print the state described by a source config as JSON.
    DumpState { source: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn read_config(path: &Path) -> Result<String, Failure> {
    if !path.is_file() {
        return Err(Failure::Config(format!("config not found: {}", path.display())));
    }
    fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn run(config: &Path, out_dir: &Path, format: Format) -> Result<(), Failure> {
    let text = read_config(config)?;
    let cfg = RunConfig::from_json_str(&text)?;
    let artifacts = cfg.run()?;
    let stem = config
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(&cfg.experiment);
    let written = artifacts.write(out_dir, stem, format.into())?;
    out!("{}: {}\n", artifacts.experiment, artifacts.anchor);
    for p in written {
        out!("wrote {}\n", p.display());
    }
    out!("{}", artifacts.summary_string());
    Ok(())
}

fn dump(path: &Path) -> Result<(), Failure> {
    let text = read_config(path)?;
    let spec = SourceSpec::from_json_str(&text)?;
    let v = dump_source(&spec)?;
    out!("{}\n", serde_json::to_string_pretty(&v).expect("json value"));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out_dir,
            format,
        } => run(&config, &out_dir, format),
        Command::List => {
            for (id, desc, anchor) in list_experiments() {
                out!("{id:<11} {desc} [{anchor}]\n");
            }
            Ok(())
        }
        Command::DumpState { source } => dump(&source),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
