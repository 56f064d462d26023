//! `oscnet` — run oscillator-network entanglement scenarios from config files.
//!
//! ```text
//! oscnet run <config> [--set key=value]... [--out dir] [--threads k] [--formats csv,svg]
//! oscnet list
//! ```
//!
//! Exit codes: 0 success, 1 output could not be written, 2 invalid
//! configuration, 3 numerical failure.

mod config;
mod output;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toml::Value;

use config::{CliError, CliResult, Source};
use output::Format;
use scenarios::CATALOG;

#[derive(Parser)]
#[command(name = "oscnet", version, about = "Entanglement dynamics in harmonic oscillator networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file (or a previous run's sidecar).
    Run {
        config: PathBuf,
        /// Override a config value: `section.key=value`, or `key=value` when unambiguous.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Output directory (overrides `output.dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Comma-separated output formats: csv, svg (overrides `output.formats`).
        #[arg(long, value_delimiter = ',')]
        formats: Option<Vec<String>>,
    },
    /// List the available scenarios and their keys with defaults.
    List,
}

fn run(config: PathBuf, set: Vec<String>, out: Option<PathBuf>, threads: Option<usize>, formats: Option<Vec<String>>) -> CliResult<()> {
    let text = std::fs::read_to_string(&config)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", config.display())))?;
    let mut source = Source::parse(&text, &set)?;
    if let Some(dir) = out {
        source.push_override("output.dir", Value::String(dir.to_string_lossy().into_owned()));
    }
    if let Some(f) = formats {
        source.push_override("output.formats", Value::Array(f.into_iter().map(Value::String).collect()));
    }
    let mut reader = source.reader();
    let name = reader.string("scenario", "name", "")?;
    if name.is_empty() {
        return Err(CliError::Validation("missing key 'scenario.name'".into()));
    }
    let scenario = scenarios::find(&name)?;
    let plan = (scenario.resolve)(&mut reader)?;
    let dir = PathBuf::from(reader.string("output", "dir", "out")?);
    let formats = reader
        .string_list("output", "formats", &["csv"])?
        .iter()
        .map(|f| f.parse::<Format>().map_err(|e| CliError::Validation(format!("key 'output.formats': {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    let resolved = reader.finish()?;

    if let Some(k) = threads {
        if k == 0 {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Validation(format!("cannot configure {k} threads: {e}")))?;
    }
    let result = plan()?;
    let files = output::write_all(&dir, &result, &resolved, &formats)?;
    for f in &files {
        println!("wrote {}", f.display());
    }
    for (k, v) in &result.derived {
        println!("{k} = {}", oscnet::io::format_number(*v));
    }
    Ok(())
}

fn list() {
    use std::fmt::Write as _;
    use std::io::Write as _;
    let mut text = String::new();
    for s in CATALOG {
        let _ = writeln!(text, "{}", s.name);
        let _ = writeln!(text, "    reproduces: {}", s.reproduces);
        let _ = writeln!(text, "    {}", s.summary);
        let mut reader = Source::parse("", &[]).expect("empty config parses").reader();
        if (s.resolve)(&mut reader).is_ok() {
            for key in reader.known() {
                let (section, k) = key.split_once('.').expect("keys are section.key");
                let _ = match reader.resolved().get(section).and_then(|t| t.get(k)) {
                    Some(v) => writeln!(text, "    {key} = {v}"),
                    None => writeln!(text, "    {key} (optional, unset)"),
                };
            }
        }
    }
    // A closed pipe (e.g. `oscnet list | head`) is not an error.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            list();
            ExitCode::SUCCESS
        }
        Command::Run { config, set, out, threads, formats } => match run(config, set, out, threads, formats) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code())
            }
        },
    }
}
