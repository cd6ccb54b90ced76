use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use satake_core::job::{self, CapsConfig, Command, OutputFormat};
use satake_core::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Check,
    Kostant,
    GroupCohomology,
    LeftAdjoint,
    Satake,
    Pseries,
    Parameters,
    OracleVerify,
    ReportAll,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Check => Command::Check,
            Cmd::Kostant => Command::Kostant,
            Cmd::GroupCohomology => Command::GroupCohomology,
            Cmd::LeftAdjoint => Command::LeftAdjoint,
            Cmd::Satake => Command::Satake,
            Cmd::Pseries => Command::Pseries,
            Cmd::Parameters => Command::Parameters,
            Cmd::OracleVerify => Command::OracleVerify,
            Cmd::ReportAll => Command::ReportAll,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Weyl-group, cohomology and central-character computations for split
/// reductive groups over finite fields.
#[derive(Debug, Parser)]
#[command(name = "satake-lab", version)]
struct Cli {
    command: Cmd,
    /// JSON job file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    config: String,
    /// Overrides `output_format` from the config.
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    cap_weyl: Option<usize>,
    #[arg(long)]
    cap_underline: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_config(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Config(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{path}: {e}")))
    }
}

fn main_inner(cli: Cli) -> Result<i32, Error> {
    let mut config = job::parse_config(&read_config(&cli.config)?)?;
    config.command = Some(cli.command.into());
    if cli.cap_weyl.is_some() || cli.cap_underline.is_some() {
        let caps = config.caps.get_or_insert_with(CapsConfig::default);
        if let Some(n) = cli.cap_weyl {
            caps.weyl = Some(n);
        }
        if let Some(n) = cli.cap_underline {
            caps.underline = Some(n);
        }
    }
    let format = match cli.format {
        Some(Format::Json) => OutputFormat::Json,
        Some(Format::Text) => OutputFormat::Text,
        None => config.output_format.unwrap_or_default(),
    };
    let job = config.validate()?;
    let threads = job::threads_from_env()?;
    let envelope = job::run_with_threads(&job, threads)?;
    let mut rendered = match format {
        OutputFormat::Json => envelope.to_json(true),
        OutputFormat::Text => envelope.to_text(),
    };
    if !rendered.ends_with('\n') {
        rendered.push('\n');
    }
    match &cli.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        None => io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| Error::Config(format!("stdout: {e}")))?,
    }
    Ok(envelope.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("satake-lab: {e}");
            ExitCode::from(1)
        }
    }
}
