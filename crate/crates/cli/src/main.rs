use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use proxres::{run, CliError, Command, RunConfig};

/// Tunneling proximity resonances: single-disk modes, double-well doublets
/// and effective-Hamiltonian networks.
///
/// Any config value can be overridden with `--section.key=value`.
#[derive(Parser, Debug)]
#[command(name = "proxres", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// INI config file
    #[arg(long)]
    config: PathBuf,

    /// Output directory (overrides PROXRES_OUT and [output] directory)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Resonance frequencies of a single disk between plates
    DiskModes {
        #[command(flatten)]
        common: Common,
        /// TM, TE or HEM
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
    },
    /// Double-well doublet against barrier width
    DoubletSweep {
        #[command(flatten)]
        common: Common,
    },
    /// Sharp-mode Q of the disk triangle against the shift of one disk
    ThreeDisk {
        #[command(flatten)]
        common: Common,
    },
    /// Two-site closed form checked against the eigensolver
    TwoLevel {
        #[command(flatten)]
        common: Common,
    },
}

type Override = (String, String, String);

/// Pulls `--section.key=value` and `--section.key value` out of argv.
fn split_overrides(args: Vec<String>) -> Result<(Vec<String>, Vec<Override>), CliError> {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let Some(body) = arg.strip_prefix("--") else {
            rest.push(arg);
            continue;
        };
        let (name, inline) = match body.split_once('=') {
            Some((n, v)) => (n, Some(v.to_string())),
            None => (body, None),
        };
        let Some((section, key)) = name.split_once('.') else {
            rest.push(arg);
            continue;
        };
        let value = match inline {
            Some(v) => v,
            None => iter
                .next()
                .ok_or_else(|| CliError::Config(format!("override --{name} has no value")))?,
        };
        overrides.push((section.to_string(), key.to_string(), value.trim().to_string()));
    }
    Ok((rest, overrides))
}

fn load(common: &Common, mut overrides: Vec<Override>) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(&common.config).map_err(|source| CliError::Io {
        path: common.config.display().to_string(),
        source,
    })?;
    let out = common
        .out
        .clone()
        .or_else(|| std::env::var_os("PROXRES_OUT").filter(|v| !v.is_empty()).map(PathBuf::from));
    if let Some(dir) = out {
        overrides.push(("output".into(), "directory".into(), dir.display().to_string()));
    }
    RunConfig::from_ini_text(&text, &overrides)
}

fn execute(cli: Cli, mut overrides: Vec<Override>) -> Result<u8, CliError> {
    let (command, common) = match cli.command {
        Sub::DiskModes {
            common,
            family,
            m,
            n_max,
            p,
        } => {
            let flags = [
                ("family", family),
                ("m", m.map(|v| v.to_string())),
                ("n_max", n_max.map(|v| v.to_string())),
                ("p", p.map(|v| v.to_string())),
            ];
            for (key, value) in flags {
                if let Some(v) = value {
                    overrides.push(("disk_modes".into(), key.into(), v));
                }
            }
            (Command::DiskModes, common)
        }
        Sub::DoubletSweep { common } => (Command::DoubletSweep, common),
        Sub::ThreeDisk { common } => (Command::ThreeDisk, common),
        Sub::TwoLevel { common } => (Command::TwoLevel, common),
    };
    let config = load(&common, overrides)?;
    let report = run(command, &config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let code = report.exit_code();
    if code != 0 {
        eprintln!(
            "error: only {} of {} points converged",
            report.points_ok, report.points_total
        );
    }
    for f in &report.files {
        println!("{}", f.display());
    }
    Ok(code)
}

fn main() -> ExitCode {
    let (args, overrides) = match split_overrides(std::env::args().collect()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli, overrides) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
