use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sturmian_lab::dispatch::{dispatch, render, DispatchError, RunManifest, VERBS};

/// Balanced-word testbeds: words, cyclic, measures, queue, heaps, jsr,
/// wigner, verify-all.
#[derive(Parser)]
#[command(name = "sturmian-lab", version, about)]
struct Cli {
    /// Replay a saved TOML manifest instead of reading a verb.
    #[arg(long, conflicts_with = "verb")]
    manifest: Option<PathBuf>,

    /// Write the manifest of this run to a TOML file.
    #[arg(long)]
    save_manifest: Option<PathBuf>,

    verb: Option<String>,

    /// `[action] [--key value]...`, plus `--seed`, `--output`, `--format`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    rest: Vec<String>,
}

fn run(cli: Cli) -> Result<bool, DispatchError> {
    let manifest = match (&cli.manifest, &cli.verb) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| DispatchError::Usage(format!("{}: {e}", path.display())))?;
            RunManifest::from_toml_str(&text)?
        }
        (None, Some(verb)) => RunManifest::from_args(verb, &cli.rest)?,
        (None, None) => {
            return Err(DispatchError::Usage(format!(
                "missing verb; one of {}",
                VERBS.join(", ")
            )));
        }
    };
    if let Some(path) = &cli.save_manifest {
        std::fs::write(path, manifest.to_toml_string())
            .map_err(|e| DispatchError::Internal(format!("{}: {e}", path.display())))?;
    }
    let report = dispatch(&manifest)?;
    let text = render(&manifest, &report)?;
    match &manifest.output_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| DispatchError::Internal(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    for line in &report.notes {
        eprintln!("{line}");
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
