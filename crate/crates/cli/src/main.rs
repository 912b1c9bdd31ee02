use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exoframe_cli::{
    cmd_check, cmd_chsh, cmd_figures, cmd_simulate, CliError, Format, ScenarioConfig,
};

/// Frame-dependent descriptions of open systems under Lorentz boosts.
///
/// Exit status: 0 when the checked claims hold, 1 when a claim check
/// fails, 2 on configuration or I/O errors.
#[derive(Parser)]
#[command(name = "exoframe", version)]
struct Cli {
    /// Scenario file (TOML). The built-in default scenario is used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory. `figures` defaults to `out`; other commands only write files when set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spacetime diagram and Liouville support dot plots (SVG + data).
    Figures,
    /// Checks that no map relates the two observers' descriptions.
    Check,
    /// CHSH values: singlet versus the classical angular-momentum model.
    Chsh,
    /// Samples one history and logs each observer's descriptions per slice.
    Simulate,
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut config = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let out_dir = cli.out.clone().or_else(|| config.output_dir.clone());
    let output = match cli.command {
        Command::Figures => {
            let dir = out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
            let output = cmd_figures(&config, cli.format, &dir)?;
            output.write_all(&dir)?;
            print!("{}", output.stdout);
            return Ok(output.status);
        }
        Command::Check => cmd_check(&config, cli.format)?,
        Command::Chsh => cmd_chsh(&config, cli.format)?,
        Command::Simulate => cmd_simulate(&config, cli.format)?,
    };
    for warning in &output.warnings {
        eprintln!("warning: {warning}");
    }
    if let Some(dir) = out_dir {
        output.write_all(&dir)?;
    }
    print!("{}", output.stdout);
    Ok(output.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
