use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::{Overrides, RunConfig};

/// Efficient unemployment (√(u·v)) from unemployment and vacancy data.
#[derive(Debug, Parser)]
#[command(name = "ustar", version)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble the canonical period,u,v dataset for an era from the raw sources.
    Build,
    /// Efficient rate, tightness, gap and episodes for a built dataset.
    Analyze,
    /// Beveridge-curve elasticities with BIC-selected structural breaks.
    Breaks,
    /// Compare √(u·v) with the general efficient-rate formula.
    Compare,
    /// Interest-rate change that closes the unemployment gap.
    Policy {
        /// Unemployment rate, as a fraction.
        #[arg(long)]
        u: f64,
        /// Vacancy rate, as a fraction.
        #[arg(long)]
        v: f64,
        /// Current policy rate, as a fraction.
        #[arg(long)]
        i: f64,
    },
    /// Unemployment path toward its steady state, closed form and RK4.
    Simulate {
        #[arg(long)]
        u0: f64,
        /// Monthly job-separation rate.
        #[arg(long)]
        lambda: f64,
        /// Monthly job-finding rate.
        #[arg(long)]
        f: f64,
        /// Months to simulate.
        #[arg(long, default_value_t = 60.0)]
        horizon: f64,
        /// Integration step in months, at most 0.25.
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Infeasible(String),
    Output(String),
}

impl CliError {
    pub fn output(e: impl std::fmt::Display) -> Self {
        CliError::Output(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Output(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Infeasible(m) | CliError::Output(m) => f.write_str(m),
        }
    }
}

impl From<ustar::Error> for CliError {
    fn from(e: ustar::Error) -> Self {
        if e.is_infeasible() {
            CliError::Infeasible(e.to_string())
        } else if e.is_data_error() {
            CliError::Data(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let cfg = RunConfig::load(&cli.overrides)?;
    match cli.command {
        Command::Build => commands::build(&cfg),
        Command::Analyze => commands::analyze_cmd(&cfg),
        Command::Breaks => commands::breaks(&cfg),
        Command::Compare => commands::compare(&cfg),
        Command::Policy { u, v, i } => commands::policy(&cfg, u, v, i),
        Command::Simulate { u0, lambda, f, horizon, dt } => {
            commands::simulate(&cfg, &commands::SimulateArgs { u0, lambda, f, horizon, dt })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
