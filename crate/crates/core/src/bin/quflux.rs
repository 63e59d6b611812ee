use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quflux::cli::{self, exit, VerifyOptions};

#[derive(Parser)]
#[command(name = "quflux", version, about = "Mean-value dynamics of finite fermion/boson models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one configuration and write its mean values as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output.csv`; without either, CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run all three strategies and report their differences.
    Compare {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check the engine against the closed-form catalog.
    Verify {
        /// Only models whose name starts with this.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn main() -> ExitCode {
    let code = match Cli::parse().command {
        Command::Simulate { config, out } => cli::load_config(&config)
            .and_then(|cfg| cli::command_simulate(&cfg, out.as_deref(), io::stdout().lock()))
            .map(|_| exit::OK),
        Command::Compare { config } => cli::load_config(&config).and_then(|cfg| cli::compare(&cfg)).map(|r| {
            print!("{}", r.render());
            exit::OK
        }),
        Command::Verify { filter, inject_fault } => {
            let opts = VerifyOptions { filter, inject_fault, ..VerifyOptions::new() };
            cli::verify(&opts).map(|s| {
                print!("{}", s.render());
                s.exit_code()
            })
        }
    };
    match code {
        Ok(c) => ExitCode::from(c as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
