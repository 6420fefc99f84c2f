use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kummerlat::commands::{cmd_census, cmd_kummer, cmd_obstruct, cmd_torus, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "kummerlat", version, about = "Exact lattice computations for generalized Kummer surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List ADE configurations with a given m-value and rank bound.
    Census {
        #[arg(long)]
        m: String,
        #[arg(long = "max-rank")]
        max_rank: usize,
        /// Keep only C whose double 2C survives the obstruction engine.
        #[arg(long)]
        doubling: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exceptional-curve lattice F and its primitive closure K.
    Kummer {
        #[arg(long)]
        group: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the nonexistence checks on a configuration such as "11A1+2A3".
    Obstruct {
        #[arg(long)]
        config: String,
        #[arg(long)]
        json: bool,
    },
    /// Quotient singularities of a finite group acting on a 4-torus.
    Torus {
        #[arg(long)]
        group: String,
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    if let Some(threads) = std::env::var("KUMMERLAT_THREADS").ok().and_then(|t| t.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let (result, json) = match cli.command {
        Command::Census { m, max_rank, doubling, json } => (cmd_census(&m, max_rank, doubling), json),
        Command::Kummer { group, json } => (cmd_kummer(&group), json),
        Command::Obstruct { config, json } => (cmd_obstruct(&config), json),
        Command::Torus { group, lattice, json } => (cmd_torus(&group, lattice.as_deref()), json),
    };
    let out = result.render(json);
    if result.exit_code == 0 || json {
        let _ = std::io::stdout().write_all(out.as_bytes());
    } else {
        let _ = std::io::stderr().write_all(out.as_bytes());
    }
    ExitCode::from(result.exit_code as u8)
}
