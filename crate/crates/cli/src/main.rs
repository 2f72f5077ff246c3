use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rdmlab_cli::commands::{self, Coupling, FermionExample, HamiltonianFamily, StateFamily, Weight};
use rdmlab_cli::{CliError, RunReport};

#[derive(Parser)]
#[command(name = "rdmlab", version, about = "RDM determinacy checks for eigenstates of local Hamiltonians")]
struct Cli {
    /// Write the JSON report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Leave wall-clock timing out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Suppress the text summary on stdout.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// GHZ3 as a non-degenerate excited state of a 2-local Hamiltonian.
    Ghz3 {
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        c: Coupling,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1e-10)]
        rdm_tol: f64,
    },
    /// 3x3 Bacon-Shor code states with a 2-local splitting term.
    BaconShor {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        jx: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        jz: f64,
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        c: Coupling,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1e-10)]
        rdm_tol: f64,
    },
    /// Dicke states as unique ground states of 2-local parents.
    Dicke {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all")]
        i: Weight,
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        c: Coupling,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// GHZ on even n: eigenstate certificate and the (n-1)-RDM tightness check.
    GhzN {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        c: Coupling,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1e-10)]
        rdm_tol: f64,
    },
    /// Carry a qubit counterexample over to fermions.
    Fermion {
        #[arg(long, value_enum, default_value = "ghz3")]
        example: FermionExample,
        #[arg(long, default_value = "auto")]
        penalty: Coupling,
        /// Weight on |000> for the weighted example.
        #[arg(long, default_value_t = 0.2f64.sqrt())]
        alpha: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1e-10)]
        rdm_tol: f64,
    },
    /// Square a Hamiltonian around an eigenstate and certify the unique ground state.
    Square {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Search for a k-local Hermitian Hamiltonian with the state as non-degenerate eigenstate.
    ParentSearch {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the k-RDMs of two states.
    RdmCompare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1e-10)]
        rdm_tol: f64,
    },
    /// Check the weighted-GHZ diagonal identity under both diagonal conventions.
    WeightedGhz {
        #[arg(long, default_value_t = 0.2f64.sqrt())]
        alpha: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = std::f64::consts::PI, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 1e-10)]
        rdm_tol: f64,
    },
    /// Write a state file.
    State {
        #[arg(long, value_enum)]
        family: StateFamily,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a Hamiltonian file in the Pauli-sum text format.
    Hamiltonian {
        #[arg(long, value_enum)]
        family: HamiltonianFamily,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        c: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(command: Command) -> Result<RunReport, CliError> {
    match command {
        Command::Ghz3 { c, tol, rdm_tol } => commands::ghz3(c, tol, rdm_tol),
        Command::BaconShor { jx, jz, c, tol, rdm_tol } => commands::bacon_shor(jx, jz, c, tol, rdm_tol),
        Command::Dicke { n, i, c, tol } => commands::dicke_cmd(n, i, c, tol),
        Command::GhzN { n, c, tol, rdm_tol } => commands::ghz_n(n, c, tol, rdm_tol),
        Command::Fermion { example, penalty, alpha, trials, seed, tol, rdm_tol } => {
            commands::fermion(example, penalty, alpha, trials, seed, tol, rdm_tol)
        }
        Command::Square { hamiltonian, state, tol } => commands::square(&hamiltonian, &state, tol),
        Command::ParentSearch { state, k, trials, seed } => commands::parent_search(&state, k, trials, seed),
        Command::RdmCompare { a, b, k, rdm_tol } => commands::rdm_compare(&a, &b, k, rdm_tol),
        Command::WeightedGhz { alpha, a, b, c, theta, rdm_tol } => commands::weighted_ghz(alpha, a, b, c, theta, rdm_tol),
        Command::State { family, n, i, alpha, theta, out } => commands::write_state(family, n, i, alpha, theta, &out),
        Command::Hamiltonian { family, n, i, c, out } => commands::write_hamiltonian(family, n, i, c, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = match dispatch(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("rdmlab: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if !cli.no_timing {
        report.timing = Some(start.elapsed().as_secs_f64());
    }
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("rdmlab: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if !cli.quiet {
        print!("{}", report.summary());
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
