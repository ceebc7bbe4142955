use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use matchgate_cli::commands::{self, DEFAULT_TOLERANCE};
use matchgate_cli::error::{EXIT_TOLERANCE, EXIT_VALIDATION};
use matchgate_cli::{CliResult, Report, RunConfig};

#[derive(Parser)]
#[command(
    name = "matchgate",
    version,
    about = "Simulate, compile and decompose matchgate circuits",
    allow_negative_numbers = true
)]
struct Cli {
    /// Agreement tolerance for oracle comparisons (must be positive).
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Seed for the randomized verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expectation of Z on one line after a circuit file.
    Simulate {
        circuit: PathBuf,
        /// Measured line (0-indexed); defaults to the file's "measure" or 0.
        #[arg(long)]
        line: Option<usize>,
        /// Also run the dense state-vector oracle and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Compile a logical circuit of one-qubit gates and CZs to matchgates.
    Compile {
        logical: PathBuf,
        /// Write the compiled circuit here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Logical input bits, e.g. 010; stored as the encoded input state.
        #[arg(long)]
        bits: Option<String>,
    },
    /// Decompose exp(iH) for a quadratic Hamiltonian into nearest-neighbour gates.
    Decompose {
        hamiltonian: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Compare with the dense matrix exponential.
        #[arg(long)]
        check: bool,
    },
    /// Simulate T† U T for a Clifford circuit T and a Gaussian circuit U.
    Intertwine {
        clifford: PathBuf,
        base: PathBuf,
        /// Pauli observable, e.g. "IZIII" or "-XZY".
        #[arg(long)]
        target: String,
        #[arg(long)]
        oracle: bool,
        /// Largest monomial degree to expand.
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Run the randomized verification suites.
    Verify {
        /// Suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn run(cli: &Cli) -> CliResult<Report> {
    let cfg = RunConfig::new(cli.tolerance, cli.seed, cli.json)?;
    match &cli.command {
        Command::Simulate { circuit, line, oracle } => commands::simulate(circuit, *line, *oracle, &cfg),
        Command::Compile { logical, output, bits } => commands::compile_cmd(logical, bits.as_deref(), output.as_ref()),
        Command::Decompose { hamiltonian, output, check } => {
            commands::decompose_cmd(hamiltonian, output.as_ref(), *check, &cfg)
        }
        Command::Intertwine { clifford, base, target, oracle, max_degree } => {
            commands::intertwine(clifford, base, target, *oracle, *max_degree, &cfg)
        }
        Command::Verify { suite } => commands::verify(suite, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors share the validation exit status
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_VALIDATION) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.json));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_TOLERANCE)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
