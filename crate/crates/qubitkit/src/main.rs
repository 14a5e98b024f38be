//! Command-line frontend: `simulate` runs circuit files, `run` drives the
//! built-in algorithms. Exit codes: 0 success, 1 usage error, 2 parse
//! error, 3 runtime (promise or validation) error.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qubitkit::cli::{self, FlipChoice, RunReport, SimulateOptions};
use qubitkit::error::Error;

#[derive(Parser)]
#[command(
    name = "qubitkit",
    about = "Exact state-vector quantum circuit simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Copy)]
struct CommonOptions {
    /// Sampling seed; overrides the QUBITKIT_SEED environment variable.
    #[arg(long)]
    seed: Option<u64>,
    /// Output format on stdout.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit file and report the outcome distribution.
    Simulate {
        /// Path to the circuit file.
        file: std::path::PathBuf,
        /// Sample this many shots into a histogram.
        #[arg(long)]
        shots: Option<u64>,
        /// Include full-register amplitudes in the report.
        #[arg(long)]
        amplitudes: bool,
        #[command(flatten)]
        common: CommonOptions,
    },
    /// Run a built-in algorithm.
    Run {
        #[command(subcommand)]
        algorithm: Algorithm,
    },
}

#[derive(Subcommand)]
enum Algorithm {
    /// One-query constant-vs-balanced test of a 1-bit function.
    Deutsch {
        /// Truth table, e.g. `01`.
        #[arg(long)]
        oracle: String,
        /// Also sample the upper register for demonstration.
        #[arg(long)]
        shots: Option<u64>,
        #[command(flatten)]
        common: CommonOptions,
    },
    /// The n-bit Deutsch-Jozsa decision.
    Dj {
        /// Truth table with 2^n bits, e.g. `00001111`.
        #[arg(long)]
        oracle: String,
        /// Also sample the upper register for demonstration.
        #[arg(long)]
        shots: Option<u64>,
        #[command(flatten)]
        common: CommonOptions,
    },
    /// Send two classical bits over one qubit of a Bell pair.
    Superdense {
        /// The two bits, e.g. `10`.
        #[arg(long)]
        bits: String,
        #[command(flatten)]
        common: CommonOptions,
    },
    /// Teleport a Bloch-parametrized qubit.
    Teleport {
        /// Polar angle of the input qubit.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
        /// Azimuth of the input qubit.
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[command(flatten)]
        common: CommonOptions,
    },
    /// Overlap test between two Bloch-parametrized qubits.
    SwapTest {
        #[arg(long, default_value_t = 0.0)]
        theta1: f64,
        #[arg(long, default_value_t = 0.0)]
        phi1: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta2: f64,
        #[arg(long, default_value_t = 0.0)]
        phi2: f64,
        #[command(flatten)]
        common: CommonOptions,
    },
    /// Phase estimation of a diagonal gate on the |1> eigenstate.
    Qpe {
        /// Gate whose eigenphase to estimate: z, s, t or p.
        #[arg(long, default_value = "s")]
        gate: String,
        /// Phase parameter, required for gate `p`.
        #[arg(long)]
        phi: Option<f64>,
        /// Ancilla count (estimate resolution 2pi/2^m).
        #[arg(long, default_value_t = 3)]
        ancillas: usize,
        #[arg(long, default_value_t = 256)]
        shots: u64,
        #[command(flatten)]
        common: CommonOptions,
    },
    /// Period finding for N = 15.
    Shor15 {
        /// Base coprime to 15.
        #[arg(long)]
        a: u64,
        /// Condition the lower-register measurement on the residue cycle
        /// through this upper-register value instead of sampling.
        #[arg(long)]
        condition_branch: Option<u64>,
        #[command(flatten)]
        common: CommonOptions,
    },
    /// The three-qubit bit-flip code pipeline over random qubits.
    QecBitflip {
        /// Wire to flip: 0, 1, 2, `none` or `random`.
        #[arg(long, default_value = "random")]
        flip: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[command(flatten)]
        common: CommonOptions,
    },
    /// First-order Trotter evolution of |0...0> under a Hamiltonian file.
    Trotter {
        /// Path to a `coefficient LETTERS` Hamiltonian file.
        #[arg(long)]
        hamiltonian: std::path::PathBuf,
        /// Total evolution time.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Number of Trotter steps.
        #[arg(long, default_value_t = 64)]
        steps: u32,
        #[command(flatten)]
        common: CommonOptions,
    },
}

fn read_file(path: &std::path::Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn emit(report: &RunReport, format: Format, started: Instant) -> ExitCode {
    let text = match format {
        Format::Json => cli::to_json(report),
        Format::Csv => cli::to_csv(report),
    };
    print!("{text}");
    eprintln!("wall_ms={:.3}", started.elapsed().as_secs_f64() * 1e3);
    ExitCode::SUCCESS
}

fn fail(error: Error) -> ExitCode {
    eprintln!("error: {error}");
    match error {
        Error::Parse(_) => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, everything else is usage
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let started = Instant::now();
    match cli.command {
        Command::Simulate {
            file,
            shots,
            amplitudes,
            common,
        } => {
            let text = match read_file(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let options = SimulateOptions {
                shots,
                seed: cli::resolve_seed(common.seed),
                amplitudes,
            };
            match cli::cmd_simulate(&text, options) {
                Ok(report) => emit(&report, common.format, started),
                Err(e) => fail(e),
            }
        }
        Command::Run { algorithm } => {
            let (result, common) = match algorithm {
                Algorithm::Deutsch {
                    oracle,
                    shots,
                    common,
                }
                | Algorithm::Dj {
                    oracle,
                    shots,
                    common,
                } => (
                    cli::run_deutsch_jozsa(&oracle, shots, cli::resolve_seed(common.seed)),
                    common,
                ),
                Algorithm::Superdense { bits, common } => (
                    cli::run_superdense(&bits, cli::resolve_seed(common.seed)),
                    common,
                ),
                Algorithm::Teleport { theta, phi, common } => (
                    cli::run_teleport(theta, phi, cli::resolve_seed(common.seed)),
                    common,
                ),
                Algorithm::SwapTest {
                    theta1,
                    phi1,
                    theta2,
                    phi2,
                    common,
                } => (
                    cli::run_swap_test(
                        (theta1, phi1),
                        (theta2, phi2),
                        cli::resolve_seed(common.seed),
                    ),
                    common,
                ),
                Algorithm::Qpe {
                    gate,
                    phi,
                    ancillas,
                    shots,
                    common,
                } => (
                    cli::run_qpe(&gate, phi, ancillas, shots, cli::resolve_seed(common.seed)),
                    common,
                ),
                Algorithm::Shor15 {
                    a,
                    condition_branch,
                    common,
                } => (
                    cli::run_shor15(a, condition_branch, cli::resolve_seed(common.seed)),
                    common,
                ),
                Algorithm::QecBitflip {
                    flip,
                    trials,
                    common,
                } => {
                    let choice = match flip.as_str() {
                        "none" => Ok(FlipChoice::None),
                        "random" => Ok(FlipChoice::Random),
                        "0" => Ok(FlipChoice::Wire(0)),
                        "1" => Ok(FlipChoice::Wire(1)),
                        "2" => Ok(FlipChoice::Wire(2)),
                        other => Err(Error::InvalidArgument(format!(
                            "--flip must be 0, 1, 2, none or random; got `{other}`"
                        ))),
                    };
                    (
                        choice.and_then(|choice| {
                            cli::run_qec_bitflip(choice, trials, cli::resolve_seed(common.seed))
                        }),
                        common,
                    )
                }
                Algorithm::Trotter {
                    hamiltonian,
                    t,
                    steps,
                    common,
                } => {
                    let text = match read_file(&hamiltonian) {
                        Ok(t) => t,
                        Err(code) => return code,
                    };
                    (
                        cli::run_trotter(&text, t, steps, cli::resolve_seed(common.seed)),
                        common,
                    )
                }
            };
            match result {
                Ok(report) => emit(&report, common.format, started),
                Err(e) => fail(e),
            }
        }
    }
}
