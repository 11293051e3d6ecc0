use clap::{Parser, Subcommand};
use fdunkl_cli::{
    cmd_ap_check, cmd_convergence, cmd_kernel_sweep, cmd_zeros, emit, last_octave_slope,
    norm_growth_csv, norm_growth_rows, CliError, ConfigArgs,
};

#[derive(Parser)]
#[command(name = "fdunkl", version, about = "Experiments with Fourier-Dunkl expansions on (-1,1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positive zeros s_1 < ... < s_nmax of J_{alpha+1}
    Zeros(ConfigArgs),
    /// Weighted operator norms of the partial sums S_n
    NormGrowth(ConfigArgs),
    /// Weighted L^p error of S_n f for a catalog function
    Convergence(ConfigArgs),
    /// Kernel remainder against its bound over a grid
    KernelSweep(ConfigArgs),
    /// Weight conditions for U = V = weight, as JSON
    ApCheck(ConfigArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (args, f): (&ConfigArgs, fn(&fdunkl_cli::ExperimentConfig) -> Result<String, CliError>) = match &cli.command {
        Command::Zeros(a) => (a, cmd_zeros),
        Command::NormGrowth(a) => {
            let c = a.resolve()?;
            let rows = norm_growth_rows(&c)?;
            eprintln!("last-octave slope of log norm vs log n: {:.4}", last_octave_slope(&rows));
            return emit(&c, &norm_growth_csv(&rows));
        }
        Command::Convergence(a) => (a, cmd_convergence),
        Command::KernelSweep(a) => (a, cmd_kernel_sweep),
        Command::ApCheck(a) => (a, cmd_ap_check),
    };
    let c = args.resolve()?;
    emit(&c, &f(&c)?)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
