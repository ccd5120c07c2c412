use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ilv::commands::{self, InterleaveArgs, Method};
use ilv::{audit, reproduce, CliError, Output};
use interleaving::metricgh::DEFAULT_PAIR_CAP;
use interleaving::pipeline::StabilityConfig;

#[derive(Parser)]
#[command(name = "ilv", version, about = "Interleaving distances, Gromov-Hausdorff variants and stability checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Closed,
    Bisect,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two symbolic modules, printed as JSON.
    Interleave {
        /// flow, mult, shift or direction.
        #[arg(long, default_value = "flow")]
        family: String,
        /// Module literal: interval:a,b, rect:a1,a2;b1,b2 or empty.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Norm exponent for shift and direction families.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Comma-separated direction vector for the direction family.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// gh, altered and modified Gromov-Hausdorff distances of two CSV matrices.
    Gh {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Largest number of map pairs to enumerate.
        #[arg(long, default_value_t = DEFAULT_PAIR_CAP)]
        cap: u64,
    },
    /// Axiom audits; exits 3 on any violation.
    Audit {
        /// pseudometric, weights, twocat or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "default")]
        instances: String,
    },
    /// Bottleneck stability trials on grid complexes, CSV per trial and degree.
    Stability {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        grid: usize,
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Multiplicative noise and log-scale barcodes.
        #[arg(long)]
        mult: bool,
        /// Add one trial raising a single vertex by this height.
        #[arg(long)]
        spike: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite weighted 2-categories.
    Twocat {
        #[command(subcommand)]
        action: TwocatCommand,
    },
    /// Recompute the worked-example table; exits 3 if a row is off.
    Reproduce,
}

#[derive(Subcommand)]
enum TwocatCommand {
    /// Names of the shipped instances.
    List,
    /// Print a shipped instance in the text format.
    Emit {
        #[arg(long)]
        instance: String,
    },
    /// Interleaving distance between two objects of a 2-category file.
    Distance {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

fn dispatch(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Interleave {
            family,
            a,
            b,
            p,
            direction,
            tol,
            method,
        } => commands::interleave(&InterleaveArgs {
            family,
            p,
            direction,
            a,
            b,
            tol,
            method: match method {
                MethodArg::Auto => Method::Auto,
                MethodArg::Closed => Method::Closed,
                MethodArg::Bisect => Method::Bisect,
            },
        }),
        Command::Gh { x, y, cap } => commands::gh(&x, &y, cap),
        Command::Audit { suite, instances } => audit::run(audit::Suite::parse(&suite)?, &instances),
        Command::Stability {
            trials,
            grid,
            noise,
            seed,
            mult,
            spike,
            out,
        } => commands::stability(
            &StabilityConfig {
                trials,
                grid,
                noise,
                seed,
                multiplicative: mult,
                spike,
            },
            out.as_deref(),
        ),
        Command::Twocat { action } => match action {
            TwocatCommand::List => Ok(commands::twocat_list()),
            TwocatCommand::Emit { instance } => commands::twocat_emit(&instance),
            TwocatCommand::Distance { file, a, b } => commands::twocat_distance(&file, &a, &b),
        },
        Command::Reproduce => Ok(reproduce::run()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(ilv::EXIT_PARSE);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            let _ = std::io::stdout().flush();
            eprint!("{}", out.stderr);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("ilv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
