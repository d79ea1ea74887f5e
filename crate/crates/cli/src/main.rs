mod commands;
mod model_file;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaugekit::gauge::LastCondition;

use commands::{
    AbelianizeArgs, FpArgs, GgArgs, OrbitArgs, ResidualArgs, ShiftVariant, Suite, UsageError,
};
use report::{write_atomic, ReportDocument};

#[derive(Parser)]
#[command(name = "gaugekit", version, about = "Exact checks for constrained Hamiltonian gauge models")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random draw; equal seeds give byte-identical reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OmegaN {
    P1,
    Phi1,
}

#[derive(Subcommand)]
enum Command {
    /// Structure constants and constraint closure.
    Verify {
        model: PathBuf,
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Build and check an Abelian equivalent constraint set.
    Abelianize {
        model: PathBuf,
        /// Which first-component chart to use for so(3) (1, 2 or 3).
        #[arg(long, default_value_t = 3)]
        chart: usize,
        #[arg(long, value_enum, default_value_t = ShiftVariant::Printed)]
        variant: ShiftVariant,
        #[arg(long)]
        emit_c_matrix: bool,
        #[arg(long, default_value_t = 20)]
        weak_samples: usize,
        /// Also solve for the gauge parameter map (so(4) only).
        #[arg(long)]
        gauge_map: bool,
    },
    /// Faddeev-Popov determinant of a gauge choice.
    FpDet {
        model: PathBuf,
        /// Comma-separated gauge conditions, one per constraint.
        #[arg(long, value_delimiter = ',')]
        gauge: Option<Vec<String>>,
        /// Which reading of the last condition is the primary one.
        #[arg(long, value_enum, default_value_t = OmegaN::P1)]
        omega_n: OmegaN,
        /// Sequential substitutions `name=expr`, separated by commas.
        #[arg(long, value_delimiter = ',')]
        reduce: Option<Vec<String>>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Residual symmetry at a point, or a random probe of its dimension.
    Residual {
        model: PathBuf,
        /// Exact bindings `q1=2,p1=-1/3,...` for every phase-space symbol.
        #[arg(long, value_delimiter = ',')]
        point: Option<Vec<String>>,
        /// Number of random trials for the dimension probe.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Leapfrog run of the three-component scalar model.
    DemoGg {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Option<Vec<f64>>,
        /// Write the trajectory as CSV.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[command(subcommand)]
        sub: Option<GgSub>,
    },
}

#[derive(Subcommand)]
enum GgSub {
    /// Averages of charged observables over a rotation orbit.
    OrbitAverage {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0.8,-0.6,0,0.1,0.3,0"
        )]
        point: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0,1")]
        axis: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

fn load(path: &std::path::Path) -> Result<model_file::Loaded, Failure> {
    model_file::load(path).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<ReportDocument, Failure> {
    let seed = cli.global.seed;
    let doc = match cli.command {
        Command::Verify { model, suite } => commands::verify(&load(&model)?, suite, seed),
        Command::Abelianize {
            model,
            chart,
            variant,
            emit_c_matrix,
            weak_samples,
            gauge_map,
        } => {
            let args = AbelianizeArgs {
                chart,
                variant,
                emit_c_matrix,
                weak_samples,
                gauge_map,
            };
            commands::abelianize(&load(&model)?, &args, seed)?
        }
        Command::FpDet {
            model,
            gauge,
            omega_n,
            reduce,
            samples,
        } => {
            let args = FpArgs {
                gauge,
                omega_n: match omega_n {
                    OmegaN::P1 => LastCondition::Momentum,
                    OmegaN::Phi1 => LastCondition::Constraint,
                },
                reduce,
                samples,
            };
            commands::fp_det(&load(&model)?, &args, seed)?
        }
        Command::Residual { model, point, random } => {
            commands::residual(&load(&model)?, &ResidualArgs { point, random }, seed)?
        }
        Command::DemoGg {
            a,
            dt,
            steps,
            q,
            p,
            trajectory,
            sub,
        } => match sub {
            Some(GgSub::OrbitAverage { point, axis, samples }) => {
                commands::orbit_average(&OrbitArgs { point, axis, samples }, seed)?
            }
            None => {
                let cfg = commands::gg_config(&GgArgs { a, dt, steps, q, p }, seed)?;
                let (doc, traj) = commands::demo_gg(&cfg, seed)?;
                if let Some(path) = trajectory {
                    let mut buf = Vec::new();
                    traj.write_csv(&mut buf).map_err(|e| Failure::Io(e.to_string()))?;
                    let text = String::from_utf8(buf).expect("csv is ascii");
                    write_atomic(&path, &text)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                }
                doc
            }
        },
    };
    Ok(doc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.format;
    let out = cli.global.out.clone();
    let doc = match run(cli) {
        Ok(doc) => doc,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let text = match format {
        Format::Text => doc.to_text(),
        Format::Json => doc.to_json(),
    };
    match out {
        Some(path) => {
            if let Err(e) = write_atomic(&path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if doc.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
