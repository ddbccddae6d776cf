use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holevo::grid::parse_grid;
use holevo::output::{format_chi, write_gradcheck, write_trace, SweepWriter};
use holevo::spec::{ChannelSpec, DimensionCaps, DEFAULT_MAX_DIM, DEFAULT_MAX_LETTERS};
use holevo::{gradcheck_passed, read_spec, CliError, SolverFlags};
use holevo_core::manifold::SimplexGeometry;

/// Lower bounds on the Holevo capacity of quantum channels.
#[derive(Parser)]
#[command(name = "holevo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one channel and print a JSON report.
    Solve {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Also write the best restart's trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Solve a channel family over a parameter grid and print CSV.
    Sweep {
        /// JSON template containing the string "$<param>".
        template: PathBuf,
        #[arg(long)]
        param: String,
        /// `start:step:end` or a comma separated list.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the analytic gradient with finite differences.
    Gradcheck {
        spec: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        directions: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Print a random channel spec.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Entanglement-breaking channel on C^d with Haar-random rank-one Kraus
    /// operators.
    Eb {
        #[arg(long)]
        dim: usize,
    },
    /// Classical-quantum channel with Haar-random pure outputs.
    Cq {
        #[arg(long)]
        letters: usize,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Gradient-norm tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Smoothing weight of the fully depolarizing channel.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    ensemble_size: Option<usize>,
    /// euclidean, paper_q or fisher; gradcheck accepts a comma list.
    #[arg(long, value_delimiter = ',')]
    simplex_geometry: Vec<SimplexGeometry>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_LETTERS)]
    max_letters: usize,
}

impl Common {
    fn flags(&self) -> Result<SolverFlags, CliError> {
        if self.simplex_geometry.len() > 1 {
            return Err(CliError::Input(
                "only gradcheck accepts several simplex geometries".into(),
            ));
        }
        Ok(SolverFlags {
            seed: self.seed,
            restarts: self.restarts,
            tol: self.tol,
            delta: self.delta,
            ensemble_size: self.ensemble_size,
            simplex_geometry: self.simplex_geometry.first().copied(),
            max_iters: self.max_iters,
        })
    }

    fn caps(&self) -> DimensionCaps {
        DimensionCaps {
            max_dim: self.max_dim,
            max_letters: self.max_letters,
        }
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Output(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut out = open_out(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Output(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { spec, common, trace } => {
            let spec = read_spec(&spec)?;
            let report = holevo::solve(&spec, &common.flags()?, common.caps())?;
            let r = &report.result;
            eprintln!(
                "chi = {} (grad norm {:.3e}, {} iterations, {}, {:.3} s)",
                format_chi(r.chi_lower_bound),
                r.grad_norm_final,
                r.iterations,
                r.termination_reason.name(),
                report.wall_seconds
            );
            if let Some(path) = trace {
                let file = File::create(&path)
                    .map_err(|e| CliError::Output(format!("cannot create {}: {e}", path.display())))?;
                write_trace(BufWriter::new(file), &r.trace)?;
            }
            write_json(common.out.as_deref(), &report)
        }
        Command::Sweep {
            template,
            param,
            grid,
            common,
        } => {
            let text = std::fs::read_to_string(&template).map_err(|e| {
                CliError::Input(format!("cannot read {}: {e}", template.display()))
            })?;
            let template: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
            let grid = parse_grid(&grid)?;
            let flags = common.flags()?;
            let mut writer = SweepWriter::new(open_out(common.out.as_deref())?)?;
            let failed = holevo::sweep(&template, &param, &grid, &flags, common.caps(), |row| {
                writer.write(&row).map_err(CliError::from)
            })?;
            if failed {
                return Err(CliError::Solver("at least one grid value failed".into()));
            }
            Ok(())
        }
        Command::Gradcheck {
            spec,
            trials,
            directions,
            common,
        } => {
            let spec = read_spec(&spec)?;
            let geometries = if common.simplex_geometry.is_empty() {
                vec![SimplexGeometry::Euclidean, SimplexGeometry::Fisher]
            } else {
                common.simplex_geometry.clone()
            };
            let caps = common.caps();
            let out = common.out.clone();
            let flags = Common {
                simplex_geometry: Vec::new(),
                ..common
            }
            .flags()?;
            let reports = holevo::gradcheck(&spec, &flags, &geometries, trials, directions, caps)?;
            write_gradcheck(open_out(out.as_deref())?, &reports, trials)?;
            if !gradcheck_passed(&reports) {
                return Err(CliError::CheckFailed(
                    "finite-difference relative error above 1e-5".into(),
                ));
            }
            Ok(())
        }
        Command::Generate { kind, seed, out } => {
            let spec = match kind {
                GenerateKind::Eb { dim } => {
                    if dim == 0 {
                        return Err(CliError::Input("--dim must be at least 1".into()));
                    }
                    ChannelSpec::random_eb(dim, seed)
                }
                GenerateKind::Cq { letters, dim } => {
                    if letters == 0 || dim == 0 {
                        return Err(CliError::Input(
                            "--letters and --dim must be at least 1".into(),
                        ));
                    }
                    ChannelSpec::random_cq(letters, dim, seed)
                }
            };
            write_json(out.as_deref(), &spec)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("holevo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
