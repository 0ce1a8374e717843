use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use pirac::pirsim::SchemeId;
use pirac_cli::{
    cmd_coset_weights, cmd_curve, cmd_search, cmd_simulate, cmd_tables, query_shape,
    render_records, render_tuple, write_output, CliError, DataSource, Format, SimulateConfig,
};

#[derive(Parser)]
#[command(
    name = "pirac",
    version,
    about = "Access-complexity experiments for coded PIR storage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rate/access tables for the MDS-coded construction (table1, table2).
    Tables {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// One achievable (rate, access) point: MDS-coded with --k, or memory sharing with --p/--q.
    Tuple {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, requires = "q")]
        p: Option<usize>,
        #[arg(long, requires = "p")]
        q: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Samples of the access-vs-storage curve alpha = f(beta).
    Curve {
        #[arg(long, default_value_t = 1.0)]
        beta_min: f64,
        #[arg(long, default_value_t = 10.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 91)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Maximum tau-coset weights of a code for tau = 1..tau-max.
    CosetWeights {
        /// hamming:M, ext-hamming:M, sum-augmented:R, identity:R or a matrix file.
        #[arg(long)]
        code: String,
        #[arg(long)]
        tau_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Runs a PIR scheme, exhaustively when the randomness space is small.
    Simulate {
        /// two-server, replicated, mds32 or bep.
        #[arg(long)]
        scheme: SchemeId,
        /// Servers (fixed at 2 and 3 for two-server and mds32).
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        /// Sampled runs when the randomness space is too large to enumerate.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// identity, sum-augmented, restricted-example3 or a code spec.
        #[arg(long, default_value = "identity")]
        backend: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seed for the random database (defaults to --seed).
        #[arg(long, conflicts_with = "db_file")]
        db_seed: Option<u64>,
        /// Raw database bytes, files back to back.
        #[arg(long)]
        db_file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Access of K random queries per server for an (N, K) MDS-coded layout.
    QueryShape {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "sum-augmented")]
        backend: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Randomized search for a code of given length, redundancy and radius.
    Search {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Tables {
            n,
            eps,
            out,
            format,
        } => {
            for path in cmd_tables(n, eps, &out, format)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Tuple {
            n,
            k,
            p,
            q,
            eps,
            out,
            format,
        } => {
            let text = render_tuple(n, k, p.zip(q), eps, format)?;
            write_output(out.as_deref(), &text)?;
        }
        Command::Curve {
            beta_min,
            beta_max,
            steps,
            out,
            format,
        } => {
            cmd_curve(beta_min, beta_max, steps, out.as_deref(), format)?;
        }
        Command::CosetWeights {
            code,
            tau_max,
            out,
            format,
        } => {
            cmd_coset_weights(&code, tau_max, out.as_deref(), format)?;
        }
        Command::Simulate {
            scheme,
            n,
            m,
            l,
            trials,
            backend,
            seed,
            db_seed,
            db_file,
            out,
            format,
        } => {
            let data = match db_file {
                Some(path) => DataSource::File(path),
                None => DataSource::Random(db_seed.unwrap_or(seed)),
            };
            let cfg = SimulateConfig {
                scheme,
                n,
                m,
                l,
                trials,
                backend,
                seed,
                data,
            };
            let s = cmd_simulate(&cfg, out.as_deref(), format)?;
            if s.correct != s.runs {
                eprintln!(
                    "warning: {} of {} runs reconstructed the wrong file",
                    s.runs - s.correct,
                    s.runs
                );
            }
        }
        Command::QueryShape {
            n,
            k,
            m,
            backend,
            trials,
            seed,
            out,
            format,
        } => {
            let line = query_shape(n, k, m, &backend, trials, seed)?;
            let text = render_records(std::slice::from_ref(&line), format)?;
            write_output(out.as_deref(), &text)?;
        }
        Command::Search {
            len,
            r,
            radius,
            budget,
            seed,
            out,
            format,
        } => {
            let report = cmd_search(len, r, radius, budget, seed, out.as_deref(), format)?;
            if report.found {
                eprintln!("found a code after {} attempts", report.attempts);
            } else if report.impossible {
                eprintln!("no code can exist: the sphere-covering bound fails");
            } else {
                eprintln!("no code found in {} attempts", report.attempts);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
