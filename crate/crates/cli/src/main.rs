use clap::{Parser, Subcommand};
use gha_coherent::{
    cmd_figure, cmd_list, cmd_state, cmd_verify, error_status, parse_label, resolve_spectrum, Status,
    VerifyOptions,
};
use gha_core::figures::DEFAULT_POINTS;
use gha_core::quadrature::QuadConfig;
use gha_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gha-coherent", version, about = "Coherent states of generalized Heisenberg algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog spectra with their characteristic functions and closed forms.
    List,
    /// Print the Fock components of the coherent state |z⟩.
    State {
        /// Catalog name (harmonic, q-deformed[:q], power-class[:alpha], type1, type2, square-well) or TOML path.
        #[arg(long)]
        spectrum: String,
        /// Label as a+bi or r@theta.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Truncation dimension; chosen automatically when omitted.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Run the algebra, normalizability, continuity and completeness checks.
    Verify {
        #[arg(long)]
        spectrum: String,
        /// Number of completeness moments checked.
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        /// Tolerance on |M_n − 1|.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Write CSV data for figure 1, 2 or 3.
    Figure {
        #[arg(long)]
        which: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
    },
}

fn quad_config(from_file: Option<QuadConfig>) -> Result<QuadConfig, Error> {
    let env = QuadConfig::from_env()?;
    Ok(match from_file {
        // the environment cap still wins over the file
        Some(mut q) => {
            if std::env::var_os(gha_core::quadrature::MAX_NODES_ENV).is_some() {
                q.max_nodes = env.max_nodes;
            }
            q
        }
        None => env,
    })
}

fn run(cli: Cli) -> Result<Status, Error> {
    match cli.command {
        Command::List => {
            print!("{}", cmd_list());
            Ok(Status::Pass)
        }
        Command::State { spectrum, z, dim } => {
            let (spec, _) = resolve_spectrum(&spectrum)?;
            let z = parse_label(&z)?;
            print!("{}", cmd_state(&spec, z, dim)?);
            Ok(Status::Pass)
        }
        Command::Verify { spectrum, nmax, tol } => {
            let (spec, quad) = resolve_spectrum(&spectrum)?;
            let opts = VerifyOptions {
                n_max: nmax,
                tol,
                quad: quad_config(quad)?,
                ..VerifyOptions::default()
            };
            let report = cmd_verify(&spec, &opts)?;
            print!("{}", report.render());
            Ok(report.status())
        }
        Command::Figure { which, out, points } => {
            let rows = cmd_figure(which, &out, points, &quad_config(None)?)?;
            eprintln!("wrote {rows} rows to {}", out.display());
            Ok(Status::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_status(&e).code() as u8)
        }
    }
}
