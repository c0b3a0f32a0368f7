use clap::{Args, Parser, Subcommand};
use hornfit_cli::commands::{self, FitOverrides, GridOptions, OracleKind, ValidatePair};
use hornfit_cli::formats::SpacingName;
use hornfit_cli::CliResult;
use std::path::PathBuf;

/// Ear-canal transfer impedance estimation with a 1D horn model.
#[derive(Parser)]
#[command(name = "hornfit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward-model a parameter file into impedance spectra.
    Simulate {
        /// TOML file with [area] and [termination] sections.
        #[arg(long)]
        params: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Fit the horn model to input-impedance data.
    Fit {
        /// Input-impedance spectrum (frequency_hz,re,im).
        #[arg(long)]
        data: PathBuf,
        /// Optional TOML configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Random seed for the multistart draws.
        #[arg(long)]
        seed: Option<u64>,
        /// Upper edge of the fitting band in Hz (typically 10000 or 20000).
        #[arg(long)]
        f_cap: Option<f64>,
        /// Distribution of the fitting frequencies.
        #[arg(long, value_enum)]
        distribution: Option<SpacingName>,
        /// Number of multistart initial points.
        #[arg(long)]
        n_starts: Option<usize>,
        /// Restarts per start.
        #[arg(long)]
        restarts: Option<usize>,
        /// Number of area-function harmonics M.
        #[arg(long)]
        fourier_order: Option<usize>,
        /// Output directory.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Compare fitted transfer impedances against reference spectra.
    Validate {
        /// report.toml:reference_ztr.csv (repeatable).
        #[arg(long = "pair", value_parser = parse_pair, required = true)]
        pairs: Vec<ValidatePair>,
        /// Output directory.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Write a closed-form reference impedance table.
    Oracle {
        #[arg(long, value_enum, default_value = "rigid-cylinder")]
        kind: OracleKind,
        /// Cross-section in m².
        #[arg(long)]
        area: f64,
        /// Duct length in m.
        #[arg(long)]
        length: f64,
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory.
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GridArgs {
    /// First grid frequency in Hz.
    #[arg(long, default_value_t = 100.0)]
    f_start: f64,
    /// Last grid frequency in Hz.
    #[arg(long, default_value_t = 20_000.0)]
    f_end: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 200)]
    count: usize,
}

impl From<GridArgs> for GridOptions {
    fn from(g: GridArgs) -> Self {
        Self {
            f_start: g.f_start,
            f_end: g.f_end,
            count: g.count,
        }
    }
}

fn parse_pair(s: &str) -> Result<ValidatePair, String> {
    let (report, reference) = s
        .split_once(':')
        .ok_or_else(|| format!("expected report.toml:reference.csv, got {s}"))?;
    Ok(ValidatePair {
        report: PathBuf::from(report),
        reference: PathBuf::from(reference),
    })
}

fn run(cli: Cli) -> CliResult<Vec<PathBuf>> {
    match cli.command {
        Command::Simulate { params, grid, out } => commands::simulate(&params, grid.into(), &out),
        Command::Fit {
            data,
            config,
            seed,
            f_cap,
            distribution,
            n_starts,
            restarts,
            fourier_order,
            out,
        } => {
            let overrides = FitOverrides {
                seed,
                f_cap,
                spacing: distribution,
                n_starts,
                restarts,
                fourier_order,
            };
            commands::fit(&data, config.as_deref(), &overrides, &out)
        }
        Command::Validate { pairs, out } => commands::validate(&pairs, &out),
        Command::Oracle {
            kind,
            area,
            length,
            grid,
            out,
        } => commands::oracle(kind, area, length, grid.into(), &out),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
