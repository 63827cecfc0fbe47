use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use knotcrit::cli::{
    run_closed_form, run_compare, run_expect, run_mc, run_tau, to_json, write_samples_csv,
    CompareParams, ExpectParams, McParams, TauParams,
};
use knotcrit::monte_carlo::McConfig;
use knotcrit::parse::{parse_family_spec, parse_knot_spec};

#[derive(Parser)]
#[command(
    name = "knotcrit",
    version,
    about = "Critical point statistics of random smooth functions on closed curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected critical point count via the unit-map curvature formula
    Expect(ExpectArgs),
    /// Monte Carlo estimate by sphere sampling and root counting
    Mc(McArgs),
    /// Total curvature of a curve, optionally Veronese-immersed first
    Tau(TauArgs),
    /// Closed-form reference value for families on the unit circle
    ClosedForm(ClosedFormArgs),
    /// Cross-validate the formula against Monte Carlo at z ≤ 3
    Compare(CompareArgs),
}

#[derive(Args)]
struct KnotFamilyArgs {
    /// Knot spec: circle[:center=x,y[,r=R]], trefoil, ellipse:a,b, file:PATH
    #[arg(long)]
    knot: String,
    /// Family spec: veronese:n=2,ell=3 or trig:n=4
    #[arg(long)]
    family: String,
}

#[derive(Args)]
struct ExpectArgs {
    #[command(flatten)]
    pair: KnotFamilyArgs,
    /// Quadrature relative tolerance
    #[arg(long, default_value_t = 1e-10)]
    qtol: f64,
    /// Grid size for admissibility scans
    #[arg(long, default_value_t = 4096)]
    grid: usize,
}

#[derive(Args)]
struct McSamplingArgs {
    /// Number of Monte Carlo samples
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Master seed; per-sample seeds derive from it deterministically
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sign-change scan grid (default: 64 per oscillation degree, else 4096)
    #[arg(long)]
    scan_grid: Option<usize>,
    /// Write one CSV row per sample to this path
    #[arg(long)]
    csv_out: Option<PathBuf>,
    /// Grid size for admissibility scans
    #[arg(long, default_value_t = 4096)]
    grid: usize,
}

impl McSamplingArgs {
    fn to_config(&self) -> McConfig {
        McConfig {
            samples: self.samples,
            seed: self.seed,
            scan_grid: self.scan_grid,
            validation_grid: self.grid,
            ..McConfig::default()
        }
    }
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    pair: KnotFamilyArgs,
    #[command(flatten)]
    sampling: McSamplingArgs,
}

#[derive(Args)]
struct TauArgs {
    /// Knot spec: circle[:center=x,y[,r=R]], trefoil, ellipse:a,b, file:PATH
    #[arg(long)]
    knot: String,
    /// Immerse through the degree-ℓ Veronese map before integrating
    #[arg(long)]
    veronese_ell: Option<u32>,
    /// Quadrature relative tolerance
    #[arg(long, default_value_t = 1e-10)]
    qtol: f64,
}

#[derive(Args)]
struct ClosedFormArgs {
    /// Family spec: veronese:n=2,ell=3 or trig:n=4
    #[arg(long)]
    family: String,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    pair: KnotFamilyArgs,
    #[command(flatten)]
    sampling: McSamplingArgs,
    /// Quadrature relative tolerance for the formula side
    #[arg(long, default_value_t = 1e-10)]
    qtol: f64,
}

fn run(cli: Cli) -> knotcrit::Result<String> {
    match cli.command {
        Command::Expect(args) => {
            let params = ExpectParams {
                knot: parse_knot_spec(&args.pair.knot)?,
                family: parse_family_spec(&args.pair.family)?,
                qtol: args.qtol,
                validation_grid: args.grid,
            };
            Ok(to_json(&run_expect(&params)?))
        }
        Command::Mc(args) => {
            let params = McParams {
                knot: parse_knot_spec(&args.pair.knot)?,
                family: parse_family_spec(&args.pair.family)?,
                config: args.sampling.to_config(),
            };
            let (output, report) = run_mc(&params)?;
            if let Some(path) = &args.sampling.csv_out {
                write_samples_csv(&report, path)?;
            }
            Ok(to_json(&output))
        }
        Command::Tau(args) => {
            let params = TauParams {
                knot: parse_knot_spec(&args.knot)?,
                veronese_ell: args.veronese_ell,
                qtol: args.qtol,
            };
            Ok(to_json(&run_tau(&params)?))
        }
        Command::ClosedForm(args) => {
            let family = parse_family_spec(&args.family)?;
            Ok(to_json(&run_closed_form(&family)?))
        }
        Command::Compare(args) => {
            let params = CompareParams {
                knot: parse_knot_spec(&args.pair.knot)?,
                family: parse_family_spec(&args.pair.family)?,
                qtol: args.qtol,
                validation_grid: args.sampling.grid,
                config: args.sampling.to_config(),
            };
            let (output, report) = run_compare(&params)?;
            if let Some(path) = &args.sampling.csv_out {
                write_samples_csv(&report, path)?;
            }
            Ok(to_json(&output))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(json) => {
            println!("{json}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
