//! Command-line front end for zonal Shepard interpolation on the sphere.

mod commands;
mod error;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zonal_shepard::{CsvLayout, TestFunction};

#[derive(Parser, Debug)]
#[command(name = "zonal-shepard", version, about = "Scattered-data interpolation on the unit sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a node set as CSV.
    Generate(GenerateArgs),
    /// Fit nodes and evaluate the interpolant at the given points.
    Interpolate(InterpolateArgs),
    /// Run the error/timing tables and the gamma sweep.
    Benchmark(BenchmarkArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Uniform random points.
    Random,
    /// Spiral points, the first at the south pole.
    Spiral,
    /// Synthetic geomagnetic-intensity data.
    GeomagneticSynth,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionArg {
    F1,
    F2,
}

impl From<FunctionArg> for TestFunction {
    fn from(f: FunctionArg) -> Self {
        match f {
            FunctionArg::F1 => TestFunction::F1,
            FunctionArg::F2 => TestFunction::F2,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// Number of points.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sample this test function at the points.
    #[arg(long, value_enum)]
    function: Option<FunctionArg>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Kernel shape parameter in (0, 1).
    #[arg(long)]
    gamma: Option<f64>,
    /// Neighborhood size of each local fit.
    #[arg(long)]
    nz: Option<usize>,
    /// Number of local fits blended per evaluation point.
    #[arg(long)]
    nw: Option<usize>,
    /// Read files as `lat,lon[,value]` in degrees instead of `x,y,z[,value]`.
    #[arg(long)]
    geo: bool,
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ModelArgs {
    fn layout(&self) -> CsvLayout {
        if self.geo {
            CsvLayout::Geographic
        } else {
            CsvLayout::Cartesian
        }
    }
}

#[derive(Args, Debug)]
pub struct InterpolateArgs {
    /// Node file with values.
    #[arg(long)]
    nodes: PathBuf,
    /// Evaluation points. If the file carries values, error measures are reported.
    #[arg(long)]
    eval: PathBuf,
    /// Harmonic degree, -1 for none.
    #[arg(long, allow_negative_numbers = true)]
    degree: Option<i32>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
pub struct BenchmarkArgs {
    /// Test function sampled at random nodes.
    #[arg(long, value_enum, conflicts_with = "nodes")]
    function: Option<FunctionArg>,
    /// Cross-validate on this data set instead of a test function.
    #[arg(long)]
    nodes: Option<PathBuf>,
    /// Node counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Harmonic degrees, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    degree: Vec<i32>,
    /// Spiral evaluation size, or holdout size with --nodes.
    #[arg(long)]
    s: Option<usize>,
    /// Number of seeds per configuration.
    #[arg(long)]
    seeds: Option<usize>,
    /// First seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "benchmark_out")]
    out: PathBuf,
    /// Skip the gamma sweep.
    #[arg(long)]
    no_sweep: bool,
    #[command(flatten)]
    model: ModelArgs,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => commands::generate(&a),
        Command::Interpolate(a) => commands::interpolate(&a),
        Command::Benchmark(a) => commands::benchmark(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zonal-shepard: {e}");
            e.exit_code()
        }
    }
}
