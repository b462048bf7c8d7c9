use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use zonal_shepard::benchmark::{self, BenchmarkSpec, DataSource};
use zonal_shepard::{
    error_report, fit, geomagnetic_synthetic, load_csv, CsvLayout, Error, random_uniform_sphere, spiral_points,
    write_csv, GeomagneticSynth, HarmonicDegree, PointSet, ShepardConfig, TestFunction, ZonalKernel,
};

use crate::error::{io_error, CliError, CliResult};
use crate::settings::{
    check_degree, check_gamma, resolve, resolve_list, ConfigFile, DEFAULT_DEGREE, DEFAULT_GAMMA,
    DEFAULT_NW, DEFAULT_NZ,
};
use crate::{BenchmarkArgs, GenerateArgs, InterpolateArgs, Kind, ModelArgs};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_SEEDS: usize = 5;
const DEFAULT_NODE_COUNTS: &[usize] = &[1000, 4000];
const DEFAULT_DEGREES: &[i32] = &[-1, 0, 1, 2];
const DEFAULT_SPIRAL: usize = 600;
const DEFAULT_HOLDOUT: usize = 200;

/// Runs `body` against a buffered writer on `path`, or on standard output.
fn with_output(
    path: Option<&Path>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| io_error(p.display(), e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_error(p.display(), e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_error("stdout", e))
        }
    }
}

fn load(path: &Path, layout: CsvLayout) -> CliResult<PointSet> {
    load_csv(path, layout).map_err(|e| match e {
        Error::Io(io) => io_error(path.display(), io),
        other => other.into(),
    })
}

fn parse_function(config: &ConfigFile) -> CliResult<Option<TestFunction>> {
    config.get::<TestFunction>("function")
}

pub fn generate(args: &GenerateArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.config.as_deref())?;
    let n: usize = match args.n {
        Some(n) => n,
        None => config
            .get("n")?
            .ok_or_else(|| CliError::Usage("generate needs --n".into()))?,
    };
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let seed = resolve(args.seed, &config, "seed", DEFAULT_SEED)?;
    let function = match args.function {
        Some(f) => Some(TestFunction::from(f)),
        None => parse_function(&config)?,
    };

    let set = match args.kind {
        Kind::Random => random_uniform_sphere(n, seed),
        Kind::Spiral => {
            if n < 2 {
                return Err(CliError::Usage("a spiral needs --n >= 2".into()));
            }
            spiral_points(n)?
        }
        Kind::GeomagneticSynth => {
            if function.is_some() {
                return Err(CliError::Usage(
                    "--function does not apply to geomagnetic-synth".into(),
                ));
            }
            geomagnetic_synthetic(n, seed, GeomagneticSynth::default())
        }
    };
    let set = match function {
        Some(f) => set.sample(|p| f.eval(p)),
        None => set,
    };
    with_output(args.out.as_deref(), |w| write_csv(w, &set, "value"))?;
    log::info!("wrote {} points", set.len());
    Ok(())
}

struct Model {
    gamma: f64,
    nz: usize,
    nw: usize,
}

fn resolve_model(args: &ModelArgs, config: &ConfigFile) -> CliResult<Model> {
    let model = Model {
        gamma: resolve(args.gamma, config, "gamma", DEFAULT_GAMMA)?,
        nz: resolve(args.nz, config, "nz", DEFAULT_NZ)?,
        nw: resolve(args.nw, config, "nw", DEFAULT_NW)?,
    };
    check_gamma(model.gamma)?;
    if model.nz == 0 || model.nw == 0 {
        return Err(CliError::Usage("--nz and --nw must be positive".into()));
    }
    Ok(model)
}

fn degree(l: i32) -> CliResult<HarmonicDegree> {
    Ok(HarmonicDegree::new(l)?)
}

pub fn interpolate(args: &InterpolateArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.model.config.as_deref())?;
    let model = resolve_model(&args.model, &config)?;
    let l = resolve(args.degree, &config, "degree", DEFAULT_DEGREE)?;
    check_degree(l, model.nz)?;

    let layout = args.model.layout();
    let nodes = load(&args.nodes, layout)?;
    let values = nodes.values().ok_or_else(|| {
        CliError::Data(format!("{}: node file has no value column", args.nodes.display()))
    })?;
    let targets = load(&args.eval, layout)?;
    if targets.is_empty() {
        return Err(CliError::Data(format!("{}: no evaluation points", args.eval.display())));
    }

    let kernel = ZonalKernel::inverse_multiquadric(model.gamma)?;
    let shepard = ShepardConfig::new(model.nz, model.nw, kernel, degree(l)?)?;
    let fitted = fit(nodes.points(), values, &shepard)?;
    let predicted = fitted.evaluate(targets.points())?;

    let result = PointSet::with_values(targets.points().to_vec(), predicted.clone())?;
    with_output(args.out.as_deref(), |w| write_csv(w, &result, "F"))?;

    if let Some(truth) = targets.values() {
        let report = error_report(&predicted, truth)?;
        let text = format!(
            "points={} rrmse={:.6e} rmse={:.6e} max_err={:.6e}",
            report.count, report.rrmse, report.rmse, report.max_abs_error
        );
        // keep standard output clean when it carries the CSV
        if args.out.is_some() {
            println!("{text}");
        } else {
            eprintln!("{text}");
        }
    }
    Ok(())
}

pub fn benchmark(args: &BenchmarkArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.model.config.as_deref())?;
    let model = resolve_model(&args.model, &config)?;
    let degrees = resolve_list(&args.degree, &config, "degree", DEFAULT_DEGREES)?;
    for &l in &degrees {
        check_degree(l, model.nz)?;
    }
    let seed = resolve(args.seed, &config, "seed", DEFAULT_SEED)?;
    let seed_count = resolve(args.seeds, &config, "seeds", DEFAULT_SEEDS)?;
    if seed_count == 0 {
        return Err(CliError::Usage("--seeds must be positive".into()));
    }

    let (source, default_s) = match &args.nodes {
        Some(path) => {
            let data = load(path, args.model.layout())?;
            if data.values().is_none() {
                return Err(CliError::Data(format!(
                    "{}: data set has no value column",
                    path.display()
                )));
            }
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "data".into());
            (DataSource::Dataset { label, data }, DEFAULT_HOLDOUT)
        }
        None => {
            let f = match args.function {
                Some(f) => TestFunction::from(f),
                None => parse_function(&config)?.unwrap_or(TestFunction::F1),
            };
            (DataSource::Function(f), DEFAULT_SPIRAL)
        }
    };
    let s = resolve(args.s, &config, "s", default_s)?;
    if s == 0 {
        return Err(CliError::Usage("--s must be positive".into()));
    }
    let node_counts = resolve_list(&args.n, &config, "n", DEFAULT_NODE_COUNTS)?;
    if node_counts.contains(&0) {
        return Err(CliError::Usage("--n values must be positive".into()));
    }

    let spec = BenchmarkSpec {
        source,
        node_counts,
        seeds: (0..seed_count as u64).map(|i| seed + i).collect(),
        degrees: degrees.iter().map(|&l| degree(l)).collect::<CliResult<_>>()?,
        gamma: model.gamma,
        nz: model.nz,
        nw: model.nw,
        eval_count: s,
    };
    spec.validate()?;

    fs::create_dir_all(&args.out).map_err(|e| io_error(args.out.display(), e))?;
    let rows = benchmark::run(&spec)?;
    let table = args.out.join("table.csv");
    with_output(Some(&table), |w| benchmark::write_table_csv(w, &rows))?;

    if !args.no_sweep {
        let sweep = benchmark::gamma_sweep(&spec)?;
        let path = args.out.join("gamma_sweep.csv");
        with_output(Some(&path), |w| benchmark::write_sweep_csv(w, &sweep))?;
    }

    let summary = benchmark::summary_table(&rows);
    let path = args.out.join("summary.txt");
    fs::write(&path, &summary).map_err(|e| io_error(path.display(), e))?;
    print!("{summary}");
    Ok(())
}
