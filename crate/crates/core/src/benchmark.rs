//! Benchmark grid runner: RRMSE tables over node counts, harmonic degrees
//! and seeds, plus the shape-parameter sweep.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::time::Instant;

use crate::datasets::{random_uniform_sphere, spiral_points, split_cross_validation, PointSet, TestFunction};
use crate::error::{Error, Result};
use crate::harmonics::HarmonicDegree;
use crate::metrics::{error_report, median, ErrorReport};
use crate::shepard::{fit, ShepardConfig};
use crate::zbf::ZonalKernel;

/// Where node data comes from.
#[derive(Debug, Clone)]
pub enum DataSource {
    /// Random uniform nodes of each requested size carrying a test function;
    /// evaluated on a spiral.
    Function(TestFunction),
    /// A fixed data set; each seed draws a random holdout of `eval_count`
    /// points and fits on the rest.
    Dataset { label: String, data: PointSet },
}

impl DataSource {
    pub fn label(&self) -> String {
        match self {
            DataSource::Function(f) => f.to_string(),
            DataSource::Dataset { label, .. } => label.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub source: DataSource,
    /// Ignored for [`DataSource::Dataset`].
    pub node_counts: Vec<usize>,
    pub seeds: Vec<u64>,
    pub degrees: Vec<HarmonicDegree>,
    pub gamma: f64,
    pub nz: usize,
    pub nw: usize,
    /// Spiral size, or holdout size for data sets.
    pub eval_count: usize,
}

impl BenchmarkSpec {
    /// The defaults of the published tables: `gamma = 0.5`, `n_Z = 15`,
    /// `n_W = 10`, 600 spiral points, `L` from -1 to 2 and five seeds.
    pub fn tables(function: TestFunction, node_counts: Vec<usize>) -> Self {
        Self {
            source: DataSource::Function(function),
            node_counts,
            seeds: (1..=5).collect(),
            degrees: (-1..=2).map(|l| HarmonicDegree::new(l).expect("valid degree")).collect(),
            gamma: 0.5,
            nz: 15,
            nw: 10,
            eval_count: 600,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ZonalKernel::inverse_multiquadric(self.gamma)?;
        for &d in &self.degrees {
            ShepardConfig::new(self.nz, self.nw, ZonalKernel::inverse_multiquadric(self.gamma)?, d)?;
        }
        if self.seeds.is_empty() || self.degrees.is_empty() {
            return Err(Error::Config("benchmark needs at least one seed and one degree".into()));
        }
        match &self.source {
            DataSource::Function(_) => {
                if self.eval_count < 2 {
                    return Err(Error::Config(format!(
                        "need at least 2 spiral evaluation points, got {}",
                        self.eval_count
                    )));
                }
                if self.node_counts.is_empty() {
                    return Err(Error::Config("no node counts given".into()));
                }
            }
            DataSource::Dataset { data, .. } => {
                if self.eval_count == 0 {
                    return Err(Error::Config("holdout size must be positive".into()));
                }
                if data.values().is_none() {
                    return Err(Error::InvalidInput("data set has no values".into()));
                }
                if data.len() < self.eval_count + self.nz.max(self.nw) {
                    return Err(Error::Config(format!(
                        "data set of {} points is too small for a holdout of {}",
                        data.len(),
                        self.eval_count
                    )));
                }
            }
        }
        Ok(())
    }

    /// Node counts actually used by [`run`].
    pub fn effective_node_counts(&self) -> Vec<usize> {
        match &self.source {
            DataSource::Function(_) => self.node_counts.clone(),
            DataSource::Dataset { data, .. } => vec![data.len() - self.eval_count],
        }
    }
}

/// One fitted and evaluated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub source: String,
    pub n: usize,
    pub degree: HarmonicDegree,
    pub seed: u64,
    pub gamma: f64,
    pub nz: usize,
    pub nw: usize,
    pub eval_count: usize,
    pub report: ErrorReport,
    pub fit_seconds: f64,
    pub eval_seconds: f64,
}

/// Training and test sets for one (n, seed) cell.
fn cell_data(spec: &BenchmarkSpec, n: usize, seed: u64) -> Result<(PointSet, PointSet)> {
    match &spec.source {
        DataSource::Function(f) => {
            let f = *f;
            let nodes = random_uniform_sphere(n, seed).sample(|p| f.eval(p));
            let eval = spiral_points(spec.eval_count)?.sample(|p| f.eval(p));
            Ok((nodes, eval))
        }
        DataSource::Dataset { data, .. } => split_cross_validation(data, spec.eval_count, seed),
    }
}

fn run_one(
    spec: &BenchmarkSpec,
    train: &PointSet,
    test: &PointSet,
    degree: HarmonicDegree,
    gamma: f64,
) -> Result<(ErrorReport, f64, f64)> {
    let config = ShepardConfig::new(spec.nz, spec.nw, ZonalKernel::inverse_multiquadric(gamma)?, degree)?;
    let values = train.values().expect("training values");
    let t0 = Instant::now();
    let model = fit(train.points(), values, &config)?;
    let fit_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let predicted = model.evaluate(test.points())?;
    let eval_seconds = t1.elapsed().as_secs_f64();
    let report = error_report(&predicted, test.values().expect("test values"))?;
    Ok((report, fit_seconds, eval_seconds))
}

/// Runs every (n, L, seed) cell of the grid in order.
pub fn run(spec: &BenchmarkSpec) -> Result<Vec<BenchmarkRow>> {
    spec.validate()?;
    let label = spec.source.label();
    let mut rows = Vec::new();
    for n in spec.effective_node_counts() {
        for &seed in &spec.seeds {
            let (train, test) = cell_data(spec, n, seed)?;
            for &degree in &spec.degrees {
                let (report, fit_seconds, eval_seconds) = run_one(spec, &train, &test, degree, spec.gamma)?;
                log::info!(
                    "{label} n={n} L={degree} seed={seed}: rrmse {:.4e} ({fit_seconds:.3}s fit)",
                    report.rrmse
                );
                rows.push(BenchmarkRow {
                    source: label.clone(),
                    n: train.len(),
                    degree,
                    seed,
                    gamma: spec.gamma,
                    nz: spec.nz,
                    nw: spec.nw,
                    eval_count: test.len(),
                    report,
                    fit_seconds,
                    eval_seconds,
                });
            }
        }
    }
    Ok(rows)
}

/// Shape parameters of the sweep: 0.05, 0.10, ..., 0.95.
pub fn sweep_gammas() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub source: String,
    pub n: usize,
    pub degree: HarmonicDegree,
    pub seed: u64,
    pub gamma: f64,
    pub rrmse: f64,
}

/// RRMSE as a function of the shape parameter, for every node count and
/// degree of the grid, on the first seed.
pub fn gamma_sweep(spec: &BenchmarkSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let label = spec.source.label();
    let seed = spec.seeds[0];
    let mut rows = Vec::new();
    for n in spec.effective_node_counts() {
        let (train, test) = cell_data(spec, n, seed)?;
        for &degree in &spec.degrees {
            for gamma in sweep_gammas() {
                let (report, _, _) = run_one(spec, &train, &test, degree, gamma)?;
                rows.push(SweepRow {
                    source: label.clone(),
                    n: train.len(),
                    degree,
                    seed,
                    gamma,
                    rrmse: report.rrmse,
                });
            }
        }
    }
    Ok(rows)
}

/// Median RRMSE over seeds, keyed by `(source, n, L)`.
pub fn median_rrmse(rows: &[BenchmarkRow]) -> BTreeMap<(String, usize, HarmonicDegree), f64> {
    let mut groups: BTreeMap<(String, usize, HarmonicDegree), Vec<f64>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.source.clone(), r.n, r.degree))
            .or_default()
            .push(r.report.rrmse);
    }
    groups
        .into_iter()
        .map(|(k, v)| (k, median(&v).expect("nonempty group")))
        .collect()
}

pub const TABLE_HEADER: &str =
    "function,n,L,seed,gamma,nz,nw,s,rrmse,rmse,max_err,fit_time,eval_time";

pub fn write_table_csv<W: Write>(mut w: W, rows: &[BenchmarkRow]) -> io::Result<()> {
    writeln!(w, "{TABLE_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{:e},{:e},{:e},{:.6},{:.6}",
            r.source,
            r.n,
            r.degree,
            r.seed,
            r.gamma,
            r.nz,
            r.nw,
            r.eval_count,
            r.report.rrmse,
            r.report.rmse,
            r.report.max_abs_error,
            r.fit_seconds,
            r.eval_seconds
        )?;
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "function,n,L,seed,gamma,rrmse")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{:.2},{:e}",
            r.source, r.n, r.degree, r.seed, r.gamma, r.rrmse
        )?;
    }
    Ok(())
}

/// Text table of median RRMSE with one row per degree and one column per
/// node count, for each source.
pub fn summary_table(rows: &[BenchmarkRow]) -> String {
    let medians = median_rrmse(rows);
    let mut out = String::new();
    let mut sources: Vec<&String> = medians.keys().map(|k| &k.0).collect();
    sources.dedup();
    for source in sources {
        let mut ns: Vec<usize> = medians.keys().filter(|k| &k.0 == source).map(|k| k.1).collect();
        ns.sort_unstable();
        ns.dedup();
        let mut degrees: Vec<HarmonicDegree> =
            medians.keys().filter(|k| &k.0 == source).map(|k| k.2).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let seeds = rows.iter().filter(|r| &r.source == source).map(|r| r.seed).collect::<std::collections::BTreeSet<_>>().len();
        let _ = writeln!(out, "median RRMSE for {source} over {seeds} seed(s)");
        let _ = write!(out, "{:>8}", "L \\ n");
        for n in &ns {
            let _ = write!(out, " {n:>12}");
        }
        out.push('\n');
        for d in &degrees {
            let _ = write!(out, "{:>8}", d.to_string());
            for n in &ns {
                match medians.get(&(source.clone(), *n, *d)) {
                    Some(v) => {
                        let _ = write!(out, " {v:>12.4e}");
                    }
                    None => {
                        let _ = write!(out, " {:>12}", "-");
                    }
                }
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::{geomagnetic_synthetic, GeomagneticSynth};

    fn small_spec() -> BenchmarkSpec {
        BenchmarkSpec {
            seeds: vec![1, 2],
            eval_count: 100,
            ..BenchmarkSpec::tables(TestFunction::F1, vec![300])
        }
    }

    #[test]
    fn grid_rows_and_determinism() {
        let spec = small_spec();
        let rows = run(&spec).unwrap();
        assert_eq!(rows.len(), 2 * 4);
        let again = run(&spec).unwrap();
        for (a, b) in rows.iter().zip(&again) {
            assert_eq!(a.report, b.report);
        }
        let mut buf = Vec::new();
        write_table_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.starts_with(TABLE_HEADER));
        assert!(!text.contains('\r'));
        let summary = summary_table(&rows);
        assert!(summary.contains("f1"));
        assert_eq!(median_rrmse(&rows).len(), 4);
    }

    #[test]
    fn validation() {
        let mut spec = small_spec();
        spec.eval_count = 0;
        assert!(spec.validate().is_err());
        let mut spec = small_spec();
        spec.gamma = 1.0;
        assert!(spec.validate().is_err());
        let mut spec = small_spec();
        spec.degrees = vec![HarmonicDegree::new(3).unwrap()];
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn dataset_holdout() {
        let data = geomagnetic_synthetic(400, 2, GeomagneticSynth::default());
        let spec = BenchmarkSpec {
            source: DataSource::Dataset {
                label: "geo".into(),
                data,
            },
            node_counts: vec![],
            seeds: vec![1],
            degrees: vec![HarmonicDegree::NONE],
            gamma: 0.96,
            nz: 12,
            nw: 10,
            eval_count: 50,
        };
        let rows = run(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n, 350);
        assert_eq!(rows[0].eval_count, 50);
    }

    #[test]
    fn sweep_grid() {
        let g = sweep_gammas();
        assert_eq!(g.len(), 19);
        assert!((g[0] - 0.05).abs() < 1e-15 && (g[18] - 0.95).abs() < 1e-12);
        let mut spec = small_spec();
        spec.degrees = vec![HarmonicDegree::NONE];
        let rows = gamma_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 19);
        assert!(rows.iter().all(|r| r.rrmse.is_finite()));
    }
}
