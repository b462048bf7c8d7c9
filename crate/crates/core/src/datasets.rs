//! Node and evaluation-point generation, test functions, CSV files and
//! cross-validation splits.
//!
//! Random point sets use `ChaCha8Rng` seeded through `seed_from_u64`, and
//! each point is a normalized triple of standard normal deviates, which is
//! uniformly distributed on the sphere.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::sphere::{geodesic_distance, UnitVec};

/// Points on the sphere, optionally with one data value per point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointSet {
    points: Vec<UnitVec>,
    values: Option<Vec<f64>>,
}

impl PointSet {
    pub fn new(points: Vec<UnitVec>) -> Self {
        Self {
            points,
            values: None,
        }
    }

    pub fn with_values(points: Vec<UnitVec>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        Ok(Self {
            points,
            values: Some(values),
        })
    }

    pub fn points(&self) -> &[UnitVec] {
        &self.points
    }

    pub fn values(&self) -> Option<&[f64]> {
        self.values.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Attaches `f(p)` as the value of every point.
    pub fn sample(mut self, f: impl Fn(&UnitVec) -> f64) -> Self {
        self.values = Some(self.points.iter().map(f).collect());
        self
    }

    fn subset(&self, ids: &[usize]) -> Self {
        Self {
            points: ids.iter().map(|&i| self.points[i]).collect(),
            values: self
                .values
                .as_ref()
                .map(|v| ids.iter().map(|&i| v[i]).collect()),
        }
    }
}

/// `n` independent uniform points, reproducible per `seed`.
pub fn random_uniform_sphere(n: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let x: f64 = StandardNormal.sample(&mut rng);
        let y: f64 = StandardNormal.sample(&mut rng);
        let z: f64 = StandardNormal.sample(&mut rng);
        if x * x + y * y + z * z < 1e-20 {
            continue;
        }
        points.push(UnitVec::normalize(x, y, z).expect("nonzero gaussian triple"));
    }
    PointSet::new(points)
}

/// Generalized spiral of `s` points from the south pole to the north pole.
pub fn spiral_points(s: usize) -> Result<PointSet> {
    if s < 2 {
        return Err(Error::InvalidInput(format!(
            "spiral needs at least 2 points, got {s}"
        )));
    }
    let step = 3.6 / (s as f64).sqrt();
    let mut points = Vec::with_capacity(s);
    let mut phi = 0.0f64;
    for k in 0..s {
        let z = -1.0 + 2.0 * k as f64 / (s - 1) as f64;
        if k == 0 || k == s - 1 {
            phi = 0.0;
        } else {
            phi = (phi + step / (1.0 - z * z).sqrt()) % (2.0 * PI);
        }
        let p = if k == 0 {
            UnitVec::SOUTH
        } else if k == s - 1 {
            UnitVec::NORTH
        } else {
            UnitVec::from_spherical(z.acos(), phi)
        };
        points.push(p);
    }
    Ok(PointSet::new(points))
}

/// The two smooth test functions used in the benchmark tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFunction {
    /// `(e^x + 2 e^(y + z)) / 10`
    F1,
    /// `sin x sin y sin z`
    F2,
}

impl TestFunction {
    pub fn eval(self, p: &UnitVec) -> f64 {
        let (x, y, z) = (p.x(), p.y(), p.z());
        match self {
            TestFunction::F1 => (x.exp() + 2.0 * (y + z).exp()) / 10.0,
            TestFunction::F2 => x.sin() * y.sin() * z.sin(),
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(TestFunction::F1),
            "f2" => Ok(TestFunction::F2),
            other => Err(Error::InvalidInput(format!("unknown test function '{other}'"))),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestFunction::F1 => "f1",
            TestFunction::F2 => "f2",
        })
    }
}

/// Evaluates test function `id` (`"f1"` or `"f2"`) at `p`.
pub fn test_function(id: &str, p: &UnitVec) -> Result<f64> {
    Ok(id.parse::<TestFunction>()?.eval(p))
}

/// Layout of the rows of a node file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CsvLayout {
    /// `x,y,z,value`
    #[default]
    Cartesian,
    /// `lat,lon,value` in degrees
    Geographic,
}

impl CsvLayout {
    fn fields(self) -> usize {
        match self {
            CsvLayout::Cartesian => 4,
            CsvLayout::Geographic => 3,
        }
    }
}

/// Reads a node file. A header line is accepted as the first line only.
pub fn load_csv(path: impl AsRef<Path>, layout: CsvLayout) -> Result<PointSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_csv(&text, layout).map_err(|e| match e {
        Error::Parse { line, msg, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        },
        other => other,
    })
}

/// Parses node-file text; see [`load_csv`]. Rows may omit the value
/// column, in which case every row must and the set carries no values.
pub fn parse_csv(text: &str, layout: CsvLayout) -> Result<PointSet> {
    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut width = None;
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: "<input>".into(),
        line,
        msg,
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let nums: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let nums = match nums {
            Ok(v) => v,
            Err(_) if line_no == 1 => continue, // header
            Err(e) => return Err(parse_err(line_no, format!("bad number: {e}"))),
        };
        let full = layout.fields();
        match width {
            None if nums.len() == full || nums.len() == full - 1 => width = Some(nums.len()),
            Some(w) if w == nums.len() => {}
            _ => {
                return Err(parse_err(
                    line_no,
                    format!(
                        "expected {} fields, found {}",
                        width.unwrap_or(full),
                        nums.len()
                    ),
                ))
            }
        }
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(parse_err(line_no, "non-finite field".into()));
        }
        let p = match layout {
            CsvLayout::Cartesian => UnitVec::normalize(nums[0], nums[1], nums[2]),
            CsvLayout::Geographic => UnitVec::from_lat_lon_deg(nums[0], nums[1]),
        }
        .map_err(|e| parse_err(line_no, e.to_string()))?;
        points.push(p);
        if nums.len() == full {
            values.push(nums[full - 1]);
        }
    }
    if points.is_empty() {
        log::warn!("node file contains no data rows");
        return Ok(PointSet::default());
    }
    if width == Some(layout.fields()) {
        PointSet::with_values(points, values)
    } else {
        Ok(PointSet::new(points))
    }
}

/// Writes `x,y,z,<value_name>` rows (or `x,y,z` without values), LF endings.
pub fn write_csv<W: Write>(mut w: W, set: &PointSet, value_name: &str) -> io::Result<()> {
    match set.values() {
        Some(values) => {
            writeln!(w, "x,y,z,{value_name}")?;
            for (p, v) in set.points().iter().zip(values) {
                writeln!(w, "{},{},{},{}", p.x(), p.y(), p.z(), v)?;
            }
        }
        None => {
            writeln!(w, "x,y,z")?;
            for p in set.points() {
                writeln!(w, "{},{},{}", p.x(), p.y(), p.z())?;
            }
        }
    }
    Ok(())
}

/// Random disjoint split into `size - s` training points and `s` test points.
pub fn split_cross_validation(data: &PointSet, s: usize, seed: u64) -> Result<(PointSet, PointSet)> {
    if s >= data.len() && !(s == 0 && data.is_empty()) {
        return Err(Error::InvalidInput(format!(
            "holdout size {s} must be smaller than the data set ({})",
            data.len()
        )));
    }
    let mut ids: Vec<usize> = (0..data.len()).collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (test, train) = ids.split_at_mut(s);
    test.sort_unstable();
    train.sort_unstable();
    Ok((data.subset(train), data.subset(test)))
}

/// Parameters of the synthetic geomagnetic-like field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeomagneticSynth {
    /// Dipole strength at the equator, in units of 10^4 nT.
    pub dipole: f64,
    /// Number of localized crustal-style anomalies.
    pub anomalies: usize,
    /// Standard deviation of additive noise; zero for none.
    pub noise: f64,
}

impl Default for GeomagneticSynth {
    fn default() -> Self {
        Self {
            dipole: 3.0,
            anomalies: 40,
            noise: 0.0,
        }
    }
}

/// A smooth geomagnetic-like scalar field: total intensity of a tilted
/// dipole with a weak axial quadrupole, plus Gaussian-shaped anomalies.
#[derive(Debug, Clone)]
pub struct GeomagneticField {
    axis: UnitVec,
    params: GeomagneticSynth,
    anomalies: Vec<(UnitVec, f64, f64)>,
}

impl GeomagneticField {
    pub fn new(params: GeomagneticSynth, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d61_6773_6174);
        // dipole tilted about 11 degrees from the rotation axis
        let axis = UnitVec::from_spherical(0.19, rng.random_range(0.0..2.0 * PI));
        let centers = random_uniform_sphere(params.anomalies, rng.random());
        let anomalies = centers
            .points()
            .iter()
            .map(|&c| {
                let amp = rng.random_range(0.02..0.15) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                let width = rng.random_range(0.08..0.3);
                (c, amp, width)
            })
            .collect();
        Self {
            axis,
            params,
            anomalies,
        }
    }

    pub fn eval(&self, p: &UnitVec) -> f64 {
        let c = p.dot(&self.axis);
        let dipole = self.params.dipole * (1.0 + 3.0 * c * c).sqrt();
        let quad = 0.05 * self.params.dipole * (3.0 * p.z() * p.z() - 1.0) / 2.0;
        let local: f64 = self
            .anomalies
            .iter()
            .map(|(center, amp, width)| {
                let t = geodesic_distance(p, center) / width;
                amp * (-t * t).exp()
            })
            .sum();
        dipole + quad + local
    }
}

/// `n` random nodes carrying values of a [`GeomagneticField`]; noise, when
/// configured, is added to the stored values only.
pub fn geomagnetic_synthetic(n: usize, seed: u64, params: GeomagneticSynth) -> PointSet {
    let field = GeomagneticField::new(params, seed);
    let set = random_uniform_sphere(n, seed);
    let mut values: Vec<f64> = set.points().iter().map(|p| field.eval(p)).collect();
    if params.noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let normal = Normal::new(0.0, params.noise).expect("positive noise deviation");
        for v in &mut values {
            *v += normal.sample(&mut rng);
        }
    }
    PointSet::with_values(set.points, values).expect("lengths match")
}
