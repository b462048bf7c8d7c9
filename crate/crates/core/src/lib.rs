//! Scattered data interpolation on the unit sphere with a modified
//! Shepard partition of unity.
//!
//! Each node carries a local interpolant built on its nearest neighbors
//! from a zonal kernel (the spherical inverse multiquadric) and, optionally,
//! a spherical harmonic part of degree at most `L`. Evaluation blends the
//! local interpolants of the nodes nearest the query point with normalized
//! inverse-distance weights. All neighbor searches use a latitude-strip
//! index whose strip width adapts to the node density.
//!
//! ```
//! use zonal_shepard::{fit, random_uniform_sphere, spiral_points, HarmonicDegree,
//!     ShepardConfig, TestFunction, ZonalKernel};
//!
//! let nodes = random_uniform_sphere(1000, 7).sample(|p| TestFunction::F1.eval(p));
//! let config = ShepardConfig::new(
//!     15,
//!     10,
//!     ZonalKernel::inverse_multiquadric(0.5).unwrap(),
//!     HarmonicDegree::new(2).unwrap(),
//! )
//! .unwrap();
//! let model = fit(nodes.points(), nodes.values().unwrap(), &config).unwrap();
//! let values = model.evaluate(spiral_points(100).unwrap().points()).unwrap();
//! assert_eq!(values.len(), 100);
//! ```

pub mod benchmark;
pub mod datasets;
pub mod error;
pub mod harmonics;
pub mod local_fit;
pub mod metrics;
pub mod shepard;
pub mod sphere;
pub mod zbf;
pub mod zone_index;

pub use datasets::{
    geomagnetic_synthetic, load_csv, parse_csv, random_uniform_sphere, spiral_points,
    split_cross_validation, test_function, write_csv, CsvLayout, GeomagneticField,
    GeomagneticSynth, PointSet, TestFunction,
};
pub use error::{Error, Result};
pub use harmonics::{sh_basis, sh_basis_into, sh_dim, sh_orthonormality_check, HarmonicDegree};
pub use local_fit::{
    build_local_interpolant, eval_local, LocalFitOptions, LocalInterpolant, SolveDiagnostics,
    SolveMethod,
};
pub use metrics::{error_report, median, rrmse, ErrorReport};
pub use shepard::{evaluate, fit, weights, FitDiagnostics, PointEvaluation, ShepardConfig, ShepardModel};
pub use sphere::{geodesic_distance, SphericalCap, UnitVec};
pub use zbf::{KernelFamily, ZonalKernel};
pub use zone_index::{compute_delta, NearestResult, NeighborSet, ZoneIndex};
