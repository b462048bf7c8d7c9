//! Modified spherical Shepard interpolant.
//!
//! Fitting builds one local interpolant per node on its `n_Z` nearest
//! nodes. Evaluation blends, at each point `x`, the local interpolants of
//! the `n_W` nodes nearest `x` with normalized inverse-distance weights:
//!
//! ```text
//! F(x) = sum_j Z_j(x) W_j(x) / sum_k W_k(x),   W_j(x) = 1 / g(x, x_j)
//! ```
//!
//! Neighbor searches in both stages go through a [`ZoneIndex`] whose strip
//! width is the base cap radius for the respective neighborhood size.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harmonics::HarmonicDegree;
use crate::local_fit::{LocalFitOptions, LocalInterpolant, SolveMethod};
use crate::sphere::UnitVec;
use crate::zbf::ZonalKernel;
use crate::zone_index::{compute_delta, ZoneIndex};

/// Geodesic distances at or below this are treated as coinciding with a node.
pub const COINCIDENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShepardConfig {
    /// Nodes per local fit.
    pub nz: usize,
    /// Nodes blended per evaluation point.
    pub nw: usize,
    pub kernel: ZonalKernel,
    pub degree: HarmonicDegree,
    pub fit_options: LocalFitOptions,
}

impl ShepardConfig {
    pub fn new(nz: usize, nw: usize, kernel: ZonalKernel, degree: HarmonicDegree) -> Result<Self> {
        let config = Self {
            nz,
            nw,
            kernel,
            degree,
            fit_options: LocalFitOptions::default(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nz == 0 || self.nw == 0 {
            return Err(Error::Config(format!(
                "neighborhood sizes must be positive (n_Z = {}, n_W = {})",
                self.nz, self.nw
            )));
        }
        let u = self.degree.dim();
        if self.nz < u {
            return Err(Error::Config(format!(
                "n_Z = {} violates the necessary condition n_Z >= (L+1)^2 = {u} for L = {}",
                self.nz, self.degree
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitDiagnostics {
    /// Local fits that needed the least-squares fallback.
    pub fallbacks: usize,
    /// Local fits kept although their residual exceeds the configured
    /// tolerance.
    pub out_of_tolerance: usize,
    /// Largest radius escalation factor used in the localization stage.
    pub max_escalation: u64,
    pub max_relative_residual: f64,
}

/// One evaluated point with the bookkeeping used by tests and reports.
#[derive(Debug, Clone, PartialEq)]
pub struct PointEvaluation {
    pub value: f64,
    pub weight_sum: f64,
    pub escalation: u64,
    pub neighbor_ids: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ShepardModel {
    nodes: Vec<UnitVec>,
    values: Vec<f64>,
    locals: Vec<LocalInterpolant>,
    config: ShepardConfig,
    eval_index: ZoneIndex,
    diagnostics: FitDiagnostics,
}

/// Fits the model: one local interpolant per node.
pub fn fit(nodes: &[UnitVec], values: &[f64], config: &ShepardConfig) -> Result<ShepardModel> {
    config.validate()?;
    let n = nodes.len();
    if values.len() != n {
        return Err(Error::InvalidInput(format!(
            "{n} nodes but {} values",
            values.len()
        )));
    }
    if n < config.nz {
        return Err(Error::Config(format!(
            "{n} nodes is fewer than n_Z = {}",
            config.nz
        )));
    }
    if n < config.nw {
        return Err(Error::Config(format!(
            "{n} nodes is fewer than n_W = {}",
            config.nw
        )));
    }

    let fit_index = ZoneIndex::build(nodes, compute_delta(n, config.nz, 1))?;
    let eval_index = ZoneIndex::build(nodes, compute_delta(n, config.nw, 1))?;

    let results: Vec<Result<(LocalInterpolant, u64)>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let found = fit_index.nearest_m(&nodes[j], config.nz, n)?;
            let mut ids = found.neighbors.ids;
            // the node itself leads its own neighborhood
            match ids.iter().position(|&i| i == j) {
                Some(0) => {}
                Some(pos) => ids[..=pos].rotate_right(1),
                None => {
                    ids.pop();
                    ids.insert(0, j);
                }
            }
            let local_nodes: Vec<UnitVec> = ids.iter().map(|&i| nodes[i]).collect();
            let local_values: Vec<f64> = ids.iter().map(|&i| values[i]).collect();
            let z = LocalInterpolant::fit(
                &local_nodes,
                &local_values,
                config.kernel,
                config.degree,
                &config.fit_options,
                j,
            )?;
            Ok((z, found.escalation))
        })
        .collect();

    let mut locals = Vec::with_capacity(n);
    let mut diagnostics = FitDiagnostics::default();
    for r in results {
        let (z, k) = r?;
        let d = z.diagnostics();
        if d.method == SolveMethod::LeastSquares {
            diagnostics.fallbacks += 1;
        }
        if !d.within_tolerance {
            diagnostics.out_of_tolerance += 1;
        }
        diagnostics.max_escalation = diagnostics.max_escalation.max(k);
        diagnostics.max_relative_residual = diagnostics.max_relative_residual.max(d.relative_residual);
        locals.push(z);
    }
    if diagnostics.fallbacks > 0 {
        log::warn!(
            "{} of {n} local fits used the least-squares fallback",
            diagnostics.fallbacks
        );
    }
    if diagnostics.out_of_tolerance > 0 {
        log::warn!(
            "{} of {n} local fits missed the residual tolerance {:.1e} (worst {:.2e})",
            diagnostics.out_of_tolerance,
            config.fit_options.residual_tol,
            diagnostics.max_relative_residual
        );
    }

    Ok(ShepardModel {
        nodes: nodes.to_vec(),
        values: values.to_vec(),
        locals,
        config: *config,
        eval_index,
        diagnostics,
    })
}

/// Normalized Shepard weights for neighbors at the given geodesic
/// distances (nearest first). A neighbor within [`COINCIDENCE_TOL`] takes
/// all the weight.
pub fn weights(distances: &[f64]) -> Result<Vec<f64>> {
    if distances.is_empty() {
        return Err(Error::NoNodesInRange);
    }
    if let Some(hit) = distances.iter().position(|&d| d <= COINCIDENCE_TOL) {
        let mut w = vec![0.0; distances.len()];
        w[hit] = 1.0;
        return Ok(w);
    }
    let raw: Vec<f64> = distances.iter().map(|d| 1.0 / d).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / total).collect())
}

impl ShepardModel {
    pub fn nodes(&self) -> &[UnitVec] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn locals(&self) -> &[LocalInterpolant] {
        &self.locals
    }

    pub fn config(&self) -> &ShepardConfig {
        &self.config
    }

    pub fn diagnostics(&self) -> FitDiagnostics {
        self.diagnostics
    }

    /// Evaluates `F` at one point, returning the bookkeeping as well.
    pub fn evaluate_point(&self, x: &UnitVec) -> Result<PointEvaluation> {
        let n = self.nodes.len();
        let found = self.eval_index.nearest_m(x, self.config.nw, n)?;
        let w = weights(&found.neighbors.distances)?;
        let mut value = 0.0;
        let mut weight_sum = 0.0;
        for (&j, &wj) in found.neighbors.ids.iter().zip(&w) {
            weight_sum += wj;
            if wj != 0.0 {
                value += wj * self.locals[j].eval(x);
            }
        }
        Ok(PointEvaluation {
            value,
            weight_sum,
            escalation: found.escalation,
            neighbor_ids: found.neighbors.ids,
        })
    }

    /// `F` at every point, evaluated in parallel.
    pub fn evaluate(&self, points: &[UnitVec]) -> Result<Vec<f64>> {
        points
            .par_iter()
            .map(|x| self.evaluate_point(x).map(|e| e.value))
            .collect()
    }

    pub fn evaluate_detailed(&self, points: &[UnitVec]) -> Result<Vec<PointEvaluation>> {
        points.par_iter().map(|x| self.evaluate_point(x)).collect()
    }
}

/// Evaluates a fitted model at `points`.
pub fn evaluate(model: &ShepardModel, points: &[UnitVec]) -> Result<Vec<f64>> {
    model.evaluate(points)
}
