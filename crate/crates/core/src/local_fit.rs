//! One augmented local interpolant: a zonal-kernel expansion over a small
//! neighborhood plus a low-degree spherical harmonic part, with the kernel
//! coefficients constrained to be orthogonal to the harmonic space.
//!
//! The coefficients solve the saddle-point system
//!
//! ```text
//! [ A   Y ] [a]   [f]
//! [ Y^T 0 ] [b] = [0]
//! ```
//!
//! where `A` is the kernel matrix of the neighborhood and `Y[i][k]` is the
//! `k`-th harmonic evaluated at node `i`.
//!
//! When the harmonic part contains the constant (`L >= 0`) the moment
//! conditions force `sum a_i = 0`, so the kernel may be shifted by any
//! constant without changing the interpolant. The fit subtracts `psi(0)`,
//! which keeps kernel entries small on tight neighborhoods and cuts the
//! rounding error of both the solve and the evaluation.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::harmonics::{sh_basis_into, HarmonicDegree};
use crate::sphere::UnitVec;
use crate::zbf::ZonalKernel;

/// Basis buffers up to this length stay on the stack.
const STACK_BASIS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFitOptions {
    /// Relative interpolation residual a fit is expected to meet.
    pub residual_tol: f64,
    /// Residual above which the system is treated as singular and the fit
    /// fails. Fits between the two bounds are kept and flagged.
    pub failure_tol: f64,
}

impl Default for LocalFitOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-8,
            failure_tol: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// LU with partial pivoting.
    Lu,
    /// Least squares through the singular value decomposition, used when
    /// the LU route fails or misses the residual tolerance.
    LeastSquares,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveDiagnostics {
    pub method: SolveMethod,
    /// `max_i |Z(x_i) - f_i| / max_i |f_i|` as assembled.
    pub relative_residual: f64,
    /// Whether `relative_residual <= residual_tol`.
    pub within_tolerance: bool,
}

/// A fitted local interpolant `Z(x) = sum a_i psi(g(x, x_i)) + sum b_k Y_k(x)`.
#[derive(Debug, Clone)]
pub struct LocalInterpolant {
    centers: Vec<UnitVec>,
    a: Vec<f64>,
    b: Vec<f64>,
    kernel: ZonalKernel,
    /// Constant subtracted from every kernel value.
    shift: f64,
    degree: HarmonicDegree,
    diagnostics: SolveDiagnostics,
}

/// Fits a local interpolant with default options.
pub fn build_local_interpolant(
    nodes: &[UnitVec],
    values: &[f64],
    kernel: ZonalKernel,
    degree: HarmonicDegree,
) -> Result<LocalInterpolant> {
    LocalInterpolant::fit(nodes, values, kernel, degree, &LocalFitOptions::default(), 0)
}

impl LocalInterpolant {
    /// Solves the saddle-point system for one neighborhood. `neighborhood`
    /// only labels errors.
    pub fn fit(
        nodes: &[UnitVec],
        values: &[f64],
        kernel: ZonalKernel,
        degree: HarmonicDegree,
        opts: &LocalFitOptions,
        neighborhood: usize,
    ) -> Result<Self> {
        let n = nodes.len();
        let u = degree.dim();
        if values.len() != n {
            return Err(Error::InvalidInput(format!(
                "{n} nodes but {} values",
                values.len()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("empty neighborhood".into()));
        }
        if n < u {
            return Err(Error::Config(format!(
                "neighborhood of {n} nodes is smaller than the harmonic space dimension {u} \
                 (need n_Z >= (L+1)^2)"
            )));
        }

        let shift = if u > 0 { kernel.eval_cos(1.0) } else { 0.0 };
        let size = n + u;
        let mut m = DMatrix::<f64>::zeros(size, size);
        let mut a = kernel.kernel_matrix(nodes);
        a.add_scalar_mut(-shift);
        m.view_mut((0, 0), (n, n)).copy_from(&a);
        let mut y = vec![0.0; u];
        for (i, p) in nodes.iter().enumerate() {
            sh_basis_into(p, degree, &mut y);
            for (k, &yk) in y.iter().enumerate() {
                m[(i, n + k)] = yk;
                m[(n + k, i)] = yk;
            }
        }
        let mut rhs = DVector::<f64>::zeros(size);
        rhs.rows_mut(0, n).copy_from_slice(values);

        let scale = values.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let residual = |sol: &DVector<f64>| -> f64 {
            let r = (&m * sol - &rhs).rows(0, n).amax();
            if scale > 0.0 {
                r / scale
            } else {
                r
            }
        };
        let finite = |sol: &DVector<f64>| sol.iter().all(|v| v.is_finite());

        let mut best: Option<(DVector<f64>, SolveMethod, f64)> = None;
        if let Some(sol) = m.clone().lu().solve(&rhs).filter(finite) {
            let r = residual(&sol);
            best = Some((sol, SolveMethod::Lu, r));
        }
        if best.as_ref().is_none_or(|b| b.2 > opts.residual_tol) {
            log::debug!("neighborhood {neighborhood}: LU rejected, trying least squares");
            let svd = m.clone().svd(true, true);
            let eps = f64::EPSILON * size as f64 * svd.singular_values.max();
            if let Some(sol) = svd.solve(&rhs, eps).ok().filter(finite) {
                let r = residual(&sol);
                if best.as_ref().is_none_or(|b| r < b.2) {
                    best = Some((sol, SolveMethod::LeastSquares, r));
                }
            }
        }
        let (sol, method, relative_residual) = match best {
            Some(b) if b.2 <= opts.failure_tol => b,
            Some(b) => {
                return Err(Error::SolveFailure {
                    neighborhood,
                    detail: format!(
                        "saddle-point system is numerically singular (relative residual {:.3e})",
                        b.2
                    ),
                })
            }
            None => {
                return Err(Error::SolveFailure {
                    neighborhood,
                    detail: "no finite solution".into(),
                })
            }
        };

        Ok(Self {
            centers: nodes.to_vec(),
            a: sol.rows(0, n).iter().copied().collect(),
            b: sol.rows(n, u).iter().copied().collect(),
            kernel,
            shift,
            degree,
            diagnostics: SolveDiagnostics {
                method,
                relative_residual,
                within_tolerance: relative_residual <= opts.residual_tol,
            },
        })
    }

    pub fn centers(&self) -> &[UnitVec] {
        &self.centers
    }

    pub fn kernel_coefficients(&self) -> &[f64] {
        &self.a
    }

    pub fn harmonic_coefficients(&self) -> &[f64] {
        &self.b
    }

    pub fn kernel(&self) -> ZonalKernel {
        self.kernel
    }

    pub fn degree(&self) -> HarmonicDegree {
        self.degree
    }

    pub fn diagnostics(&self) -> SolveDiagnostics {
        self.diagnostics
    }

    /// Evaluates the interpolant at `x`.
    pub fn eval(&self, x: &UnitVec) -> f64 {
        let mut s: f64 = self
            .centers
            .iter()
            .zip(&self.a)
            .map(|(c, a)| a * (self.kernel.between(x, c) - self.shift))
            .sum();
        let u = self.b.len();
        if u > 0 {
            let mut stack = [0.0; STACK_BASIS];
            let mut heap;
            let y: &mut [f64] = if u <= STACK_BASIS {
                &mut stack[..u]
            } else {
                heap = vec![0.0; u];
                &mut heap
            };
            sh_basis_into(x, self.degree, y);
            s += y.iter().zip(&self.b).map(|(y, b)| y * b).sum::<f64>();
        }
        s
    }

    /// Worst normalized moment residual
    /// `|sum_i a_i Y_k(x_i)| / (||a|| max_i |Y_k(x_i)|)` over all `k`.
    pub fn moment_residual(&self) -> f64 {
        let u = self.degree.dim();
        if u == 0 {
            return 0.0;
        }
        let mut sums = vec![0.0; u];
        let mut maxes = vec![0.0f64; u];
        let mut y = vec![0.0; u];
        for (c, a) in self.centers.iter().zip(&self.a) {
            sh_basis_into(c, self.degree, &mut y);
            for k in 0..u {
                sums[k] += a * y[k];
                maxes[k] = maxes[k].max(y[k].abs());
            }
        }
        let anorm = self.a.iter().map(|a| a * a).sum::<f64>().sqrt();
        sums.iter()
            .zip(&maxes)
            .map(|(s, m)| {
                let denom = anorm * m;
                if denom > 0.0 {
                    s.abs() / denom
                } else {
                    s.abs()
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Evaluates `Z` at `x`.
pub fn eval_local(z: &LocalInterpolant, x: &UnitVec) -> f64 {
    z.eval(x)
}
