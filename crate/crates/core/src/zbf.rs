//! Zonal basis functions: kernels of geodesic distance on the sphere.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sphere::UnitVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[non_exhaustive]
pub enum KernelFamily {
    /// `psi(t) = (1 + gamma^2 - 2 gamma cos t)^(-1/2)`.
    InverseMultiquadric,
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelFamily::InverseMultiquadric => f.write_str("imq"),
        }
    }
}

/// A zonal kernel with its shape parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZonalKernel {
    family: KernelFamily,
    gamma: f64,
}

impl ZonalKernel {
    /// Spherical inverse multiquadric; `gamma` must lie strictly inside `(0, 1)`.
    pub fn inverse_multiquadric(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Config(format!(
                "IMQ shape parameter must lie in (0, 1), got {gamma}"
            )));
        }
        Ok(Self {
            family: KernelFamily::InverseMultiquadric,
            gamma,
        })
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Kernel value at geodesic distance `t` (radians).
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_cos(t.cos())
    }

    /// Kernel value from the cosine of the geodesic distance, i.e. the dot
    /// product of the two unit vectors.
    #[inline]
    pub fn eval_cos(&self, c: f64) -> f64 {
        match self.family {
            KernelFamily::InverseMultiquadric => {
                let g = self.gamma;
                let c = c.clamp(-1.0, 1.0);
                // (1 - g)^2 + 2 g (1 - c) keeps precision near c = 1
                let d = 1.0 - g;
                1.0 / (d * d + 2.0 * g * (1.0 - c)).sqrt()
            }
        }
    }

    #[inline]
    pub fn between(&self, u: &UnitVec, v: &UnitVec) -> f64 {
        self.eval_cos(u.dot(v))
    }

    /// Symmetric matrix `A[i][j] = psi(g(x_i, x_j))`.
    pub fn kernel_matrix(&self, nodes: &[UnitVec]) -> DMatrix<f64> {
        let n = nodes.len();
        let mut a = DMatrix::zeros(n, n);
        let diag = self.eval_cos(1.0);
        for i in 0..n {
            a[(i, i)] = diag;
            for j in (i + 1)..n {
                let v = self.between(&nodes[i], &nodes[j]);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        a
    }
}
