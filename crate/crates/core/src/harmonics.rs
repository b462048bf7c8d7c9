//! Real orthonormal spherical harmonics.
//!
//! Basis values are ordered degree-major and, within degree `d`, by the
//! order index `m = -d..=d`. Negative orders carry the `sin(|m| phi)`
//! factor and positive orders the `cos(m phi)` factor, so the degree-one
//! family is proportional to `(y, z, x)`. Degrees up to two use closed
//! Cartesian forms; higher degrees go through a normalized associated
//! Legendre recurrence.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::sphere::UnitVec;

const Y00: f64 = 0.282_094_791_773_878_14; // 1 / (2 sqrt(pi))
const C1: f64 = 0.488_602_511_902_919_9; // sqrt(3 / (4 pi))
const C2: f64 = 1.092_548_430_592_079_2; // sqrt(15 / pi) / 2
const C20: f64 = 0.315_391_565_252_520_05; // sqrt(5 / pi) / 4
const C22: f64 = 0.546_274_215_296_039_6; // sqrt(15 / pi) / 4

/// Highest degree of the augmentation space. `-1` means no harmonic part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicDegree(i32);

impl HarmonicDegree {
    pub const NONE: HarmonicDegree = HarmonicDegree(-1);

    pub fn new(degree: i32) -> Result<Self> {
        if degree < -1 {
            return Err(Error::Config(format!(
                "harmonic degree must be >= -1, got {degree}"
            )));
        }
        Ok(Self(degree))
    }

    pub fn get(self) -> i32 {
        self.0
    }

    /// Dimension `(L + 1)^2` of the space of harmonics of degree at most `L`.
    pub fn dim(self) -> usize {
        let d = (self.0 + 1) as usize;
        d * d
    }
}

impl fmt::Display for HarmonicDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `(L + 1)^2`, zero for `L = -1`.
pub fn sh_dim(degree: HarmonicDegree) -> usize {
    degree.dim()
}

/// Evaluates all basis functions of degree at most `degree` at `p`.
pub fn sh_basis(p: &UnitVec, degree: HarmonicDegree) -> Vec<f64> {
    let mut out = vec![0.0; degree.dim()];
    sh_basis_into(p, degree, &mut out);
    out
}

/// Writes the basis values into `out`, which must have length `sh_dim(degree)`.
pub fn sh_basis_into(p: &UnitVec, degree: HarmonicDegree, out: &mut [f64]) {
    assert_eq!(out.len(), degree.dim(), "basis buffer has wrong length");
    let l = degree.get();
    if l < 0 {
        return;
    }
    let (x, y, z) = (p.x(), p.y(), p.z());
    out[0] = Y00;
    if l >= 1 {
        out[1] = C1 * y;
        out[2] = C1 * z;
        out[3] = C1 * x;
    }
    if l >= 2 {
        out[4] = C2 * x * y;
        out[5] = C2 * y * z;
        out[6] = C20 * (3.0 * z * z - 1.0);
        out[7] = C2 * x * z;
        out[8] = C22 * (x * x - y * y);
    }
    if l >= 3 {
        recurrence_into(p, l as usize, 3, out);
    }
}

/// Fills degrees `from..=lmax` using the normalized Legendre recurrence.
#[allow(clippy::needless_range_loop)]
fn recurrence_into(p: &UnitVec, lmax: usize, from: usize, out: &mut [f64]) {
    let z = p.z().clamp(-1.0, 1.0);
    let s = (1.0 - z * z).max(0.0).sqrt();
    let phi = p.y().atan2(p.x());

    // q[l][m]: orthonormal associated Legendre factor without phase.
    let mut q = vec![vec![0.0; lmax + 1]; lmax + 1];
    q[0][0] = Y00;
    for m in 1..=lmax {
        q[m][m] = ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s * q[m - 1][m - 1];
    }
    for m in 0..lmax {
        q[m + 1][m] = ((2 * m + 3) as f64).sqrt() * z * q[m][m];
    }
    for m in 0..=lmax {
        for l in (m + 2)..=lmax {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            q[l][m] = a * (z * q[l - 1][m] - b * q[l - 2][m]);
        }
    }

    let sqrt2 = 2f64.sqrt();
    for l in from..=lmax {
        let base = l * l + l; // index of m = 0
        out[base] = q[l][0];
        for m in 1..=l {
            let mphi = m as f64 * phi;
            out[base + m] = sqrt2 * q[l][m] * mphi.cos();
            out[base - m] = sqrt2 * q[l][m] * mphi.sin();
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let step = p1 / dp;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        nodes[i] = -t;
        nodes[n - 1 - i] = t;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Product rule on the sphere: Gauss-Legendre in `z` with `n` nodes times
/// `2n + 1` equispaced longitudes. Exact for polynomials of degree `2n - 1`.
pub(crate) fn sphere_quadrature(n: usize) -> Vec<(UnitVec, f64)> {
    let (zs, ws) = gauss_legendre(n);
    let nphi = 2 * n + 1;
    let dphi = 2.0 * PI / nphi as f64;
    let mut out = Vec::with_capacity(n * nphi);
    for (&z, &w) in zs.iter().zip(&ws) {
        let theta = z.clamp(-1.0, 1.0).acos();
        for k in 0..nphi {
            out.push((UnitVec::from_spherical(theta, k as f64 * dphi), w * dphi));
        }
    }
    out
}

/// Largest deviation of the Gram matrix of the basis from the identity,
/// computed with a product quadrature of `quadrature_size` latitude nodes.
pub fn sh_orthonormality_check(degree: HarmonicDegree, quadrature_size: usize) -> Result<f64> {
    let l = degree.get().max(0) as usize;
    if 2 * quadrature_size < 2 * l + 2 {
        return Err(Error::InvalidInput(format!(
            "quadrature size {quadrature_size} is not exact to degree {}",
            2 * l + 1
        )));
    }
    let u = degree.dim();
    let mut gram = vec![0.0; u * u];
    let mut vals = vec![0.0; u];
    for (p, w) in sphere_quadrature(quadrature_size) {
        sh_basis_into(&p, degree, &mut vals);
        for i in 0..u {
            for j in 0..u {
                gram[i * u + j] += w * vals[i] * vals[j];
            }
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..u {
        for j in 0..u {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[i * u + j] - target).abs());
        }
    }
    Ok(worst)
}
