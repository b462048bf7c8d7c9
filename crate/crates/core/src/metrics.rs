//! Error measures.
//!
//! The relative root mean square error is the l2-relative error
//! `||predicted - truth||_2 / ||truth||_2` over the evaluation set.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `NaN` when the reference vector is identically zero.
    pub rrmse: f64,
    pub rmse: f64,
    pub max_abs_error: f64,
    pub count: usize,
}

fn check_lengths(predicted: &[f64], truth: &[f64]) -> Result<()> {
    if predicted.len() != truth.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} predictions, {} reference values",
            predicted.len(),
            truth.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::InvalidInput("no values to compare".into()));
    }
    Ok(())
}

/// l2 norm without overflow for large inputs.
fn norm2(v: impl Iterator<Item = f64> + Clone) -> f64 {
    let scale = v.clone().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * v.map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// `||predicted - truth|| / ||truth||`. A zero reference yields
/// [`Error::ZeroReference`] carrying the absolute RMSE.
pub fn rrmse(predicted: &[f64], truth: &[f64]) -> Result<f64> {
    check_lengths(predicted, truth)?;
    let diff = norm2(predicted.iter().zip(truth).map(|(p, t)| p - t));
    let reference = norm2(truth.iter().copied());
    if reference == 0.0 {
        return Err(Error::ZeroReference {
            rmse: diff / (truth.len() as f64).sqrt(),
        });
    }
    Ok(diff / reference)
}

pub fn error_report(predicted: &[f64], truth: &[f64]) -> Result<ErrorReport> {
    check_lengths(predicted, truth)?;
    let diff = norm2(predicted.iter().zip(truth).map(|(p, t)| p - t));
    let reference = norm2(truth.iter().copied());
    let max_abs_error = predicted
        .iter()
        .zip(truth)
        .map(|(p, t)| (p - t).abs())
        .fold(0.0, f64::max);
    Ok(ErrorReport {
        rrmse: if reference > 0.0 { diff / reference } else { f64::NAN },
        rmse: diff / (truth.len() as f64).sqrt(),
        max_abs_error,
        count: truth.len(),
    })
}

/// Median of a nonempty slice; averages the two central values for even
/// lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}
