//! Quality indicators for approximation sets: inverted generational distance,
//! two-objective hypervolume, relative hypervolume difference, and the mean
//! pointwise verification error.

use crate::error::{Error, Result};
use crate::invalid_arg;

fn check_points(name: &str, pts: &[Vec<f64>], dim: usize) -> Result<()> {
    for p in pts {
        if p.len() != dim {
            return Err(invalid_arg!(
                "{name} contains a point of dimension {} (expected {dim})",
                p.len()
            ));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(invalid_arg!("{name} contains a non-finite coordinate"));
        }
    }
    Ok(())
}

/// Euclidean distance between two equal-length vectors.
fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Inverted generational distance: the mean, over `reference`, of the
/// Euclidean distance to the nearest point of `approximation`. Works in any
/// space; both sets must be non-empty and of equal dimension.
pub fn igd(reference: &[Vec<f64>], approximation: &[Vec<f64>]) -> Result<f64> {
    if reference.is_empty() || approximation.is_empty() {
        return Err(invalid_arg!("igd requires two non-empty point sets"));
    }
    let dim = reference[0].len();
    if dim == 0 {
        return Err(invalid_arg!("igd requires points of positive dimension"));
    }
    check_points("reference set", reference, dim)?;
    check_points("approximation set", approximation, dim)?;
    let total: f64 = reference
        .iter()
        .map(|r| {
            approximation
                .iter()
                .map(|a| distance(r, a))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.len() as f64)
}

/// Hypervolume of a two-objective front with respect to reference point `r`
/// (minimization): the area dominated by the front and bounded by `r`.
/// Points that fail to strictly improve on `r` in both objectives contribute
/// nothing. Computed by a single sweep in `O(n log n)`.
pub fn hypervolume_2d(front: &[Vec<f64>], r: &[f64]) -> Result<f64> {
    if r.len() != 2 || r.iter().any(|v| !v.is_finite()) {
        return Err(invalid_arg!(
            "hypervolume reference point must be a finite 2-vector"
        ));
    }
    check_points("front", front, 2)?;
    let mut pts: Vec<&Vec<f64>> = front
        .iter()
        .filter(|p| p[0] < r[0] && p[1] < r[1])
        .collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut hv = 0.0;
    let mut prev_y = r[1];
    for p in pts {
        if p[1] < prev_y {
            hv += (r[0] - p[0]) * (prev_y - p[1]);
            prev_y = p[1];
        }
    }
    Ok(hv)
}

/// Relative hypervolume difference |HV(reference) - HV(approximation)| /
/// HV(reference), both measured against the same reference point `r`.
/// A reference front with zero hypervolume is an error.
pub fn delta_hv(reference: &[Vec<f64>], approximation: &[Vec<f64>], r: &[f64]) -> Result<f64> {
    let hv_ref = hypervolume_2d(reference, r)?;
    let hv_approx = hypervolume_2d(approximation, r)?;
    if hv_ref == 0.0 {
        return Err(Error::Numerical(
            "reference front has zero hypervolume".into(),
        ));
    }
    Ok((hv_ref - hv_approx).abs() / hv_ref)
}

/// Mean Euclidean distance between paired rows of `predicted` and `observed`:
/// the verification error of a surrogate against ground-truth re-evaluation.
pub fn mean_pointwise_error(predicted: &[Vec<f64>], observed: &[Vec<f64>]) -> Result<f64> {
    if predicted.is_empty() || predicted.len() != observed.len() {
        return Err(invalid_arg!(
            "verification requires equally many predicted and observed points (got {} and {})",
            predicted.len(),
            observed.len()
        ));
    }
    let dim = predicted[0].len();
    check_points("predicted set", predicted, dim)?;
    check_points("observed set", observed, dim)?;
    let total: f64 = predicted
        .iter()
        .zip(observed)
        .map(|(p, o)| distance(p, o))
        .sum();
    Ok(total / predicted.len() as f64)
}
