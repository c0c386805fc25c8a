//! Distances between outcome distributions and between rays.
//!
//! - Hellinger distance between two distributions.
//! - Distributional distance: RMS of Hellinger distances over a set of bases.
//! - Bures distance between rays, `sqrt(2 - 2|<a,b>|)`.
//!
//! All three take values in `[0, sqrt 2]`, and for any set of bases the
//! distributional distance never exceeds the Bures distance.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::hilbert::{born_probabilities, dot, ObservableBasis, ProbDist, PureState, C64};
use crate::tolerances;

/// Hellinger distance, `sqrt(sum_k (sqrt p_k - sqrt q_k)^2)`.
pub fn hellinger(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    check_dim(p.len(), q.len())?;
    Ok(hellinger_raw(p.probs(), q.probs()))
}

pub(crate) fn hellinger_raw(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| {
            let diff = a.sqrt() - b.sqrt();
            diff * diff
        })
        .sum::<f64>()
        .sqrt()
}

/// Hellinger distance through the Bhattacharyya overlap,
/// `sqrt(2 - 2 sum_k sqrt(p_k q_k))`. Less accurate near zero; kept as a
/// cross-check of [`hellinger`].
pub fn hellinger_via_overlap(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    check_dim(p.len(), q.len())?;
    let overlap: f64 = p.probs().iter().zip(q.probs()).map(|(a, b)| (a * b).sqrt()).sum();
    Ok((2.0 - 2.0 * overlap).max(0.0).sqrt())
}

pub fn hellinger_states(basis: &ObservableBasis, a: &PureState, b: &PureState) -> Result<f64> {
    hellinger(&born_probabilities(basis, a)?, &born_probabilities(basis, b)?)
}

pub fn distributional(bases: &[ObservableBasis], a: &PureState, b: &PureState) -> Result<f64> {
    Ok(rms(&per_basis_hellinger(bases, a, b)?))
}

fn per_basis_hellinger(bases: &[ObservableBasis], a: &PureState, b: &PureState) -> Result<Vec<f64>> {
    if bases.is_empty() {
        return Err(Error::EmptyBases);
    }
    bases.iter().map(|basis| hellinger_states(basis, a, b)).collect()
}

pub(crate) fn rms(values: &[f64]) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// Bures distance between the rays of `a` and `b`.
///
/// Evaluated as `min_alpha |a - e^{i alpha} b|`, which equals
/// `sqrt(2 - 2|<a,b>|)` for unit vectors but does not lose all precision
/// when the rays nearly coincide.
pub fn bures(a: &PureState, b: &PureState) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    Ok(bures_raw(a.amplitudes(), b.amplitudes()))
}

pub(crate) fn bures_raw(a: &[C64], b: &[C64]) -> f64 {
    let overlap = dot(a, b);
    let m = overlap.norm();
    let phase = if m > 0.0 {
        overlap.conj() / m
    } else {
        C64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Bures distance from the closed form, clamped at zero.
pub fn bures_closed_form(a: &PureState, b: &PureState) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    let m = dot(a.amplitudes(), b.amplitudes()).norm();
    Ok((2.0 - 2.0 * m).max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub bures: f64,
    pub distributional: f64,
    pub per_basis_hellinger: Vec<f64>,
    /// Set when `distributional > bures + 1e-10`.
    pub bound_violated: bool,
}

/// Evaluate all metrics for a pair of states and check the
/// distributional <= Bures bound.
pub fn check_bound(bases: &[ObservableBasis], a: &PureState, b: &PureState) -> Result<MetricReport> {
    let per_basis = per_basis_hellinger(bases, a, b)?;
    let distributional = rms(&per_basis);
    let bures = bures(a, b)?;
    Ok(MetricReport {
        bures,
        distributional,
        per_basis_hellinger: per_basis,
        bound_violated: distributional > bures + tolerances::BOUND_SLACK,
    })
}
