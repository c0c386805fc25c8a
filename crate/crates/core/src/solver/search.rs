use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::{task_rng, SolverConfig, SEED_STREAM};
use crate::error::{check_dim, Error, Result};
use crate::hilbert::{ObservableBasis, PureState, C64};
use crate::imposition::{impose_relaxed, TomographyProblem};
use crate::metrics::bures;

/// Clusters beyond which a solution set may be a continuum.
const CONTINUUM_MIN_CLUSTERS: usize = 25;
/// Growth of the cluster count from half the seeds to all of them that
/// marks an unsaturated (continuous) solution set.
const CONTINUUM_GROWTH: f64 = 1.5;

pub fn synthesize_problem(generator: &PureState, bases: Vec<ObservableBasis>) -> Result<TomographyProblem> {
    TomographyProblem::from_generator(generator, bases)
}

/// Seed with equal moduli in `first_basis`: `sum_k e^{i theta_k} phi_k / sqrt d`
/// with `theta_0 = 0` and `d - 1` uniform phases. The moduli of a seed are
/// erased by the first imposition in that basis, so only these phases matter.
pub fn make_seed<R: Rng + ?Sized>(dim: usize, first_basis: &ObservableBasis, rng: &mut R) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    check_dim(dim, first_basis.dim())?;
    let mut phases = vec![0.0; dim];
    for p in phases.iter_mut().skip(1) {
        *p = rng.random::<f64>() * TAU;
    }
    seed_from_parts(first_basis, &vec![1.0; dim], &phases)
}

/// `sum_k moduli[k] e^{i phases[k]} phi_k`, normalized.
pub fn seed_from_parts(basis: &ObservableBasis, moduli: &[f64], phases: &[f64]) -> Result<PureState> {
    check_dim(basis.dim(), moduli.len())?;
    check_dim(basis.dim(), phases.len())?;
    let coeffs: Vec<C64> = moduli
        .iter()
        .zip(phases)
        .map(|(&r, &t)| C64::from_polar(r, t))
        .collect();
    PureState::new(basis.synthesize(&coeffs)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    MaxIterations,
}

/// Limit of one seed run.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointRecord {
    pub state: PureState,
    /// `distributional_residual <= physical_tol`.
    pub is_physical: bool,
    pub distributional_residual: f64,
    /// Composite steps taken before the step size fell below `conv_tol`.
    pub iterations: usize,
    pub seed_index: usize,
    pub status: RunStatus,
}

fn record(
    problem: &TomographyProblem,
    state: PureState,
    iterations: usize,
    status: RunStatus,
    config: &SolverConfig,
) -> Result<FixedPointRecord> {
    let residual = problem.residual(&state)?;
    Ok(FixedPointRecord {
        state,
        is_physical: residual <= config.physical_tol,
        distributional_residual: residual,
        iterations,
        seed_index: 0,
        status,
    })
}

/// Iterate the (relaxed) composite map from `seed` until successive iterates
/// are closer than `conv_tol` in Bures distance, or `max_iters` steps.
pub fn iterate(problem: &TomographyProblem, seed: &PureState, config: &SolverConfig) -> Result<FixedPointRecord> {
    config.validate()?;
    check_dim(problem.dim(), seed.dim())?;
    let mut current = seed.canonicalized();
    for n in 0..config.max_iters {
        let next = impose_relaxed(problem, &current, config.lambda, config.composition_order)?;
        let step = bures(&next, &current)?;
        current = next;
        if step < config.conv_tol {
            return record(problem, current, n, RunStatus::Converged, config);
        }
    }
    record(problem, current, config.max_iters, RunStatus::MaxIterations, config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub n: usize,
    pub state: PureState,
    /// Bures distance to the previous iterate (0 for the seed).
    pub step: f64,
    pub residual: f64,
}

/// The seed followed by every iterate that moved by at least `conv_tol`,
/// up to `max_iters` steps.
pub fn trajectory(
    problem: &TomographyProblem,
    seed: &PureState,
    config: &SolverConfig,
) -> Result<Vec<TrajectoryPoint>> {
    config.validate()?;
    check_dim(problem.dim(), seed.dim())?;
    let mut current = seed.clone();
    let mut out = vec![TrajectoryPoint {
        n: 0,
        residual: problem.residual(&current)?,
        state: current.clone(),
        step: 0.0,
    }];
    for n in 1..=config.max_iters {
        let next = impose_relaxed(problem, &current, config.lambda, config.composition_order)?;
        let step = bures(&next, &current)?;
        if step < config.conv_tol {
            break;
        }
        out.push(TrajectoryPoint {
            n,
            residual: problem.residual(&next)?,
            state: next.clone(),
            step,
        });
        current = next;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// First physical limit that landed in this cluster.
    pub representative: FixedPointRecord,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunSummary {
    pub seeds: usize,
    /// Converged with residual within `physical_tol`.
    pub physical: usize,
    /// Converged to a fixed point that misses some target distribution.
    pub non_physical: usize,
    /// Hit `max_iters` without converging.
    pub unconverged: usize,
}

/// Distinct physical fixed points found by [`enumerate_partners`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub clusters: Vec<Cluster>,
    /// Number of physical clusters.
    pub cardinality_estimate: usize,
    /// The cluster count had not saturated: the solutions likely form a continuum.
    pub continuum_flag: bool,
    /// Distinct clusters after each seed, in seed order.
    pub saturation: Vec<usize>,
    pub runs: RunSummary,
    /// Median Bures distance from each representative to its nearest neighbour.
    pub median_nearest_spacing: Option<f64>,
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Index of the cluster whose representative is within `tol` of `state`.
    pub fn find(&self, state: &PureState, tol: f64) -> Option<usize> {
        self.clusters
            .iter()
            .position(|c| bures(&c.representative.state, state).map(|d| d <= tol).unwrap_or(false))
    }

    fn from_records(records: Vec<FixedPointRecord>, config: &SolverConfig) -> Result<Self> {
        let mut clusters: Vec<Cluster> = Vec::new();
        let mut saturation = Vec::with_capacity(records.len());
        let mut runs = RunSummary {
            seeds: records.len(),
            ..RunSummary::default()
        };
        for r in records {
            match (r.status, r.is_physical) {
                (RunStatus::MaxIterations, _) => runs.unconverged += 1,
                (RunStatus::Converged, false) => runs.non_physical += 1,
                (RunStatus::Converged, true) => {
                    runs.physical += 1;
                    let mut hit = None;
                    for (i, c) in clusters.iter().enumerate() {
                        if bures(&c.representative.state, &r.state)? <= config.dedup_tol {
                            hit = Some(i);
                            break;
                        }
                    }
                    match hit {
                        Some(i) => clusters[i].multiplicity += 1,
                        None => clusters.push(Cluster {
                            representative: r,
                            multiplicity: 1,
                        }),
                    }
                }
            }
            saturation.push(clusters.len());
        }

        let n = clusters.len();
        let half = saturation.get(saturation.len() / 2).copied().unwrap_or(0).max(1);
        let continuum_flag = n > CONTINUUM_MIN_CLUSTERS && n as f64 >= CONTINUUM_GROWTH * half as f64;
        let median_nearest_spacing = median_nearest_spacing(&clusters)?;
        Ok(Self {
            cardinality_estimate: n,
            clusters,
            continuum_flag,
            saturation,
            runs,
            median_nearest_spacing,
        })
    }
}

fn median_nearest_spacing(clusters: &[Cluster]) -> Result<Option<f64>> {
    if clusters.len() < 2 {
        return Ok(None);
    }
    let mut nearest = Vec::with_capacity(clusters.len());
    for (i, a) in clusters.iter().enumerate() {
        let mut best = f64::INFINITY;
        for (j, b) in clusters.iter().enumerate() {
            if i != j {
                best = best.min(bures(&a.representative.state, &b.representative.state)?);
            }
        }
        nearest.push(best);
    }
    nearest.sort_by(f64::total_cmp);
    Ok(Some(nearest[nearest.len() / 2]))
}

/// Run [`iterate`] from `n_seeds` seeds in parallel and cluster the physical
/// limits. An empty result means no physical fixed point was reached, which
/// for a problem synthesized from a generator is an anomaly.
pub fn enumerate_partners(problem: &TomographyProblem, config: &SolverConfig) -> Result<SolutionSet> {
    config.validate()?;
    let dim = problem.dim();
    let first = problem.first_acting_basis(config.composition_order);
    let records = (0..config.n_seeds)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(config.master_seed, SEED_STREAM, i as u64);
            let seed = make_seed(dim, first, &mut rng)?;
            let mut r = iterate(problem, &seed, config)?;
            r.seed_index = i;
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    SolutionSet::from_records(records, config)
}
