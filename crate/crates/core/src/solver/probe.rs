use rand::Rng;
use rand_distr::StandardNormal;

use super::search::{enumerate_partners, synthesize_problem};
use super::{task_rng, SolverConfig, GENERATOR_STREAM, PERTURBATION_STREAM};
use crate::error::{Error, Result};
use crate::hilbert::{gram_schmidt, random_state, ObservableBasis, PureState, C64};

/// A generator with more than one physical fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub generator_index: usize,
    pub generator: PureState,
    pub cardinality: usize,
    pub continuum_flag: bool,
    pub partners: Vec<PureState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    /// No sampled generator had a partner. Evidence, not proof.
    pub complete: bool,
    pub generators_tested: usize,
    /// Cluster count for each tested generator, in order.
    pub cardinalities: Vec<usize>,
    /// Generators for which no physical fixed point was found at all.
    pub anomalies: usize,
    pub counterexample: Option<Counterexample>,
}

/// Sample random generators and enumerate their partners; stop at the first
/// generator with two or more physical clusters.
pub fn completeness_probe(
    bases: &[ObservableBasis],
    n_generators: usize,
    config: &SolverConfig,
) -> Result<CompletenessReport> {
    if n_generators == 0 {
        return Err(Error::InvalidParameter("n_generators must be at least 1".into()));
    }
    config.validate()?;
    let dim = bases.first().ok_or(Error::EmptyBases)?.dim();
    let mut cardinalities = Vec::new();
    let mut anomalies = 0;
    for g in 0..n_generators {
        let mut rng = task_rng(config.master_seed, GENERATOR_STREAM, g as u64);
        let generator = random_state(dim, &mut rng)?;
        let problem = synthesize_problem(&generator, bases.to_vec())?;
        let set = enumerate_partners(&problem, config)?;
        cardinalities.push(set.cardinality_estimate);
        if set.is_empty() {
            anomalies += 1;
        }
        if set.cardinality_estimate >= 2 {
            return Ok(CompletenessReport {
                complete: false,
                generators_tested: g + 1,
                cardinalities,
                anomalies,
                counterexample: Some(Counterexample {
                    generator_index: g,
                    generator,
                    cardinality: set.cardinality_estimate,
                    continuum_flag: set.continuum_flag,
                    partners: set.clusters.into_iter().map(|c| c.representative.state).collect(),
                }),
            });
        }
    }
    Ok(CompletenessReport {
        complete: true,
        generators_tested: n_generators,
        cardinalities,
        anomalies,
        counterexample: None,
    })
}

/// A random unitary `U` with `||U - I||_F <= epsilon` applied to every
/// vector of `basis`. Returns the new basis and `||U - I||_F`.
pub fn perturb_basis<R: Rng + ?Sized>(
    basis: &ObservableBasis,
    epsilon: f64,
    rng: &mut R,
) -> Result<(ObservableBasis, f64)> {
    if !(0.0..=1e-2).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "perturbation epsilon must lie in [0, 1e-2], got {epsilon}"
        )));
    }
    if epsilon == 0.0 {
        return Ok((basis.clone(), 0.0));
    }
    let d = basis.dim();
    let g: Vec<Vec<C64>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    let g_norm = g.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut scale = epsilon / 2.0;
    loop {
        // columns of I + scale * G / |G|, orthonormalized
        let columns: Vec<Vec<C64>> = (0..d)
            .map(|col| {
                (0..d)
                    .map(|row| {
                        let id = if row == col { 1.0 } else { 0.0 };
                        C64::new(id, 0.0) + g[row][col] * (scale / g_norm)
                    })
                    .collect()
            })
            .collect();
        let q = gram_schmidt(columns)?;
        let dist = q
            .iter()
            .enumerate()
            .flat_map(|(col, v)| {
                v.iter().enumerate().map(move |(row, z)| {
                    let id = if row == col { 1.0 } else { 0.0 };
                    (z - C64::new(id, 0.0)).norm_sqr()
                })
            })
            .sum::<f64>()
            .sqrt();
        if dist <= epsilon {
            // q holds columns; rows of U are needed to transform vectors
            let rows: Vec<Vec<C64>> = (0..d).map(|r| (0..d).map(|c| q[c][r]).collect()).collect();
            let label = basis.label().to_string();
            return Ok((basis.transformed(&rows, label)?, dist));
        }
        scale /= 2.0;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    pub epsilon: f64,
    pub baseline: CompletenessReport,
    pub perturbed: CompletenessReport,
    /// `||U_j - I||_F` for the unitary applied to each basis.
    pub perturbation_norms: Vec<f64>,
    pub perturbed_bases: Vec<ObservableBasis>,
    /// The baseline was incomplete and so is the perturbed set.
    pub incompleteness_persisted: bool,
    pub verdict_unchanged: bool,
}

/// Re-run [`completeness_probe`] after perturbing every basis by a random
/// unitary within Frobenius distance `epsilon` of the identity.
pub fn perturbation_probe(
    bases: &[ObservableBasis],
    epsilon: f64,
    n_generators: usize,
    config: &SolverConfig,
) -> Result<PerturbationReport> {
    if bases.is_empty() {
        return Err(Error::EmptyBases);
    }
    let baseline = completeness_probe(bases, n_generators, config)?;
    let mut norms = Vec::with_capacity(bases.len());
    let mut perturbed_bases = Vec::with_capacity(bases.len());
    for (j, b) in bases.iter().enumerate() {
        let mut rng = task_rng(config.master_seed, PERTURBATION_STREAM, j as u64);
        let (pb, norm) = perturb_basis(b, epsilon, &mut rng)?;
        perturbed_bases.push(pb);
        norms.push(norm);
    }
    let perturbed = completeness_probe(&perturbed_bases, n_generators, config)?;
    Ok(PerturbationReport {
        epsilon,
        incompleteness_persisted: !baseline.complete && !perturbed.complete,
        verdict_unchanged: baseline.complete == perturbed.complete,
        baseline,
        perturbed,
        perturbation_norms: norms,
        perturbed_bases,
    })
}
