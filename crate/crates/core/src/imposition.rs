//! The amplitude-imposition map and its compositions.
//!
//! `impose(B, p, psi)` keeps the phases of `psi` in the basis `B` and replaces
//! its moduli by `sqrt(p_k)`:
//!
//! ```text
//! T psi = sum_k sqrt(p_k) * (<phi_k,psi> / |<phi_k,psi>|) * phi_k
//! ```
//!
//! An overlap with modulus at or below [`tolerances::ZERO_AMPLITUDE`] has no
//! usable phase and contributes phase 1. The composite map applies one
//! imposition per basis of a [`TomographyProblem`].

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::hilbert::{born_probabilities, canonicalize_amplitudes, norm, ObservableBasis, ProbDist, PureState, C64};
use crate::metrics::{bures, hellinger_raw, rms};
use crate::tolerances;

/// Reconstruction data: `m` bases and the outcome distribution for each.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyProblem {
    bases: Vec<ObservableBasis>,
    targets: Vec<ProbDist>,
    generator: Option<PureState>,
}

impl TomographyProblem {
    pub fn new(bases: Vec<ObservableBasis>, targets: Vec<ProbDist>) -> Result<Self> {
        let first = bases.first().ok_or(Error::EmptyBases)?;
        let dim = first.dim();
        check_dim(bases.len(), targets.len())?;
        for (b, t) in bases.iter().zip(&targets) {
            check_dim(dim, b.dim())?;
            check_dim(dim, t.len())?;
        }
        Ok(Self {
            bases,
            targets,
            generator: None,
        })
    }

    /// Targets are the Born distributions of `generator`; the generator is
    /// kept only for verification and is never read by the solver.
    pub fn from_generator(generator: &PureState, bases: Vec<ObservableBasis>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::EmptyBases);
        }
        let targets = bases
            .iter()
            .map(|b| born_probabilities(b, generator))
            .collect::<Result<Vec<_>>>()?;
        let mut problem = Self::new(bases, targets)?;
        problem.generator = Some(generator.canonicalized());
        Ok(problem)
    }

    pub fn dim(&self) -> usize {
        self.bases[0].dim()
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[ObservableBasis] {
        &self.bases
    }

    pub fn targets(&self) -> &[ProbDist] {
        &self.targets
    }

    pub fn generator(&self) -> Option<&PureState> {
        self.generator.as_ref()
    }

    /// Distributional distance between the statistics of `state` and the
    /// targets: `sqrt((1/m) sum_j H(born(B_j, state), p_j)^2)`.
    pub fn residual(&self, state: &PureState) -> Result<f64> {
        check_dim(self.dim(), state.dim())?;
        let per_basis = self
            .bases
            .iter()
            .zip(&self.targets)
            .map(|(b, t)| Ok(hellinger_raw(born_probabilities(b, state)?.probs(), t.probs())))
            .collect::<Result<Vec<_>>>()?;
        Ok(rms(&per_basis))
    }

    /// Basis indices in the order the factors act on a state.
    pub fn application_order(&self, order: CompositionOrder) -> Vec<usize> {
        let m = self.bases.len();
        match order {
            CompositionOrder::LastFirst => (0..m).rev().collect(),
            CompositionOrder::FirstFirst => (0..m).collect(),
        }
    }

    /// The basis whose imposition acts first under `order`.
    pub fn first_acting_basis(&self, order: CompositionOrder) -> &ObservableBasis {
        &self.bases[self.application_order(order)[0]]
    }
}

/// Which factor of `T_1 o T_2 o ... o T_m` acts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionOrder {
    /// Functional composition as written: the last basis acts first.
    #[default]
    LastFirst,
    /// The first basis acts first: `T_m o ... o T_1`.
    FirstFirst,
}

pub fn impose(basis: &ObservableBasis, target: &ProbDist, state: &PureState) -> Result<PureState> {
    check_dim(basis.dim(), target.len())?;
    let coeffs = basis.coefficients(state.amplitudes())?;
    let imposed: Vec<C64> = coeffs
        .iter()
        .zip(target.probs())
        .map(|(c, p)| {
            let m = c.norm();
            let phase = if m > tolerances::ZERO_AMPLITUDE {
                c / m
            } else {
                C64::new(1.0, 0.0)
            };
            phase * p.sqrt()
        })
        .collect();
    let mut amps = basis.synthesize(&imposed)?;
    let n = norm(&amps);
    for z in amps.iter_mut() {
        *z /= n;
    }
    canonicalize_amplitudes(&mut amps)?;
    PureState::new(amps)
}

/// One application of every factor, last basis first.
pub fn impose_composite(problem: &TomographyProblem, state: &PureState) -> Result<PureState> {
    impose_composite_ordered(problem, state, CompositionOrder::LastFirst)
}

pub fn impose_composite_ordered(
    problem: &TomographyProblem,
    state: &PureState,
    order: CompositionOrder,
) -> Result<PureState> {
    check_dim(problem.dim(), state.dim())?;
    let mut current = state.clone();
    for j in problem.application_order(order) {
        current = impose(&problem.bases[j], &problem.targets[j], &current)?;
    }
    Ok(current)
}

/// `normalize(lambda * T psi + (1 - lambda) * psi)`, with `T psi` first
/// rotated onto the global phase of `psi` so the mixture acts on rays.
pub fn impose_relaxed(
    problem: &TomographyProblem,
    state: &PureState,
    lambda: f64,
    order: CompositionOrder,
) -> Result<PureState> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "relaxation lambda must lie in (0, 1], got {lambda}"
        )));
    }
    let mapped = impose_composite_ordered(problem, state, order)?;
    if lambda == 1.0 {
        return Ok(mapped);
    }
    let overlap = crate::hilbert::dot(mapped.amplitudes(), state.amplitudes());
    let m = overlap.norm();
    let align = if m > 0.0 { overlap / m } else { C64::new(1.0, 0.0) };
    let mixed: Vec<C64> = mapped
        .amplitudes()
        .iter()
        .zip(state.amplitudes())
        .map(|(t, s)| lambda * align * t + (1.0 - lambda) * s)
        .collect();
    PureState::canonical(mixed)
}

/// `bures(T probe, reference) / bures(probe, reference)` with the targets
/// taken from `reference`. Never exceeds 2.
pub fn lipschitz_ratio(
    basis: &ObservableBasis,
    target: &ProbDist,
    reference: &PureState,
    probe: &PureState,
) -> Result<f64> {
    let denom = bures(probe, reference)?;
    if denom <= f64::EPSILON {
        return Err(Error::CoincidentRays);
    }
    let mapped = impose(basis, target, probe)?;
    Ok(bures(&mapped, reference)? / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::pauli_bases;
    use crate::hilbert::{random_basis, random_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn generator_is_fixed_by_single_imposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let basis = ObservableBasis::standard(3).unwrap();
        let phi = random_state(3, &mut rng).unwrap();
        let p = born_probabilities(&basis, &phi).unwrap();
        let out = impose(&basis, &p, &phi).unwrap();
        assert!(bures(&out, &phi).unwrap() < 1e-14);
    }

    #[test]
    fn imposes_moduli_and_keeps_phase() {
        let basis = ObservableBasis::standard(2).unwrap();
        let theta = 0.7;
        let state = PureState::new(vec![c(FRAC_1_SQRT_2, 0.0), C64::from_polar(FRAC_1_SQRT_2, theta)]).unwrap();
        let target = ProbDist::new(vec![0.36, 0.64]).unwrap();
        let out = impose(&basis, &target, &state).unwrap();
        let expected = [c(0.6, 0.0), C64::from_polar(0.8, theta)];
        for (x, y) in out.amplitudes().iter().zip(expected) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_overlap_gets_unit_phase() {
        let basis = ObservableBasis::standard(2).unwrap();
        let beta = 1.1;
        let state = PureState::new(vec![c(0.0, 0.0), C64::from_polar(1.0, beta)]).unwrap();
        let target = ProbDist::new(vec![0.5, 0.5]).unwrap();
        let out = impose(&basis, &target, &state).unwrap();
        // (phi_0 + e^{i beta} phi_1) / sqrt 2, already canonical
        assert!((out.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[1] - C64::from_polar(FRAC_1_SQRT_2, beta)).norm() < 1e-15);
    }

    #[test]
    fn output_reproduces_target_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let d = rng.random_range(2..7);
            let basis = random_basis(d, &mut rng).unwrap();
            let target = born_probabilities(&basis, &random_state(d, &mut rng).unwrap()).unwrap();
            let out = impose(&basis, &target, &random_state(d, &mut rng).unwrap()).unwrap();
            let got = born_probabilities(&basis, &out).unwrap();
            for (a, b) in got.probs().iter().zip(target.probs()) {
                assert!((a - b).abs() < 1e-10);
            }
            assert!((norm(out.amplitudes()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn composite_fixes_generator_and_reduces_for_one_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bases: Vec<_> = (0..3).map(|_| random_basis(4, &mut rng).unwrap()).collect();
        let phi = random_state(4, &mut rng).unwrap();
        let problem = TomographyProblem::from_generator(&phi, bases.clone()).unwrap();
        let out = impose_composite(&problem, &phi).unwrap();
        assert!(bures(&out, &phi).unwrap() < 1e-12);

        let single = TomographyProblem::from_generator(&phi, vec![bases[0].clone()]).unwrap();
        let psi = random_state(4, &mut rng).unwrap();
        assert_eq!(
            impose_composite(&single, &psi).unwrap(),
            impose(&bases[0], &single.targets()[0], &psi).unwrap()
        );
    }

    #[test]
    fn composite_last_factor_statistics_are_exact() {
        let fam = pauli_bases();
        let (bx, by, bz) = (&fam.bases[0], &fam.bases[1], &fam.bases[2]);
        let phi = by.state(0).unwrap();
        let problem = TomographyProblem::from_generator(&phi, vec![bx.clone(), bz.clone()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let psi = random_state(2, &mut rng).unwrap();
            // oracle: apply the factors by hand, B_z first, B_x last
            let after_z = impose(bz, &problem.targets()[1], &psi).unwrap();
            let after_x = impose(bx, &problem.targets()[0], &after_z).unwrap();
            let out = impose_composite(&problem, &psi).unwrap();
            assert_eq!(out, after_x);
            let p = born_probabilities(bx, &out).unwrap();
            assert!((p.probs()[0] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn relaxed_variants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let bases: Vec<_> = (0..2).map(|_| random_basis(3, &mut rng).unwrap()).collect();
        let phi = random_state(3, &mut rng).unwrap();
        let problem = TomographyProblem::from_generator(&phi, bases).unwrap();
        let psi = random_state(3, &mut rng).unwrap();
        let order = CompositionOrder::LastFirst;
        assert_eq!(
            impose_relaxed(&problem, &psi, 1.0, order).unwrap(),
            impose_composite(&problem, &psi).unwrap()
        );
        for lambda in [1e-9, 0.3, 0.9] {
            let out = impose_relaxed(&problem, &phi, lambda, order).unwrap();
            assert!(bures(&out, &phi).unwrap() < 1e-12);
        }
        assert!(impose_relaxed(&problem, &psi, 0.0, order).is_err());
        assert!(impose_relaxed(&problem, &psi, 1.5, order).is_err());
    }

    #[test]
    fn lipschitz_rejects_coincident_rays() {
        let basis = ObservableBasis::standard(2).unwrap();
        let phi = PureState::from_real(&[0.6, 0.8]).unwrap();
        let p = born_probabilities(&basis, &phi).unwrap();
        assert_eq!(lipschitz_ratio(&basis, &p, &phi, &phi), Err(Error::CoincidentRays));
        assert_eq!(
            lipschitz_ratio(&basis, &p, &phi, &phi.with_global_phase(2.0)),
            Err(Error::CoincidentRays)
        );
    }

    #[test]
    fn problem_validation() {
        let b2 = ObservableBasis::standard(2).unwrap();
        let b3 = ObservableBasis::standard(3).unwrap();
        let p2 = ProbDist::new(vec![0.5, 0.5]).unwrap();
        assert!(TomographyProblem::new(vec![], vec![]).is_err());
        assert!(TomographyProblem::new(vec![b2.clone(), b3], vec![p2.clone(), p2.clone()]).is_err());
        assert!(TomographyProblem::new(vec![b2.clone()], vec![p2.clone(), p2.clone()]).is_err());
        let phi3 = PureState::basis_vector(3, 0).unwrap();
        assert!(TomographyProblem::from_generator(&phi3, vec![b2]).is_err());
    }
}
