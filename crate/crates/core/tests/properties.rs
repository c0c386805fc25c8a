use pauli_partners::hilbert::{
    born_probabilities, canonicalize_ray, dot, random_basis, random_state, ObservableBasis, PureState,
};
use pauli_partners::imposition::{impose, impose_composite_ordered, CompositionOrder, TomographyProblem};
use pauli_partners::metrics::{bures, bures_closed_form, distributional, hellinger, hellinger_via_overlap};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Instance {
    basis: ObservableBasis,
    a: PureState,
    b: PureState,
}

fn instance(dim: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Instance {
        basis: random_basis(dim, &mut rng).unwrap(),
        a: random_state(dim, &mut rng).unwrap(),
        b: random_state(dim, &mut rng).unwrap(),
    }
}

fn near(xi: &PureState, eps: f64, seed: u64) -> PureState {
    let g = random_state(xi.dim(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    PureState::new(
        xi.amplitudes()
            .iter()
            .zip(g.amplitudes())
            .map(|(a, b)| a + eps * b)
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_is_idempotent(dim in 2usize..7, seed: u64, alpha in 0.0..std::f64::consts::TAU) {
        let s = instance(dim, seed).a.with_global_phase(alpha);
        let once = canonicalize_ray(&s);
        prop_assert_eq!(canonicalize_ray(&once), once.clone());
        prop_assert!(bures(&once, &s).unwrap() < 1e-12);
    }

    #[test]
    fn born_statistics_ignore_global_phase(dim in 2usize..7, seed: u64, alpha in 0.0..std::f64::consts::TAU) {
        let i = instance(dim, seed);
        let p = born_probabilities(&i.basis, &i.a).unwrap();
        let q = born_probabilities(&i.basis, &i.a.with_global_phase(alpha)).unwrap();
        for (x, y) in p.probs().iter().zip(q.probs()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_expansion_is_complete(dim in 2usize..7, seed: u64) {
        let i = instance(dim, seed);
        let coeffs = i.basis.coefficients(i.a.amplitudes()).unwrap();
        let back = i.basis.synthesize(&coeffs).unwrap();
        for (x, y) in back.iter().zip(i.a.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn imposition_reproduces_target(dim in 2usize..7, seed: u64) {
        let i = instance(dim, seed);
        let p = born_probabilities(&i.basis, &i.a).unwrap();
        let t = impose(&i.basis, &p, &i.b).unwrap();
        let q = born_probabilities(&i.basis, &t).unwrap();
        for (x, y) in p.probs().iter().zip(q.probs()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        // Input phases survive up to one global phase.
        let ratios: Vec<_> = (0..dim)
            .map(|k| dot(i.basis.vector(k), t.amplitudes()) / dot(i.basis.vector(k), i.b.amplitudes()))
            .collect();
        for r in &ratios {
            prop_assert!((r / r.norm() - ratios[0] / ratios[0].norm()).norm() < 1e-8);
        }
    }

    #[test]
    fn imposition_is_idempotent(dim in 2usize..7, seed: u64) {
        let i = instance(dim, seed);
        let p = born_probabilities(&i.basis, &i.a).unwrap();
        let once = impose(&i.basis, &p, &i.b).unwrap();
        let twice = impose(&i.basis, &p, &once).unwrap();
        prop_assert!(bures(&once, &twice).unwrap() < 1e-12);
    }

    #[test]
    fn metric_forms_agree(dim in 2usize..7, seed: u64) {
        let i = instance(dim, seed);
        prop_assert!((bures(&i.a, &i.b).unwrap() - bures_closed_form(&i.a, &i.b).unwrap()).abs() < 1e-7);
        let p = born_probabilities(&i.basis, &i.a).unwrap();
        let q = born_probabilities(&i.basis, &i.b).unwrap();
        prop_assert!((hellinger(&p, &q).unwrap() - hellinger_via_overlap(&p, &q).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn composite_chain_is_monotone_near_solution(dim in 2usize..6, m in 1usize..4, seed: u64, eps in 1e-6..1e-3f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bases: Vec<_> = (0..m).map(|_| random_basis(dim, &mut rng).unwrap()).collect();
        let xi = random_state(dim, &mut rng).unwrap();
        let problem = TomographyProblem::from_generator(&xi, bases).unwrap();
        let mut state = near(&xi, eps, seed ^ 1);
        let mut last = bures(&state, &xi).unwrap();
        for j in problem.application_order(CompositionOrder::LastFirst) {
            state = impose(&problem.bases()[j], &problem.targets()[j], &state).unwrap();
            let now = bures(&state, &xi).unwrap();
            prop_assert!(now <= last + 1e-9);
            last = now;
        }
    }

    #[test]
    fn generator_is_fixed_by_both_orders(dim in 2usize..6, m in 1usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bases: Vec<_> = (0..m).map(|_| random_basis(dim, &mut rng).unwrap()).collect();
        let g = random_state(dim, &mut rng).unwrap();
        let problem = TomographyProblem::from_generator(&g, bases.clone()).unwrap();
        for order in [CompositionOrder::LastFirst, CompositionOrder::FirstFirst] {
            let t = impose_composite_ordered(&problem, &g, order).unwrap();
            prop_assert!(bures(&t, &g).unwrap() < 1e-10);
        }
        prop_assert!(problem.residual(&g).unwrap() < 1e-12);
        prop_assert!(distributional(&bases, &g, &g).unwrap() < 1e-12);
    }
}
