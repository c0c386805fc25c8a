//! Finite-dimensional complex state space: pure states, orthonormal bases,
//! Born probabilities and Haar-random sampling.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, Error, Result};
use crate::tolerances;

pub type C64 = Complex64;

/// `<a, b>`, conjugate-linear in the first argument.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Multiply by the global phase that makes the first component with modulus
/// above [`tolerances::ZERO_AMPLITUDE`] real and nonnegative.
///
/// A vector already in that form is left bit-for-bit unchanged.
pub fn canonicalize_amplitudes(amps: &mut [C64]) -> Result<()> {
    let lead = amps
        .iter()
        .position(|z| z.norm() > tolerances::ZERO_AMPLITUDE)
        .ok_or(Error::ZeroVector)?;
    let pivot = amps[lead];
    if pivot.im == 0.0 && pivot.re > 0.0 {
        return Ok(());
    }
    let modulus = pivot.norm();
    let phase = pivot.conj() / modulus;
    for z in amps.iter_mut() {
        *z *= phase;
    }
    amps[lead] = C64::new(modulus, 0.0);
    Ok(())
}

/// A unit vector of dimension at least 2.
///
/// Constructors normalize their input. States returned by the operators of
/// this crate are additionally in canonical ray form (see
/// [`canonicalize_amplitudes`]); [`PureState::new`] keeps the global phase it
/// was given so phase-invariance can be exercised.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(mut amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::DimensionTooSmall(amps.len()));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = norm(&amps);
        if n <= tolerances::ZERO_AMPLITUDE {
            return Err(Error::ZeroVector);
        }
        for z in amps.iter_mut() {
            *z /= n;
        }
        Ok(Self { amps })
    }

    /// Normalize and bring into canonical ray form.
    pub fn canonical(amps: Vec<C64>) -> Result<Self> {
        let mut s = Self::new(amps)?;
        canonicalize_amplitudes(&mut s.amps)?;
        Ok(s)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// The computational basis vector `e_k`.
    pub fn basis_vector(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn canonicalized(&self) -> Self {
        let mut amps = self.amps.clone();
        // Unit vectors always have a component above the zero threshold.
        canonicalize_amplitudes(&mut amps).expect("unit vector is nonzero");
        Self { amps }
    }

    pub fn with_global_phase(&self, alpha: f64) -> Self {
        let u = C64::from_polar(1.0, alpha);
        Self {
            amps: self.amps.iter().map(|z| z * u).collect(),
        }
    }
}

pub fn inner(a: &PureState, b: &PureState) -> Result<C64> {
    check_dim(a.dim(), b.dim())?;
    Ok(dot(&a.amps, &b.amps))
}

pub fn canonicalize_ray(state: &PureState) -> PureState {
    state.canonicalized()
}

/// An orthonormal basis `{phi_k}` identifying a non-degenerate observable.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableBasis {
    vectors: Vec<Vec<C64>>,
    label: String,
}

impl ObservableBasis {
    /// Validates that `vectors` are `d` orthonormal vectors of length `d`.
    pub fn new(vectors: Vec<Vec<C64>>, label: impl Into<String>) -> Result<Self> {
        let d = vectors.len();
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        for v in &vectors {
            check_dim(d, v.len())?;
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let basis = Self {
            vectors,
            label: label.into(),
        };
        let dev = basis.gram_deviation();
        if dev > tolerances::ORTHONORMALITY {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(basis)
    }

    pub fn standard(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        let vectors = (0..dim)
            .map(|k| {
                let mut v = vec![C64::new(0.0, 0.0); dim];
                v[k] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Self::new(vectors, "standard")
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[C64] {
        &self.vectors[k]
    }

    /// The `k`-th basis vector as a state.
    pub fn state(&self, k: usize) -> Result<PureState> {
        if k >= self.dim() {
            return Err(Error::InvalidParameter(format!(
                "basis index {k} out of range for dimension {}",
                self.dim()
            )));
        }
        PureState::new(self.vectors[k].clone())
    }

    /// Largest entry of `|G - I|` where `G` is the Gram matrix.
    pub fn gram_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).norm());
            }
        }
        worst
    }

    /// Expansion coefficients `<phi_k, amps>`.
    pub fn coefficients(&self, amps: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim(), amps.len())?;
        Ok(self.vectors.iter().map(|v| dot(v, amps)).collect())
    }

    /// `sum_k coeffs[k] phi_k`.
    pub fn synthesize(&self, coeffs: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim(), coeffs.len())?;
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    /// Apply a matrix (rows of length `d`) to every basis vector.
    pub(crate) fn transformed(&self, matrix: &[Vec<C64>], label: impl Into<String>) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                matrix
                    .iter()
                    .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
                    .collect()
            })
            .collect();
        Self::new(vectors, label)
    }
}

/// A probability vector: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(p) = probs.iter().find(|&&p| p < 0.0) {
            return Err(Error::InvalidDistribution(format!("negative entry {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tolerances::PROBABILITY_SUM {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Born rule: `p_k = |<phi_k, state>|^2`.
pub fn born_probabilities(basis: &ObservableBasis, state: &PureState) -> Result<ProbDist> {
    let coeffs = basis.coefficients(state.amplitudes())?;
    Ok(ProbDist {
        probs: coeffs.iter().map(|c| c.norm_sqr()).collect(),
    })
}

fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
        .collect()
}

/// Haar-random ray: complex Gaussian vector, normalized and canonicalized.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    PureState::canonical(gaussian_vector(dim, rng))
}

/// Orthonormalize columns by modified Gram-Schmidt with one
/// re-orthogonalization pass. The implied triangular factor has a positive
/// real diagonal.
pub(crate) fn gram_schmidt(columns: Vec<Vec<C64>>) -> Result<Vec<Vec<C64>>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(columns.len());
    for mut v in columns {
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let n = norm(&v);
        if n <= tolerances::ZERO_AMPLITUDE {
            return Err(Error::ZeroVector);
        }
        for x in v.iter_mut() {
            *x /= n;
        }
        out.push(v);
    }
    Ok(out)
}

/// Haar-random orthonormal basis (columns of a Haar unitary).
pub fn random_basis<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ObservableBasis> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let columns = (0..dim).map(|_| gaussian_vector(dim, rng)).collect();
    ObservableBasis::new(gram_schmidt(columns)?, "random")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn inner_products() {
        let e0 = PureState::basis_vector(2, 0).unwrap();
        let e1 = PureState::basis_vector(2, 1).unwrap();
        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(inner(&e0, &e0).unwrap(), c(1.0, 0.0));
        assert_eq!(inner(&e0, &e1).unwrap(), c(0.0, 0.0));
        assert!((inner(&e0, &plus).unwrap() - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let e3 = PureState::basis_vector(3, 0).unwrap();
        assert!(matches!(inner(&e0, &e3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let a = PureState::new(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let b = PureState::basis_vector(2, 0).unwrap();
        assert_eq!(inner(&a, &b).unwrap(), c(0.0, -1.0));
    }

    #[test]
    fn born_examples() {
        let std = ObservableBasis::standard(2).unwrap();
        let e0 = PureState::basis_vector(2, 0).unwrap();
        assert_eq!(born_probabilities(&std, &e0).unwrap().probs(), &[1.0, 0.0]);

        let s = FRAC_1_SQRT_2;
        let by = ObservableBasis::new(vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]], "B_y").unwrap();
        let p = born_probabilities(&by, &e0).unwrap();
        assert!((p.probs()[0] - 0.5).abs() < 1e-15);
        assert!((p.probs()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn born_random_sums_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let b = random_basis(4, &mut rng).unwrap();
            let s = random_state(4, &mut rng).unwrap();
            let p = born_probabilities(&b, &s).unwrap();
            // direct summation of squared moduli, independent of ProbDist
            let mut total = 0.0;
            for v in b.vectors() {
                let mut acc = c(0.0, 0.0);
                for (x, y) in v.iter().zip(s.amplitudes()) {
                    acc += x.conj() * y;
                }
                total += acc.re * acc.re + acc.im * acc.im;
            }
            assert!((total - 1.0).abs() < 1e-12);
            assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn canonicalize_examples() {
        let s = PureState::new(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(canonicalize_ray(&s).amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        let s = PureState::new(vec![c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(canonicalize_ray(&s).amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]);

        let s = PureState::canonical(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert_eq!(canonicalize_ray(&s), s);
    }

    #[test]
    fn canonicalize_zero_vector_fails() {
        let mut z = vec![c(0.0, 0.0); 3];
        assert_eq!(canonicalize_amplitudes(&mut z), Err(Error::ZeroVector));
        assert_eq!(PureState::new(vec![c(0.0, 0.0); 3]), Err(Error::ZeroVector));
    }

    #[test]
    fn canonicalize_skips_subthreshold_leading_component() {
        let s = PureState::new(vec![c(1e-12, 1e-12), c(0.0, -1.0)]).unwrap();
        let k = canonicalize_ray(&s);
        assert_eq!(k.amplitudes()[1], c(1.0, 0.0));
    }

    #[test]
    fn random_state_is_reproducible_and_validated() {
        let a = random_state(2, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = random_state(2, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            random_state(1, &mut ChaCha8Rng::seed_from_u64(5)),
            Err(Error::DimensionTooSmall(1))
        ));
    }

    #[test]
    fn random_state_haar_moment() {
        // E|<e0, psi>|^2 = 1/d for Haar-random psi.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|_| random_state(2, &mut rng).unwrap().amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn random_basis_properties() {
        let a = random_basis(5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = random_basis(5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert!(a.gram_deviation() < 1e-10);
        assert!(random_basis(1, &mut ChaCha8Rng::seed_from_u64(9)).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 1000;
        let mean: f64 = (0..n)
            .map(|_| random_basis(2, &mut rng).unwrap().vector(0)[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn basis_rejects_bad_input() {
        let v = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
        assert!(matches!(ObservableBasis::new(v, "x"), Err(Error::NotOrthonormal(_))));
        let v = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0)]];
        assert!(matches!(
            ObservableBasis::new(v, "x"),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn prob_dist_validation() {
        assert!(ProbDist::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::new(vec![-0.1, 1.1]).is_err());
        assert!(ProbDist::new(vec![f64::NAN, 1.0]).is_err());
    }
}
