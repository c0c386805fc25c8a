use serde::{Deserialize, Serialize};

use super::search::{enumerate_partners, synthesize_problem};
use super::SolverConfig;
use crate::error::{check_dim, Error, Result};
use crate::hilbert::{dot, ObservableBasis, PureState, C64};
use crate::metrics::bures;

/// A one-parameter family of generator states, `t` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorPath {
    /// Shortest geodesic between the two rays.
    GreatCircle {
        from: PureState,
        to: PureState,
    },
    Constant(PureState),
}

impl GeneratorPath {
    pub fn great_circle(from: PureState, to: PureState) -> Result<Self> {
        check_dim(from.dim(), to.dim())?;
        Ok(Self::GreatCircle { from, to })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::GreatCircle { from, .. } => from.dim(),
            Self::Constant(s) => s.dim(),
        }
    }

    pub fn at(&self, t: f64) -> Result<PureState> {
        match self {
            Self::Constant(s) => Ok(s.clone()),
            Self::GreatCircle { from, to } => {
                let overlap = dot(from.amplitudes(), to.amplitudes());
                let m = overlap.norm();
                // rotate `to` so that <from, to> is real and nonnegative
                let align = if m > 0.0 {
                    overlap.conj() / m
                } else {
                    C64::new(1.0, 0.0)
                };
                let angle = m.min(1.0).acos();
                if angle < 1e-15 {
                    return Ok(from.clone());
                }
                let (wa, wb) = (((1.0 - t) * angle).sin() / angle.sin(), (t * angle).sin() / angle.sin());
                let amps = from
                    .amplitudes()
                    .iter()
                    .zip(to.amplitudes())
                    .map(|(a, b)| a * wa + align * b * wb)
                    .collect();
                PureState::canonical(amps)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearestEigenvector {
    pub basis: String,
    pub index: usize,
    pub distance: f64,
}

/// Basis vector, across all `bases`, closest in Bures distance to `state`.
pub fn nearest_eigenvector(bases: &[ObservableBasis], state: &PureState) -> Result<NearestEigenvector> {
    let mut best: Option<NearestEigenvector> = None;
    for b in bases {
        for k in 0..b.dim() {
            let distance = bures(&b.state(k)?, state)?;
            if best.as_ref().is_none_or(|n| distance < n.distance) {
                best = Some(NearestEigenvector {
                    basis: b.label().to_string(),
                    index: k,
                    distance,
                });
            }
        }
    }
    best.ok_or(Error::EmptyBases)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub t: f64,
    pub cardinality: usize,
    pub continuum_flag: bool,
    pub nearest_eigenvector: NearestEigenvector,
}

/// Grid interval across which the number of physical fixed points changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub t_lo: f64,
    pub t_hi: f64,
    pub cardinality_lo: usize,
    pub cardinality_hi: usize,
    pub nearest_lo: NearestEigenvector,
    pub nearest_hi: NearestEigenvector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub brackets: Vec<Bracket>,
}

/// Count physical fixed points at every grid value of the generator path and
/// bracket each change in the count. Localization is to grid resolution only.
pub fn bifurcation_sweep<P>(
    bases: &[ObservableBasis],
    path: P,
    t_grid: &[f64],
    config: &SolverConfig,
) -> Result<SweepResult>
where
    P: Fn(f64) -> Result<PureState>,
{
    if bases.is_empty() {
        return Err(Error::EmptyBases);
    }
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let generator = path(t)?;
        let problem = synthesize_problem(&generator, bases.to_vec())?;
        let set = enumerate_partners(&problem, config)?;
        points.push(SweepPoint {
            t,
            cardinality: set.cardinality_estimate,
            continuum_flag: set.continuum_flag,
            nearest_eigenvector: nearest_eigenvector(bases, &generator)?,
        });
    }
    let brackets = points
        .windows(2)
        .filter(|w| w[0].cardinality != w[1].cardinality)
        .map(|w| Bracket {
            t_lo: w[0].t,
            t_hi: w[1].t,
            cardinality_lo: w[0].cardinality,
            cardinality_hi: w[1].cardinality,
            nearest_lo: w[0].nearest_eigenvector.clone(),
            nearest_hi: w[1].nearest_eigenvector.clone(),
        })
        .collect();
    Ok(SweepResult { points, brackets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::pauli_bases;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn great_circle_endpoints_and_speed() {
        let fam = pauli_bases();
        let a = fam.get("B_x").unwrap().state(0).unwrap();
        let b = fam.get("B_y").unwrap().state(0).unwrap();
        let path = GeneratorPath::great_circle(a.clone(), b.clone()).unwrap();
        assert!(bures(&path.at(0.0).unwrap(), &a).unwrap() < 1e-15);
        assert!(bures(&path.at(1.0).unwrap(), &b).unwrap() < 1e-15);
        // constant angular speed: |<a, path(t)>| = cos(t * pi/4)
        for t in [0.25, 0.5, 0.75] {
            let s = path.at(t).unwrap();
            let o = dot(a.amplitudes(), s.amplitudes()).norm();
            assert!((o - (t * std::f64::consts::FRAC_PI_4).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_two_basis_sweep_brackets_at_eigenvector() {
        let fam = pauli_bases();
        let bases = fam.select(&["B_x".into(), "B_z".into()]).unwrap().bases;
        let path = GeneratorPath::great_circle(
            fam.get("B_x").unwrap().state(0).unwrap(),
            fam.get("B_y").unwrap().state(0).unwrap(),
        )
        .unwrap();
        let r = bifurcation_sweep(&bases, |t| path.at(t), &grid(11), &SolverConfig::for_dim(2)).unwrap();
        assert_eq!(r.points[0].cardinality, 1);
        assert!(r.points[1..].iter().all(|p| p.cardinality == 2));
        assert_eq!(r.brackets.len(), 1);
        assert_eq!(r.brackets[0].nearest_lo.basis, "B_x");
        assert!(r.brackets[0].nearest_lo.distance < 1e-12);
    }

    #[test]
    fn constant_path_has_constant_count() {
        let fam = pauli_bases();
        let bases = fam.select(&["B_x".into(), "B_z".into()]).unwrap().bases;
        let s = PureState::from_real(&[0.6, 0.8]).unwrap();
        let path = GeneratorPath::Constant(s);
        let r = bifurcation_sweep(&bases, |t| path.at(t), &grid(5), &SolverConfig::for_dim(2)).unwrap();
        assert!(r.brackets.is_empty());
        let single = bifurcation_sweep(&bases, |t| path.at(t), &[0.3], &SolverConfig::for_dim(2)).unwrap();
        assert!(single.brackets.is_empty());
    }
}
