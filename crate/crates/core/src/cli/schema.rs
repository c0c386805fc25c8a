//! JSON file formats. Every spec and result carries `"schema_version": 1`.
//!
//! Complex numbers are `[re, im]` pairs; a state is an array of pairs and a
//! basis is `{"label": ..., "vectors": [state, ...]}`. Floats are written in
//! the shortest decimal form that parses back to the same `f64` (at most 17
//! significant digits), so results reload bit-exactly.

use serde::{Deserialize, Serialize};

use crate::hilbert::{ObservableBasis, PureState, C64};
use crate::imposition::CompositionOrder;
use crate::solver::{NearestEigenvector, RunSummary, SolverConfig};

pub const SCHEMA_VERSION: u32 = 1;

pub type ComplexJson = [f64; 2];
pub type StateJson = Vec<ComplexJson>;

pub fn encode_amplitudes(amps: &[C64]) -> StateJson {
    amps.iter().map(|z| [z.re, z.im]).collect()
}

pub fn encode_state(state: &PureState) -> StateJson {
    encode_amplitudes(state.amplitudes())
}

pub fn decode_amplitudes(json: &[ComplexJson]) -> Vec<C64> {
    json.iter().map(|[re, im]| C64::new(*re, *im)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    pub label: String,
    pub vectors: Vec<StateJson>,
}

impl From<&ObservableBasis> for BasisJson {
    fn from(b: &ObservableBasis) -> Self {
        Self {
            label: b.label().to_string(),
            vectors: b.vectors().iter().map(|v| encode_amplitudes(v)).collect(),
        }
    }
}

/// A family name (`"pauli"`, `"spin-1"`, `"fourier:5"`, `"random:d:m:seed"`),
/// a labelled selection from a family, or inline bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasesSpec {
    Family(String),
    Selection { family: String, select: Vec<String> },
    Inline(Vec<BasisJson>),
}

/// `"random"`, a vector of a named basis, or inline amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Keyword(String),
    Eigenvector { basis: String, index: usize },
    Inline(StateJson),
}

/// Solver settings; unset fields keep their defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOverrides {
    pub max_iters: Option<usize>,
    pub conv_tol: Option<f64>,
    pub physical_tol: Option<f64>,
    pub dedup_tol: Option<f64>,
    pub n_seeds: Option<usize>,
    pub lambda: Option<f64>,
    pub composition_order: Option<CompositionOrder>,
    pub master_seed: Option<u64>,
}

impl SolverOverrides {
    pub fn apply(&self, config: &mut SolverConfig) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { config.$f = v; } )* };
        }
        set!(
            max_iters,
            conv_tol,
            physical_tol,
            dedup_tol,
            n_seeds,
            lambda,
            composition_order,
            master_seed
        );
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructSpec {
    pub schema_version: u32,
    pub bases: BasesSpec,
    /// Exactly one of `generator` and `targets` must be given.
    #[serde(default)]
    pub generator: Option<StateSpec>,
    #[serde(default)]
    pub targets: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub solver: SolverOverrides,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub schema_version: u32,
    pub bases: BasesSpec,
    pub n_generators: usize,
    /// Also re-probe after perturbing each basis by at most this much.
    #[serde(default)]
    pub perturbation_epsilon: Option<f64>,
    #[serde(default)]
    pub solver: SolverOverrides,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathSpec {
    GreatCircle { from: StateSpec, to: StateSpec },
    Constant { state: StateSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Uniform { start: f64, end: f64, points: usize },
    Explicit(Vec<f64>),
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::Explicit(v) => v.clone(),
            Self::Uniform { start, end, points } => match points {
                0 => vec![],
                1 => vec![*start],
                n => (0..*n)
                    .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BifurcateSpec {
    pub schema_version: u32,
    pub bases: BasesSpec,
    pub path: PathSpec,
    pub grid: GridSpec,
    #[serde(default)]
    pub solver: SolverOverrides,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySpec {
    pub schema_version: u32,
    pub bases: BasesSpec,
    pub generator: StateSpec,
    /// Defaults to a random equal-modulus seed.
    #[serde(default)]
    pub seed: Option<StateSpec>,
    #[serde(default)]
    pub solver: SolverOverrides,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterJson {
    pub state: StateJson,
    pub multiplicity: usize,
    pub distributional_residual: f64,
    pub iterations: usize,
    pub seed_index: usize,
    /// Bures distance to the generator, when one was given.
    pub generator_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructResult {
    pub schema_version: u32,
    pub command: String,
    pub dim: usize,
    pub bases: Vec<String>,
    pub generator: Option<StateJson>,
    pub config: SolverConfig,
    pub cardinality_estimate: usize,
    pub continuum_flag: bool,
    pub runs: RunSummary,
    pub median_nearest_spacing: Option<f64>,
    pub saturation: Vec<usize>,
    pub clusters: Vec<ClusterJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleJson {
    pub generator_index: usize,
    pub generator: StateJson,
    pub cardinality: usize,
    pub continuum_flag: bool,
    pub nearest_eigenvector: NearestEigenvector,
    pub partners: Vec<StateJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub complete: bool,
    pub generators_tested: usize,
    pub cardinalities: Vec<usize>,
    pub anomalies: usize,
    pub counterexample: Option<CounterexampleJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationJson {
    pub epsilon: f64,
    pub perturbation_norms: Vec<f64>,
    pub perturbed_bases: Vec<BasisJson>,
    pub verdict: VerdictJson,
    pub incompleteness_persisted: bool,
    pub verdict_unchanged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub schema_version: u32,
    pub command: String,
    pub dim: usize,
    pub bases: Vec<String>,
    pub config: SolverConfig,
    pub n_generators: usize,
    pub verdict: VerdictJson,
    pub perturbation: Option<PerturbationJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketJson {
    pub t_lo: f64,
    pub t_hi: f64,
    pub cardinality_lo: usize,
    pub cardinality_hi: usize,
    pub nearest_lo: NearestEigenvector,
    pub nearest_hi: NearestEigenvector,
}

/// Sidecar of the bifurcation CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub schema_version: u32,
    pub command: String,
    pub dim: usize,
    pub bases: Vec<String>,
    pub config: SolverConfig,
    pub grid_points: usize,
    pub brackets: Vec<BracketJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub schema_version: u32,
    pub command: String,
    pub dim: u64,
    pub alpha: u32,
    /// Informationally complete rank-one POVMs need strictly more elements.
    pub bound: u64,
}
