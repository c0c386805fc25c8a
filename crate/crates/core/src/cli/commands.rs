use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::schema::*;
use super::{write_output, Cli, CliError, Command, EXIT_ANOMALY, EXIT_OK};
use crate::catalog::{family_by_name, pauli_bases, povm_lower_bound, spin_observable_bases};
use crate::error::{check_dim, Error};
use crate::hilbert::{random_state, ObservableBasis, ProbDist, PureState};
use crate::imposition::TomographyProblem;
use crate::metrics::bures;
use crate::solver::{
    bifurcation_sweep, completeness_probe, enumerate_partners, make_seed, nearest_eigenvector, perturbation_probe,
    task_rng, trajectory, CompletenessReport, GeneratorPath, SolverConfig, GENERATOR_STREAM, SEED_STREAM,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// No physical fixed point was found.
    Anomaly,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Success => EXIT_OK,
            Self::Anomaly => EXIT_ANOMALY,
        }
    }
}

pub(super) fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Reconstruct { spec } => reconstruct(cli, spec),
        Command::Bifurcate { spec } => bifurcate(cli, spec),
        Command::Probe { spec } => probe(cli, spec),
        Command::Trajectory { spec } => trajectory_cmd(cli, spec),
        Command::Bound { dim } => bound(cli, *dim),
    }
}

fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn check_version(v: u32) -> Result<(), CliError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(CliError::Spec(format!(
            "unsupported schema_version {v} (expected {SCHEMA_VERSION})"
        )))
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("result types serialize");
    bytes.push(b'\n');
    bytes
}

/// Shortest round-trip decimal form.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn resolve_bases(spec: &BasesSpec) -> Result<Vec<ObservableBasis>, CliError> {
    let bases = match spec {
        BasesSpec::Family(name) => family_by_name(name)?.bases,
        BasesSpec::Selection { family, select } => family_by_name(family)?.select(select)?.bases,
        BasesSpec::Inline(list) => list
            .iter()
            .map(|b| {
                let vectors = b.vectors.iter().map(|v| decode_amplitudes(v)).collect();
                ObservableBasis::new(vectors, b.label.clone())
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let first = bases.first().ok_or(Error::EmptyBases)?;
    for b in &bases {
        check_dim(first.dim(), b.dim())?;
    }
    Ok(bases)
}

/// Basis vector by label: the spec's own bases first, then the named
/// families of matching dimension.
fn lookup_eigenvector(bases: &[ObservableBasis], label: &str, index: usize) -> Result<PureState, CliError> {
    let dim = bases[0].dim();
    if let Some(b) = bases.iter().find(|b| b.label() == label) {
        return Ok(b.state(index)?);
    }
    let mut known = pauli_bases().bases;
    known.extend(spin_observable_bases(1)?.bases);
    known.extend(spin_observable_bases(2)?.bases);
    known
        .iter()
        .find(|b| b.label() == label && b.dim() == dim)
        .ok_or_else(|| CliError::Spec(format!("no basis labelled `{label}` in dimension {dim}")))
        .and_then(|b| Ok(b.state(index)?))
}

fn resolve_state(
    spec: &StateSpec,
    bases: &[ObservableBasis],
    random: impl FnOnce() -> Result<PureState, Error>,
) -> Result<PureState, CliError> {
    let dim = bases[0].dim();
    let state = match spec {
        StateSpec::Keyword(k) if k == "random" => random()?,
        StateSpec::Keyword(k) => return Err(CliError::Spec(format!("unknown state keyword `{k}`"))),
        StateSpec::Eigenvector { basis, index } => lookup_eigenvector(bases, basis, *index)?,
        StateSpec::Inline(amps) => PureState::new(decode_amplitudes(amps))?,
    };
    check_dim(dim, state.dim())?;
    Ok(state)
}

fn solver_config(cli: &Cli, dim: usize, spec: &SolverOverrides) -> Result<SolverConfig, CliError> {
    let mut config = SolverConfig::for_dim(dim);
    if let Some(path) = &cli.config {
        let file: SolverOverrides = load_json(path)?;
        file.apply(&mut config);
    }
    spec.apply(&mut config);
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn random_generator(config: &SolverConfig, dim: usize) -> impl FnOnce() -> Result<PureState, Error> {
    let mut rng = task_rng(config.master_seed, GENERATOR_STREAM, 0);
    move || random_state(dim, &mut rng)
}

fn labels(bases: &[ObservableBasis]) -> Vec<String> {
    bases.iter().map(|b| b.label().to_string()).collect()
}

fn reconstruct(cli: &Cli, spec_path: &Path) -> Result<Outcome, CliError> {
    let spec: ReconstructSpec = load_json(spec_path)?;
    check_version(spec.schema_version)?;
    let bases = resolve_bases(&spec.bases)?;
    let dim = bases[0].dim();
    let config = solver_config(cli, dim, &spec.solver)?;

    let problem = match (&spec.generator, &spec.targets) {
        (Some(g), None) => {
            let generator = resolve_state(g, &bases, random_generator(&config, dim))?;
            TomographyProblem::from_generator(&generator, bases.clone())?
        }
        (None, Some(targets)) => {
            let targets = targets
                .iter()
                .map(|p| ProbDist::new(p.clone()))
                .collect::<Result<Vec<_>, _>>()?;
            TomographyProblem::new(bases.clone(), targets)?
        }
        _ => return Err(CliError::Spec("give exactly one of `generator` and `targets`".into())),
    };

    let set = enumerate_partners(&problem, &config)?;
    let clusters = set
        .clusters
        .iter()
        .map(|c| {
            let generator_distance = problem
                .generator()
                .map(|g| bures(g, &c.representative.state))
                .transpose()?;
            Ok(ClusterJson {
                state: encode_state(&c.representative.state),
                multiplicity: c.multiplicity,
                distributional_residual: c.representative.distributional_residual,
                iterations: c.representative.iterations,
                seed_index: c.representative.seed_index,
                generator_distance,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let result = ReconstructResult {
        schema_version: SCHEMA_VERSION,
        command: "reconstruct".into(),
        dim,
        bases: labels(&bases),
        generator: problem.generator().map(encode_state),
        config,
        cardinality_estimate: set.cardinality_estimate,
        continuum_flag: set.continuum_flag,
        runs: set.runs,
        median_nearest_spacing: set.median_nearest_spacing,
        saturation: set.saturation.clone(),
        clusters,
    };
    write_output(cli.out.as_deref(), &to_json(&result))?;
    if set.is_empty() {
        eprintln!("warning: no physical fixed point found");
        Ok(Outcome::Anomaly)
    } else {
        Ok(Outcome::Success)
    }
}

fn verdict_json(report: &CompletenessReport, bases: &[ObservableBasis]) -> Result<VerdictJson, CliError> {
    let counterexample = match &report.counterexample {
        Some(ce) => Some(CounterexampleJson {
            generator_index: ce.generator_index,
            generator: encode_state(&ce.generator),
            cardinality: ce.cardinality,
            continuum_flag: ce.continuum_flag,
            nearest_eigenvector: nearest_eigenvector(bases, &ce.generator)?,
            partners: ce.partners.iter().map(encode_state).collect(),
        }),
        None => None,
    };
    Ok(VerdictJson {
        complete: report.complete,
        generators_tested: report.generators_tested,
        cardinalities: report.cardinalities.clone(),
        anomalies: report.anomalies,
        counterexample,
    })
}

fn probe(cli: &Cli, spec_path: &Path) -> Result<Outcome, CliError> {
    let spec: ProbeSpec = load_json(spec_path)?;
    check_version(spec.schema_version)?;
    if spec.n_generators == 0 {
        return Err(CliError::Spec("n_generators must be at least 1".into()));
    }
    let bases = resolve_bases(&spec.bases)?;
    let dim = bases[0].dim();
    let config = solver_config(cli, dim, &spec.solver)?;

    let (verdict, perturbation) = match spec.perturbation_epsilon {
        None => (
            verdict_json(&completeness_probe(&bases, spec.n_generators, &config)?, &bases)?,
            None,
        ),
        Some(eps) => {
            let r = perturbation_probe(&bases, eps, spec.n_generators, &config)?;
            let pert = PerturbationJson {
                epsilon: eps,
                perturbation_norms: r.perturbation_norms.clone(),
                perturbed_bases: r.perturbed_bases.iter().map(BasisJson::from).collect(),
                verdict: verdict_json(&r.perturbed, &r.perturbed_bases)?,
                incompleteness_persisted: r.incompleteness_persisted,
                verdict_unchanged: r.verdict_unchanged,
            };
            (verdict_json(&r.baseline, &bases)?, Some(pert))
        }
    };
    let result = ProbeResult {
        schema_version: SCHEMA_VERSION,
        command: "probe".into(),
        dim,
        bases: labels(&bases),
        config,
        n_generators: spec.n_generators,
        verdict,
        perturbation,
    };
    write_output(cli.out.as_deref(), &to_json(&result))?;
    Ok(Outcome::Success)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.brackets.json"))
}

fn bifurcate(cli: &Cli, spec_path: &Path) -> Result<Outcome, CliError> {
    let spec: BifurcateSpec = load_json(spec_path)?;
    check_version(spec.schema_version)?;
    let bases = resolve_bases(&spec.bases)?;
    let dim = bases[0].dim();
    let config = solver_config(cli, dim, &spec.solver)?;
    let path = match &spec.path {
        PathSpec::GreatCircle { from, to } => {
            let mut rng = task_rng(config.master_seed, GENERATOR_STREAM, 0);
            let from = resolve_state(from, &bases, || random_state(dim, &mut rng))?;
            let to = resolve_state(to, &bases, || random_state(dim, &mut rng))?;
            GeneratorPath::great_circle(from, to)?
        }
        PathSpec::Constant { state } => {
            GeneratorPath::Constant(resolve_state(state, &bases, random_generator(&config, dim))?)
        }
    };
    let grid = spec.grid.values();
    if grid.is_empty() {
        return Err(CliError::Spec("grid has no points".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(CliError::Spec("grid values must be finite".into()));
    }
    let sweep = bifurcation_sweep(&bases, |t| path.at(t), &grid, &config)?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["t", "cardinality", "nearest_eigenvector_distance"])?;
    for p in &sweep.points {
        csv.write_record([num(p.t), p.cardinality.to_string(), num(p.nearest_eigenvector.distance)])?;
    }
    let csv_bytes = csv.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;

    let summary = SweepSummary {
        schema_version: SCHEMA_VERSION,
        command: "bifurcate".into(),
        dim,
        bases: labels(&bases),
        config,
        grid_points: grid.len(),
        brackets: sweep
            .brackets
            .iter()
            .map(|b| BracketJson {
                t_lo: b.t_lo,
                t_hi: b.t_hi,
                cardinality_lo: b.cardinality_lo,
                cardinality_hi: b.cardinality_hi,
                nearest_lo: b.nearest_lo.clone(),
                nearest_hi: b.nearest_hi.clone(),
            })
            .collect(),
    };
    write_output(cli.out.as_deref(), &csv_bytes)?;
    match &cli.out {
        Some(out) => write_output(Some(&sidecar_path(out)), &to_json(&summary))?,
        None => eprintln!(
            "{} bifurcation bracket(s); pass --out to write the JSON summary",
            summary.brackets.len()
        ),
    }
    Ok(Outcome::Success)
}

/// Bloch coordinates of a qubit state `(a, b)`:
/// `(2 Re(a* b), 2 Im(a* b), |a|^2 - |b|^2)`.
pub fn bloch_vector(state: &PureState) -> Option<[f64; 3]> {
    match state.amplitudes() {
        [a, b] => {
            let ab = a.conj() * b;
            Some([2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()])
        }
        _ => None,
    }
}

fn trajectory_cmd(cli: &Cli, spec_path: &Path) -> Result<Outcome, CliError> {
    let spec: TrajectorySpec = load_json(spec_path)?;
    check_version(spec.schema_version)?;
    let bases = resolve_bases(&spec.bases)?;
    let dim = bases[0].dim();
    let config = solver_config(cli, dim, &spec.solver)?;
    let generator = resolve_state(&spec.generator, &bases, random_generator(&config, dim))?;
    let problem = TomographyProblem::from_generator(&generator, bases.clone())?;
    let seed_spec = spec.seed.clone().unwrap_or(StateSpec::Keyword("random".into()));
    let first = problem.first_acting_basis(config.composition_order).clone();
    let mut rng = task_rng(config.master_seed, SEED_STREAM, 0);
    let seed = resolve_state(&seed_spec, &bases, || make_seed(dim, &first, &mut rng))?;
    let points = trajectory(&problem, &seed, &config)?;

    let mut header = vec!["n".to_string()];
    for k in 0..dim {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    header.extend(["step".to_string(), "residual".to_string()]);
    if dim == 2 {
        header.extend(["bloch_x", "bloch_y", "bloch_z"].map(String::from));
    }
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(&header)?;
    for p in &points {
        let mut row = vec![p.n.to_string()];
        for z in p.state.amplitudes() {
            row.push(num(z.re));
            row.push(num(z.im));
        }
        row.push(num(p.step));
        row.push(num(p.residual));
        if let Some(v) = bloch_vector(&p.state) {
            row.extend(v.map(num));
        }
        csv.write_record(&row)?;
    }
    let bytes = csv.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    write_output(cli.out.as_deref(), &bytes)?;
    Ok(Outcome::Success)
}

fn bound(cli: &Cli, dim: u64) -> Result<Outcome, CliError> {
    let bound = povm_lower_bound(dim)?;
    let result = BoundResult {
        schema_version: SCHEMA_VERSION,
        command: "bound".into(),
        dim,
        alpha: (dim - 1).count_ones(),
        bound,
    };
    write_output(cli.out.as_deref(), &to_json(&result))?;
    Ok(Outcome::Success)
}
