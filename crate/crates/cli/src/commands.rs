use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use mumsteer_core::criteria::{Criterion, CriterionId, Direction, MeasurementConfig};
use mumsteer_core::measurements::{
    resolve_gsic_t, resolve_mum_t, validate_gsic, validate_mums, CONSTRUCTION_TOL,
};
use mumsteer_core::report::{
    EvaluationReport, MeasurementInfo, MeasurementSetReport, StateInfo, VERSION,
};
use mumsteer_core::scan::{
    find_boundary, run_sweep, write_sweep_csv, Axis, BoundaryQuery, BoundaryResult, SweepSpec,
};
use mumsteer_core::shotsim::{
    estimate_for, verdict_with_confidence, Confidence, ShotConfig, ShotEstimate,
};
use mumsteer_core::states::load_density;
use mumsteer_core::{build_gsic, build_mums, DensityMatrix, Family, TChoice};
use serde::Serialize;

use crate::args::{
    AxisArg, Bound, BoundaryArgs, BuildArgs, CriterionArgs, EvaluateArgs, Kind, SimulateArgs,
    StateArgs, SweepArgs, Target,
};
use crate::exit::{CliError, VALIDATION};

type CliResult<T> = Result<T, CliError>;

/// Where a report goes: --out, else `<out_dir>/<default_name>`, else stdout.
fn destination(
    out: Option<PathBuf>,
    out_dir: Option<&Path>,
    default_name: &str,
) -> CliResult<Option<PathBuf>> {
    if out.is_some() {
        return Ok(out);
    }
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::new(crate::exit::IO, format!("{}: {e}", dir.display())))?;
            Ok(Some(dir.join(default_name)))
        }
        None => Ok(None),
    }
}

fn open_sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::new(crate::exit::IO, format!("{}: {e}", p.display()))
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(
    value: &T,
    out: Option<PathBuf>,
    out_dir: Option<&Path>,
    name: &str,
) -> CliResult<()> {
    let path = destination(out, out_dir, name)?;
    let text = serde_json::to_string_pretty(value).map_err(mumsteer_core::Error::from)?;
    let mut sink = open_sink(path.as_deref())?;
    writeln!(sink, "{text}")
        .and_then(|_| sink.flush())
        .map_err(|e| CliError::new(crate::exit::IO, e.to_string()))?;
    if let Some(p) = path {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn measurement_config(c: &CriterionArgs) -> MeasurementConfig {
    MeasurementConfig {
        qudit_t: c.qudit_t,
        qubit_t: c.qubit_t,
        conjugate_qubit: !c.no_conjugate,
    }
}

fn family_with(name: &str, params: &[(String, f64)]) -> CliResult<Family> {
    let mut family = Family::from_name(name)?;
    for (k, v) in params {
        family.set_param(k, *v)?;
    }
    Ok(family)
}

fn load_state(a: &StateArgs) -> CliResult<(DensityMatrix, StateInfo)> {
    match (&a.state, &a.family) {
        (Some(path), _) => {
            if !a.params.is_empty() {
                return Err(CliError::bad_input(
                    "--param applies to --family states only",
                ));
            }
            let rho = load_density(path)?;
            let info = StateInfo {
                file: Some(path.display().to_string()),
                dims: [rho.dim_a(), rho.dim_b()],
                ..Default::default()
            };
            Ok((rho, info))
        }
        (None, Some(name)) => {
            let family = family_with(name, &a.params)?;
            let rho = family.state()?;
            let info = StateInfo {
                family: Some(family.name().to_string()),
                dims: [2, 2],
                params: family
                    .params()
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v))
                    .collect(),
                ..Default::default()
            };
            Ok((rho, info))
        }
        (None, None) => Err(CliError::bad_input("give --state or --family")),
    }
}

/// Qudit dimension implied by the state for a given criterion.
fn qudit_dim(id: CriterionId, rho: &DensityMatrix) -> usize {
    match id.orientation() {
        Some(mumsteer_core::Orientation::QuditQubit) => rho.dim_a(),
        Some(mumsteer_core::Orientation::QubitQudit) => rho.dim_b(),
        None => 2,
    }
}

pub fn build(a: BuildArgs, out_dir: Option<&Path>) -> CliResult<()> {
    if a.d < 2 {
        return Err(CliError::bad_input(format!(
            "--d must be at least 2, got {}",
            a.d
        )));
    }
    let choice = match (a.t, a.target) {
        (Some(t), _) => TChoice::Value(t),
        (None, Some(Target::Projective)) if a.kind == Kind::Mum => TChoice::Ideal,
        (None, Some(Target::Rank1)) if a.kind == Kind::Gsic => TChoice::Ideal,
        (None, Some(Target::Projective | Target::Rank1)) => {
            return Err(CliError::bad_input(
                "projective applies to mum, rank1 to gsic",
            ));
        }
        (None, Some(Target::MaxT)) => TChoice::MaxT,
        (None, Some(Target::Auto) | None) => TChoice::Auto,
    };
    let report = match a.kind {
        Kind::Mum => {
            let t = resolve_mum_t(a.d, choice).map_err(CliError::from_build)?;
            let set = build_mums(a.d, t).map_err(CliError::from_build)?;
            MeasurementSetReport::mum(&set, validate_mums(&set, CONSTRUCTION_TOL))
        }
        Kind::Gsic => {
            let t = resolve_gsic_t(a.d, choice).map_err(CliError::from_build)?;
            let set = build_gsic(a.d, t).map_err(CliError::from_build)?;
            MeasurementSetReport::gsic(&set, validate_gsic(&set, CONSTRUCTION_TOL))
        }
    };
    let name = format!("{}-d{}.json", report.kind, report.d);
    emit_json(&report, a.out, out_dir, &name)?;
    if report.valid {
        Ok(())
    } else {
        Err(CliError::new(
            VALIDATION,
            "measurement set failed validation",
        ))
    }
}

pub fn evaluate(a: EvaluateArgs, out_dir: Option<&Path>) -> CliResult<()> {
    let (rho, state) = load_state(&a.state)?;
    let id = a.criterion.criterion.unwrap_or(CriterionId::Cor1H);
    let cfg = measurement_config(&a.criterion);
    let criterion = Criterion::build(id, qudit_dim(id, &rho), &cfg)?;
    let verdict = criterion.evaluate(&rho, a.criterion.mu)?;
    let report = EvaluationReport::new(
        &verdict,
        MeasurementInfo::of(&criterion, cfg.conjugate_qubit),
        state,
    );
    emit_json(&report, a.out, out_dir, "evaluate.json")
}

fn resolve_axis(family: &Family, axis: &AxisArg) -> CliResult<Axis> {
    let (lo, hi) = family.param_range(&axis.name)?;
    let value = |b: Bound| match b {
        Bound::RangeMin => lo,
        Bound::RangeMax => hi,
        Bound::Value(v) => v,
    };
    Ok(Axis::new(
        &axis.name,
        value(axis.min),
        value(axis.max),
        axis.steps,
    ))
}

pub fn sweep(a: SweepArgs, out_dir: Option<&Path>) -> CliResult<()> {
    let family = family_with(&a.family, &a.params)?;
    let axes = a
        .axes
        .iter()
        .map(|ax| resolve_axis(&family, ax))
        .collect::<CliResult<_>>()?;
    let spec = SweepSpec {
        family,
        axes,
        criterion: a.criterion.criterion.unwrap_or(CriterionId::Cor1H),
        mu: a.criterion.mu,
        measurement: measurement_config(&a.criterion),
    };
    let rows = run_sweep(&spec)?;
    let path = destination(a.out, out_dir, "sweep.csv")?;
    let sink = open_sink(path.as_deref())?;
    write_sweep_csv(&spec, &rows, sink)?;
    if let Some(p) = path {
        eprintln!("wrote {} rows to {}", rows.len(), p.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundaryReport {
    criterion: CriterionId,
    mu: f64,
    family: String,
    fixed: std::collections::BTreeMap<String, f64>,
    tol: f64,
    #[serde(flatten)]
    result: BoundaryResult,
    version: &'static str,
}

pub fn boundary(a: BoundaryArgs, out_dir: Option<&Path>) -> CliResult<()> {
    let family = family_with(&a.family, &a.params)?;
    let (lo, hi) = family.param_range(&a.free)?;
    let query = BoundaryQuery {
        family,
        param: a.free.clone(),
        lo: a.lo.unwrap_or(lo),
        hi: a.hi.unwrap_or(hi),
        tol: a.tol,
        criterion: a.criterion.criterion.unwrap_or(CriterionId::Cor1H),
        mu: a.criterion.mu,
        measurement: measurement_config(&a.criterion),
    };
    let result = find_boundary(&query)?;
    let fixed = family
        .params()
        .into_iter()
        .filter(|(k, _)| *k != a.free)
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let report = BoundaryReport {
        criterion: query.criterion,
        mu: query.mu,
        family: family.name().to_string(),
        fixed,
        tol: query.tol,
        result,
        version: VERSION,
    };
    emit_json(&report, a.out, out_dir, "boundary.json")
}

#[derive(Serialize)]
struct SimulationReport {
    criterion: CriterionId,
    direction: Direction,
    mu: f64,
    threshold: f64,
    exact_j: f64,
    z: f64,
    confidence: Confidence,
    /// The estimator and the decision band are ad hoc, not derived.
    estimator: &'static str,
    decision_rule: &'static str,
    estimate: ShotEstimate,
    measurement: MeasurementInfo,
    state: StateInfo,
    version: &'static str,
}

pub fn simulate(a: SimulateArgs, out_dir: Option<&Path>) -> CliResult<()> {
    let (rho, state) = load_state(&a.state)?;
    let id = a.criterion.criterion.unwrap_or(CriterionId::Thm1Mum);
    if !matches!(id, CriterionId::Thm1Mum | CriterionId::Thm2Mum) {
        return Err(CliError::bad_input(format!(
            "simulate supports thm1-mum and thm2-mum, not {id}"
        )));
    }
    let mut shot_cfg = ShotConfig::new(a.shots, a.seed)?;
    shot_cfg.sample_padded = a.sample_padded;
    let cfg = measurement_config(&a.criterion);
    let criterion = Criterion::build(id, qudit_dim(id, &rho), &cfg)?;
    let exact = criterion.evaluate(&rho, a.criterion.mu)?;
    let estimate = estimate_for(&criterion, &rho, &shot_cfg)?;
    let confidence = verdict_with_confidence(&estimate, exact.threshold, a.z)?;
    let report = SimulationReport {
        criterion: id,
        direction: exact.direction,
        mu: exact.mu,
        threshold: exact.threshold,
        exact_j: exact.j_value,
        z: a.z,
        confidence,
        estimator: "plug-in mean of per-shot scores",
        decision_rule:
            "z-band: detected if j_hat - z*se > threshold, not detected if j_hat + z*se < threshold",
        estimate,
        measurement: MeasurementInfo::of(&criterion, cfg.conjugate_qubit),
        state,
        version: VERSION,
    };
    emit_json(&report, a.out, out_dir, "simulate.json")
}
