//! Parameter sweeps over state families and bisection of detection
//! boundaries.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{Criterion, CriterionId, MeasurementConfig};
use crate::error::{Error, Result};
use crate::states::Family;

pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Self {
        Self {
            name: name.to_string(),
            min,
            max,
            steps,
        }
    }

    /// `steps` evenly spaced points including both ends.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: Family,
    pub axes: Vec<Axis>,
    pub criterion: CriterionId,
    pub mu: f64,
    #[serde(default)]
    pub measurement: MeasurementConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidParameter(format!(
                "a sweep needs 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::InvalidParameter(format!(
                "axis '{}' repeated",
                self.axes[0].name
            )));
        }
        for axis in &self.axes {
            if axis.steps < 2 {
                return Err(Error::InvalidParameter(format!(
                    "axis '{}' needs >= 2 steps",
                    axis.name
                )));
            }
            let (lo, hi) = self.family.param_range(&axis.name)?;
            let inside = |v: f64| v.is_finite() && (lo..=hi).contains(&v);
            if !(inside(axis.min) && inside(axis.max)) || axis.min > axis.max {
                return Err(Error::InvalidParameter(format!(
                    "axis '{}' = [{}, {}] outside [{lo}, {hi}]",
                    axis.name, axis.min, axis.max
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Vec<f64>,
    pub j: f64,
    pub threshold: f64,
    pub detected: bool,
}

impl SweepRow {
    pub fn margin(&self) -> f64 {
        self.j - self.threshold
    }
}

/// Evaluate the criterion on every grid point, row-major with the first
/// axis varying slowest. Grid points run in parallel; output order is fixed.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let criterion = Criterion::build(spec.criterion, 2, &spec.measurement)?;
    let threshold = criterion.threshold(spec.mu)?;
    let grids: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let points: Vec<Vec<f64>> = match grids.as_slice() {
        [a] => a.iter().map(|&x| vec![x]).collect(),
        [a, b] => a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| vec![x, y]))
            .collect(),
        _ => unreachable!("validated"),
    };
    points
        .into_par_iter()
        .map(|params| {
            let mut family = spec.family;
            for (axis, &v) in spec.axes.iter().zip(&params) {
                family.set_param(&axis.name, v)?;
            }
            let j = criterion.j_value(&family.state()?)?;
            Ok(SweepRow {
                params,
                j,
                threshold,
                detected: j > threshold,
            })
        })
        .collect()
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with header `<axis names…>,j,threshold,margin,detected`.
pub fn write_sweep_csv<W: Write>(spec: &SweepSpec, rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = spec.axes.iter().map(|a| a.name.clone()).collect();
    header.extend(["j", "threshold", "margin", "detected"].map(String::from));
    w.write_record(&header)?;
    for row in rows {
        let mut rec: Vec<String> = row.params.iter().copied().map(fmt_float).collect();
        rec.push(fmt_float(row.j));
        rec.push(fmt_float(row.threshold));
        rec.push(fmt_float(row.margin()));
        rec.push(row.detected.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryQuery {
    pub family: Family,
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub criterion: CriterionId,
    pub mu: f64,
    #[serde(default)]
    pub measurement: MeasurementConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResult {
    pub param: String,
    pub value: f64,
    /// Final bracket; detection status differs at its ends.
    pub bracket: [f64; 2],
    pub iterations: usize,
    pub detected_at_lo: bool,
    pub reference: Option<f64>,
}

pub fn find_boundary(q: &BoundaryQuery) -> Result<BoundaryResult> {
    if q.tol.is_nan() || q.tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {} must be positive",
            q.tol
        )));
    }
    let (lo_ok, hi_ok) = q.family.param_range(&q.param)?;
    if !(q.lo < q.hi && q.lo >= lo_ok && q.hi <= hi_ok) {
        return Err(Error::InvalidParameter(format!(
            "bracket [{}, {}] not an interval inside [{lo_ok}, {hi_ok}]",
            q.lo, q.hi
        )));
    }
    let criterion = Criterion::build(q.criterion, 2, &q.measurement)?;
    let threshold = criterion.threshold(q.mu)?;
    let status = |x: f64| -> Result<bool> {
        let mut family = q.family;
        family.set_param(&q.param, x)?;
        Ok(criterion.j_value(&family.state()?)? > threshold)
    };
    let (mut lo, mut hi) = (q.lo, q.hi);
    let at_lo = status(lo)?;
    if at_lo == status(hi)? {
        return Err(Error::BadBracket { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > q.tol {
        let mid = 0.5 * (lo + hi);
        if status(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let reference = if reduces_to_h(&criterion, &q.measurement) {
        reference_boundary(&q.family, &q.param, q.mu)
    } else {
        None
    };
    Ok(BoundaryResult {
        param: q.param.clone(),
        value: 0.5 * (lo + hi),
        bracket: [lo, hi],
        iterations,
        detected_at_lo: at_lo,
        reference,
    })
}

/// Whether the two-qubit criterion decides exactly as H(ρ) > 1/μ.
fn reduces_to_h(criterion: &Criterion, cfg: &MeasurementConfig) -> bool {
    match criterion {
        Criterion::Correlation => true,
        Criterion::Mum { qudit, qubit, .. } => {
            cfg.conjugate_qubit && qudit.dim() == 2 && (qudit.t() - qubit.t()).abs() < 1e-15
        }
        Criterion::Gsic { qudit, qubit, .. } => {
            cfg.conjugate_qubit && qudit.dim() == 2 && (qudit.t() - qubit.t()).abs() < 1e-15
        }
    }
}

/// Closed-form location of H(ρ) = 1/μ along one family parameter, when it
/// lies inside the parameter range.
pub fn reference_boundary(family: &Family, param: &str, mu: f64) -> Option<f64> {
    let inv = 1.0 / mu;
    let v = match (family, param) {
        (Family::Munro { .. }, "c" | "C") => {
            let c = (1.0 + inv) / 4.0;
            (c >= 2.0 / 3.0).then_some(c)?
        }
        (Family::WernerDerivative { theta, .. }, "p") => inv / (1.0 + 2.0 * (2.0 * theta).sin()),
        (Family::WernerDerivative { p, .. }, "theta") => {
            let s = (inv / p - 1.0) / 2.0;
            (0.0..=1.0).contains(&s).then(|| s.asin() / 2.0)?
        }
        (Family::MaxSteerableMixed { .. }, "tau") => (1.0 - inv) / 2.0,
        _ => return None,
    };
    let (lo, hi) = family.param_range(param).ok()?;
    (lo..=hi).contains(&v).then_some(v)
}
