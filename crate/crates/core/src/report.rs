//! JSON report shapes shared by the command-line tool.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::criteria::{Criterion, CriterionId, Direction, SteeringVerdict};
use crate::linalg::Matrix;
use crate::measurements::{GsicSet, GsicValidation, MumSet, MumValidation};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideInfo {
    pub d: usize,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
}

impl SideInfo {
    pub fn mum(s: &MumSet) -> Self {
        Self {
            d: s.dim(),
            t: s.t(),
            kappa: Some(s.kappa()),
            a: None,
        }
    }

    pub fn gsic(s: &GsicSet) -> Self {
        Self {
            d: s.dim(),
            t: s.t(),
            kappa: None,
            a: Some(s.a()),
        }
    }
}

/// Measurement provenance: the qudit side is flattened into the top level,
/// the padded qubit side is nested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementInfo {
    pub kind: String,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub qudit: Option<SideInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubit: Option<SideInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubit_conjugated: Option<bool>,
}

impl MeasurementInfo {
    pub fn of(criterion: &Criterion, conjugated: bool) -> Self {
        match criterion {
            Criterion::Mum { qudit, qubit, .. } => Self {
                kind: "mum".into(),
                qudit: Some(SideInfo::mum(qudit)),
                qubit: Some(SideInfo::mum(qubit)),
                qubit_conjugated: Some(conjugated),
            },
            Criterion::Gsic { qudit, qubit, .. } => Self {
                kind: "gsic".into(),
                qudit: Some(SideInfo::gsic(qudit)),
                qubit: Some(SideInfo::gsic(qubit)),
                qubit_conjugated: Some(conjugated),
            },
            Criterion::Correlation => Self {
                kind: "pauli-correlation".into(),
                qudit: None,
                qubit: None,
                qubit_conjugated: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StateInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub dims: [usize; 2],
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub criterion: CriterionId,
    pub direction: Direction,
    pub mu: f64,
    pub j: f64,
    pub threshold: f64,
    pub margin: f64,
    pub detected: bool,
    pub measurement: MeasurementInfo,
    pub state: StateInfo,
    pub version: String,
}

impl EvaluationReport {
    pub fn new(verdict: &SteeringVerdict, measurement: MeasurementInfo, state: StateInfo) -> Self {
        Self {
            criterion: verdict.criterion,
            direction: verdict.direction,
            mu: verdict.mu,
            j: verdict.j_value,
            threshold: verdict.threshold,
            margin: verdict.margin(),
            detected: verdict.detected,
            measurement,
            state,
            version: VERSION.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectJson {
    pub setting: usize,
    pub outcome: usize,
    /// Rows of [re, im] pairs.
    pub rows: Vec<Vec<[f64; 2]>>,
}

fn rows_of(m: &Matrix) -> Vec<Vec<[f64; 2]>> {
    m.rows()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValidationJson {
    Mum(MumValidation),
    Gsic(GsicValidation),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetReport {
    pub kind: String,
    pub d: usize,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub valid: bool,
    pub validation: ValidationJson,
    pub effects: Vec<EffectJson>,
    pub version: String,
}

impl MeasurementSetReport {
    pub fn mum(s: &MumSet, v: MumValidation) -> Self {
        let effects = (0..s.settings())
            .flat_map(|b| (0..s.dim()).map(move |n| (b, n)))
            .map(|(b, n)| EffectJson {
                setting: b,
                outcome: n,
                rows: rows_of(s.effect(b, n)),
            })
            .collect();
        Self {
            kind: "mum".into(),
            d: s.dim(),
            t: s.t(),
            kappa: Some(s.kappa()),
            a: None,
            valid: v.passes(),
            validation: ValidationJson::Mum(v),
            effects,
            version: VERSION.to_string(),
        }
    }

    pub fn gsic(s: &GsicSet, v: GsicValidation) -> Self {
        let effects = s
            .effects()
            .iter()
            .enumerate()
            .map(|(k, e)| EffectJson {
                setting: 0,
                outcome: k,
                rows: rows_of(e),
            })
            .collect();
        Self {
            kind: "gsic".into(),
            d: s.dim(),
            t: s.t(),
            kappa: None,
            a: Some(s.a()),
            valid: v.passes(),
            validation: ValidationJson::Gsic(v),
            effects,
            version: VERSION.to_string(),
        }
    }
}
