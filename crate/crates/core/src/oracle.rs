//! Independent checks: the PPT test, naive recomputation of J, and the
//! soundness sweep "detected ⟹ NPT".
//!
//! PPT is the only entanglement test here. It decides separability for
//! 2⊗2 and 2⊗3; beyond that it is one-sided (NPT ⟹ entangled), which is
//! all a soundness check of one-sided criteria needs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{Criterion, Orientation};
use crate::error::{Error, Result};
use crate::linalg::{
    min_eigenvalue, tensor, trace_product, DensityMatrix, Matrix, Subsystem, C64, PSD_TOL,
};
use crate::measurements::{GsicSet, MumSet};
use crate::states::{max_steerable_mixed, munro_mems, werner_derivative};

/// Tolerance for brute-force vs optimized J.
pub const BRUTE_FORCE_TOL: f64 = 1e-11;

pub fn pt_min_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    min_eigenvalue(&rho.partial_transpose(Subsystem::B))
}

/// True iff ρ^{T_B} has an eigenvalue below −1e-10. A failed
/// eigendecomposition reports `false`.
pub fn is_npt(rho: &DensityMatrix) -> bool {
    pt_min_eigenvalue(rho)
        .map(|m| m < -PSD_TOL)
        .unwrap_or(false)
}

/// Σ over `pairing` of Tr[(A_i ⊗ B_j) ρ], forming every Kronecker product.
pub fn brute_force_j(
    rho: &DensityMatrix,
    effects_a: &[Matrix],
    effects_b: &[Matrix],
    pairing: &[(usize, usize)],
) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for &(i, j) in pairing {
        let (a, b) = match (effects_a.get(i), effects_b.get(j)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "pairing ({i}, {j}) out of range"
                )))
            }
        };
        acc += trace_product(&tensor(a, b), rho.matrix())?;
    }
    Ok(acc)
}

/// Explicit effect lists for one party each, with their pairing.
#[derive(Debug, Clone)]
pub struct ExplicitPairing {
    pub effects_a: Vec<Matrix>,
    pub effects_b: Vec<Matrix>,
    pub pairing: Vec<(usize, usize)>,
}

impl ExplicitPairing {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<C64> {
        brute_force_j(rho, &self.effects_a, &self.effects_b, &self.pairing)
    }

    fn oriented(
        qudit: Vec<Matrix>,
        qubit: Vec<Matrix>,
        pairs: Vec<(usize, usize)>,
        o: Orientation,
    ) -> Self {
        match o {
            Orientation::QuditQubit => Self {
                effects_a: qudit,
                effects_b: qubit,
                pairing: pairs,
            },
            Orientation::QubitQudit => Self {
                effects_a: qubit,
                effects_b: qudit,
                pairing: pairs.into_iter().map(|(i, j)| (j, i)).collect(),
            },
        }
    }
}

/// Qudit effects in (b, n) order paired with the qubit list
/// [Q_0^{(0)}, Q_1^{(0)}, …, Q_1^{(2)}, 𝕀/2].
pub fn mum_pairing(qudit: &MumSet, qubit: &MumSet, orientation: Orientation) -> ExplicitPairing {
    let d = qudit.dim();
    let mut qudit_list = Vec::new();
    let mut qubit_list = Vec::new();
    for b in 0..3 {
        for n in 0..2 {
            qubit_list.push(qubit.effect(b, n).clone());
        }
    }
    let pad = qubit_list.len();
    qubit_list.push(Matrix::identity(2).scale(0.5));
    let mut pairs = Vec::new();
    for b in 0..=d {
        for n in 0..d {
            let r = if b < 3 && n < 2 { 2 * b + n } else { pad };
            pairs.push((qudit_list.len(), r));
            qudit_list.push(qudit.effect(b, n).clone());
        }
    }
    ExplicitPairing::oriented(qudit_list, qubit_list, pairs, orientation)
}

/// Qudit effects P_j paired with Q_j for j < 4 and 𝕀/4 beyond.
pub fn gsic_pairing(qudit: &GsicSet, qubit: &GsicSet, orientation: Orientation) -> ExplicitPairing {
    let mut qubit_list: Vec<Matrix> = qubit.effects().to_vec();
    qubit_list.push(Matrix::identity(2).scale(0.25));
    let pairs = (0..qudit.effects().len()).map(|j| (j, j.min(4))).collect();
    ExplicitPairing::oriented(qudit.effects().to_vec(), qubit_list, pairs, orientation)
}

/// Brute-force evaluation of whatever J a criterion uses.
pub fn brute_force_for(criterion: &Criterion, rho: &DensityMatrix) -> Result<f64> {
    let j = match criterion {
        Criterion::Mum {
            orientation,
            qudit,
            qubit,
        } => mum_pairing(qudit, qubit, *orientation).evaluate(rho)?,
        Criterion::Gsic {
            orientation,
            qudit,
            qubit,
        } => gsic_pairing(qudit, qubit, *orientation).evaluate(rho)?,
        Criterion::Correlation => {
            let s: Vec<Matrix> = (1..=3).map(crate::linalg::pauli).collect();
            let signed: Vec<Matrix> = vec![s[0].clone(), s[1].scale(-1.0), s[2].clone()];
            brute_force_j(rho, &s, &signed, &[(0, 0), (1, 1), (2, 2)])?
        }
    };
    Ok(j.re)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub runs: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub worst: Option<String>,
    pub passed: bool,
}

impl OracleCheck {
    fn from_samples(name: &str, tolerance: f64, samples: Vec<(f64, String)>) -> Self {
        let runs = samples.len();
        let worst = samples.into_iter().max_by(|a, b| a.0.total_cmp(&b.0));
        let (max_deviation, worst) = match worst {
            Some((d, loc)) => (d, Some(loc)),
            None => (0.0, None),
        };
        Self {
            name: name.to_string(),
            runs,
            max_deviation,
            tolerance,
            worst,
            passed: max_deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
    pub passed: bool,
}

impl OracleReport {
    pub fn new(checks: Vec<OracleCheck>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self { checks, passed }
    }

    pub fn total_runs(&self) -> usize {
        self.checks.iter().map(|c| c.runs).sum()
    }
}

/// A labelled list of states to run through the suite.
#[derive(Debug, Clone)]
pub struct StateGrid {
    pub label: String,
    pub states: Vec<(String, DensityMatrix)>,
}

/// Per-state findings: (deviation, location) pairs.
type Findings = Vec<(f64, String)>;

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| match i {
        0 => lo,
        _ if i + 1 == n => hi,
        _ => lo + (hi - lo) * i as f64 / (n - 1) as f64,
    })
}

/// n × n grid over p ∈ [0, 1], θ ∈ [0, π/4].
pub fn werner_grid(n: usize) -> Result<StateGrid> {
    let mut states = Vec::with_capacity(n * n);
    for p in linspace(0.0, 1.0, n) {
        for theta in linspace(0.0, std::f64::consts::FRAC_PI_4, n) {
            states.push((
                format!("p={p:.6},theta={theta:.6}"),
                werner_derivative(p, theta)?,
            ));
        }
    }
    Ok(StateGrid {
        label: "werner-derivative".into(),
        states,
    })
}

pub fn munro_grid(points: usize) -> Result<StateGrid> {
    let states = linspace(0.0, 1.0, points)
        .map(|c| Ok((format!("C={c:.6}"), munro_mems(c)?)))
        .collect::<Result<_>>()?;
    Ok(StateGrid {
        label: "munro".into(),
        states,
    })
}

pub fn tau_grid(points: usize) -> Result<StateGrid> {
    let states = linspace(-1.0, 1.0, points)
        .map(|t| Ok((format!("tau={t:.6}"), max_steerable_mixed(t)?)))
        .collect::<Result<_>>()?;
    Ok(StateGrid {
        label: "max-steerable".into(),
        states,
    })
}

/// Run every criterion on every state and check:
///
/// * soundness: detection only on NPT states (deviation is the detection
///   margin of any offending state, tolerance 0);
/// * agreement of optimized J with [`brute_force_for`] within 1e-11.
///
/// Criteria whose state dimensions do not match a state are skipped for it.
pub fn consistency_suite(
    grids: &[StateGrid],
    criteria: &[Criterion],
    mu: f64,
) -> Result<OracleReport> {
    let items: Vec<(&str, &str, &DensityMatrix)> = grids
        .iter()
        .flat_map(|g| {
            g.states
                .iter()
                .map(move |(loc, s)| (g.label.as_str(), loc.as_str(), s))
        })
        .collect();
    let rows: Vec<(Findings, Findings)> = items
        .par_iter()
        .map(|&(label, loc, rho)| {
            let npt = is_npt(rho);
            let mut sound = Vec::new();
            let mut agree = Vec::new();
            for crit in criteria.iter().filter(|c| c.state_dims() == rho.dims()) {
                let v = crit.evaluate(rho, mu)?;
                let where_ = format!("{label}[{loc}] {}", v.criterion);
                let bad = if v.detected && !npt { v.margin() } else { 0.0 };
                sound.push((bad, where_.clone()));
                let brute = brute_force_for(crit, rho)?;
                agree.push(((brute - v.j_value).abs(), where_));
            }
            Ok((sound, agree))
        })
        .collect::<Result<_>>()?;
    let (sound, agree): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(OracleReport::new(vec![
        OracleCheck::from_samples(
            "detected-implies-npt",
            0.0,
            sound.into_iter().flatten().collect(),
        ),
        OracleCheck::from_samples(
            "brute-force-j",
            BRUTE_FORCE_TOL,
            agree.into_iter().flatten().collect(),
        ),
    ]))
}
