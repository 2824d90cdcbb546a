//! Finite-shot simulation of the MUM protocol.
//!
//! Only settings 0, 1, 2 carry state information on the padded qubit side;
//! every later setting contributes exactly 1/2 and is skipped unless
//! [`ShotConfig::sample_padded`] is set. The estimator and the z-band
//! decision rule are plug-in constructions with no optimality claim.
//!
//! Randomness: ChaCha8 seeded from `seed`, with the setting index as the
//! stream id, so each setting's histogram is reproducible on its own.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{Criterion, Orientation};
use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, Matrix};
use crate::measurements::MumSet;

const COMPLETENESS_TOL: f64 = 1e-10;
const NEGATIVE_TOL: f64 = 1e-8;

/// Number of settings measured with genuine qubit effects.
pub const INFORMATIVE_SETTINGS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotConfig {
    pub shots_per_setting: u64,
    pub seed: u64,
    /// Sample the padded settings too, with a fair coin on the qubit side.
    #[serde(default)]
    pub sample_padded: bool,
}

impl ShotConfig {
    pub fn new(shots_per_setting: u64, seed: u64) -> Result<Self> {
        if shots_per_setting == 0 {
            return Err(Error::InvalidParameter(
                "shots per setting must be >= 1".into(),
            ));
        }
        Ok(Self {
            shots_per_setting,
            seed,
            sample_padded: false,
        })
    }
}

/// p(n, m) = Tr[(A_n ⊗ B_m)ρ], row-major over (n, m).
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    pub rows: usize,
    pub cols: usize,
    pub probs: Vec<f64>,
}

impl JointTable {
    pub fn get(&self, n: usize, m: usize) -> f64 {
        self.probs[n * self.cols + m]
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.probs
            .chunks(self.cols)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|m| (0..self.rows).map(|n| self.get(n, m)).sum())
            .collect()
    }

    fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = self
            .probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        cdf
    }
}

fn check_complete(effects: &[Matrix], side: &str) -> Result<()> {
    let dim = effects
        .first()
        .map(Matrix::dim)
        .ok_or_else(|| Error::InvalidParameter(format!("{side} effect list is empty")))?;
    let sum = effects.iter().fold(Matrix::zeros(dim), |acc, e| &acc + e);
    let dev = sum.max_abs_diff(&Matrix::identity(dim));
    if dev > COMPLETENESS_TOL {
        return Err(Error::Validation(format!(
            "{side} effects do not sum to identity (deviation {dev:e})"
        )));
    }
    Ok(())
}

pub fn joint_distribution(
    rho: &DensityMatrix,
    alice: &[Matrix],
    bob: &[Matrix],
) -> Result<JointTable> {
    check_complete(alice, "Alice")?;
    check_complete(bob, "Bob")?;
    let mut probs = Vec::with_capacity(alice.len() * bob.len());
    for a in alice {
        for b in bob {
            let p = rho.expectation_product(a, b)?.re;
            if p < -NEGATIVE_TOL {
                return Err(Error::NumericalIntegrity(format!(
                    "negative probability {p:e}"
                )));
            }
            probs.push(p.max(0.0));
        }
    }
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return Err(Error::NumericalIntegrity(
            "joint distribution has zero mass".into(),
        ));
    }
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(JointTable {
        rows: alice.len(),
        cols: bob.len(),
        probs,
    })
}

/// Per-setting outcome histogram, `counts[n][m]` over Alice outcome n and
/// Bob outcome m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingCounts {
    pub setting: usize,
    pub counts: Vec<Vec<u64>>,
}

impl SettingCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub j_hat: f64,
    pub std_error: f64,
    pub shots_per_setting: u64,
    pub seed: u64,
    pub per_setting_counts: Vec<SettingCounts>,
    pub settings_used: Vec<usize>,
    /// Contribution of settings that were not sampled.
    pub exact_part: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    Detected,
    NotDetected,
    Inconclusive,
}

pub fn verdict_with_confidence(est: &ShotEstimate, threshold: f64, z: f64) -> Result<Confidence> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::InvalidParameter(format!("z = {z} must be positive")));
    }
    let band = z * est.std_error;
    Ok(if est.j_hat - band > threshold {
        Confidence::Detected
    } else if est.j_hat + band < threshold {
        Confidence::NotDetected
    } else {
        Confidence::Inconclusive
    })
}

/// Inverse-CDF sampling; a draw u lands in the first cell whose cumulative
/// mass exceeds u, so ties go to the lower index.
fn sample_counts(table: &JointTable, shots: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let cdf = table.cdf();
    let mut counts = vec![0u64; cdf.len()];
    for _ in 0..shots {
        let u: f64 = rng.gen();
        let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        counts[k] += 1;
    }
    counts
}

struct SettingResult {
    counts: SettingCounts,
    mean: f64,
    var_of_mean: f64,
}

/// Mean and variance-of-mean of the per-shot score from a histogram.
fn score(
    counts: &[u64],
    cols: usize,
    shots: u64,
    value: impl Fn(usize, usize) -> f64,
) -> (f64, f64) {
    let n = shots as f64;
    let (mut s1, mut s2) = (0.0, 0.0);
    for (k, &c) in counts.iter().enumerate() {
        let x = value(k / cols, k % cols);
        s1 += c as f64 * x;
        s2 += c as f64 * x * x;
    }
    let mean = s1 / n;
    let var = if shots > 1 {
        ((s2 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    (mean, var / n)
}

fn run_setting(
    rho: &DensityMatrix,
    qudit: &MumSet,
    qubit: &MumSet,
    orientation: Orientation,
    b: usize,
    cfg: &ShotConfig,
) -> Result<SettingResult> {
    let informative = b < INFORMATIVE_SETTINGS;
    let qubit_effects: Vec<Matrix> = if informative {
        qubit.setting(b).to_vec()
    } else {
        vec![Matrix::identity(2).scale(0.5); 2]
    };
    let qudit_effects = qudit.setting(b);
    let (alice, bob) = match orientation {
        Orientation::QuditQubit => (qudit_effects, &qubit_effects[..]),
        Orientation::QubitQudit => (&qubit_effects[..], qudit_effects),
    };
    let table = joint_distribution(rho, alice, bob)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(b as u64);
    let flat = sample_counts(&table, cfg.shots_per_setting, &mut rng);

    // (qudit outcome, qubit outcome) regardless of orientation
    let split = |row: usize, col: usize| match orientation {
        Orientation::QuditQubit => (row, col),
        Orientation::QubitQudit => (col, row),
    };
    let (mean, var_of_mean) = if informative {
        score(&flat, table.cols, cfg.shots_per_setting, |r, c| {
            let (n, m) = split(r, c);
            if n >= 2 {
                0.5
            } else if n == m {
                1.0
            } else {
                0.0
            }
        })
    } else {
        score(&flat, table.cols, cfg.shots_per_setting, |r, c| {
            if split(r, c).1 == 0 {
                1.0
            } else {
                0.0
            }
        })
    };
    let counts = flat.chunks(table.cols).map(<[u64]>::to_vec).collect();
    Ok(SettingResult {
        counts: SettingCounts { setting: b, counts },
        mean,
        var_of_mean,
    })
}

/// Plug-in estimate of the MUM functional J from sampled outcomes.
pub fn estimate_j(
    rho: &DensityMatrix,
    qudit: &MumSet,
    qubit: &MumSet,
    orientation: Orientation,
    cfg: &ShotConfig,
) -> Result<ShotEstimate> {
    if cfg.shots_per_setting == 0 {
        return Err(Error::InvalidParameter(
            "shots per setting must be >= 1".into(),
        ));
    }
    if qubit.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "qubit-side set has dim {}",
            qubit.dim()
        )));
    }
    let d = qudit.dim();
    if rho.dims() != orientation.state_dims(d) {
        return Err(Error::DimensionMismatch(format!(
            "state is {:?}, measurements need {:?}",
            rho.dims(),
            orientation.state_dims(d)
        )));
    }
    let sampled = if cfg.sample_padded {
        d + 1
    } else {
        INFORMATIVE_SETTINGS.min(d + 1)
    };
    let results: Vec<SettingResult> = (0..sampled)
        .into_par_iter()
        .map(|b| run_setting(rho, qudit, qubit, orientation, b, cfg))
        .collect::<Result<_>>()?;
    let exact_part = 0.5 * (d + 1 - sampled) as f64;
    let j_hat = exact_part + results.iter().map(|r| r.mean).sum::<f64>();
    let std_error = results.iter().map(|r| r.var_of_mean).sum::<f64>().sqrt();
    Ok(ShotEstimate {
        j_hat,
        std_error,
        shots_per_setting: cfg.shots_per_setting,
        seed: cfg.seed,
        settings_used: (0..sampled).collect(),
        per_setting_counts: results.into_iter().map(|r| r.counts).collect(),
        exact_part,
    })
}

/// [`estimate_j`] for a MUM criterion; other criteria are rejected.
pub fn estimate_for(
    criterion: &Criterion,
    rho: &DensityMatrix,
    cfg: &ShotConfig,
) -> Result<ShotEstimate> {
    match criterion {
        Criterion::Mum {
            orientation,
            qudit,
            qubit,
        } => estimate_j(rho, qudit, qubit, *orientation, cfg),
        _ => Err(Error::InvalidParameter(format!(
            "shot simulation supports the MUM criteria only, not {}",
            criterion.id()
        ))),
    }
}
