//! Steering functionals J and H, their detection thresholds, and verdicts.
//!
//! Two orientations are supported:
//!
//! * [`Orientation::QuditQubit`]: ρ on C^d ⊗ C², qudit measurements on
//!   Alice, qubit measurements padded on Bob. Detection certifies steering
//!   from Bob to Alice.
//! * [`Orientation::QubitQudit`]: ρ on C² ⊗ C^d, the qubit side (Alice) is
//!   padded. Detection certifies steering from Alice to Bob.
//!
//! Every criterion is sufficient only and is decided with a strict
//! inequality `J > threshold`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, pauli, tensor, DensityMatrix, Matrix, C64};
use crate::measurements::{
    build_gsic, build_mums, resolve_gsic_t, resolve_mum_t, GsicSet, MumSet, TChoice,
};

/// Upper end of the admissible noise weight, 1/√3.
pub const MU_MAX: f64 = 0.577_350_269_189_625_8;

/// Imaginary part of J above which evaluation is treated as corrupted.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriterionId {
    #[serde(rename = "thm1-mum")]
    Thm1Mum,
    #[serde(rename = "thm2-mum")]
    Thm2Mum,
    #[serde(rename = "thm3-gsic")]
    Thm3Gsic,
    #[serde(rename = "thm4-gsic")]
    Thm4Gsic,
    #[serde(rename = "cor1-h")]
    Cor1H,
}

impl CriterionId {
    pub const ALL: [CriterionId; 5] = [
        CriterionId::Thm1Mum,
        CriterionId::Thm2Mum,
        CriterionId::Thm3Gsic,
        CriterionId::Thm4Gsic,
        CriterionId::Cor1H,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::Thm1Mum => "thm1-mum",
            CriterionId::Thm2Mum => "thm2-mum",
            CriterionId::Thm3Gsic => "thm3-gsic",
            CriterionId::Thm4Gsic => "thm4-gsic",
            CriterionId::Cor1H => "cor1-h",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s || id.as_str().split('-').next() == Some(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown criterion '{s}'")))
    }

    pub fn orientation(self) -> Option<Orientation> {
        match self {
            CriterionId::Thm1Mum | CriterionId::Thm3Gsic => Some(Orientation::QuditQubit),
            CriterionId::Thm2Mum | CriterionId::Thm4Gsic => Some(Orientation::QubitQudit),
            CriterionId::Cor1H => None,
        }
    }
}

impl std::str::FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    BobToAlice,
    AliceToBob,
    BothWays,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    QuditQubit,
    QubitQudit,
}

impl Orientation {
    pub fn direction(self) -> Direction {
        match self {
            Orientation::QuditQubit => Direction::BobToAlice,
            Orientation::QubitQudit => Direction::AliceToBob,
        }
    }

    /// State dimensions (dim_a, dim_b) for qudit dimension d.
    pub fn state_dims(self, d: usize) -> (usize, usize) {
        match self {
            Orientation::QuditQubit => (d, 2),
            Orientation::QubitQudit => (2, d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringVerdict {
    pub criterion: CriterionId,
    pub direction: Direction,
    pub j_value: f64,
    pub threshold: f64,
    pub mu: f64,
    pub detected: bool,
}

impl SteeringVerdict {
    fn new(
        criterion: CriterionId,
        direction: Direction,
        j_value: f64,
        threshold: f64,
        mu: f64,
    ) -> Self {
        Self {
            criterion,
            direction,
            j_value,
            threshold,
            mu,
            detected: j_value > threshold,
        }
    }

    /// Signed distance J − threshold.
    pub fn margin(&self) -> f64 {
        self.j_value - self.threshold
    }
}

pub fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu <= MU_MAX {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "mu = {mu} outside (0, 1/sqrt(3)]"
        )))
    }
}

fn real_part(j: C64) -> Result<f64> {
    if j.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::NumericalIntegrity(format!(
            "J has imaginary residue {:e}",
            j.im
        )));
    }
    Ok(j.re)
}

fn check_state_dims(rho: &DensityMatrix, expected: (usize, usize)) -> Result<()> {
    if rho.dims() != expected {
        return Err(Error::DimensionMismatch(format!(
            "state is {:?}, criterion expects {:?}",
            rho.dims(),
            expected
        )));
    }
    Ok(())
}

/// The qubit-side effects R_n^{(b)} aligned with the qudit's (d+1)×d grid:
/// Q_n^{(b)} for b ≤ 3 and n ≤ 2, 𝕀/2 everywhere else.
#[derive(Debug, Clone)]
pub struct PaddedAssignment {
    grid: Vec<Vec<Matrix>>,
}

impl PaddedAssignment {
    pub fn new(qubit: &MumSet, d: usize) -> Result<Self> {
        if qubit.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "qubit-side MUM set has dim {}",
                qubit.dim()
            )));
        }
        let half = Matrix::identity(2).scale(0.5);
        let grid = (0..=d)
            .map(|b| {
                (0..d)
                    .map(|n| {
                        if b < 3 && n < 2 {
                            qubit.effect(b, n).clone()
                        } else {
                            half.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self { grid })
    }

    pub fn get(&self, b: usize, n: usize) -> &Matrix {
        &self.grid[b][n]
    }

    pub fn is_padded(b: usize, n: usize) -> bool {
        b >= 3 || n >= 2
    }
}

/// J = Σ_b Σ_n Tr[(P_n^{(b)} ⊗ R_n^{(b)})ρ] (or with the factors swapped
/// for [`Orientation::QubitQudit`]), including its imaginary residue.
pub fn j_mum_complex(
    rho: &DensityMatrix,
    qudit: &MumSet,
    qubit: &MumSet,
    orientation: Orientation,
) -> Result<C64> {
    let d = qudit.dim();
    check_state_dims(rho, orientation.state_dims(d))?;
    let padded = PaddedAssignment::new(qubit, d)?;
    let mut acc = c(0.0, 0.0);
    for b in 0..=d {
        for n in 0..d {
            let (p, r) = (qudit.effect(b, n), padded.get(b, n));
            acc += match orientation {
                Orientation::QuditQubit => rho.expectation_product(p, r)?,
                Orientation::QubitQudit => rho.expectation_product(r, p)?,
            };
        }
    }
    Ok(acc)
}

pub fn j_mum(
    rho: &DensityMatrix,
    qudit: &MumSet,
    qubit: &MumSet,
    orientation: Orientation,
) -> Result<f64> {
    real_part(j_mum_complex(rho, qudit, qubit, orientation)?)
}

/// MUM detection threshold. `kappa1` belongs to Alice's measurements and
/// `kappa2` to Bob's, so for [`Orientation::QuditQubit`] κ₁ is the qudit
/// parameter and for [`Orientation::QubitQudit`] it is the qubit one.
pub fn threshold_mum(
    orientation: Orientation,
    d: usize,
    kappa1: f64,
    kappa2: f64,
    mu: f64,
) -> Result<f64> {
    check_mu(mu)?;
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d} < 2")));
    }
    let df = d as f64;
    let (kq, kb) = match orientation {
        Orientation::QuditQubit => (kappa1, kappa2),
        Orientation::QubitQudit => (kappa2, kappa1),
    };
    let qudit_ok = kq > 1.0 / df && kq <= 1.0;
    let qubit_ok = kb > 0.5 && kb <= 1.0;
    if !(qudit_ok && qubit_ok) {
        return Err(Error::InvalidParameter(format!(
            "kappa out of range: qudit {kq} (needs (1/{d}, 1]), qubit {kb} (needs (1/2, 1])"
        )));
    }
    let lead = (kq + 1.0).sqrt() * (4.0 * kb + 4.0 + (df + 3.0) * (df - 2.0)).sqrt();
    Ok(lead / (2.0 * mu) - (df + 1.0) * (1.0 - mu) / (2.0 * mu))
}

/// H(ρ) = Tr[(σ₁⊗σ₁ − σ₂⊗σ₂ + σ₃⊗σ₃)ρ] for a two-qubit state.
pub fn h_correlation(rho: &DensityMatrix) -> Result<f64> {
    check_state_dims(rho, (2, 2))?;
    real_part(rho.expectation(&h_observable())?)
}

pub fn h_observable() -> Matrix {
    let s = |k| tensor(&pauli(k), &pauli(k));
    &(&s(1) - &s(2)) + &s(3)
}

/// Detected iff H(ρ) > 1/μ; certifies steering in both directions.
pub fn detect_corollary1(rho: &DensityMatrix, mu: f64) -> Result<SteeringVerdict> {
    check_mu(mu)?;
    let h = h_correlation(rho)?;
    Ok(SteeringVerdict::new(
        CriterionId::Cor1H,
        Direction::BothWays,
        h,
        1.0 / mu,
        mu,
    ))
}

/// J = Σ_j Tr[(P_j ⊗ R_j)ρ] with R_j = Q_j for j ≤ 4 and 𝕀/4 beyond.
pub fn j_gsic_complex(
    rho: &DensityMatrix,
    qudit: &GsicSet,
    qubit: &GsicSet,
    orientation: Orientation,
) -> Result<C64> {
    let d = qudit.dim();
    if qubit.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "qubit-side general SIC has dim {}",
            qubit.dim()
        )));
    }
    check_state_dims(rho, orientation.state_dims(d))?;
    let quarter = Matrix::identity(2).scale(0.25);
    let mut acc = c(0.0, 0.0);
    for (j, p) in qudit.effects().iter().enumerate() {
        let r = if j < 4 { qubit.effect(j) } else { &quarter };
        acc += match orientation {
            Orientation::QuditQubit => rho.expectation_product(p, r)?,
            Orientation::QubitQudit => rho.expectation_product(r, p)?,
        };
    }
    Ok(acc)
}

pub fn j_gsic(
    rho: &DensityMatrix,
    qudit: &GsicSet,
    qubit: &GsicSet,
    orientation: Orientation,
) -> Result<f64> {
    real_part(j_gsic_complex(rho, qudit, qubit, orientation)?)
}

/// General-SIC detection threshold; `a1` is Alice's efficiency parameter
/// and `a2` Bob's.
pub fn threshold_gsic(
    orientation: Orientation,
    d: usize,
    a1: f64,
    a2: f64,
    mu: f64,
) -> Result<f64> {
    check_mu(mu)?;
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d} < 2")));
    }
    let df = d as f64;
    let (aq, ab) = match orientation {
        Orientation::QuditQubit => (a1, a2),
        Orientation::QubitQudit => (a2, a1),
    };
    let qudit_ok = aq > 1.0 / df.powi(3) && aq <= 1.0 / (df * df);
    let qubit_ok = ab > 0.125 && ab <= 0.25;
    if !(qudit_ok && qubit_ok) {
        return Err(Error::InvalidParameter(format!(
            "efficiency parameter out of range: qudit {aq}, qubit {ab}"
        )));
    }
    let qudit_factor = ((aq * df * df + 1.0) / (df * (df + 1.0))).sqrt();
    let qubit_factor = ((4.0 * ab + 1.0) / 6.0 + (df * df - 4.0) / 16.0).sqrt();
    Ok(qudit_factor * qubit_factor / mu - (1.0 - mu) / (4.0 * mu))
}

/// How the measurement sets behind a criterion are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementConfig {
    pub qudit_t: TChoice,
    pub qubit_t: TChoice,
    /// Use the entrywise conjugate of the qubit-side set.
    pub conjugate_qubit: bool,
}

impl Default for MeasurementConfig {
    fn default() -> Self {
        Self {
            qudit_t: TChoice::Auto,
            qubit_t: TChoice::Auto,
            conjugate_qubit: true,
        }
    }
}

/// A ready-to-evaluate criterion with its measurement sets.
#[derive(Debug, Clone)]
pub enum Criterion {
    Mum {
        orientation: Orientation,
        qudit: MumSet,
        qubit: MumSet,
    },
    Gsic {
        orientation: Orientation,
        qudit: GsicSet,
        qubit: GsicSet,
    },
    Correlation,
}

impl Criterion {
    pub fn mum(orientation: Orientation, qudit: MumSet, qubit: MumSet) -> Result<Self> {
        if qubit.dim() != 2 {
            return Err(Error::DimensionMismatch(
                "qubit-side MUM set must have dim 2".into(),
            ));
        }
        Ok(Criterion::Mum {
            orientation,
            qudit,
            qubit,
        })
    }

    pub fn gsic(orientation: Orientation, qudit: GsicSet, qubit: GsicSet) -> Result<Self> {
        if qubit.dim() != 2 {
            return Err(Error::DimensionMismatch(
                "qubit-side general SIC must have dim 2".into(),
            ));
        }
        Ok(Criterion::Gsic {
            orientation,
            qudit,
            qubit,
        })
    }

    /// Build the measurement sets for criterion `id` on a qudit of
    /// dimension `d` (ignored by the correlation criterion, which is fixed
    /// to two qubits).
    pub fn build(id: CriterionId, d: usize, cfg: &MeasurementConfig) -> Result<Self> {
        let conj_mum = |s: MumSet| {
            if cfg.conjugate_qubit {
                s.conjugate()
            } else {
                s
            }
        };
        let conj_gsic = |s: GsicSet| {
            if cfg.conjugate_qubit {
                s.conjugate()
            } else {
                s
            }
        };
        match id {
            CriterionId::Cor1H => Ok(Criterion::Correlation),
            CriterionId::Thm1Mum | CriterionId::Thm2Mum => {
                let qudit = build_mums(d, resolve_mum_t(d, cfg.qudit_t)?)?;
                let qubit = conj_mum(build_mums(2, resolve_mum_t(2, cfg.qubit_t)?)?);
                Criterion::mum(id.orientation().expect("oriented criterion"), qudit, qubit)
            }
            CriterionId::Thm3Gsic | CriterionId::Thm4Gsic => {
                let qudit = build_gsic(d, resolve_gsic_t(d, cfg.qudit_t)?)?;
                let qubit = conj_gsic(build_gsic(2, resolve_gsic_t(2, cfg.qubit_t)?)?);
                Criterion::gsic(id.orientation().expect("oriented criterion"), qudit, qubit)
            }
        }
    }

    pub fn id(&self) -> CriterionId {
        match self {
            Criterion::Mum {
                orientation: Orientation::QuditQubit,
                ..
            } => CriterionId::Thm1Mum,
            Criterion::Mum {
                orientation: Orientation::QubitQudit,
                ..
            } => CriterionId::Thm2Mum,
            Criterion::Gsic {
                orientation: Orientation::QuditQubit,
                ..
            } => CriterionId::Thm3Gsic,
            Criterion::Gsic {
                orientation: Orientation::QubitQudit,
                ..
            } => CriterionId::Thm4Gsic,
            Criterion::Correlation => CriterionId::Cor1H,
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Criterion::Mum { orientation, .. } | Criterion::Gsic { orientation, .. } => {
                orientation.direction()
            }
            Criterion::Correlation => Direction::BothWays,
        }
    }

    pub fn state_dims(&self) -> (usize, usize) {
        match self {
            Criterion::Mum {
                orientation, qudit, ..
            } => orientation.state_dims(qudit.dim()),
            Criterion::Gsic {
                orientation, qudit, ..
            } => orientation.state_dims(qudit.dim()),
            Criterion::Correlation => (2, 2),
        }
    }

    pub fn j_value(&self, rho: &DensityMatrix) -> Result<f64> {
        match self {
            Criterion::Mum {
                orientation,
                qudit,
                qubit,
            } => j_mum(rho, qudit, qubit, *orientation),
            Criterion::Gsic {
                orientation,
                qudit,
                qubit,
            } => j_gsic(rho, qudit, qubit, *orientation),
            Criterion::Correlation => h_correlation(rho),
        }
    }

    pub fn threshold(&self, mu: f64) -> Result<f64> {
        match self {
            Criterion::Mum {
                orientation,
                qudit,
                qubit,
            } => {
                let (k1, k2) = match orientation {
                    Orientation::QuditQubit => (qudit.kappa(), qubit.kappa()),
                    Orientation::QubitQudit => (qubit.kappa(), qudit.kappa()),
                };
                threshold_mum(*orientation, qudit.dim(), k1, k2, mu)
            }
            Criterion::Gsic {
                orientation,
                qudit,
                qubit,
            } => {
                let (a1, a2) = match orientation {
                    Orientation::QuditQubit => (qudit.a(), qubit.a()),
                    Orientation::QubitQudit => (qubit.a(), qudit.a()),
                };
                threshold_gsic(*orientation, qudit.dim(), a1, a2, mu)
            }
            Criterion::Correlation => {
                check_mu(mu)?;
                Ok(1.0 / mu)
            }
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix, mu: f64) -> Result<SteeringVerdict> {
        if let Criterion::Correlation = self {
            return detect_corollary1(rho, mu);
        }
        let threshold = self.threshold(mu)?;
        let j = self.j_value(rho)?;
        Ok(SteeringVerdict::new(
            self.id(),
            self.direction(),
            j,
            threshold,
            mu,
        ))
    }
}

/// Evaluate `id` on ρ with default measurement sets, sized from ρ's dims.
pub fn detect(
    rho: &DensityMatrix,
    id: CriterionId,
    mu: f64,
    cfg: &MeasurementConfig,
) -> Result<SteeringVerdict> {
    let (da, db) = rho.dims();
    let d = match id.orientation() {
        Some(Orientation::QuditQubit) => da,
        Some(Orientation::QubitQudit) => db,
        None => 2,
    };
    Criterion::build(id, d, cfg)?.evaluate(rho, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{trace_product, Subsystem};
    use crate::measurements::{gsic_rank1_t, max_feasible_t_mum, mum_projective_t};
    use crate::states::{munro_mems, random, tau_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn maximally_mixed(da: usize, db: usize) -> DensityMatrix {
        DensityMatrix::new(
            Matrix::identity(da * db).scale(1.0 / (da * db) as f64),
            da,
            db,
        )
        .unwrap()
    }

    fn qubit_pair() -> (MumSet, MumSet) {
        let s = build_mums(2, mum_projective_t(2)).unwrap();
        let cj = s.conjugate();
        (s, cj)
    }

    #[test]
    fn mu_max_is_inverse_sqrt3() {
        assert_eq!(MU_MAX, 1.0 / 3f64.sqrt());
        assert!(check_mu(MU_MAX).is_ok());
        assert!(check_mu(0.0).is_err());
        assert!(check_mu(0.6).is_err());
    }

    #[test]
    fn criterion_ids_round_trip() {
        for id in CriterionId::ALL {
            assert_eq!(CriterionId::parse(id.as_str()).unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert_eq!(CriterionId::parse("cor1").unwrap(), CriterionId::Cor1H);
        assert!(CriterionId::parse("thm9").is_err());
    }

    #[test]
    fn padding_layout() {
        let (_, q) = qubit_pair();
        let pad = PaddedAssignment::new(&q, 4).unwrap();
        for b in 0..5 {
            for n in 0..4 {
                if PaddedAssignment::is_padded(b, n) {
                    assert_eq!(pad.get(b, n), &Matrix::identity(2).scale(0.5));
                } else {
                    assert_eq!(pad.get(b, n), q.effect(b, n));
                }
            }
        }
        let qutrit = build_mums(3, 0.1).unwrap();
        assert!(PaddedAssignment::new(&qutrit, 3).is_err());
    }

    #[test]
    fn j_mum_of_maximally_mixed_qubits() {
        let (p, q) = qubit_pair();
        let j = j_mum(&maximally_mixed(2, 2), &p, &q, Orientation::QuditQubit).unwrap();
        assert!((j - 1.5).abs() < 1e-14);
    }

    #[test]
    fn padded_slices_contribute_one_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let d = 4;
        let qudit = build_mums(d, 0.8 * max_feasible_t_mum(d).unwrap()).unwrap();
        let (_, q) = qubit_pair();
        let pad = PaddedAssignment::new(&q, d).unwrap();
        let rho = random::state(&mut rng, d, 2);
        for b in 3..=d {
            let slice: f64 = (0..d)
                .map(|n| {
                    rho.expectation_product(qudit.effect(b, n), pad.get(b, n))
                        .unwrap()
                        .re
                })
                .sum();
            assert!((slice - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn j_mum_conjugate_pairing_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let t = rng.gen_range(0.05..1.0) * mum_projective_t(2);
            let p = build_mums(2, t).unwrap();
            let q = p.conjugate();
            let rho = random::state(&mut rng, 2, 2);
            let j = j_mum(&rho, &p, &q, Orientation::QuditQubit).unwrap();
            let h = h_correlation(&rho).unwrap();
            let expected = (3.0 + (2.0 * p.kappa() - 1.0) * h) / 2.0;
            assert!((j - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn j_mum_rejects_wrong_shapes() {
        let (p, q) = qubit_pair();
        assert!(j_mum(&maximally_mixed(3, 2), &p, &q, Orientation::QuditQubit).is_err());
        let qutrit = build_mums(3, 0.1).unwrap();
        assert!(j_mum(&maximally_mixed(2, 3), &qutrit, &q, Orientation::QuditQubit).is_err());
        assert!(j_mum(
            &maximally_mixed(3, 2),
            &qutrit,
            &qutrit,
            Orientation::QuditQubit
        )
        .is_err());
        assert!(j_mum(&maximally_mixed(2, 3), &qutrit, &q, Orientation::QubitQudit).is_ok());
    }

    #[test]
    fn tau_identity_for_qudit_qubit() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for d in 2..=4 {
            let qudit = build_mums(d, resolve_mum_t(d, TChoice::Auto).unwrap()).unwrap();
            let (_, q) = qubit_pair();
            for _ in 0..10 {
                let rho = random::state(&mut rng, d, 2);
                let mu = rng.gen_range(0.01..=MU_MAX);
                let tau = tau_state(&rho, mu, Subsystem::B).unwrap();
                let lhs = j_mum(&tau, &qudit, &q, Orientation::QuditQubit).unwrap();
                let rhs = mu * j_mum(&rho, &qudit, &q, Orientation::QuditQubit).unwrap()
                    + (d as f64 + 1.0) * (1.0 - mu) / 2.0;
                assert!((lhs - rhs).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn threshold_mum_two_qubit_reduction() {
        for i in 1..=20 {
            for k in 1..=20 {
                let kappa = 0.5 + 0.5 * i as f64 / 20.0;
                let mu = MU_MAX * k as f64 / 20.0;
                let expected = (3.0 * mu + 2.0 * kappa - 1.0) / (2.0 * mu);
                for o in [Orientation::QuditQubit, Orientation::QubitQudit] {
                    let got = threshold_mum(o, 2, kappa, kappa, mu).unwrap();
                    assert!((got - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn threshold_mum_projective_qubits() {
        let got = threshold_mum(Orientation::QuditQubit, 2, 1.0, 1.0, MU_MAX).unwrap();
        assert!((got - (3.0 + 3f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn threshold_mum_degenerate_limit() {
        for d in 2..=6 {
            let df = d as f64;
            for mu in [0.1, 0.3, MU_MAX] {
                let got = threshold_mum(
                    Orientation::QuditQubit,
                    d,
                    1.0 / df + 1e-13,
                    0.5 + 1e-13,
                    mu,
                )
                .unwrap();
                assert!(
                    (got - (df + 1.0) / 2.0).abs() < 1e-10,
                    "d={d} mu={mu} got={got}"
                );
            }
        }
    }

    #[test]
    fn threshold_mum_orientation_swaps_roles() {
        let a = threshold_mum(Orientation::QuditQubit, 4, 0.4, 0.9, 0.5).unwrap();
        let b = threshold_mum(Orientation::QubitQudit, 4, 0.9, 0.4, 0.5).unwrap();
        assert_eq!(a, b);
        assert!(threshold_mum(Orientation::QuditQubit, 4, 0.2, 0.9, 0.5).is_err());
        assert!(threshold_mum(Orientation::QuditQubit, 4, 0.4, 0.9, 0.7).is_err());
    }

    #[test]
    fn threshold_mum_is_non_increasing_in_mu() {
        for d in 2..=6 {
            let df = d as f64;
            for kq in [1.0 / df + 0.05, 0.5 * (1.0 / df + 1.0), 1.0] {
                for kb in [0.55, 0.75, 1.0] {
                    let mut prev = f64::INFINITY;
                    for k in 1..=200 {
                        let mu = MU_MAX * k as f64 / 200.0;
                        let th = threshold_mum(Orientation::QuditQubit, d, kq, kb, mu).unwrap();
                        assert!(th <= prev + 1e-12);
                        prev = th;
                    }
                }
            }
        }
    }

    #[test]
    fn h_of_reference_states() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = c(0.0, 0.0);
        let phi = DensityMatrix::new(Matrix::outer(&[c(s, 0.0), z, z, c(s, 0.0)]), 2, 2).unwrap();
        assert!((h_correlation(&phi).unwrap() - 3.0).abs() < 1e-14);
        assert!(h_correlation(&maximally_mixed(2, 2)).unwrap().abs() < 1e-15);
        assert!(h_correlation(&maximally_mixed(3, 2)).is_err());
    }

    #[test]
    fn h_is_bounded_and_transpose_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..200 {
            let rho = random::noisy_pure(&mut rng, 2, 2);
            let h = h_correlation(&rho).unwrap();
            assert!(h.abs() <= 3.0 + 1e-12);
            let t = DensityMatrix::new(rho.matrix().transpose(), 2, 2).unwrap();
            assert!((h_correlation(&t).unwrap() - h).abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_verdicts() {
        let v = detect_corollary1(&munro_mems(0.69).unwrap(), MU_MAX).unwrap();
        assert!(v.detected);
        assert_eq!(v.direction, Direction::BothWays);
        let v = detect_corollary1(&munro_mems(0.60).unwrap(), MU_MAX).unwrap();
        assert!(!v.detected);
        assert!((v.j_value - 1.5333333333333333).abs() < 1e-12);
        assert!(detect_corollary1(&munro_mems(0.9).unwrap(), 0.0).is_err());
    }

    #[test]
    fn strict_inequality_at_boundary() {
        let v = SteeringVerdict::new(CriterionId::Cor1H, Direction::BothWays, 1.5, 1.5, 0.5);
        assert!(!v.detected);
        assert_eq!(v.margin(), 0.0);
    }

    #[test]
    fn j_gsic_of_maximally_mixed_qubits() {
        let g = build_gsic(2, gsic_rank1_t(2)).unwrap();
        let j = j_gsic(
            &maximally_mixed(2, 2),
            &g,
            &g.conjugate(),
            Orientation::QuditQubit,
        )
        .unwrap();
        assert!((j - 0.25).abs() < 1e-14);
    }

    #[test]
    fn j_gsic_padded_terms_use_alice_marginal() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let d = 3;
        let g = build_gsic(d, resolve_gsic_t(d, TChoice::Auto).unwrap()).unwrap();
        let q = build_gsic(2, gsic_rank1_t(2)).unwrap();
        let rho = random::state(&mut rng, d, 2);
        let rho_a = rho.reduced(Subsystem::A);
        let probs: Vec<f64> = g
            .effects()
            .iter()
            .map(|p| trace_product(p, &rho_a).unwrap().re)
            .collect();
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let head: f64 = (0..4)
            .map(|j| {
                rho.expectation_product(g.effect(j), q.effect(j))
                    .unwrap()
                    .re
            })
            .sum();
        let tail: f64 = probs[4..].iter().sum::<f64>() / 4.0;
        let j = j_gsic(&rho, &g, &q, Orientation::QuditQubit).unwrap();
        assert!((j - head - tail).abs() < 1e-12);
    }

    #[test]
    fn threshold_gsic_degenerate_limit() {
        for d in 2..=6 {
            let df = d as f64;
            for mu in [0.2, MU_MAX] {
                let got = threshold_gsic(
                    Orientation::QuditQubit,
                    d,
                    1.0 / df.powi(3) + 1e-14,
                    0.125 + 1e-14,
                    mu,
                )
                .unwrap();
                assert!((got - 0.25).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn threshold_gsic_qubits_closed_form() {
        // d = 2, a₁ = a₂ = a: threshold = (8a−1)/(12μ) + 1/4
        for a in [0.13, 0.2, 0.25] {
            for mu in [0.1, 0.4, MU_MAX] {
                let got = threshold_gsic(Orientation::QuditQubit, 2, a, a, mu).unwrap();
                assert!((got - ((8.0 * a - 1.0) / (12.0 * mu) + 0.25)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn threshold_gsic_decreasing_when_lead_dominates() {
        for d in 2..=5 {
            let df = d as f64;
            let a1 = 1.0 / (df * df);
            let mut prev = f64::INFINITY;
            for k in 1..=100 {
                let mu = MU_MAX * k as f64 / 100.0;
                let th = threshold_gsic(Orientation::QuditQubit, d, a1, 0.25, mu).unwrap();
                assert!(th < prev);
                prev = th;
            }
        }
    }

    #[test]
    fn gsic_and_correlation_agree_on_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let crit =
            Criterion::build(CriterionId::Thm3Gsic, 2, &MeasurementConfig::default()).unwrap();
        for _ in 0..200 {
            let rho = random::noisy_pure(&mut rng, 2, 2);
            let a = crit.evaluate(&rho, MU_MAX).unwrap();
            let b = detect_corollary1(&rho, MU_MAX).unwrap();
            assert_eq!(a.detected, b.detected);
        }
    }

    #[test]
    fn build_and_detect_dispatch() {
        let cfg = MeasurementConfig::default();
        let rho = munro_mems(0.9).unwrap();
        for id in CriterionId::ALL {
            let v = detect(&rho, id, MU_MAX, &cfg).unwrap();
            assert_eq!(v.criterion, id);
            assert!(v.detected, "{id}");
        }
        let crit = Criterion::build(CriterionId::Thm2Mum, 3, &cfg).unwrap();
        assert_eq!(crit.state_dims(), (2, 3));
        assert_eq!(crit.direction(), Direction::AliceToBob);
    }
}
