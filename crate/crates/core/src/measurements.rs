//! Complete sets of mutually unbiased measurements (MUMs) and general
//! SIC-POVMs built from an orthonormal traceless operator basis.
//!
//! MUMs: with F^{(b)} = Σ_n F_{n,b},
//!
//! ```text
//! F_n^{(b)} = F^{(b)} − (d+√d)·F_{n,b}   n < d
//! F_d^{(b)} = (1+√d)·F^{(b)}
//! P_n^{(b)} = 𝕀/d + t·F_n^{(b)}
//! ```
//!
//! General SIC: with F = Σ_α F_α,
//!
//! ```text
//! P_α    = 𝕀/d² + t·[F − d(d+1)·F_α]   α < d²
//! P_{d²} = 𝕀/d² + t·(d+1)·F
//! a      = 1/d³ + t²(d−1)(d+1)³
//! ```
//!
//! Every constructor validates its output at [`CONSTRUCTION_TOL`] before
//! returning. Indices are zero-based in code and one-based in messages.

use serde::{Deserialize, Serialize};

use crate::bases::{gellmann_basis, relabel_for_mum, OperatorBasis};
use crate::error::{Error, Result};
use crate::linalg::{c, min_eigenvalue, trace_product, Matrix, PSD_TOL};

pub const CONSTRUCTION_TOL: f64 = 1e-10;

/// Absolute tolerance of the feasible-t bisection.
pub const BISECTION_TOL: f64 = 1e-10;

/// How to pick the construction parameter t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TChoice {
    /// κ = 1 for MUMs, a = 1/d² for general SICs. Fails if that t is not
    /// PSD-feasible for the chosen basis.
    Ideal,
    /// Largest PSD-feasible t found by bisection.
    MaxT,
    /// Ideal when feasible, otherwise MaxT.
    Auto,
    Value(f64),
}

impl std::str::FromStr for TChoice {
    type Err = Error;

    /// `ideal`, `max-t`, `auto`, or a number.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" | "projective" | "rank1" => Ok(TChoice::Ideal),
            "max-t" => Ok(TChoice::MaxT),
            "auto" => Ok(TChoice::Auto),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|t| t.is_finite())
                .map(TChoice::Value)
                .ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "t choice '{other}' is not ideal, max-t, auto or a number"
                    ))
                }),
        }
    }
}

/// A complete family of d+1 MUMs, `effects[b][n]` = P_n^{(b)}.
#[derive(Debug, Clone)]
pub struct MumSet {
    dim: usize,
    t: f64,
    kappa: f64,
    effects: Vec<Vec<Matrix>>,
}

/// Max deviation of each defining MUM relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MumValidation {
    pub tol: f64,
    /// max |Tr P_n^{(b)} − 1|
    pub trace: f64,
    /// max ‖Σ_n P_n^{(b)} − 𝕀‖ entrywise
    pub completeness: f64,
    /// max |Tr[P_n^{(b)} P_{n'}^{(b')}] − 1/d| over b ≠ b'
    pub cross_basis: f64,
    /// max |Tr[P_n^{(b)} P_{n'}^{(b)}] − (δκ + (1−δ)(1−κ)/(d−1))|
    pub same_basis: f64,
    /// max(0, −λ_min) over all effects
    pub positivity: f64,
    pub kappa_in_range: bool,
}

impl MumValidation {
    pub fn max_deviation(&self) -> f64 {
        [
            self.trace,
            self.completeness,
            self.cross_basis,
            self.same_basis,
            self.positivity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.kappa_in_range && self.max_deviation() < self.tol
    }
}

/// κ(t) = 1/d + t²(d−1)(1+√d)², valid for any orthonormal basis.
pub fn mum_kappa_closed_form(d: usize, t: f64) -> f64 {
    let df = d as f64;
    1.0 / df + t * t * (df - 1.0) * (1.0 + df.sqrt()).powi(2)
}

/// The t at which κ(t) = 1.
pub fn mum_projective_t(d: usize) -> f64 {
    let df = d as f64;
    1.0 / (df.sqrt() * (1.0 + df.sqrt()))
}

fn mum_generators(basis: &OperatorBasis) -> Result<Vec<Vec<Matrix>>> {
    let d = basis.dim();
    let df = d as f64;
    let frame = relabel_for_mum(basis.clone(), d)?;
    let mut out = Vec::with_capacity(d + 1);
    for b in 0..=d {
        let fb = frame.setting_sum(b);
        let mut row = Vec::with_capacity(d);
        for n in 0..d - 1 {
            row.push(&fb - &frame.get(n, b).scale(df + df.sqrt()));
        }
        row.push(fb.scale(1.0 + df.sqrt()));
        out.push(row);
    }
    Ok(out)
}

fn effect(d: usize, t: f64, generator: &Matrix, weight: f64) -> Matrix {
    let mut p = generator.scale(t);
    for i in 0..d {
        p[(i, i)] += c(weight, 0.0);
    }
    p
}

pub fn build_mums(d: usize, t: f64) -> Result<MumSet> {
    build_mums_with_basis(&gellmann_basis(d)?, t)
}

pub fn build_mums_with_basis(basis: &OperatorBasis, t: f64) -> Result<MumSet> {
    let d = basis.dim();
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Degenerate(format!(
            "t = {t} gives kappa <= 1/d; MUMs need t > 0"
        )));
    }
    let generators = mum_generators(basis)?;
    let weight = 1.0 / d as f64;
    let mut effects = Vec::with_capacity(d + 1);
    for (b, row) in generators.iter().enumerate() {
        let mut out_row = Vec::with_capacity(d);
        for (n, g) in row.iter().enumerate() {
            let p = effect(d, t, g, weight);
            let lam = min_eigenvalue(&p)?;
            if lam < -PSD_TOL {
                return Err(Error::NotPositive {
                    location: format!("P_{}^({}) at t={t}", n + 1, b + 1),
                    min_eigenvalue: lam,
                });
            }
            out_row.push(p);
        }
        effects.push(out_row);
    }
    let kappa = trace_product(&effects[0][0], &effects[0][0])?.re;
    let set = MumSet {
        dim: d,
        t,
        kappa,
        effects,
    };
    let report = validate_mums(&set, CONSTRUCTION_TOL);
    if !report.passes() {
        return Err(Error::Validation(format!(
            "MUM relations violated at t={t}: {report:?}"
        )));
    }
    Ok(set)
}

/// Smallest eigenvalue over all d(d+1) MUM effects at parameter t.
pub fn mum_min_effect_eigenvalue(d: usize, t: f64) -> Result<f64> {
    let generators = mum_generators(&gellmann_basis(d)?)?;
    min_over(generators.iter().flatten(), d, t, 1.0 / d as f64)
}

fn min_over<'a>(
    gens: impl Iterator<Item = &'a Matrix>,
    d: usize,
    t: f64,
    weight: f64,
) -> Result<f64> {
    let mut lam = f64::INFINITY;
    for g in gens {
        lam = lam.min(min_eigenvalue(&effect(d, t, g, weight))?);
    }
    Ok(lam)
}

/// Bisection for the largest t > 0 keeping every effect PSD.
fn bisect_feasible(mut feasible: impl FnMut(f64) -> Result<bool>) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while feasible(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NumericalIntegrity("feasible t is unbounded".into()));
        }
    }
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest t for which all Gell-Mann-based MUM effects are PSD
/// (bisection to [`BISECTION_TOL`]; the returned t is on the feasible side).
pub fn max_feasible_t_mum(d: usize) -> Result<f64> {
    let generators = mum_generators(&gellmann_basis(d)?)?;
    let weight = 1.0 / d as f64;
    bisect_feasible(|t| Ok(min_over(generators.iter().flatten(), d, t, weight)? >= 0.0))
}

pub fn resolve_mum_t(d: usize, choice: TChoice) -> Result<f64> {
    match choice {
        TChoice::Value(t) => Ok(t),
        TChoice::Ideal => Ok(mum_projective_t(d)),
        TChoice::MaxT => max_feasible_t_mum(d),
        TChoice::Auto => {
            let t = mum_projective_t(d);
            if mum_min_effect_eigenvalue(d, t)? >= -PSD_TOL {
                Ok(t)
            } else {
                max_feasible_t_mum(d)
            }
        }
    }
}

impl MumSet {
    /// Assemble a set without any checks. Intended for constructing
    /// deliberately invalid inputs to [`validate_mums`].
    pub fn from_parts_unchecked(dim: usize, t: f64, kappa: f64, effects: Vec<Vec<Matrix>>) -> Self {
        Self {
            dim,
            t,
            kappa,
            effects,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn settings(&self) -> usize {
        self.effects.len()
    }

    /// P_n^{(b)}, zero-based.
    pub fn effect(&self, b: usize, n: usize) -> &Matrix {
        &self.effects[b][n]
    }

    pub fn setting(&self, b: usize) -> &[Matrix] {
        &self.effects[b]
    }

    pub fn effects(&self) -> &[Vec<Matrix>] {
        &self.effects
    }

    /// Entrywise complex conjugate of every effect; still a MUM set with
    /// the same κ.
    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            t: self.t,
            kappa: self.kappa,
            effects: self
                .effects
                .iter()
                .map(|row| row.iter().map(Matrix::conjugate).collect())
                .collect(),
        }
    }
}

pub fn validate_mums(s: &MumSet, tol: f64) -> MumValidation {
    let d = s.dim;
    let df = d as f64;
    let id = Matrix::identity(d);
    let mut v = MumValidation {
        tol,
        trace: 0.0,
        completeness: 0.0,
        cross_basis: 0.0,
        same_basis: 0.0,
        positivity: 0.0,
        kappa_in_range: s.kappa > 1.0 / df && s.kappa <= 1.0 + tol,
    };
    let off = (1.0 - s.kappa) / (df - 1.0);
    for (b, row) in s.effects.iter().enumerate() {
        let total = row.iter().fold(Matrix::zeros(d), |acc, p| &acc + p);
        v.completeness = v.completeness.max(total.max_abs_diff(&id));
        for (n, p) in row.iter().enumerate() {
            v.trace = v.trace.max((p.trace() - c(1.0, 0.0)).norm());
            v.positivity = v
                .positivity
                .max(min_eigenvalue(p).map_or(f64::INFINITY, |l| (-l).max(0.0)));
            for (b2, row2) in s.effects.iter().enumerate() {
                for (n2, p2) in row2.iter().enumerate() {
                    let tp = trace_product(p, p2).expect("equal dims");
                    let target = match (b == b2, n == n2) {
                        (false, _) => 1.0 / df,
                        (true, true) => s.kappa,
                        (true, false) => off,
                    };
                    let dev = (tp - c(target, 0.0)).norm();
                    if b == b2 {
                        v.same_basis = v.same_basis.max(dev);
                    } else {
                        v.cross_basis = v.cross_basis.max(dev);
                    }
                }
            }
        }
    }
    v
}

/// A general SIC-POVM of d² effects with efficiency parameter a.
#[derive(Debug, Clone)]
pub struct GsicSet {
    dim: usize,
    t: f64,
    a: f64,
    effects: Vec<Matrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GsicValidation {
    pub tol: f64,
    /// ‖Σ_α P_α − 𝕀‖ entrywise
    pub completeness: f64,
    /// max |Tr P_α − 1/d|
    pub trace: f64,
    /// max |Tr P_α² − a|
    pub purity: f64,
    /// max |Tr[P_α P_β] − (1−da)/(d(d²−1))| over α ≠ β
    pub overlap: f64,
    pub positivity: f64,
    pub a_in_range: bool,
}

impl GsicValidation {
    pub fn max_deviation(&self) -> f64 {
        [
            self.completeness,
            self.trace,
            self.purity,
            self.overlap,
            self.positivity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.a_in_range && self.max_deviation() < self.tol
    }
}

/// a(t) = 1/d³ + t²(d−1)(d+1)³
pub fn gsic_a_closed_form(d: usize, t: f64) -> f64 {
    let df = d as f64;
    1.0 / df.powi(3) + t * t * (df - 1.0) * (df + 1.0).powi(3)
}

/// The t > 0 at which a = 1/d², i.e. every effect is rank one.
pub fn gsic_rank1_t(d: usize) -> f64 {
    let df = d as f64;
    (df * (df + 1.0)).powf(-1.5)
}

fn gsic_generators(basis: &OperatorBasis) -> Vec<Matrix> {
    let df = basis.dim() as f64;
    let total = basis.sum();
    let mut gens: Vec<Matrix> = basis
        .ops()
        .iter()
        .map(|f| &total - &f.scale(df * (df + 1.0)))
        .collect();
    gens.push(total.scale(df + 1.0));
    gens
}

pub fn build_gsic(d: usize, t: f64) -> Result<GsicSet> {
    build_gsic_with_basis(&gellmann_basis(d)?, t)
}

pub fn build_gsic_with_basis(basis: &OperatorBasis, t: f64) -> Result<GsicSet> {
    let d = basis.dim();
    if !t.is_finite() || t == 0.0 {
        return Err(Error::Degenerate(format!(
            "t = {t} gives a = 1/d^3; general SICs need t != 0"
        )));
    }
    let weight = 1.0 / (d * d) as f64;
    let mut effects = Vec::with_capacity(d * d);
    for (alpha, g) in gsic_generators(basis).iter().enumerate() {
        let p = effect(d, t, g, weight);
        let lam = min_eigenvalue(&p)?;
        if lam < -PSD_TOL {
            return Err(Error::NotPositive {
                location: format!("P_{} at t={t}", alpha + 1),
                min_eigenvalue: lam,
            });
        }
        effects.push(p);
    }
    let set = GsicSet {
        dim: d,
        t,
        a: gsic_a_closed_form(d, t),
        effects,
    };
    let report = validate_gsic(&set, CONSTRUCTION_TOL);
    if !report.passes() {
        return Err(Error::Validation(format!(
            "general SIC relations violated at t={t}: {report:?}"
        )));
    }
    Ok(set)
}

pub fn gsic_min_effect_eigenvalue(d: usize, t: f64) -> Result<f64> {
    let gens = gsic_generators(&gellmann_basis(d)?);
    min_over(gens.iter(), d, t, 1.0 / (d * d) as f64)
}

/// Largest t > 0 keeping every general-SIC effect PSD.
pub fn max_feasible_t_gsic(d: usize) -> Result<f64> {
    let gens = gsic_generators(&gellmann_basis(d)?);
    let weight = 1.0 / (d * d) as f64;
    bisect_feasible(|t| Ok(min_over(gens.iter(), d, t, weight)? >= 0.0))
}

pub fn resolve_gsic_t(d: usize, choice: TChoice) -> Result<f64> {
    match choice {
        TChoice::Value(t) => Ok(t),
        TChoice::Ideal => Ok(gsic_rank1_t(d)),
        TChoice::MaxT => max_feasible_t_gsic(d),
        TChoice::Auto => {
            let t = gsic_rank1_t(d);
            if gsic_min_effect_eigenvalue(d, t)? >= -PSD_TOL {
                Ok(t)
            } else {
                max_feasible_t_gsic(d)
            }
        }
    }
}

impl GsicSet {
    pub fn from_parts_unchecked(dim: usize, t: f64, a: f64, effects: Vec<Matrix>) -> Self {
        Self { dim, t, a, effects }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn effects(&self) -> &[Matrix] {
        &self.effects
    }

    pub fn effect(&self, alpha: usize) -> &Matrix {
        &self.effects[alpha]
    }

    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            t: self.t,
            a: self.a,
            effects: self.effects.iter().map(Matrix::conjugate).collect(),
        }
    }
}

pub fn validate_gsic(s: &GsicSet, tol: f64) -> GsicValidation {
    let d = s.dim;
    let df = d as f64;
    let total = s.effects.iter().fold(Matrix::zeros(d), |acc, p| &acc + p);
    let overlap_target = (1.0 - df * s.a) / (df * (df * df - 1.0));
    let mut v = GsicValidation {
        tol,
        completeness: total.max_abs_diff(&Matrix::identity(d)),
        trace: 0.0,
        purity: 0.0,
        overlap: 0.0,
        positivity: 0.0,
        a_in_range: s.a > 1.0 / df.powi(3) && s.a <= 1.0 / (df * df) + tol,
    };
    for (i, p) in s.effects.iter().enumerate() {
        v.trace = v.trace.max((p.trace() - c(1.0 / df, 0.0)).norm());
        v.positivity = v
            .positivity
            .max(min_eigenvalue(p).map_or(f64::INFINITY, |l| (-l).max(0.0)));
        for (j, q) in s.effects.iter().enumerate() {
            let tp = trace_product(p, q).expect("equal dims");
            if i == j {
                v.purity = v.purity.max((tp - c(s.a, 0.0)).norm());
            } else {
                v.overlap = v.overlap.max((tp - c(overlap_target, 0.0)).norm());
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_rank_one_projector(p: &Matrix) {
        let ev = hermitian_eigenvalues(p).unwrap();
        let (last, rest) = ev.split_last().unwrap();
        assert!((last - 1.0).abs() < 1e-10, "top eigenvalue {last}");
        assert!(rest.iter().all(|x| x.abs() < 1e-10), "{ev:?}");
    }

    #[test]
    fn qubit_projective_mums_are_mubs() {
        let t = mum_projective_t(2);
        assert!((mum_kappa_closed_form(2, t) - 1.0).abs() < 1e-15);
        let s = build_mums(2, t).unwrap();
        assert!((s.kappa() - 1.0).abs() < 1e-10);
        for row in s.effects() {
            for p in row {
                assert_rank_one_projector(p);
            }
        }
        // |⟨i|j⟩|² = Tr[P_i P_j] = 1/d across bases
        for b in 0..3 {
            for b2 in (b + 1)..3 {
                for n in 0..2 {
                    for n2 in 0..2 {
                        let ov = trace_product(s.effect(b, n), s.effect(b2, n2)).unwrap().re;
                        assert!((ov.sqrt() - 1.0 / 2f64.sqrt()).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_or_negative_t_is_degenerate() {
        assert!(matches!(build_mums(2, 0.0), Err(Error::Degenerate(_))));
        assert!(matches!(build_mums(3, -0.01), Err(Error::Degenerate(_))));
        assert!(matches!(build_gsic(2, 0.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn oversized_t_reports_offending_effect() {
        let t = 2.0 * max_feasible_t_mum(3).unwrap();
        match build_mums(3, t) {
            Err(Error::NotPositive {
                location,
                min_eigenvalue,
            }) => {
                assert!(location.starts_with("P_"));
                assert!(min_eigenvalue < -PSD_TOL);
            }
            other => panic!("expected NotPositive, got {other:?}"),
        }
        let t = 2.0 * max_feasible_t_gsic(3).unwrap();
        assert!(matches!(build_gsic(3, t), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn qutrit_half_max_t_passes() {
        let t = 0.5 * max_feasible_t_mum(3).unwrap();
        let s = build_mums(3, t).unwrap();
        assert_eq!(s.effects().iter().flatten().count(), 12);
        assert!(validate_mums(&s, 1e-10).passes());
    }

    #[test]
    fn kappa_closed_form_matches_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for d in 2..=6 {
            let tmax = max_feasible_t_mum(d).unwrap();
            for _ in 0..10 {
                let t = rng.gen_range(0.01..1.0) * tmax;
                let s = build_mums(d, t).unwrap();
                let closed = mum_kappa_closed_form(d, t);
                for p in s.effects().iter().flatten() {
                    let measured = trace_product(p, p).unwrap().re;
                    assert!((measured - closed).abs() < 1e-10, "d={d} t={t}");
                }
            }
        }
        assert_eq!(mum_kappa_closed_form(4, 0.0), 0.25);
    }

    #[test]
    fn max_feasible_t_qubit_is_projective() {
        let t = max_feasible_t_mum(2).unwrap();
        assert!((t - mum_projective_t(2)).abs() < 1e-9);
    }

    #[test]
    fn max_feasible_t_is_sharp() {
        for d in 2..=5 {
            let t = max_feasible_t_mum(d).unwrap();
            let lam = mum_min_effect_eigenvalue(d, t).unwrap();
            assert!((-1e-10..=1e-6).contains(&lam), "d={d} lam={lam}");
            assert!(mum_min_effect_eigenvalue(d, t + 1e-6).unwrap() < 0.0);
            for frac in [0.1, 0.5, 0.9, 0.999] {
                assert!(build_mums(d, frac * t).is_ok());
            }
        }
    }

    #[test]
    fn projective_limit_is_infeasible_above_qubits() {
        // The Gell-Mann construction only reaches κ = 1 for d = 2.
        for d in 3..=5 {
            assert!(max_feasible_t_mum(d).unwrap() < mum_projective_t(d));
            assert!(build_mums(d, mum_projective_t(d)).is_err());
            let auto = resolve_mum_t(d, TChoice::Auto).unwrap();
            assert_eq!(auto, max_feasible_t_mum(d).unwrap());
        }
        assert_eq!(
            resolve_mum_t(2, TChoice::Auto).unwrap(),
            mum_projective_t(2)
        );
    }

    #[test]
    fn broken_effect_fails_same_basis_relation() {
        let s = build_mums(3, 0.5 * max_feasible_t_mum(3).unwrap()).unwrap();
        let mut effects = s.effects().to_vec();
        effects[1][0] = Matrix::identity(3).scale(1.0 / 3.0);
        let broken = MumSet::from_parts_unchecked(3, s.t(), s.kappa(), effects);
        let report = validate_mums(&broken, 1e-10);
        assert!(!report.passes());
        assert!(report.same_basis > 1e-3);
    }

    #[test]
    fn validation_is_monotone_in_tolerance() {
        let s = build_mums(4, 0.3 * max_feasible_t_mum(4).unwrap()).unwrap();
        assert!(validate_mums(&s, 1e-10).passes());
        assert!(validate_mums(&s, 1e-6).passes());
        let g = build_gsic(3, 0.3 * max_feasible_t_gsic(3).unwrap()).unwrap();
        assert!(validate_gsic(&g, 1e-10).passes());
        assert!(validate_gsic(&g, 1e-6).passes());
    }

    #[test]
    fn conjugate_set_is_valid_with_same_kappa() {
        let s = build_mums(3, 0.7 * max_feasible_t_mum(3).unwrap()).unwrap();
        let cj = s.conjugate();
        assert_eq!(cj.kappa(), s.kappa());
        assert!(validate_mums(&cj, 1e-10).passes());
        let g = build_gsic(2, gsic_rank1_t(2)).unwrap().conjugate();
        assert!(validate_gsic(&g, 1e-10).passes());
    }

    #[test]
    fn qubit_rank1_gsic_is_sic() {
        let t = gsic_rank1_t(2);
        assert!((gsic_a_closed_form(2, t) - 0.25).abs() < 1e-15);
        let g = build_gsic(2, t).unwrap();
        for p in g.effects() {
            // P = |φ⟩⟨φ|/2, so 2P is a rank-one projector
            assert_rank_one_projector(&p.scale(2.0));
        }
    }

    #[test]
    fn qutrit_gsic_overlaps() {
        let t = 0.8 * max_feasible_t_gsic(3).unwrap();
        let g = build_gsic(3, t).unwrap();
        let a = g.a();
        for i in 0..9 {
            for j in 0..9 {
                if i != j {
                    let tp = trace_product(g.effect(i), g.effect(j)).unwrap().re;
                    assert!((tp - (1.0 - 3.0 * a) / 24.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn gsic_purity_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for d in 2..=5 {
            let tmax = max_feasible_t_gsic(d).unwrap();
            for _ in 0..5 {
                let t = rng.gen_range(0.01..1.0) * tmax;
                let g = build_gsic(d, t).unwrap();
                for p in g.effects() {
                    assert!((trace_product(p, p).unwrap().re - g.a()).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn gsic_accepts_negative_t() {
        let t = -0.5 * max_feasible_t_gsic(2).unwrap();
        assert!(build_gsic(2, t).is_ok());
    }

    #[test]
    fn broken_gsic_fails_validation() {
        let g = build_gsic(2, gsic_rank1_t(2)).unwrap();
        let mut effects = g.effects().to_vec();
        effects[3] = Matrix::identity(2).scale(0.25);
        let report = validate_gsic(
            &GsicSet::from_parts_unchecked(2, g.t(), g.a(), effects),
            1e-10,
        );
        assert!(!report.passes());
        assert!(report.purity > 1e-3);
    }

    #[test]
    fn t_choice_parses() {
        assert_eq!("auto".parse::<TChoice>().unwrap(), TChoice::Auto);
        assert_eq!("max-t".parse::<TChoice>().unwrap(), TChoice::MaxT);
        assert_eq!("projective".parse::<TChoice>().unwrap(), TChoice::Ideal);
        assert_eq!("0.25".parse::<TChoice>().unwrap(), TChoice::Value(0.25));
        assert!("nan".parse::<TChoice>().is_err());
        assert!("big".parse::<TChoice>().is_err());
    }
}
