//! Two-qubit state families, the noisy mixtures τ_AB / σ_AB, and JSON I/O
//! for density matrices.
//!
//! Basis order is |00⟩, |01⟩, |10⟩, |11⟩ throughout.

use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, pauli, tensor, DensityMatrix, Matrix, Subsystem, C64};

fn check_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(value.is_finite() && (lo..=hi).contains(&value)) {
        return Err(Error::InvalidParameter(format!(
            "{name} = {value} outside [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn two_qubit(m: Matrix) -> Result<DensityMatrix> {
    DensityMatrix::new(m, 2, 2)
}

/// p|ψ_θ⟩⟨ψ_θ| + (1−p)𝕀/4 with |ψ_θ⟩ = cos θ|00⟩ + sin θ|11⟩.
pub fn werner_derivative(p: f64, theta: f64) -> Result<DensityMatrix> {
    check_range("p", p, 0.0, 1.0)?;
    check_range("theta", theta, 0.0, FRAC_PI_4)?;
    let z = c(0.0, 0.0);
    let psi = [c(theta.cos(), 0.0), z, z, c(theta.sin(), 0.0)];
    let pure = Matrix::outer(&psi).scale(p);
    let noise = Matrix::identity(4).scale((1.0 - p) / 4.0);
    two_qubit(&pure + &noise)
}

/// The maximally steerable mixed family ρ^τ:
///
/// ```text
/// (1−τ)/4    0        0      (1−τ)/4
///    0    (1+τ)/4  (1+τ)/4      0
///    0    (1+τ)/4  (1+τ)/4      0
/// (1−τ)/4    0        0      (1−τ)/4
/// ```
pub fn max_steerable_mixed(tau: f64) -> Result<DensityMatrix> {
    check_range("tau", tau, -1.0, 1.0)?;
    let lo = (1.0 - tau) / 4.0;
    let hi = (1.0 + tau) / 4.0;
    let mut m = Matrix::zeros(4);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = c(lo, 0.0);
    }
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        m[(i, j)] = c(hi, 0.0);
    }
    two_qubit(m)
}

/// h(C) = 1/3 for C < 2/3, C/2 otherwise.
pub fn munro_h(concurrence: f64) -> f64 {
    if concurrence < 2.0 / 3.0 {
        1.0 / 3.0
    } else {
        concurrence / 2.0
    }
}

/// Munro maximally entangled mixed state with concurrence C:
/// diagonal (h, 1−2h, 0, h) and C/2 in the |00⟩⟨11| corners.
pub fn munro_mems(concurrence: f64) -> Result<DensityMatrix> {
    check_range("C", concurrence, 0.0, 1.0)?;
    let h = munro_h(concurrence);
    let mut m = Matrix::from_real_diag(&[h, 1.0 - 2.0 * h, 0.0, h]);
    m[(0, 3)] = c(concurrence / 2.0, 0.0);
    m[(3, 0)] = c(concurrence / 2.0, 0.0);
    two_qubit(m)
}

/// ¼(𝕀⊗𝕀 + a⃗·σ⃗⊗𝕀 + 𝕀⊗b⃗·σ⃗ + Σ c_i σ_i⊗σ_i). Rejects non-positive results.
pub fn bloch_two_qubit(a: [f64; 3], b: [f64; 3], corr: [f64; 3]) -> Result<DensityMatrix> {
    if a.iter().chain(&b).chain(&corr).any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite Bloch component".into()));
    }
    let id = pauli(0);
    let mut m = Matrix::identity(4);
    for i in 0..3 {
        let s = pauli(i + 1);
        m = &m + &tensor(&s, &id).scale(a[i]);
        m = &m + &tensor(&id, &s).scale(b[i]);
        m = &m + &tensor(&s, &s).scale(corr[i]);
    }
    two_qubit(m.scale(0.25))
}

/// Bloch vectors (a⃗, b⃗) and diagonal correlations c_i = Tr[(σ_i⊗σ_i)ρ].
pub fn bloch_components(rho: &DensityMatrix) -> Result<([f64; 3], [f64; 3], [f64; 3])> {
    if rho.dims() != (2, 2) {
        return Err(Error::DimensionMismatch(
            "Bloch form needs a two-qubit state".into(),
        ));
    }
    let id = pauli(0);
    let mut a = [0.0; 3];
    let mut b = [0.0; 3];
    let mut corr = [0.0; 3];
    for i in 0..3 {
        let s = pauli(i + 1);
        a[i] = rho.expectation_product(&s, &id)?.re;
        b[i] = rho.expectation_product(&id, &s)?.re;
        corr[i] = rho.expectation_product(&s, &s)?.re;
    }
    Ok((a, b, corr))
}

/// Mix ρ with a product of its kept marginal and white noise on the
/// `mixed` qubit:
///
/// * `mixed = B`: τ_AB = μρ + (1−μ) ρ_A ⊗ 𝕀/2
/// * `mixed = A`: σ_AB = μρ + (1−μ) 𝕀/2 ⊗ ρ_B
pub fn tau_state(rho: &DensityMatrix, mu: f64, mixed: Subsystem) -> Result<DensityMatrix> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::InvalidParameter(format!("mu = {mu} outside (0, 1]")));
    }
    let (da, db) = rho.dims();
    let noise = match mixed {
        Subsystem::B if db == 2 => {
            tensor(&rho.reduced(Subsystem::A), &Matrix::identity(2).scale(0.5))
        }
        Subsystem::A if da == 2 => {
            tensor(&Matrix::identity(2).scale(0.5), &rho.reduced(Subsystem::B))
        }
        _ => {
            return Err(Error::DimensionMismatch(format!(
                "mixed subsystem {mixed:?} of a {da}x{db} state is not a qubit"
            )))
        }
    };
    let m = &rho.matrix().scale(mu) + &noise.scale(1.0 - mu);
    DensityMatrix::new(m, da, db)
}

/// Parameterized state families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    WernerDerivative {
        p: f64,
        theta: f64,
    },
    MaxSteerableMixed {
        tau: f64,
    },
    Munro {
        c: f64,
    },
    Bloch {
        a: [f64; 3],
        b: [f64; 3],
        c: [f64; 3],
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::WernerDerivative { .. } => "werner-derivative",
            Family::MaxSteerableMixed { .. } => "max-steerable",
            Family::Munro { .. } => "munro",
            Family::Bloch { .. } => "bloch",
        }
    }

    /// Family with default parameters, looked up by CLI name.
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "werner-derivative" | "wd" => Family::WernerDerivative {
                p: 1.0,
                theta: FRAC_PI_4,
            },
            "max-steerable" | "tau" => Family::MaxSteerableMixed { tau: 0.0 },
            "munro" => Family::Munro { c: 1.0 },
            "bloch" => Family::Bloch {
                a: [0.0; 3],
                b: [0.0; 3],
                c: [0.0; 3],
            },
            other => return Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
        })
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        match *self {
            Family::WernerDerivative { p, theta } => werner_derivative(p, theta),
            Family::MaxSteerableMixed { tau } => max_steerable_mixed(tau),
            Family::Munro { c } => munro_mems(c),
            Family::Bloch { a, b, c } => bloch_two_qubit(a, b, c),
        }
    }

    /// Scalar parameter names, in canonical order.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Family::WernerDerivative { .. } => &["p", "theta"],
            Family::MaxSteerableMixed { .. } => &["tau"],
            Family::Munro { .. } => &["c"],
            Family::Bloch { .. } => &["a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3"],
        }
    }

    pub fn param(&self, name: &str) -> Result<f64> {
        let v = match (self, name) {
            (Family::WernerDerivative { p, .. }, "p") => *p,
            (Family::WernerDerivative { theta, .. }, "theta") => *theta,
            (Family::MaxSteerableMixed { tau }, "tau") => *tau,
            (Family::Munro { c }, "c" | "C") => *c,
            (Family::Bloch { a, b, c }, key) => bloch_slot(key).map(|(v, i)| match v {
                'a' => a[i],
                'b' => b[i],
                _ => c[i],
            })?,
            _ => return Err(self.unknown(name)),
        };
        Ok(v)
    }

    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        match (self as &mut Self, name) {
            (Family::WernerDerivative { p, .. }, "p") => *p = value,
            (Family::WernerDerivative { theta, .. }, "theta") => *theta = value,
            (Family::MaxSteerableMixed { tau }, "tau") => *tau = value,
            (Family::Munro { c }, "c" | "C") => *c = value,
            (Family::Bloch { a, b, c }, key) => {
                let (v, i) = bloch_slot(key)?;
                match v {
                    'a' => a[i] = value,
                    'b' => b[i] = value,
                    _ => c[i] = value,
                }
            }
            (me, _) => return Err(me.unknown(name)),
        }
        Ok(())
    }

    /// Closed interval of admissible values for a scalar parameter.
    pub fn param_range(&self, name: &str) -> Result<(f64, f64)> {
        Ok(match (self, name) {
            (Family::WernerDerivative { .. }, "p") => (0.0, 1.0),
            (Family::WernerDerivative { .. }, "theta") => (0.0, FRAC_PI_4),
            (Family::MaxSteerableMixed { .. }, "tau") => (-1.0, 1.0),
            (Family::Munro { .. }, "c" | "C") => (0.0, 1.0),
            (Family::Bloch { .. }, key) => bloch_slot(key).map(|_| (-1.0, 1.0))?,
            _ => return Err(self.unknown(name)),
        })
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        self.param_names()
            .iter()
            .map(|&n| (n, self.param(n).expect("known name")))
            .collect()
    }

    fn unknown(&self, name: &str) -> Error {
        Error::InvalidParameter(format!("family {} has no parameter '{name}'", self.name()))
    }
}

fn bloch_slot(key: &str) -> Result<(char, usize)> {
    let mut chars = key.chars();
    match (chars.next(), chars.next(), chars.next()) {
        (Some(v @ ('a' | 'b' | 'c')), Some(i @ '1'..='3'), None) => {
            Ok((v, i as usize - '1' as usize))
        }
        _ => Err(Error::InvalidParameter(format!(
            "bloch family has no parameter '{key}'"
        ))),
    }
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    dims: [usize; 2],
    rows: Vec<Vec<[f64; 2]>>,
}

pub fn density_to_json(rho: &DensityMatrix) -> Result<String> {
    let doc = DensityJson {
        dims: [rho.dim_a(), rho.dim_b()],
        rows: rho
            .matrix()
            .rows()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    let doc: DensityJson = serde_json::from_str(text)
        .map_err(|e| Error::Malformed(format!("density matrix JSON: {e}")))?;
    let [da, db] = doc.dims;
    let n = da * db;
    if da == 0 || db == 0 || doc.rows.len() != n || doc.rows.iter().any(|r| r.len() != n) {
        return Err(Error::Malformed(format!(
            "rows do not form a {n}x{n} matrix for dims [{da}, {db}]"
        )));
    }
    let mut entries = Vec::with_capacity(n * n);
    for [re, im] in doc.rows.into_iter().flatten() {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Malformed("non-finite matrix entry".into()));
        }
        entries.push(C64::new(re, im));
    }
    DensityMatrix::new(Matrix::from_vec(n, entries)?, da, db)
}

pub fn save_density(path: impl AsRef<Path>, rho: &DensityMatrix) -> Result<()> {
    std::fs::write(path, density_to_json(rho)?)?;
    Ok(())
}

pub fn load_density(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    density_from_json(&std::fs::read_to_string(path)?)
}

/// Random state generators used by property tests, sweeps and benches.
pub mod random {
    use rand::Rng;
    use rand_distr::StandardNormal;

    use crate::linalg::{tensor, DensityMatrix, Matrix, C64};

    fn gaussian(rng: &mut impl Rng) -> C64 {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    /// Haar-random unit vector.
    pub fn pure_vector(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
        let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    /// Induced-measure mixed state G G†/Tr with G of size dim × rank.
    pub fn mixed_matrix(rng: &mut impl Rng, dim: usize, rank: usize) -> Matrix {
        let g: Vec<Vec<C64>> = (0..dim)
            .map(|_| (0..rank).map(|_| gaussian(rng)).collect())
            .collect();
        let m = Matrix::from_fn(dim, |i, j| {
            (0..rank).map(|k| g[i][k] * g[j][k].conj()).sum()
        });
        let tr = m.trace().re;
        m.scale(1.0 / tr).hermitian_part()
    }

    pub fn state(rng: &mut impl Rng, dim_a: usize, dim_b: usize) -> DensityMatrix {
        let dim = dim_a * dim_b;
        let rank = rng.gen_range(1..=dim);
        DensityMatrix::new(mixed_matrix(rng, dim, rank), dim_a, dim_b)
            .expect("valid by construction")
    }

    /// p|ψ⟩⟨ψ| + (1−p)𝕀/D with ψ Haar-random and p uniform.
    pub fn noisy_pure(rng: &mut impl Rng, dim_a: usize, dim_b: usize) -> DensityMatrix {
        let dim = dim_a * dim_b;
        let p: f64 = rng.gen_range(0.0..=1.0);
        let psi = Matrix::outer(&pure_vector(rng, dim)).scale(p);
        let m = &psi + &Matrix::identity(dim).scale((1.0 - p) / dim as f64);
        DensityMatrix::new(m.hermitian_part(), dim_a, dim_b).expect("valid by construction")
    }

    pub fn product(rng: &mut impl Rng, dim_a: usize, dim_b: usize) -> DensityMatrix {
        let ra = rng.gen_range(1..=dim_a);
        let rb = rng.gen_range(1..=dim_b);
        let m = tensor(&mixed_matrix(rng, dim_a, ra), &mixed_matrix(rng, dim_b, rb));
        DensityMatrix::new(m.hermitian_part(), dim_a, dim_b).expect("valid by construction")
    }
}
